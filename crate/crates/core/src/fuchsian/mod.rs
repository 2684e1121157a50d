//! The group `G = ⟨R, T⟩` with `R = (−1 −1; 1 0)` and
//! `T = (1 k(1+λ); 0 1)`.
//!
//! The fundamental domain `F` is the strip `−2 ≤ Re z ≤ k(1+λ) − 2` minus
//! the unit disks centred at `0` and `−1`. `T` pairs the two vertical
//! sides. `R` fixes `ω = −1/2 + i√3/2` and maps the arc of `|z| = 1` from
//! `ω` to `1` onto the arc of `|z+1| = 1` from `ω` to `−2`. The interval
//! `(1, k(1+λ) − 2)` of the real line is a free side.

mod orbit;
mod word;

pub use orbit::{
    cusp_orbit_gap, forbidden_direction_check, band_parabolics, CuspGap, BandParabolics, MAX_ORBIT_WORD_LEN,
};
pub use word::{GroupWord, Letter};

use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::moebius::{HalfPlanePoint, MoebiusElement, MoebiusError};
use crate::numeric::{BigRational, LadderParams, QuadExt, QuadField};

pub const DEFAULT_ITERATION_CAP: u32 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuchsianError {
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
    #[error("right edge of the strip {0} is not beyond 1; the free side is empty")]
    DegenerateDomain(String),
    #[error("reduction did not finish within {0} iterations")]
    IterationCap(u32),
    #[error("bad word syntax at byte {pos} in {input:?}")]
    WordSyntax { input: String, pos: usize },
    #[error("element entries do not lie in the field Q(sqrt({0}))")]
    FieldMismatch(u64),
    #[error("word length {0} exceeds the enumeration limit 16")]
    WordLengthLimit(u64),
    #[error("translation exponent does not fit in 64 bits")]
    ExponentOverflow,
    #[error("matrix check failed: {0}")]
    Assertion(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FundamentalDomain {
    pub params: LadderParams,
    pub strip_left: QuadExt,
    pub strip_right: QuadExt,
    /// `k(1+λ)`, the translation length of `T`.
    pub shear: QuadExt,
    /// False when `l ≠ 1`: the group is still `⟨R, T⟩` but it is only
    /// known to equal the Veech group for `l = 1`.
    pub veech_group_known: bool,
}

pub fn build_domain(params: &LadderParams) -> Result<FundamentalDomain, FuchsianError> {
    let f = params.field();
    let shear = params.shear();
    let strip_right = &shear - f.int(2);
    if strip_right <= f.one() {
        return Err(FuchsianError::DegenerateDomain(strip_right.to_string()));
    }
    Ok(FundamentalDomain {
        params: params.clone(),
        strip_left: f.int(-2),
        strip_right,
        shear,
        veech_group_known: params.veech_group_known(),
    })
}

impl FundamentalDomain {
    pub fn field(&self) -> QuadField {
        self.params.field()
    }

    pub fn warning(&self) -> Option<&'static str> {
        (!self.veech_group_known)
            .then_some("l != 1: answers concern G = <R, T> only, not the Veech group")
    }

    pub fn t(&self) -> MoebiusElement {
        MoebiusElement::translation(&self.shear)
    }

    pub fn r(&self) -> MoebiusElement {
        MoebiusElement::rotation_r(self.field())
    }

    /// The free side `(1, k(1+λ) − 2)` on the real line.
    pub fn free_side(&self) -> (QuadExt, QuadExt) {
        (self.field().one(), self.strip_right.clone())
    }

    pub fn point(&self, re: QuadExt, im: QuadExt) -> Result<HalfPlanePoint, FuchsianError> {
        let f = self.field();
        let lift = |x: QuadExt| x.lift_into(f).map_err(|_| FuchsianError::FieldMismatch(f.radicand()));
        Ok(HalfPlanePoint::new(lift(re)?, lift(im)?)?)
    }

    /// The closure of `F`: non-strict inequalities throughout.
    pub fn contains_closure(&self, z: &HalfPlanePoint) -> bool {
        let one = self.field().one();
        &self.strip_left <= z.re()
            && z.re() <= &self.strip_right
            && z.abs_sq() >= one
            && z.dist_sq_to(&-&one) >= one
    }

    pub fn contains_interior(&self, z: &HalfPlanePoint) -> bool {
        let one = self.field().one();
        &self.strip_left < z.re()
            && z.re() < &self.strip_right
            && z.abs_sq() > one
            && z.dist_sq_to(&-&one) > one
    }

    fn letter_element(&self, l: Letter) -> MoebiusElement {
        match l {
            Letter::T(n) => MoebiusElement::translation(&self.shear.mul_int(n)),
            Letter::R(e) => self.r().pow(e as i64),
        }
    }

    /// The element a word represents.
    pub fn evaluate(&self, w: &GroupWord) -> MoebiusElement {
        w.letters()
            .iter()
            .fold(MoebiusElement::identity(self.field()), |acc, &l| {
                acc.compose(&self.letter_element(l))
            })
    }

    /// Lifts a matrix over ℚ into the domain's field.
    pub fn lift(&self, m: &MoebiusElement) -> Result<MoebiusElement, FuchsianError> {
        let f = self.field();
        if m.field() == f {
            return Ok(m.clone());
        }
        let lift = |x: &QuadExt| x.lift_into(f).map_err(|_| FuchsianError::FieldMismatch(f.radicand()));
        Ok(MoebiusElement::new(lift(m.a())?, lift(m.b())?, lift(m.c())?, lift(m.d())?)?)
    }
}

fn as_text<S: Serializer>(x: &QuadExt, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// One generator application during reduction and the point it produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    #[serde(serialize_with = "serialize_letter")]
    pub apply: Letter,
    #[serde(serialize_with = "as_text")]
    pub re: QuadExt,
    #[serde(serialize_with = "as_text")]
    pub im: QuadExt,
}

fn serialize_letter<S: Serializer>(l: &Letter, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(l)
}

/// `word` maps the input point to `reduced_point`: steps are applied left
/// to right, so `word` is their product in reverse order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub word: GroupWord,
    pub reduced_point: HalfPlanePoint,
    pub iterations: u32,
    pub steps: Vec<ReductionStep>,
}

pub fn reduce(dom: &FundamentalDomain, z: &HalfPlanePoint) -> Result<ReductionResult, FuchsianError> {
    reduce_with_cap(dom, z, DEFAULT_ITERATION_CAP)
}

/// Translates into the strip, then ejects from whichever unit disk holds
/// the point with `R` (for `|z| < 1`) or `R²` (for `|z+1| < 1`). Both
/// strictly increase the imaginary part, which is asserted at every step.
pub fn reduce_with_cap(
    dom: &FundamentalDomain,
    z: &HalfPlanePoint,
    cap: u32,
) -> Result<ReductionResult, FuchsianError> {
    let f = dom.field();
    let z = dom.point(z.re().clone(), z.im().clone())?;
    let one = f.one();
    let minus_one = -&one;
    let mut point = z;
    let mut word = GroupWord::identity();
    let mut steps = Vec::new();
    let mut record = |letter: Letter, p: &HalfPlanePoint, word: &mut GroupWord| {
        *word = word.prepend(letter);
        steps.push(ReductionStep {
            apply: letter,
            re: p.re().clone(),
            im: p.im().clone(),
        });
    };
    for iteration in 1..=cap {
        let offset = (point.re() - &dom.strip_left) / &dom.shear;
        let n = -offset.floor();
        if n.sign() != num_bigint::Sign::NoSign {
            let n = n.to_i64().ok_or(FuchsianError::ExponentOverflow)?;
            point = HalfPlanePoint::new(point.re() + &dom.shear.mul_int(n), point.im().clone())?;
            record(Letter::T(n), &point, &mut word);
        }
        let eject = if point.abs_sq() < one {
            Some(Letter::R(1))
        } else if point.dist_sq_to(&minus_one) < one {
            Some(Letter::R(2))
        } else {
            None
        };
        match eject {
            Some(letter) => {
                let next = dom.letter_element(letter).apply(&point);
                assert!(next.im() > point.im(), "disk ejection must raise Im");
                point = next;
                record(letter, &point, &mut word);
            }
            None => {
                debug_assert!(dom.contains_closure(&point));
                return Ok(ReductionResult {
                    word,
                    reduced_point: point,
                    iterations: iteration,
                    steps,
                });
            }
        }
    }
    Err(FuchsianError::IterationCap(cap))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Yes(GroupWord),
    No,
    /// The base point was fixed by a non-trivial element; retry with another
    /// offset.
    Ambiguous,
}

impl Membership {
    /// Answers concern `G = ⟨R, T⟩`, which is the Veech group only when
    /// `l = 1`.
    pub const LABEL: &'static str = "G-membership";
}

impl std::fmt::Display for Membership {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Membership::Yes(w) => write!(f, "yes: {w}"),
            Membership::No => f.write_str("no"),
            Membership::Ambiguous => f.write_str("ambiguous"),
        }
    }
}

/// The base point `1/7 + 2i`, interior to `F` and off every elliptic fixed
/// point.
pub fn base_point(dom: &FundamentalDomain) -> HalfPlanePoint {
    let f = dom.field();
    HalfPlanePoint::new(f.ratio(1, 7), f.int(2)).expect("Im = 2 > 0")
}

/// Decides `M ∈ G` by reducing `M·z₀`: if the word `g` found satisfies
/// `g·M = id` then `M = g⁻¹`.
pub fn membership(dom: &FundamentalDomain, m: &MoebiusElement) -> Result<(Membership, ReductionResult), FuchsianError> {
    membership_at(dom, m, &base_point(dom))
}

pub fn membership_at(
    dom: &FundamentalDomain,
    m: &MoebiusElement,
    z0: &HalfPlanePoint,
) -> Result<(Membership, ReductionResult), FuchsianError> {
    let m = dom.lift(m)?;
    let red = reduce(dom, &m.apply(z0))?;
    let residue = dom.evaluate(&red.word).compose(&m);
    let answer = if residue.is_identity() {
        Membership::Yes(red.word.inverse())
    } else if &residue.apply(z0) == z0 {
        Membership::Ambiguous
    } else {
        Membership::No
    };
    Ok((answer, red))
}

/// A point `a + b√D + i·c` with `a, b` uniform in `[−8, 8]`, denominators
/// up to 16, and `c` in `[1/64, 4]`.
pub fn random_point<R: Rng>(dom: &FundamentalDomain, rng: &mut R) -> HalfPlanePoint {
    let f = dom.field();
    let mut q = |lo: i64, hi: i64| {
        let den = rng.gen_range(1..=16i64);
        BigRational::new(rng.gen_range(lo * den..=hi * den).into(), den.into())
    };
    let re = f.element(q(-8, 8), if f.is_rational() { BigRational::from_integer(0.into()) } else { q(-2, 2) });
    let den = rng.gen_range(1..=64i64);
    let im = f.ratio(rng.gen_range(1..=4 * den), den);
    HalfPlanePoint::new(re, im).expect("positive imaginary part")
}

/// A random normal form of length at most `max_len`, built syllable by
/// syllable.
pub fn random_word<R: Rng>(rng: &mut R, max_len: u64) -> GroupWord {
    let target = rng.gen_range(0..=max_len);
    let mut letters = Vec::new();
    let mut len = 0;
    let mut next_is_r = rng.gen_bool(0.5);
    while len < target {
        let l = if next_is_r {
            Letter::R(rng.gen_range(1..=2))
        } else {
            let n = rng.gen_range(1..=(target - len).min(4)) as i64;
            Letter::T(if rng.gen_bool(0.5) { n } else { -n })
        };
        len += l.length();
        letters.push(l);
        next_is_r = !next_is_r;
    }
    GroupWord::from_letters(letters)
}
