use serde::Serialize;

use super::{membership, FuchsianError, FundamentalDomain, GroupWord, Letter, Membership};
use crate::moebius::{BoundaryPoint, FixedPoints, MoebiusElement, Slope};
use crate::numeric::{LadderParams, QuadExt};

pub const MAX_ORBIT_WORD_LEN: u64 = 16;

/// Outcome of the cusp orbit scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CuspGap {
    pub holds: bool,
    pub max_len: u64,
    pub words: usize,
    pub images_checked: usize,
    /// First word found sending a cusp into `(λ, λ⁻¹)`.
    pub violation: Option<GroupWord>,
}

/// Applies every normal form of length at most `max_len` to the cusps
/// `∞`, `0`, `−1` (fixed by `T`, `R⁻¹TR`, `RTR⁻¹`) and checks that no image
/// lies in the open interval `(λ, λ⁻¹)`.
pub fn cusp_orbit_gap(dom: &FundamentalDomain, max_len: u64) -> Result<CuspGap, FuchsianError> {
    if max_len > MAX_ORBIT_WORD_LEN {
        return Err(FuchsianError::WordLengthLimit(max_len));
    }
    let f = dom.field();
    let lo = dom.params.lambda.clone();
    let hi = dom.params.lambda_inv();
    let cusps = vec![
        BoundaryPoint::Infinity,
        BoundaryPoint::Finite(f.zero()),
        BoundaryPoint::Finite(f.int(-1)),
    ];
    let mut scan = Scan {
        dom,
        r: dom.r(),
        lo,
        hi,
        words: 0,
        images_checked: 0,
        violation: None,
        prefix: Vec::new(),
    };
    scan.walk(&cusps, max_len);
    Ok(CuspGap {
        holds: scan.violation.is_none(),
        max_len,
        words: scan.words,
        images_checked: scan.images_checked,
        violation: scan.violation,
    })
}

struct Scan<'a> {
    dom: &'a FundamentalDomain,
    r: MoebiusElement,
    lo: QuadExt,
    hi: QuadExt,
    words: usize,
    images_checked: usize,
    violation: Option<GroupWord>,
    /// Syllables of the current word, innermost first.
    prefix: Vec<Letter>,
}

impl Scan<'_> {
    /// Visits the current word, then extends it on the left so images are
    /// updated by one syllable at a time.
    fn walk(&mut self, images: &[BoundaryPoint], budget: u64) {
        if self.violation.is_some() {
            return;
        }
        self.words += 1;
        for p in images {
            self.images_checked += 1;
            if let BoundaryPoint::Finite(x) = p {
                if &self.lo < x && x < &self.hi {
                    let word = GroupWord::from_letters(self.prefix.iter().rev().copied());
                    self.violation = Some(word);
                    return;
                }
            }
        }
        let outer = self.prefix.last().copied();
        if !matches!(outer, Some(Letter::R(_))) && budget >= 1 {
            let once: Vec<_> = images.iter().map(|p| self.r.apply_boundary(p)).collect();
            let twice: Vec<_> = once.iter().map(|p| self.r.apply_boundary(p)).collect();
            for (e, next) in [(1, once), (2, twice)] {
                self.prefix.push(Letter::R(e));
                self.walk(&next, budget - 1);
                self.prefix.pop();
            }
        }
        if !matches!(outer, Some(Letter::T(_))) {
            for sign in [1i64, -1] {
                let step = self.dom.shear.mul_int(sign);
                let mut shifted = images.to_vec();
                for n in 1..=budget {
                    for p in shifted.iter_mut() {
                        if let BoundaryPoint::Finite(x) = p {
                            *x = &*x + &step;
                        }
                    }
                    self.prefix.push(Letter::T(sign * n as i64));
                    self.walk(&shifted, budget - n);
                    self.prefix.pop();
                }
            }
        }
    }
}

/// True when a parabolic `m` has its eigendirection strictly inside
/// `(λ, λ⁻¹)` and is not in `G`, which is what the absence of parabolics
/// with such slopes predicts. A slope outside the band short-circuits to
/// false.
pub fn forbidden_direction_check(dom: &FundamentalDomain, m: &MoebiusElement) -> Result<bool, FuchsianError> {
    let m = dom.lift(m)?;
    let slope = m.eigen_slope()?;
    let in_band = match &slope {
        Slope::Finite(s) => &dom.params.lambda < s && s < &dom.params.lambda_inv(),
        Slope::Vertical => false,
    };
    if !in_band {
        return Ok(false);
    }
    Ok(membership(dom, &m)?.0 == Membership::No)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandParabolics {
    /// `(1−λ 1; −λ² 1+λ)`: eigen slope `λ`, fixed point `λ⁻¹`.
    pub p_lambda: MoebiusElement,
    /// `(1+λ −λ²; 1 1−λ)`: eigen slope `λ⁻¹`, fixed point `λ`.
    pub p_inv_lambda: MoebiusElement,
}

/// The two parabolics bounding the forbidden band, with their determinant,
/// trace, fixed point and eigen slope verified exactly.
pub fn band_parabolics(params: &LadderParams) -> Result<BandParabolics, FuchsianError> {
    let f = params.field();
    let lam = &params.lambda;
    let lam_inv = params.lambda_inv();
    let lam_sq = lam * lam;
    let one = f.one();
    let p_lambda = MoebiusElement::new(&one - lam, one.clone(), -&lam_sq, &one + lam)?;
    let p_inv_lambda = MoebiusElement::new(&one + lam, -&lam_sq, one.clone(), &one - lam)?;
    for (name, p, fixed, slope) in [
        ("P_lambda", &p_lambda, &lam_inv, lam),
        ("P_inv_lambda", &p_inv_lambda, lam, &lam_inv),
    ] {
        let fail = |what: &str| FuchsianError::Assertion(format!("{name}: {what}"));
        if !p.det().is_one() {
            return Err(fail("determinant is not 1"));
        }
        if p.trace() != f.int(2) {
            return Err(fail("trace is not 2"));
        }
        if p.fixed_points()? != FixedPoints::Boundary(vec![BoundaryPoint::Finite(fixed.clone())]) {
            return Err(fail("wrong fixed point"));
        }
        if p.eigen_slope()? != Slope::Finite(slope.clone()) {
            return Err(fail("wrong eigen slope"));
        }
    }
    Ok(BandParabolics {
        p_lambda,
        p_inv_lambda,
    })
}
