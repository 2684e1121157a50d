//! Cylinder decompositions in the horizontal, vertical and antidiagonal
//! directions, commensurability of their moduli, and the parabolic elements
//! they produce.
//!
//! Heights and circumferences come from closed forms and are cross-checked
//! against the region model. Vertical data is the mirror image of the
//! horizontal data. Antidiagonal data is the horizontal data transported by
//! the order-three affine symmetry with derivative `R`; it is stored in the
//! frame `(R e₁, R e₂)`, which keeps every number in the field. Because
//! `|R e₁|² = 2`, Euclidean antidiagonal moduli are twice the stored ones.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moebius::{Mat2, MoebiusElement};
use crate::numeric::{QuadExt, QuadField};
use crate::surface::{Containment, LadderSurface, SurfaceError, SurfacePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CylinderError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("decomposition has no cylinders")]
    Empty,
    #[error("cylinder {index} has a non-positive height or circumference")]
    Degenerate { index: usize },
    #[error("cylinders come from different fields")]
    FieldMismatch,
    #[error("inverse moduli are not commensurable (cylinder {index})")]
    NotCommensurable { index: usize },
    #[error("twist on cylinder {index} is not an integer")]
    NonIntegerTwist { index: usize },
    #[error("shear must be positive")]
    NonPositiveShear,
    #[error("multiplier on cylinder {index} does not fit in 64 bits")]
    MultiplierOverflow { index: usize },
    #[error("closed form disagrees with the region model at cylinder {index}")]
    ModelMismatch { index: usize },
    #[error("widest cylinder is not unique")]
    NotUnique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Horizontal,
    Vertical,
    Antidiagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::Horizontal, Direction::Vertical, Direction::Antidiagonal];

    /// Linear map taking the horizontal decomposition to this one: the
    /// identity, the coordinate swap `J`, or `R`.
    pub fn change_matrix(self, field: QuadField) -> Mat2 {
        match self {
            Direction::Horizontal => Mat2::identity(field),
            Direction::Vertical => Mat2::from_ints(field, [0, 1, 1, 0]),
            Direction::Antidiagonal => Mat2::from_ints(field, [-1, -1, 1, 0]),
        }
    }

    /// Squared Euclidean length of the image of a unit vector along the
    /// core curve; scales stored moduli into Euclidean ones.
    pub fn frame_scale(self) -> i64 {
        match self {
            Direction::Antidiagonal => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Horizontal => "horizontal",
            Direction::Vertical => "vertical",
            Direction::Antidiagonal => "antidiagonal",
        })
    }
}

impl FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "horizontal" => Ok(Direction::Horizontal),
            "vertical" => Ok(Direction::Vertical),
            "antidiagonal" => Ok(Direction::Antidiagonal),
            _ => Err(format!("unknown direction {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub index: usize,
    pub height: QuadExt,
    pub circumference: QuadExt,
    pub direction: Direction,
}

impl Cylinder {
    /// `circumference / height`.
    pub fn modulus(&self) -> QuadExt {
        &self.circumference / &self.height
    }

    pub fn inverse_modulus(&self) -> QuadExt {
        &self.height / &self.circumference
    }

    pub fn euclidean_modulus(&self) -> QuadExt {
        self.modulus().mul_int(self.direction.frame_scale())
    }

    pub fn area(&self) -> QuadExt {
        &self.height * &self.circumference
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CylinderDecomposition {
    pub direction: Direction,
    pub cylinders: Vec<Cylinder>,
    /// Ratio between consecutive cylinders beyond the truncation, when the
    /// decomposition is self-similar.
    pub tail_ratio: Option<QuadExt>,
}

impl CylinderDecomposition {
    /// A decomposition from explicit `(height, circumference)` data, with no
    /// tail.
    pub fn from_data(
        direction: Direction,
        data: Vec<(QuadExt, QuadExt)>,
    ) -> Result<Self, CylinderError> {
        let field = data.first().ok_or(CylinderError::Empty)?.0.field();
        let mut cylinders = Vec::with_capacity(data.len());
        for (index, (height, circumference)) in data.into_iter().enumerate() {
            if height.field() != field || circumference.field() != field {
                return Err(CylinderError::FieldMismatch);
            }
            if !height.is_positive() || !circumference.is_positive() {
                return Err(CylinderError::Degenerate { index });
            }
            cylinders.push(Cylinder {
                index,
                height,
                circumference,
                direction,
            });
        }
        Ok(CylinderDecomposition {
            direction,
            cylinders,
            tail_ratio: None,
        })
    }

    pub fn field(&self) -> QuadField {
        self.cylinders[0].height.field()
    }

    /// Total area of the listed cylinders plus the geometric tail, which
    /// scales by `ratio²` per cylinder.
    pub fn total_area(&self) -> QuadExt {
        let f = self.field();
        let listed = self.cylinders.iter().fold(f.zero(), |acc, c| acc + c.area());
        match &self.tail_ratio {
            Some(r) => {
                let r2 = r * r;
                let last = self.cylinders.last().expect("nonempty").area();
                listed + &last * &r2 / (f.one() - &r2)
            }
            None => listed,
        }
    }
}

/// The decomposition of `surface` in direction `dir`, cylinders `0..=depth`.
///
/// Horizontal cylinder 0 has height 1 and circumference `1+λ`; cylinder
/// `n ≥ 1` has height `λⁿ` and circumference `λⁿ⁻¹(1+λ+λ²)`.
pub fn decompose(surface: &LadderSurface, dir: Direction) -> Result<CylinderDecomposition, CylinderError> {
    let params = surface.params();
    let depth = surface.depth();
    if depth < 2 {
        return Err(SurfaceError::DepthTooSmall(depth).into());
    }
    let f = params.field();
    let lam = &params.lambda;
    let wide = f.one() + lam + lam * lam;
    let mut data = Vec::with_capacity(depth + 1);
    data.push((f.one(), params.one_plus_lambda()));
    for n in 1..=depth as i64 {
        data.push((params.lambda_pow(n), &params.lambda_pow(n - 1) * &wide));
    }

    for (n, (h, w)) in data.iter().enumerate() {
        let n = n as i64;
        let (lo, hi) = surface.horizontal_section(n);
        if *h != surface.c(n) - surface.c(n - 1) || *w != &hi - &lo {
            return Err(CylinderError::ModelMismatch { index: n as usize });
        }
        // probe the region at mid-height: both ends on the boundary, the
        // middle inside; mirrored for the vertical direction
        if n + 2 < depth as i64 && dir != Direction::Antidiagonal {
            let half = f.ratio(1, 2);
            let t = (surface.c(n - 1) + surface.c(n)) * &half;
            let mid = (&lo + &hi) * &half;
            let probes = [
                (lo, Containment::Boundary),
                (hi, Containment::Boundary),
                (mid, Containment::Interior),
            ];
            for (x, want) in probes {
                let mut p = SurfacePoint::new(x, t.clone());
                if dir == Direction::Vertical {
                    p = p.mirrored();
                }
                if surface.contains(&p)? != want {
                    return Err(CylinderError::ModelMismatch { index: n as usize });
                }
            }
        }
    }

    // self-similarity beyond the truncation
    for n in 1..depth {
        let (h0, w0) = &data[n];
        let (h1, w1) = &data[n + 1];
        assert_eq!(&(h0 * lam), h1, "height ratio at cylinder {n}");
        assert_eq!(&(w0 * lam), w1, "circumference ratio at cylinder {n}");
    }
    assert!(lam.is_positive() && *lam < f.one(), "tail must shrink");

    let mut dec = CylinderDecomposition::from_data(dir, data)?;
    dec.tail_ratio = Some(lam.clone());
    Ok(dec)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Commensurability {
    Commensurable { m: QuadExt, multipliers: Vec<u64> },
    NotCommensurable { index: usize },
}

/// Largest `m` with every inverse modulus an integer multiple of `m`.
///
/// Inverse moduli are divided by the smallest one; if every quotient is
/// rational, `m` is the smallest inverse modulus times the rational gcd of
/// the quotients.
pub fn commensurability(dec: &CylinderDecomposition) -> Result<Commensurability, CylinderError> {
    if dec.cylinders.is_empty() {
        return Err(CylinderError::Empty);
    }
    let inv: Vec<QuadExt> = dec.cylinders.iter().map(Cylinder::inverse_modulus).collect();
    let smallest = inv
        .iter()
        .min_by(|a, b| a.partial_cmp(b).expect("same field"))
        .expect("nonempty")
        .clone();
    let mut ratios = Vec::with_capacity(inv.len());
    for (index, q) in inv.iter().enumerate() {
        match (q / &smallest).as_rational() {
            Some(r) => ratios.push(r.clone()),
            None => return Ok(Commensurability::NotCommensurable { index }),
        }
    }
    let (num_gcd, den_lcm) = ratios.iter().fold((BigInt::from(0), BigInt::one()), |(g, l), r| {
        (g.gcd(r.numer()), l.lcm(r.denom()))
    });
    let g = BigRational::new(num_gcd, den_lcm);
    let m = smallest.scale(&g);
    let multipliers = ratios
        .iter()
        .enumerate()
        .map(|(index, r)| {
            let k = r / &g;
            debug_assert!(k.is_integer());
            k.to_integer()
                .to_u64()
                .ok_or(CylinderError::MultiplierOverflow { index })
        })
        .collect::<Result<_, _>>()?;
    Ok(Commensurability::Commensurable { m, multipliers })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SynthesizedParabolic {
    pub direction: Direction,
    /// `1/m`, the shear of the horizontal model.
    pub shear: QuadExt,
    pub conjugator: Mat2,
    pub element: MoebiusElement,
}

/// The parabolic `(1 1/m; 0 1)` conjugated into the decomposition's
/// direction by [`Direction::change_matrix`].
pub fn synthesize_parabolic(dec: &CylinderDecomposition) -> Result<SynthesizedParabolic, CylinderError> {
    let m = match commensurability(dec)? {
        Commensurability::Commensurable { m, .. } => m,
        Commensurability::NotCommensurable { index } => {
            return Err(CylinderError::NotCommensurable { index })
        }
    };
    let shear = m.inverse().expect("m is positive");
    let conjugator = dec.direction.change_matrix(dec.field());
    let element = MoebiusElement::translation(&shear)
        .conjugate_by(&conjugator)
        .expect("change matrices are invertible with det ±1");
    Ok(SynthesizedParabolic {
        direction: dec.direction,
        shear,
        conjugator,
        element,
    })
}

/// Number of Dehn twists `shear · hᵢ/wᵢ` each cylinder receives.
pub fn twist_counts(dec: &CylinderDecomposition, shear: &QuadExt) -> Result<Vec<u64>, CylinderError> {
    if !shear.is_positive() {
        return Err(CylinderError::NonPositiveShear);
    }
    dec.cylinders
        .iter()
        .enumerate()
        .map(|(index, c)| {
            let t = shear * &c.inverse_modulus();
            t.as_integer()
                .ok_or(CylinderError::NonIntegerTwist { index })?
                .to_u64()
                .ok_or(CylinderError::MultiplierOverflow { index })
        })
        .collect()
}

/// The unique cylinder of largest circumference. With a shrinking tail the
/// cylinders past the truncation are narrower than the last listed one.
pub fn widest_cylinder(dec: &CylinderDecomposition) -> Result<&Cylinder, CylinderError> {
    let first = dec.cylinders.first().ok_or(CylinderError::Empty)?;
    let mut best = first;
    let mut tie = false;
    for c in &dec.cylinders[1..] {
        if c.circumference > best.circumference {
            best = c;
            tie = false;
        } else if c.circumference == best.circumference {
            tie = true;
        }
    }
    if let Some(r) = &dec.tail_ratio {
        let f = dec.field();
        assert!(r.is_positive() && *r < f.one(), "tail must shrink");
        let next = &dec.cylinders.last().expect("nonempty").circumference * r;
        if next >= best.circumference {
            tie = true;
        }
    }
    if tie {
        Err(CylinderError::NotUnique)
    } else {
        Ok(best)
    }
}
