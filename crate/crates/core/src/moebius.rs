//! 2×2 matrices over a quadratic field, PSL(2) elements, their action on
//! the closed upper half-plane, and classification by trace.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::numeric::{NumericError, ParseQuadError, QuadExt, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoebiusError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Parse(#[from] ParseQuadError),
    #[error("determinant {0} is not positive")]
    NonPositiveDeterminant(String),
    #[error("determinant {0} has no square root in the field")]
    DeterminantNotSquare(String),
    #[error("imaginary part {0} is not positive")]
    NotInUpperHalfPlane(String),
    #[error("element is not parabolic")]
    NotParabolic,
    #[error("the identity fixes every point")]
    Identity,
}

/// A general 2×2 matrix `(a b; c d)` over one field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Mat2 {
    pub a: QuadExt,
    pub b: QuadExt,
    pub c: QuadExt,
    pub d: QuadExt,
}

impl Mat2 {
    pub fn new(a: QuadExt, b: QuadExt, c: QuadExt, d: QuadExt) -> Result<Self, NumericError> {
        let field = a.field();
        for x in [&b, &c, &d] {
            if x.field() != field {
                return Err(NumericError::RadicandMismatch(field.radicand(), x.radicand()));
            }
        }
        Ok(Mat2 { a, b, c, d })
    }

    pub fn from_ints(field: QuadField, [a, b, c, d]: [i64; 4]) -> Self {
        Mat2 {
            a: field.int(a),
            b: field.int(b),
            c: field.int(c),
            d: field.int(d),
        }
    }

    pub fn identity(field: QuadField) -> Self {
        Self::from_ints(field, [1, 0, 0, 1])
    }

    pub fn field(&self) -> QuadField {
        self.a.field()
    }

    pub fn det(&self) -> QuadExt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> QuadExt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn inverse(&self) -> Result<Mat2, NumericError> {
        let inv = self.det().inverse()?;
        Ok(Mat2 {
            a: &self.d * &inv,
            b: -(&self.b * &inv),
            c: -(&self.c * &inv),
            d: &self.a * &inv,
        })
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2 {
            a: self.a.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            d: self.d.clone(),
        }
    }

    pub fn neg(&self) -> Mat2 {
        Mat2 {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    pub fn try_mul(&self, rhs: &Mat2) -> Result<Mat2, NumericError> {
        Ok(Mat2 {
            a: self.a.try_mul(&rhs.a)?.try_add(&self.b.try_mul(&rhs.c)?)?,
            b: self.a.try_mul(&rhs.b)?.try_add(&self.b.try_mul(&rhs.d)?)?,
            c: self.c.try_mul(&rhs.a)?.try_add(&self.d.try_mul(&rhs.c)?)?,
            d: self.c.try_mul(&rhs.b)?.try_add(&self.d.try_mul(&rhs.d)?)?,
        })
    }

    /// Image of the column vector `(x, y)`.
    pub fn apply_vector(&self, x: &QuadExt, y: &QuadExt) -> (QuadExt, QuadExt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    pub fn entries(&self) -> [&QuadExt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: &Mat2) -> Mat2 {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// An element of PSL(2) over a real quadratic field.
///
/// Stored as the determinant-one representative whose first nonzero entry
/// is positive, so PSL equality is entry-wise equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MoebiusElement {
    m: Mat2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ElementKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// Trace classification. `trace` is the absolute trace, which is the
/// conjugacy invariant in PSL(2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementClass {
    pub kind: ElementKind,
    pub order: Option<u32>,
    pub trace: QuadExt,
}

/// A point of the upper half-plane with `im > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfPlanePoint {
    re: QuadExt,
    im: QuadExt,
}

impl HalfPlanePoint {
    pub fn new(re: QuadExt, im: QuadExt) -> Result<Self, MoebiusError> {
        if re.field() != im.field() {
            return Err(NumericError::RadicandMismatch(re.radicand(), im.radicand()).into());
        }
        if !im.is_positive() {
            return Err(MoebiusError::NotInUpperHalfPlane(im.to_string()));
        }
        Ok(HalfPlanePoint { re, im })
    }

    pub fn re(&self) -> &QuadExt {
        &self.re
    }

    pub fn im(&self) -> &QuadExt {
        &self.im
    }

    pub fn field(&self) -> QuadField {
        self.re.field()
    }

    /// `|z − center|²` for a real center.
    pub fn dist_sq_to(&self, center: &QuadExt) -> QuadExt {
        let dx = &self.re - center;
        &dx * &dx + &self.im * &self.im
    }

    pub fn abs_sq(&self) -> QuadExt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

/// A point of `ℝ ∪ {∞}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundaryPoint {
    Finite(QuadExt),
    Infinity,
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "inf"),
        }
    }
}

/// Interior fixed point `re + i·√im_squared` of an elliptic element. The
/// imaginary part generally lies outside the field, so it is kept squared;
/// the point is a root of `z² − 2·re·z + (re² + im_squared)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorFixedPoint {
    pub re: QuadExt,
    pub im_squared: QuadExt,
}

impl InteriorFixedPoint {
    /// Coefficients `(p, q)` of the monic quadratic `z² + p z + q`.
    pub fn minimal_polynomial(&self) -> (QuadExt, QuadExt) {
        (-self.re.mul_int(2), &self.re * &self.re + &self.im_squared)
    }

    pub fn as_point(&self) -> Option<HalfPlanePoint> {
        let im = self.im_squared.sqrt_exact()?;
        HalfPlanePoint::new(self.re.clone(), im).ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedPoints {
    /// One point for parabolic elements, two (sorted, `∞` last) for
    /// hyperbolic elements whose fixed points lie in the field.
    Boundary(Vec<BoundaryPoint>),
    /// Hyperbolic fixed points outside the field: roots of `z² + p z + q`.
    BoundaryQuadratic { p: QuadExt, q: QuadExt },
    Interior(InteriorFixedPoint),
}

/// Slope `y/x` of an eigendirection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slope {
    Finite(QuadExt),
    Vertical,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(s) => write!(f, "{s}"),
            Slope::Vertical => write!(f, "vertical"),
        }
    }
}

fn canonical(m: Mat2) -> Mat2 {
    let first = m
        .entries()
        .into_iter()
        .find(|x| !x.is_zero())
        .map(|x| x.sign())
        .unwrap_or(Ordering::Greater);
    if first == Ordering::Less {
        m.neg()
    } else {
        m
    }
}

impl MoebiusElement {
    /// Normalizes `(a b; c d)` to determinant one. The determinant must be
    /// positive and a square in the field.
    pub fn new(a: QuadExt, b: QuadExt, c: QuadExt, d: QuadExt) -> Result<Self, MoebiusError> {
        Self::from_matrix(Mat2::new(a, b, c, d)?)
    }

    pub fn from_matrix(m: Mat2) -> Result<Self, MoebiusError> {
        let det = m.det();
        if !det.is_positive() {
            return Err(MoebiusError::NonPositiveDeterminant(det.to_string()));
        }
        let m = if det.is_one() {
            m
        } else {
            let root = det
                .sqrt_exact()
                .ok_or_else(|| MoebiusError::DeterminantNotSquare(det.to_string()))?;
            let inv = root.inverse()?;
            Mat2 {
                a: &m.a * &inv,
                b: &m.b * &inv,
                c: &m.c * &inv,
                d: &m.d * &inv,
            }
        };
        Ok(MoebiusElement { m: canonical(m) })
    }

    pub fn from_ints(field: QuadField, entries: [i64; 4]) -> Result<Self, MoebiusError> {
        Self::from_matrix(Mat2::from_ints(field, entries))
    }

    /// Parses four entries in the exact textual field syntax.
    pub fn parse_entries<S: AsRef<str>>(field: QuadField, entries: &[S]) -> Result<Self, MoebiusError> {
        if entries.len() != 4 {
            return Err(MoebiusError::Parse(ParseQuadError::Syntax {
                input: entries.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(" "),
                pos: 0,
            }));
        }
        let parse = |s: &S| QuadExt::parse_in(field, s.as_ref());
        Self::new(
            parse(&entries[0])?,
            parse(&entries[1])?,
            parse(&entries[2])?,
            parse(&entries[3])?,
        )
    }

    pub fn identity(field: QuadField) -> Self {
        MoebiusElement {
            m: Mat2::identity(field),
        }
    }

    /// The order-3 elliptic generator `R = (−1 −1; 1 0)`.
    pub fn rotation_r(field: QuadField) -> Self {
        Self::from_ints(field, [-1, -1, 1, 0]).expect("det 1")
    }

    /// The parabolic `(1 s; 0 1)`.
    pub fn translation(shear: &QuadExt) -> Self {
        let f = shear.field();
        MoebiusElement {
            m: Mat2 {
                a: f.one(),
                b: shear.clone(),
                c: f.zero(),
                d: f.one(),
            },
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn a(&self) -> &QuadExt {
        &self.m.a
    }

    pub fn b(&self) -> &QuadExt {
        &self.m.b
    }

    pub fn c(&self) -> &QuadExt {
        &self.m.c
    }

    pub fn d(&self) -> &QuadExt {
        &self.m.d
    }

    pub fn field(&self) -> QuadField {
        self.m.field()
    }

    pub fn det(&self) -> QuadExt {
        self.m.det()
    }

    /// Trace of the canonical representative.
    pub fn trace(&self) -> QuadExt {
        self.m.trace()
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    pub fn compose(&self, rhs: &MoebiusElement) -> MoebiusElement {
        MoebiusElement {
            m: canonical(&self.m * &rhs.m),
        }
    }

    pub fn inverse(&self) -> MoebiusElement {
        let m = &self.m;
        MoebiusElement {
            m: canonical(Mat2 {
                a: m.d.clone(),
                b: -&m.b,
                c: -&m.c,
                d: m.a.clone(),
            }),
        }
    }

    pub fn pow(&self, n: i64) -> MoebiusElement {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = MoebiusElement::identity(self.field());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `g · self · g⁻¹` for any invertible `g`, including orientation
    /// reversing ones.
    pub fn conjugate_by(&self, g: &Mat2) -> Result<MoebiusElement, MoebiusError> {
        let ginv = g.inverse()?;
        MoebiusElement::from_matrix(g.try_mul(&self.m)?.try_mul(&ginv)?)
    }

    /// Classification by `|trace|` against 2; elliptic orders are searched
    /// up to 12.
    pub fn classify(&self) -> ElementClass {
        self.classify_with_bound(12)
    }

    pub fn classify_with_bound(&self, order_bound: u32) -> ElementClass {
        let trace = self.trace().abs();
        let two = self.field().int(2);
        if self.is_identity() {
            return ElementClass {
                kind: ElementKind::Identity,
                order: Some(1),
                trace,
            };
        }
        let kind = match trace.partial_cmp(&two).expect("same field") {
            Ordering::Less => ElementKind::Elliptic,
            Ordering::Equal => ElementKind::Parabolic,
            Ordering::Greater => ElementKind::Hyperbolic,
        };
        let order = if kind == ElementKind::Elliptic {
            let mut acc = self.clone();
            (2..=order_bound).find(|_| {
                acc = acc.compose(self);
                acc.is_identity()
            })
        } else {
            None
        };
        ElementClass { kind, order, trace }
    }

    pub fn is_parabolic(&self) -> bool {
        self.classify_with_bound(0).kind == ElementKind::Parabolic
    }

    pub fn fixed_points(&self) -> Result<FixedPoints, MoebiusError> {
        let class = self.classify_with_bound(0);
        let f = self.field();
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        match class.kind {
            ElementKind::Identity => Err(MoebiusError::Identity),
            ElementKind::Parabolic => {
                if c.is_zero() {
                    Ok(FixedPoints::Boundary(vec![BoundaryPoint::Infinity]))
                } else {
                    let x = (a - d) / c.mul_int(2);
                    Ok(FixedPoints::Boundary(vec![BoundaryPoint::Finite(x)]))
                }
            }
            ElementKind::Hyperbolic => {
                if c.is_zero() {
                    let x = b / (d - a);
                    return Ok(FixedPoints::Boundary(vec![
                        BoundaryPoint::Finite(x),
                        BoundaryPoint::Infinity,
                    ]));
                }
                let tr = self.trace();
                let disc = &tr * &tr - f.int(4);
                match disc.sqrt_exact() {
                    Some(root) => {
                        let den = c.mul_int(2);
                        let x1 = (a - d - &root) / &den;
                        let x2 = (a - d + &root) / &den;
                        let (lo, hi) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
                        Ok(FixedPoints::Boundary(vec![
                            BoundaryPoint::Finite(lo),
                            BoundaryPoint::Finite(hi),
                        ]))
                    }
                    None => Ok(FixedPoints::BoundaryQuadratic {
                        p: (d - a) / c,
                        q: -(b / c),
                    }),
                }
            }
            ElementKind::Elliptic => {
                // c ≠ 0 for elliptic elements.
                let tr = self.trace();
                let re = (a - d) / c.mul_int(2);
                let im_squared = (f.int(4) - &tr * &tr) / (c * c).mul_int(4);
                Ok(FixedPoints::Interior(InteriorFixedPoint { re, im_squared }))
            }
        }
    }

    /// Slope of the eigendirection of a parabolic element, read off the
    /// trace-two representative `M` from the kernel of `M − I`.
    pub fn eigen_slope(&self) -> Result<Slope, MoebiusError> {
        if !self.is_parabolic() {
            return Err(MoebiusError::NotParabolic);
        }
        let m = if self.trace().is_negative() {
            self.m.neg()
        } else {
            self.m.clone()
        };
        if m.b.is_zero() {
            Ok(Slope::Vertical)
        } else {
            Ok(Slope::Finite((m.field().one() - &m.a) / &m.b))
        }
    }

    /// `(az + b)/(cz + d)` on the upper half-plane.
    pub fn apply(&self, z: &HalfPlanePoint) -> HalfPlanePoint {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let (x, y) = (&z.re, &z.im);
        let num_re = a * x + b;
        let den_re = c * x + d;
        let den_im = c * y;
        let den_sq = &den_re * &den_re + &den_im * &den_im;
        let inv = den_sq.inverse().expect("denominator of a half-plane point is nonzero");
        let re = (&num_re * &den_re + (a * c) * (y * y)) * &inv;
        let im = y * &inv;
        HalfPlanePoint { re, im }
    }

    pub fn apply_boundary(&self, p: &BoundaryPoint) -> BoundaryPoint {
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        match p {
            BoundaryPoint::Infinity => {
                if c.is_zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(a / c)
                }
            }
            BoundaryPoint::Finite(x) => {
                let den = c * x + d;
                if den.is_zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((a * x + b) / den)
                }
            }
        }
    }
}

impl Mul<&MoebiusElement> for &MoebiusElement {
    type Output = MoebiusElement;
    fn mul(self, rhs: &MoebiusElement) -> MoebiusElement {
        self.compose(rhs)
    }
}

impl fmt::Display for MoebiusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.m.fmt(f)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    a: String,
    b: String,
    c: String,
    d: String,
    #[serde(rename = "D")]
    radicand: u64,
}

/// JSON form `{"a":…, "b":…, "c":…, "d":…, "D":int}` with entries in the
/// textual field syntax.
impl Serialize for MoebiusElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            a: self.a().to_string(),
            b: self.b().to_string(),
            c: self.c().to_string(),
            d: self.d().to_string(),
            radicand: self.field().radicand(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MoebiusElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = MatrixRepr::deserialize(deserializer)?;
        let field = QuadField::new(r.radicand).map_err(de::Error::custom)?;
        MoebiusElement::parse_entries(field, &[r.a, r.b, r.c, r.d]).map_err(de::Error::custom)
    }
}

/// The orientation-reversing symmetry `(0 1; 1 0)` of the ladder surface,
/// which together with the Veech group generates the extended group.
pub fn orientation_reversal(field: QuadField) -> Mat2 {
    Mat2::from_ints(field, [0, 1, 1, 0])
}

/// `−I`, which is trivial in PSL(2) and excluded from the SL(2) Veech group.
pub fn minus_identity(field: QuadField) -> Mat2 {
    Mat2::from_ints(field, [-1, 0, 0, -1])
}

fn q3() -> QuadField {
    QuadField::new(3).expect("3 is a valid radicand")
}

fn q3_el(a: (i64, i64), b: (i64, i64)) -> QuadExt {
    use crate::numeric::BigRational;
    q3().element(
        BigRational::new(a.0.into(), a.1.into()),
        BigRational::new(b.0.into(), b.1.into()),
    )
}

/// The shear-and-scale chart `(1 1/2; 0 √3/2)` taking the ladder to the
/// semi-regular hexagon picture.
pub fn hexagon_chart_matrix() -> Mat2 {
    Mat2 {
        a: q3().one(),
        b: q3().ratio(1, 2),
        c: q3().zero(),
        d: q3_el((0, 1), (1, 2)),
    }
}

/// `(1 −1/√3; 0 2/√3)`, the inverse of the hexagon chart.
pub fn hexagon_chart_inverse() -> Mat2 {
    Mat2 {
        a: q3().one(),
        b: q3_el((0, 1), (-1, 3)),
        c: q3().zero(),
        d: q3_el((0, 1), (2, 3)),
    }
}

/// Rotation by 2π/3.
pub fn hexagon_rotation() -> Mat2 {
    Mat2 {
        a: q3().ratio(-1, 2),
        b: q3_el((0, 1), (-1, 2)),
        c: q3_el((0, 1), (1, 2)),
        d: q3().ratio(-1, 2),
    }
}

/// Whether `left · middle · right = target` exactly.
pub fn conjugation_identity_holds(left: &Mat2, middle: &Mat2, right: &Mat2, target: &Mat2) -> bool {
    left.try_mul(middle)
        .and_then(|m| m.try_mul(right))
        .map(|p| &p == target)
        .unwrap_or(false)
}

/// Checks in ℚ(√3) that conjugating the hexagon rotation by the chart gives
/// `R = (−1 −1; 1 0)`, and that the two outer factors are mutually inverse.
pub fn hexagon_conjugation_identity() -> bool {
    let left = hexagon_chart_inverse();
    let right = hexagon_chart_matrix();
    let target = Mat2::from_ints(q3(), [-1, -1, 1, 0]);
    left.try_mul(&right).map(|m| m.is_identity()).unwrap_or(false)
        && conjugation_identity_holds(&left, &hexagon_rotation(), &right, &target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::solve_lambda;

    fn golden() -> (QuadField, QuadExt) {
        let p = solve_lambda(2, 1).unwrap();
        (p.field(), p.lambda)
    }

    #[test]
    fn r_has_order_three() {
        let (f, _) = golden();
        let r = MoebiusElement::rotation_r(f);
        assert!(r.pow(3).is_identity());
        assert!(!r.is_identity() && !r.pow(2).is_identity());
        let class = r.classify();
        assert_eq!(class.kind, ElementKind::Elliptic);
        assert_eq!(class.order, Some(3));
        assert_eq!(class.trace, f.one());
        // canonical representative of (−1 −1; 1 0)
        assert_eq!(r.a(), &f.one());
        assert_eq!(r.c(), &f.int(-1));
    }

    #[test]
    fn t_times_inverse_and_tr() {
        let p = solve_lambda(2, 1).unwrap();
        let t = MoebiusElement::translation(&p.shear());
        assert!(t.compose(&t.inverse()).is_identity());
        let class = t.classify();
        assert_eq!(class.kind, ElementKind::Parabolic);
        assert_eq!(class.trace, p.field().int(2));
        let tr = t.compose(&MoebiusElement::rotation_r(p.field()));
        let c = tr.classify();
        assert_eq!(c.trace, p.shear() - p.field().one());
        assert_eq!(c.kind, ElementKind::Hyperbolic);
    }

    #[test]
    fn section_five_parabolics() {
        let (f, lam) = golden();
        let one = f.one();
        let p1 = MoebiusElement::new(&one - &lam, one.clone(), -lam.pow(2), &one + &lam).unwrap();
        let p2 = MoebiusElement::new(&one + &lam, -lam.pow(2), one.clone(), &one - &lam).unwrap();
        assert_eq!(p1.classify().kind, ElementKind::Parabolic);
        assert_eq!(
            p1.fixed_points().unwrap(),
            FixedPoints::Boundary(vec![BoundaryPoint::Finite(lam.inverse().unwrap())])
        );
        assert_eq!(
            p2.fixed_points().unwrap(),
            FixedPoints::Boundary(vec![BoundaryPoint::Finite(lam.clone())])
        );
        assert_eq!(p1.eigen_slope().unwrap(), Slope::Finite(lam.clone()));
        assert_eq!(p2.eigen_slope().unwrap(), Slope::Finite(lam.inverse().unwrap()));
    }

    #[test]
    fn fixed_points_of_generators() {
        let p = solve_lambda(2, 1).unwrap();
        let f = p.field();
        let t = MoebiusElement::translation(&p.shear());
        assert_eq!(t.fixed_points().unwrap(), FixedPoints::Boundary(vec![BoundaryPoint::Infinity]));
        assert_eq!(t.eigen_slope().unwrap(), Slope::Finite(f.zero()));
        let r = MoebiusElement::rotation_r(f);
        let FixedPoints::Interior(fp) = r.fixed_points().unwrap() else {
            panic!("R is elliptic")
        };
        assert_eq!(fp.re, f.ratio(-1, 2));
        assert_eq!(fp.im_squared, f.ratio(3, 4));
        assert_eq!(fp.minimal_polynomial(), (f.one(), f.one()));
        assert!(fp.as_point().is_none());
        assert_eq!(MoebiusElement::identity(f).fixed_points(), Err(MoebiusError::Identity));
        assert_eq!(r.eigen_slope(), Err(MoebiusError::NotParabolic));
    }

    #[test]
    fn hyperbolic_fixed_points() {
        let f = QuadField::new(5).unwrap();
        // (2 1; 1 1) has fixed points (1 ± √5)/2
        let m = MoebiusElement::from_ints(f, [2, 1, 1, 1]).unwrap();
        let FixedPoints::Boundary(pts) = m.fixed_points().unwrap() else {
            panic!()
        };
        for p in &pts {
            assert_eq!(&m.apply_boundary(p), p);
        }
        assert_eq!(pts[1], BoundaryPoint::Finite("1/2 + 1/2*sqrt(5)".parse().unwrap()));
        // (3 1; 1 ... ) in Q(sqrt 3): fixed points need sqrt(5), outside the field
        let g = QuadField::new(3).unwrap();
        let h = MoebiusElement::from_ints(g, [2, 1, 1, 1]).unwrap();
        assert!(matches!(h.fixed_points().unwrap(), FixedPoints::BoundaryQuadratic { .. }));
    }

    #[test]
    fn r_maps_vertical_line_to_unit_circle() {
        let (f, _) = golden();
        let r = MoebiusElement::rotation_r(f);
        for t in [f.ratio(1, 3), f.int(1), "2 + sqrt(5)".parse().unwrap()] {
            let z = HalfPlanePoint::new(f.ratio(-1, 2), t).unwrap();
            let w = r.apply(&z);
            assert!(w.abs_sq().is_one());
            assert_eq!(w.im(), &(z.im() / z.abs_sq()));
        }
        assert_eq!(
            r.apply_boundary(&BoundaryPoint::Finite(f.ratio(-1, 2))),
            BoundaryPoint::Finite(f.one())
        );
        assert_eq!(r.apply_boundary(&BoundaryPoint::Infinity), BoundaryPoint::Finite(f.int(-1)));
        assert_eq!(r.apply_boundary(&BoundaryPoint::Finite(f.zero())), BoundaryPoint::Infinity);
    }

    #[test]
    fn normalization() {
        let f = QuadField::new(5).unwrap();
        let m = MoebiusElement::from_ints(f, [2, 0, 0, 2]).unwrap();
        assert!(m.is_identity());
        let neg = MoebiusElement::from_ints(f, [-1, 0, 0, -1]).unwrap();
        assert!(neg.is_identity());
        assert!(matches!(
            MoebiusElement::from_ints(f, [0, 1, 1, 0]),
            Err(MoebiusError::NonPositiveDeterminant(_))
        ));
        assert!(matches!(
            MoebiusElement::from_ints(f, [2, 0, 0, 1]),
            Err(MoebiusError::DeterminantNotSquare(_))
        ));
        // det 5 = (√5)² is a square in Q(√5)
        assert!(MoebiusElement::from_ints(f, [5, 0, 0, 1]).is_ok());
    }

    #[test]
    fn hexagon_identity() {
        assert!(hexagon_conjugation_identity());
        let mut bad = hexagon_rotation();
        bad.a = &bad.a + &q3().ratio(1, 1000);
        let target = Mat2::from_ints(q3(), [-1, -1, 1, 0]);
        assert!(!conjugation_identity_holds(
            &hexagon_chart_inverse(),
            &bad,
            &hexagon_chart_matrix(),
            &target
        ));
    }

    #[test]
    fn json_matrix() {
        let p = solve_lambda(2, 1).unwrap();
        let t = MoebiusElement::translation(&p.shear());
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"a":"1","b":"1 + sqrt(5)","c":"0","d":"1","D":5}"#);
        let back: MoebiusElement = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
    }
}
