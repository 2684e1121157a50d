use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumericError;

/// A real quadratic field ℚ(√D), identified by its square-free radicand.
///
/// `D = 1` stands for ℚ itself: elements of that field always carry a zero
/// irrational part. This is how perfect-square discriminants are handled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    radicand: u64,
}

impl QuadField {
    pub const RATIONAL: QuadField = QuadField { radicand: 1 };

    /// The field obtained by adjoining `√n`. Square factors of `n` are
    /// dropped, so `new(12)` is ℚ(√3) and `new(9)` is ℚ.
    pub fn new(n: u64) -> Result<Self, NumericError> {
        if n == 0 {
            return Err(NumericError::InvalidRadicand(n));
        }
        let (_, core) = square_free_decompose(n);
        Ok(QuadField { radicand: core })
    }

    pub fn radicand(self) -> u64 {
        self.radicand
    }

    pub fn is_rational(self) -> bool {
        self.radicand == 1
    }

    pub fn zero(self) -> QuadExt {
        self.element(BigRational::zero(), BigRational::zero())
    }

    pub fn one(self) -> QuadExt {
        self.element(BigRational::one(), BigRational::zero())
    }

    pub fn int(self, n: i64) -> QuadExt {
        self.element(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `num / den` as a field element. Panics if `den == 0`.
    pub fn ratio(self, num: i64, den: i64) -> QuadExt {
        self.element(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    pub fn rational(self, q: BigRational) -> QuadExt {
        self.element(q, BigRational::zero())
    }

    /// `√D` itself; `None` for ℚ.
    pub fn sqrt_radicand(self) -> Option<QuadExt> {
        if self.is_rational() {
            None
        } else {
            Some(self.element(BigRational::zero(), BigRational::one()))
        }
    }

    /// `a + b√D`. In ℚ a nonzero `b` is meaningless and panics.
    pub fn element(self, a: BigRational, b: BigRational) -> QuadExt {
        assert!(
            !self.is_rational() || b.is_zero(),
            "irrational part in the rational field"
        );
        QuadExt {
            a,
            b,
            d: self.radicand,
        }
    }
}

/// Splits `n = f² · d` with `d` square-free.
pub fn square_free_decompose(mut n: u64) -> (u64, u64) {
    let mut f = 1u64;
    let mut d = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        f *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (f, d * n)
}

/// An exact element `a + b·√D` of a real quadratic field.
///
/// The representation is unique because `√D` is irrational for square-free
/// `D ≥ 2`, so the derived equality and hash are value equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadExt {
    /// Builds `a + b·√radicand`, folding square factors of the radicand
    /// into `b`. A perfect-square radicand yields an element of ℚ.
    pub fn from_parts(
        a: BigRational,
        b: BigRational,
        radicand: u64,
    ) -> Result<Self, NumericError> {
        if radicand == 0 {
            return Err(NumericError::InvalidRadicand(radicand));
        }
        let (f, d) = square_free_decompose(radicand);
        let b = b * BigRational::from_integer(f.into());
        if d == 1 {
            Ok(QuadField::RATIONAL.rational(a + b))
        } else if b.is_zero() {
            Ok(QuadField { radicand: d }.rational(a))
        } else {
            Ok(QuadField { radicand: d }.element(a, b))
        }
    }

    pub fn field(&self) -> QuadField {
        QuadField { radicand: self.d }
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// Rational part `a`.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of `√D`.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    /// Moves a value into `field`. Rational values move anywhere; others only
    /// into their own field.
    pub fn lift_into(&self, field: QuadField) -> Result<QuadExt, NumericError> {
        if self.d == field.radicand {
            Ok(self.clone())
        } else if self.b.is_zero() {
            Ok(field.rational(self.a.clone()))
        } else {
            Err(NumericError::RadicandMismatch(self.d, field.radicand))
        }
    }

    pub fn conjugate(&self) -> QuadExt {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }

    /// Field norm `a² − D·b²`.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - self.d_rat() * &self.b * &self.b
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(self.d.into())
    }

    fn check_field(&self, other: &QuadExt) -> Result<(), NumericError> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(NumericError::RadicandMismatch(self.d, other.d))
        }
    }

    /// Sign of the real number `a + b√D`.
    ///
    /// Case split on the signs of `a` and `b`; when they disagree the larger
    /// of `a²` and `D·b²` decides.
    pub fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        match (sa, sb) {
            (s, Ordering::Equal) => s,
            (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.a * &self.a;
                let db2 = self.d_rat() * &self.b * &self.b;
                match a2.cmp(&db2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> QuadExt {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn try_add(&self, rhs: &QuadExt) -> Result<QuadExt, NumericError> {
        self.check_field(rhs)?;
        Ok(QuadExt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            d: self.d,
        })
    }

    pub fn try_sub(&self, rhs: &QuadExt) -> Result<QuadExt, NumericError> {
        self.check_field(rhs)?;
        Ok(QuadExt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            d: self.d,
        })
    }

    pub fn try_mul(&self, rhs: &QuadExt) -> Result<QuadExt, NumericError> {
        self.check_field(rhs)?;
        let a = &self.a * &rhs.a + self.d_rat() * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        Ok(QuadExt { a, b, d: self.d })
    }

    pub fn checked_div(&self, rhs: &QuadExt) -> Result<QuadExt, NumericError> {
        self.check_field(rhs)?;
        self.try_mul(&rhs.inverse()?)
    }

    pub fn inverse(&self) -> Result<QuadExt, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let n = self.norm();
        Ok(QuadExt {
            a: &self.a / &n,
            b: -(&self.b / &n),
            d: self.d,
        })
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, q: &BigRational) -> QuadExt {
        QuadExt {
            a: &self.a * q,
            b: &self.b * q,
            d: self.d,
        }
    }

    pub fn mul_int(&self, n: i64) -> QuadExt {
        self.scale(&BigRational::from_integer(n.into()))
    }

    pub fn pow(&self, mut e: u32) -> QuadExt {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents go through the inverse.
    pub fn powi(&self, e: i64) -> Result<QuadExt, NumericError> {
        let mag = u32::try_from(e.unsigned_abs()).map_err(|_| NumericError::ExponentOverflow(e))?;
        if e >= 0 {
            Ok(self.pow(mag))
        } else {
            Ok(self.inverse()?.pow(mag))
        }
    }

    /// Common-denominator form `(A + B√D) / C` with `C > 0`.
    fn integral_form(&self) -> (BigInt, BigInt, BigInt) {
        let c = self.a.denom().lcm(self.b.denom());
        let a = (&self.a * BigRational::from_integer(c.clone())).to_integer();
        let b = (&self.b * BigRational::from_integer(c.clone())).to_integer();
        (a, b, c)
    }

    /// Exact floor, using an integer square root of `B²·D`.
    pub fn floor(&self) -> BigInt {
        let (a, b, c) = self.integral_form();
        if b.is_zero() {
            return a.div_floor(&c);
        }
        let s = (&b * &b * BigInt::from(self.d)).sqrt();
        if b.is_positive() {
            (a + s).div_floor(&c)
        } else {
            (a - s - BigInt::one()).div_floor(&c)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Floating-point approximation; for reporting, rendering and oracles.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    /// Decimal expansion with `digits` fractional digits, truncated toward
    /// zero. Every printed digit is exact.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.abs().scale(&BigRational::from_integer(scale.clone()));
        let rounded = scaled.floor();
        let (int_part, frac_part) = rounded.div_rem(&scale);
        let sign = if self.is_negative() && !rounded.is_zero() {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            return format!("{sign}{int_part}");
        }
        format!("{sign}{int_part}.{frac_part:0>digits$}")
    }

    /// Square root inside the field, when one exists.
    pub fn sqrt_exact(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return Some(self.clone());
        }
        if self.is_negative() {
            return None;
        }
        let field = self.field();
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(field.rational(r));
            }
            if field.is_rational() {
                return None;
            }
            return rational_sqrt(&(&self.a / self.d_rat()))
                .map(|q| field.element(BigRational::zero(), q));
        }
        // (p + q√D)² = p² + D q² + 2pq√D
        let r = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        for cand in [(&self.a + &r) / &two, (&self.a - &r) / &two] {
            if let Some(p) = rational_sqrt(&cand) {
                if p.is_zero() {
                    continue;
                }
                let q = &self.b / (&two * &p);
                let root = field.element(p, q);
                let root = root.abs();
                if &(&root * &root) == self {
                    return Some(root);
                }
            }
        }
        None
    }
}

/// Square root of a nonnegative rational when it is rational.
pub fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl PartialOrd for QuadExt {
    /// `None` when the operands live in different fields.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_sub(other).ok().map(|diff| diff.sign())
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $inner:ident) => {
        impl $imp<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$inner(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $imp<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $imp<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

// Operators panic on radicand mismatch or division by zero; the `try_*`
// methods are the fallible forms.
forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a.clone(),
            b: -self.b.clone(),
            d: self.d,
        }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q5() -> QuadField {
        QuadField::new(5).unwrap()
    }

    fn golden_lambda() -> QuadExt {
        q5().element(BigRational::new((-1).into(), 2.into()), BigRational::new(1.into(), 2.into()))
    }

    fn el(f: QuadField, a: (i64, i64), b: (i64, i64)) -> QuadExt {
        f.element(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
        )
    }

    #[test]
    fn conjugate_product() {
        let x = el(q5(), (1, 1), (1, 1));
        let y = el(q5(), (1, 1), (-1, 1));
        assert_eq!(&x * &y, q5().int(-4));
    }

    #[test]
    fn golden_inverse_and_square() {
        let lam = golden_lambda();
        let inv = lam.inverse().unwrap();
        assert_eq!(inv, el(q5(), (1, 2), (1, 2)));
        assert!((&lam * &inv).is_one());
        assert_eq!(lam.pow(2), el(q5(), (3, 2), (-1, 2)));
        assert_eq!(lam.pow(2), q5().one() - &lam);
    }

    #[test]
    fn signs() {
        assert_eq!(q5().zero().sign(), Ordering::Equal);
        assert_eq!(el(q5(), (-1, 1), (1, 1)).sign(), Ordering::Greater);
        assert_eq!(el(q5(), (9, 4), (-1, 1)).sign(), Ordering::Greater);
        assert_eq!(el(q5(), (2, 1), (-1, 1)).sign(), Ordering::Less);
    }

    #[test]
    fn radicand_normalization() {
        let x = QuadExt::from_parts(BigRational::zero(), BigRational::one(), 12).unwrap();
        assert_eq!(x.radicand(), 3);
        assert_eq!(x.b(), &BigRational::from_integer(2.into()));
        let y = QuadExt::from_parts(BigRational::one(), BigRational::one(), 9).unwrap();
        assert_eq!(y, QuadField::RATIONAL.int(4));
        assert_eq!(square_free_decompose(72), (6, 2));
        assert_eq!(QuadField::new(0), Err(NumericError::InvalidRadicand(0)));
    }

    #[test]
    fn mismatch_and_zero_division() {
        let a = q5().one();
        let b = QuadField::new(3).unwrap().one();
        assert_eq!(a.try_add(&b), Err(NumericError::RadicandMismatch(5, 3)));
        assert_eq!(a.checked_div(&q5().zero()), Err(NumericError::DivisionByZero));
        assert!(a.partial_cmp(&b).is_none());
    }

    #[test]
    fn floor_and_decimal() {
        let lam = golden_lambda();
        assert_eq!(lam.floor(), BigInt::from(0));
        assert_eq!((-&lam).floor(), BigInt::from(-1));
        assert_eq!(lam.to_decimal(10), "0.6180339887");
        assert_eq!(lam.to_decimal(12), "0.618033988749");
        assert_eq!((q5().int(2) + lam.mul_int(2)).to_decimal(10), "3.2360679774");
        assert_eq!(q5().zero().to_decimal(4), "0.0000");
        assert_eq!((-&lam).to_decimal(3), "-0.618");
        assert_eq!(q5().ratio(-7, 2).floor(), BigInt::from(-4));
    }

    #[test]
    fn exact_square_roots() {
        let golden_sq = el(q5(), (3, 2), (1, 2)); // ((1+√5)/2)²
        assert_eq!(golden_sq.sqrt_exact(), Some(el(q5(), (1, 2), (1, 2))));
        assert_eq!(q5().int(5).sqrt_exact(), Some(el(q5(), (0, 1), (1, 1))));
        assert_eq!(q5().int(2).sqrt_exact(), None);
        assert_eq!(q5().ratio(9, 4).sqrt_exact(), Some(q5().ratio(3, 2)));
        assert_eq!(q5().int(-4).sqrt_exact(), None);
    }
}
