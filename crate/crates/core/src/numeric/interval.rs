use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::rational_sqrt;

/// A closed interval `[lo, hi]` with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RationalInterval {
    pub fn point(x: BigRational) -> Self {
        RationalInterval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `1 / self`; the interval must not contain zero.
    pub fn recip(&self) -> RationalInterval {
        assert!(self.lo.is_positive() || self.hi.is_negative());
        RationalInterval {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> RationalInterval {
        let (a, b) = (&self.lo * q, &self.hi * q);
        if a <= b {
            RationalInterval { lo: a, hi: b }
        } else {
            RationalInterval { lo: b, hi: a }
        }
    }
}

/// Encloses `√x` (for `x ≥ 0`) in an interval of width at most
/// `2^-bits / denom(x)`. The interval is a single point when `x` is a
/// rational square.
pub fn sqrt_bracket(x: &BigRational, bits: u32) -> RationalInterval {
    assert!(!x.is_negative(), "square root of a negative number");
    if let Some(r) = rational_sqrt(x) {
        return RationalInterval::point(r);
    }
    // √(p/q) = √(pq) / q
    let (p, q) = (x.numer(), x.denom());
    let shift = BigInt::one() << bits;
    let r = (p * q * &shift * &shift).sqrt();
    let den = q * &shift;
    RationalInterval {
        lo: BigRational::new(r.clone(), den.clone()),
        hi: BigRational::new(r + 1, den),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brackets_sqrt_two() {
        let two = BigRational::from_integer(2.into());
        for bits in [4, 16, 64] {
            let iv = sqrt_bracket(&two, bits);
            assert!(&iv.lo * &iv.lo < two && &iv.hi * &iv.hi > two);
            assert!(iv.width() <= BigRational::new(1.into(), BigInt::one() << bits));
        }
    }

    #[test]
    fn exact_for_squares() {
        let x = BigRational::new(25.into(), 16.into());
        let iv = sqrt_bracket(&x, 8);
        assert!(iv.is_exact());
        assert_eq!(iv.lo, BigRational::new(5.into(), 4.into()));
        assert_eq!(iv.recip().lo, BigRational::new(4.into(), 5.into()));
    }
}
