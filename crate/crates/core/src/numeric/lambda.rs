use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use super::{square_free_decompose, QuadExt, QuadField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("need k > l > 0, got k = {k}, l = {l}")]
    NotOrdered { k: i64, l: i64 },
    #[error("k = {k} and l = {l} are not coprime")]
    NotCoprime { k: i64, l: i64 },
    #[error("lambda = {lambda} for (k, l) = ({k}, {l}) is not in (0, 1)")]
    LambdaOutOfRange { k: i64, l: i64, lambda: String },
    #[error("parameters too large")]
    Overflow,
}

/// Parameters of the ladder surface with `λ = λ_{k,l}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LadderParams {
    pub k: i64,
    pub l: i64,
    pub lambda: QuadExt,
}

/// Solves `k(λ + 1) = l(λ⁻¹ + 1 + λ)` for its positive root.
///
/// Clearing `λ⁻¹` gives `(k−l)λ² + (k−l)λ − l = 0`, so
/// `λ = (−(k−l) + √((k−l)(k+3l))) / (2(k−l))`, expressed over the square-free
/// part of the discriminant. Only roots in `(0, 1)` are accepted, which
/// happens exactly when `2k > 3l`.
pub fn solve_lambda(k: i64, l: i64) -> Result<LadderParams, ParamError> {
    if !(k > l && l > 0) {
        return Err(ParamError::NotOrdered { k, l });
    }
    if k.gcd(&l) != 1 {
        return Err(ParamError::NotCoprime { k, l });
    }
    let diff = k - l;
    let disc = l
        .checked_mul(3)
        .and_then(|t| k.checked_add(t))
        .and_then(|t| t.checked_mul(diff))
        .ok_or(ParamError::Overflow)?;
    let (root_factor, radicand) = square_free_decompose(disc as u64);
    let half_inv = BigRational::new(1.into(), (2 * diff).into());
    let a = -BigRational::new(1.into(), 2.into());
    let b = half_inv * BigRational::from_integer(root_factor.into());
    let lambda = if radicand == 1 {
        QuadField::RATIONAL.rational(a + b)
    } else {
        QuadField::new(radicand)
            .expect("square-free radicand is positive")
            .element(a, b)
    };
    if !lambda.is_positive() || lambda >= lambda.field().one() {
        return Err(ParamError::LambdaOutOfRange {
            k,
            l,
            lambda: lambda.to_string(),
        });
    }
    Ok(LadderParams { k, l, lambda })
}

impl LadderParams {
    pub fn field(&self) -> QuadField {
        self.lambda.field()
    }

    pub fn radicand(&self) -> u64 {
        self.field().radicand()
    }

    pub fn lambda_inv(&self) -> QuadExt {
        self.lambda.inverse().expect("lambda is nonzero")
    }

    pub fn one_plus_lambda(&self) -> QuadExt {
        &self.lambda + self.field().one()
    }

    /// `λⁿ` for any integer `n`.
    pub fn lambda_pow(&self, n: i64) -> QuadExt {
        self.lambda.powi(n).expect("lambda is nonzero")
    }

    /// The translation length `k(1+λ)` of the horizontal multi-twist.
    pub fn shear(&self) -> QuadExt {
        self.one_plus_lambda().mul_int(self.k)
    }

    /// `k(λ+1) − l(λ⁻¹+1+λ)`; zero for a correct solution.
    pub fn residual(&self) -> QuadExt {
        let f = self.field();
        let rhs = (self.lambda_inv() + f.one() + &self.lambda).mul_int(self.l);
        self.shear() - rhs
    }

    /// `(k−l)λ² + (k−l)λ − l`.
    pub fn quadratic_residual(&self) -> QuadExt {
        let d = self.k - self.l;
        (self.lambda.pow(2) + &self.lambda).mul_int(d) - self.field().int(self.l)
    }

    /// `G = ⟨R, T⟩` is known to be the whole Veech group only for `l = 1`.
    pub fn veech_group_known(&self) -> bool {
        self.l == 1
    }

    pub fn is_rational(&self) -> bool {
        self.lambda.as_rational().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ladder() {
        let p = solve_lambda(2, 1).unwrap();
        assert_eq!(p.radicand(), 5);
        assert_eq!(p.lambda.to_string(), "-1/2 + 1/2*sqrt(5)");
        assert!(p.residual().is_zero());
        let f = p.field();
        assert!((p.lambda.pow(2) + &p.lambda - f.one()).is_zero());
        assert_eq!(p.lambda.to_decimal(12), "0.618033988749");
    }

    #[test]
    fn three_one() {
        let p = solve_lambda(3, 1).unwrap();
        assert_eq!(p.radicand(), 3);
        assert_eq!(p.lambda.to_string(), "-1/2 + 1/2*sqrt(3)");
        assert_eq!(p.lambda.to_decimal(12), "0.366025403784");
        assert!(p.quadratic_residual().is_zero());
    }

    #[test]
    fn perfect_square_discriminants() {
        // (3,2): discriminant 9 gives lambda = 1, outside (0,1).
        assert!(matches!(solve_lambda(3, 2), Err(ParamError::LambdaOutOfRange { .. })));
        // (13,4): discriminant 225 gives the rational lambda = 1/3.
        let p = solve_lambda(13, 4).unwrap();
        assert!(p.is_rational());
        assert_eq!(p.lambda, QuadField::RATIONAL.ratio(1, 3));
        assert!(p.residual().is_zero());
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(solve_lambda(1, 1), Err(ParamError::NotOrdered { k: 1, l: 1 }));
        assert_eq!(solve_lambda(2, 0), Err(ParamError::NotOrdered { k: 2, l: 0 }));
        assert_eq!(solve_lambda(4, 2), Err(ParamError::NotCoprime { k: 4, l: 2 }));
        assert!(matches!(solve_lambda(5, 4), Err(ParamError::LambdaOutOfRange { .. })));
    }

    #[test]
    fn residual_vanishes_for_many_parameters() {
        for k in 2..40 {
            for l in 1..k {
                if let Ok(p) = solve_lambda(k, l) {
                    assert!(p.residual().is_zero(), "({k},{l})");
                    assert!(p.lambda.is_positive() && p.lambda < p.field().one());
                    assert!(2 * k > 3 * l);
                } else if k.gcd(&l) == 1 {
                    assert!(2 * k <= 3 * l, "({k},{l}) rejected");
                }
            }
        }
    }
}

