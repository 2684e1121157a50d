//! Exact arithmetic in ℚ and real quadratic fields ℚ(√D), plus the solver
//! for the ladder parameter λ.

mod interval;
mod lambda;
mod quad;
mod text;

pub use interval::{sqrt_bracket, RationalInterval};
pub use lambda::{solve_lambda, LadderParams, ParamError};
pub use quad::{rational_sqrt, square_free_decompose, QuadExt, QuadField};
pub use text::ParseQuadError;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("cannot combine elements of Q(sqrt({0})) and Q(sqrt({1}))")]
    RadicandMismatch(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand must be positive, got {0}")]
    InvalidRadicand(u64),
    #[error("exponent {0} out of range")]
    ExponentOverflow(i64),
}
