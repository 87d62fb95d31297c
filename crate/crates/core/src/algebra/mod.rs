//! Exact rational arithmetic: scalars, polynomials in `t`, polynomial
//! matrices and Sturm root counting.

mod matrix;
mod poly;
mod rational;
mod sturm;

use thiserror::Error;

pub use matrix::PolyMatrix;
pub(crate) use poly::content_of;
pub use poly::Poly;
pub use rational::{
    fraction_string, int, parse_rational, parse_rational_or_decimal, rat, to_f64, Rational,
};
pub use sturm::{sturm_count, sturm_sequence, OpenInterval};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a nonzero remainder")]
    InexactDivision,
    #[error("root counting is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("interval is empty (lo >= hi)")]
    EmptyInterval,
    #[error("malformed fraction {0:?}")]
    BadFraction(String),
}
