//! Floating-point ground truth: oval tracing, contour quadrature, propagation
//! of the Picard-Fuchs system and numeric zero location.
//!
//! Nothing here uses the reduction tables except `count_zeros_numeric`, which
//! needs the Petrov coefficients to assemble `I(t)` from tabulated `J` values.

mod ode;
mod oval;
mod quad;
mod zeros;

use serde::Serialize;
use thiserror::Error;

use crate::petrov::ReductionError;

pub use ode::integrate_pf;
pub use oval::{trace_oval, winding_number, Oval};
pub use quad::{eval_form_integral, eval_monomial_integral, eval_monomial_integral_dx, j_vector};
pub use zeros::{count_zeros_numeric, zeros_from_table, JTable};

/// Upper end of the level range, the value of `H` at the center.
pub const T_MAX: f64 = 1.0 / 64.0;
/// The center `(1/2, 1/4)`.
pub const CENTER: (f64, f64) = (0.5, 0.25);
/// Distance kept from both ends of `(0, 1/64)` by the ODE and zero search.
pub const EDGE: f64 = 1e-4;
pub const DEFAULT_TOL: f64 = 1e-10;
/// Quadrature budget, in contour points.
pub const MAX_POINTS: usize = 1 << 20;
pub const DEFAULT_GRID: usize = 200;
/// ODE seed point.
pub const T_SEED: f64 = 1.0 / 128.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("level t = {0} is outside (0, 1/64)")]
    OutOfRange(f64),
    #[error("could not bracket the oval on the ray at angle {theta}")]
    Bracket { theta: f64 },
    #[error("{what} did not converge within {points} contour points")]
    NonConvergence { what: String, points: usize },
    #[error("interval [{0}, {1}] leaves [1e-4, 1/64 - 1e-4]")]
    Interval(f64, f64),
    #[error("ODE integration failed: {0}")]
    Ode(String),
    #[error("J lost positivity at t = {0}")]
    Positivity(f64),
    #[error("contour formula is undefined for I_{{{k},{l}}}")]
    BadIndex { k: i64, l: i64 },
    #[error("need at least {min} {what}, got {got}")]
    TooFew {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

impl OracleError {
    /// True for failures of the numerics themselves (as opposed to bad input).
    pub fn is_convergence(&self) -> bool {
        matches!(
            self,
            Self::Bracket { .. } | Self::NonConvergence { .. } | Self::Ode(_) | Self::Positivity(_)
        )
    }
}

/// Numeric `(J1, J2, J3)` at one level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jvector {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl Jvector {
    pub fn from_array([j1, j2, j3]: [f64; 3]) -> Self {
        Self { j1, j2, j3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.j1, self.j2, self.j3]
    }

    pub fn is_positive(&self) -> bool {
        self.j1 > 0.0 && self.j2 > 0.0 && self.j3 > 0.0
    }

    pub fn norm(&self) -> f64 {
        self.as_array().iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

pub(crate) fn check_level(t: f64) -> Result<(), OracleError> {
    if t > 0.0 && t < T_MAX {
        Ok(())
    } else {
        Err(OracleError::OutOfRange(t))
    }
}
