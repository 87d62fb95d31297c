//! Petrov-module decomposition of Abelian integrals over the ovals of
//! `H = x^2 y (1 - x - y)`.

mod engine;
mod form;
pub mod hamiltonian;
pub mod relations;
mod vector;

use thiserror::Error;

pub use engine::{DegreeProfile, ReductionEngine};
pub use form::{FormDocument, PolynomialForm};
pub use hamiltonian::{HamiltonianTable, SparsePoly2};
pub use relations::{relation_residual, IdentityInstance, RelationKind};
pub use vector::{MonomialIndex, PetrovVector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("monomial index ({k}, {l}) has a negative entry")]
    NegativeIndex { k: i64, l: i64 },
    #[error("degree bound violated for {what}: degree {degree} > {bound}")]
    DegreeBound {
        what: String,
        degree: usize,
        bound: usize,
    },
    #[error("internal reduction failure: {0}")]
    Internal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("malformed form document: {0}")]
    Document(String),
    #[error("negative exponent ({i}, {j}) in {side}")]
    NegativeExponent { side: &'static str, i: i64, j: i64 },
    #[error("bad coefficient {text:?} in {side}")]
    BadCoefficient { side: &'static str, text: String },
}

/// Decomposition of `I_{k,l}` using the shared engine.
pub fn reduce_monomial(k: i64, l: i64) -> Result<PetrovVector, ReductionError> {
    ReductionEngine::shared().reduce_monomial(MonomialIndex::new(k, l))
}

/// Decomposition of `∮ ω` using the shared engine.
pub fn reduce_form(form: &PolynomialForm) -> Result<PetrovVector, ReductionError> {
    ReductionEngine::shared().reduce_form(form)
}

pub fn degree_profile(form: &PolynomialForm) -> Result<DegreeProfile, ReductionError> {
    ReductionEngine::shared().degree_profile(form)
}
