//! Linear relations between the area integrals `I_{k,l}`.
//!
//! The four basic identities come from `H = t` on the oval (two algebraic
//! ones) and from the Gelfand-Leray derivative (two differential ones). All
//! of them are generated from the coefficient table of `H`, for any integer
//! indices, including negative ones.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::hamiltonian::HamiltonianTable;
use super::vector::MonomialIndex;
use crate::algebra::{int, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RelationKind {
    /// `t (k+1) I_{k,l} = Σ h_ij (k+i+1) I_{k+i,l+j}`
    R1,
    /// `t (l+1) I_{k,l} = Σ h_ij (l+j+1) I_{k+i,l+j}`
    R2,
    /// `(k+1) I_{k,l} = Σ i h_ij d/dt I_{k+i,l+j}`
    R3,
    /// `(l+1) I_{k,l} = Σ j h_ij d/dt I_{k+i,l+j}`
    R4,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [Self::R1, Self::R2, Self::R3, Self::R4];

    pub fn is_differential(self) -> bool {
        matches!(self, Self::R3 | Self::R4)
    }
}

/// One instance of a basic identity:
/// `lhs_scale · [t ·] lhs = Σ c · [d/dt] I_idx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityInstance {
    pub kind: RelationKind,
    pub lhs_scale: Rational,
    pub lhs_times_t: bool,
    pub lhs: MonomialIndex,
    pub rhs: Vec<(Rational, MonomialIndex)>,
    pub rhs_differentiated: bool,
}

impl IdentityInstance {
    pub fn rhs_coeff(&self, idx: MonomialIndex) -> Rational {
        self.rhs
            .iter()
            .filter(|(_, i)| *i == idx)
            .map(|(c, _)| c.clone())
            .sum()
    }
}

impl fmt::Display for IdentityInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = if self.lhs_times_t { "t·" } else { "" };
        let scale = if self.lhs_scale.is_one() {
            String::new()
        } else {
            format!("{}·", self.lhs_scale)
        };
        write!(f, "{scale}{t}{} =", self.lhs)?;
        let d = if self.rhs_differentiated { "d/dt " } else { "" };
        for (i, (c, idx)) in self.rhs.iter().enumerate() {
            let sign = match (i, c.is_negative()) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => "+ ",
                (_, true) => "- ",
            };
            write!(f, " {sign}{}·{d}{idx}", c.abs())?;
        }
        Ok(())
    }
}

/// Instance of one of the four basic identities at `(k, l)`.
pub fn relation_residual(kind: RelationKind, k: i64, l: i64) -> IdentityInstance {
    let lhs_scale = match kind {
        RelationKind::R1 | RelationKind::R3 => int(k + 1),
        RelationKind::R2 | RelationKind::R4 => int(l + 1),
    };
    let rhs = HamiltonianTable
        .terms()
        .map(|(i, j, h)| {
            let weight = match kind {
                RelationKind::R1 => k + i + 1,
                RelationKind::R2 => l + j + 1,
                RelationKind::R3 => i,
                RelationKind::R4 => j,
            };
            (h * int(weight), MonomialIndex::new(k + i, l + j))
        })
        .filter(|(c, _)| !c.is_zero())
        .collect();
    IdentityInstance {
        kind,
        lhs_scale,
        lhs_times_t: !kind.is_differential(),
        lhs: MonomialIndex::new(k, l),
        rhs,
        rhs_differentiated: kind.is_differential(),
    }
}

/// `Σ c_idx(t) · I_idx = 0` with polynomial coefficients; zero coefficients
/// are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearRelation {
    terms: BTreeMap<MonomialIndex, Poly>,
}

impl LinearRelation {
    fn add_term(&mut self, idx: MonomialIndex, c: &Poly) {
        let entry = self.terms.entry(idx).or_default();
        *entry = &*entry + c;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    /// The algebraic identities R1/R2 moved to one side.
    pub fn from_identity(identity: &IdentityInstance) -> Self {
        assert!(
            !identity.rhs_differentiated,
            "differential identities are not linear relations over C[t]"
        );
        let mut rel = Self::default();
        let lhs = if identity.lhs_times_t {
            Poly::monomial(identity.lhs_scale.clone(), 1)
        } else {
            Poly::constant(identity.lhs_scale.clone())
        };
        rel.add_term(identity.lhs, &lhs);
        for (c, idx) in &identity.rhs {
            rel.add_term(*idx, &Poly::constant(-c.clone()));
        }
        rel
    }

    /// `a · self + b · other`.
    pub fn combine(&self, a: i64, other: &Self, b: i64) -> Self {
        let mut rel = Self::default();
        for (idx, c) in &self.terms {
            rel.add_term(*idx, &c.scale(&int(a)));
        }
        for (idx, c) in &other.terms {
            rel.add_term(*idx, &c.scale(&int(b)));
        }
        rel
    }

    pub fn coeff(&self, idx: MonomialIndex) -> Poly {
        self.terms.get(&idx).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MonomialIndex, &Poly)> {
        self.terms.iter()
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }
}

/// The pair of algebraic identities R1, R2 at `(k, l)`, each on one side.
pub fn level_pair(k: i64, l: i64) -> (LinearRelation, LinearRelation) {
    (
        LinearRelation::from_identity(&relation_residual(RelationKind::R1, k, l)),
        LinearRelation::from_identity(&relation_residual(RelationKind::R2, k, l)),
    )
}

/// The row-reduced pair: the first row has no `I_{k+2,l+2}` term, the second
/// none in `I_{k+3,l+1}`. Both carry the factor `k + l + 6` on the remaining
/// top-level unknown.
pub fn reduced_pair(k: i64, l: i64) -> (LinearRelation, LinearRelation) {
    let (r1, r2) = level_pair(k, l);
    (
        r1.combine(l + 3, &r2, -(k + 3)),
        r1.combine(-(l + 2), &r2, k + 4),
    )
}

/// The relation among `I_{k+2,l+1}`, `I_{k+3,l+1}`, `I_{k+2,l+2}` alone,
/// obtained by eliminating `t I_{k,l}`.
pub fn three_term(k: i64, l: i64) -> LinearRelation {
    let (r1, r2) = level_pair(k, l);
    r1.combine(l + 1, &r2, -(k + 1))
}
