//! Polynomial 1-forms `ω = p dx + q dy` and their document format.
//!
//! Document layout (JSON):
//!
//! ```json
//! { "p": [[0, 1, "1"]], "q": [[2, 1, "-3/4"]] }
//! ```
//!
//! Each triple is `[i, j, coefficient]` for the monomial `x^i y^j`; the
//! coefficient is an exact fraction string. Repeated `(i, j)` pairs are summed.

use serde::{Deserialize, Serialize};

use super::hamiltonian::{
    insert_term, mul2, partial_x, partial_y, sub2, HamiltonianTable, SparsePoly2,
};
use super::FormError;
use crate::algebra::{fraction_string, int, parse_rational, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolynomialForm {
    p: SparsePoly2,
    q: SparsePoly2,
}

/// Wire representation of a form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDocument {
    #[serde(default)]
    pub p: Vec<(i64, i64, String)>,
    #[serde(default)]
    pub q: Vec<(i64, i64, String)>,
}

impl PolynomialForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_parts(p: SparsePoly2, q: SparsePoly2) -> Self {
        let clean = |m: SparsePoly2| {
            let mut out = SparsePoly2::new();
            for ((i, j), c) in m {
                insert_term(&mut out, i, j, c);
            }
            out
        };
        Self {
            p: clean(p),
            q: clean(q),
        }
    }

    /// `x^i y^j dx` scaled by `c`.
    pub fn dx_term(i: u32, j: u32, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_p(i, j, c);
        f
    }

    /// `x^i y^j dy` scaled by `c`.
    pub fn dy_term(i: u32, j: u32, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_q(i, j, c);
        f
    }

    pub fn add_p(&mut self, i: u32, j: u32, c: Rational) {
        insert_term(&mut self.p, i, j, c);
    }

    pub fn add_q(&mut self, i: u32, j: u32, c: Rational) {
        insert_term(&mut self.q, i, j, c);
    }

    /// `g · dF = g F_x dx + g F_y dy`.
    pub fn differential_times(g: &SparsePoly2, f: &SparsePoly2) -> Self {
        Self::from_parts(mul2(g, &partial_x(f)), mul2(g, &partial_y(f)))
    }

    /// `dF`.
    pub fn differential(f: &SparsePoly2) -> Self {
        let one: SparsePoly2 = [((0, 0), int(1))].into_iter().collect();
        Self::differential_times(&one, f)
    }

    /// `dH`.
    pub fn dh() -> Self {
        Self::differential(&HamiltonianTable.as_poly())
    }

    pub fn p(&self) -> &SparsePoly2 {
        &self.p
    }

    pub fn q(&self) -> &SparsePoly2 {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_empty() && self.q.is_empty()
    }

    /// Largest total degree of a nonzero coefficient; 0 for the zero form.
    pub fn degree(&self) -> usize {
        self.p
            .keys()
            .chain(self.q.keys())
            .map(|&(i, j)| (i + j) as usize)
            .max()
            .unwrap_or(0)
    }

    /// `∂q/∂x - ∂p/∂y`, the area density whose integral over the enclosed
    /// region equals the counterclockwise line integral.
    pub fn integrand(&self) -> SparsePoly2 {
        sub2(&partial_x(&self.q), &partial_y(&self.p))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let s = |m: &SparsePoly2| m.iter().map(|(k, v)| (*k, v * c)).collect();
        Self::from_parts(s(&self.p), s(&self.q))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.p {
            out.add_p(i, j, c.clone());
        }
        for (&(i, j), c) in &other.q {
            out.add_q(i, j, c.clone());
        }
        out
    }

    pub fn from_document(doc: &FormDocument) -> Result<Self, FormError> {
        let mut form = Self::zero();
        for (side, terms) in [("p", &doc.p), ("q", &doc.q)] {
            for (i, j, coeff) in terms {
                let (Ok(iu), Ok(ju)) = (u32::try_from(*i), u32::try_from(*j)) else {
                    return Err(FormError::NegativeExponent { side, i: *i, j: *j });
                };
                let c = parse_rational(coeff).map_err(|_| FormError::BadCoefficient {
                    side,
                    text: coeff.clone(),
                })?;
                if side == "p" {
                    form.add_p(iu, ju, c);
                } else {
                    form.add_q(iu, ju, c);
                }
            }
        }
        Ok(form)
    }

    pub fn to_document(&self) -> FormDocument {
        let side = |m: &SparsePoly2| {
            m.iter()
                .map(|(&(i, j), c)| (i64::from(i), i64::from(j), fraction_string(c)))
                .collect()
        };
        FormDocument {
            p: side(&self.p),
            q: side(&self.q),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FormError> {
        let doc: FormDocument =
            serde_json::from_str(text).map_err(|e| FormError::Document(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    /// Numeric evaluation of the coefficient pair at a point.
    pub fn eval_f64(&self, x: f64, y: f64) -> (f64, f64) {
        (
            super::hamiltonian::eval2(&self.p, x, y),
            super::hamiltonian::eval2(&self.q, x, y),
        )
    }
}
