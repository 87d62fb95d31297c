//! The Hamiltonian `H = x^2 y (1 - x - y)` as a coefficient table, plus the
//! small sparse bivariate polynomial type used to build forms.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{int, Rational};

/// Sparse bivariate polynomial: `(i, j) -> coefficient of x^i y^j`.
pub type SparsePoly2 = BTreeMap<(u32, u32), Rational>;

pub fn insert_term(poly: &mut SparsePoly2, i: u32, j: u32, c: Rational) {
    let entry = poly.entry((i, j)).or_insert_with(Rational::zero);
    *entry += c;
    if entry.is_zero() {
        poly.remove(&(i, j));
    }
}

pub fn partial_x(poly: &SparsePoly2) -> SparsePoly2 {
    let mut out = SparsePoly2::new();
    for (&(i, j), c) in poly {
        if i > 0 {
            insert_term(&mut out, i - 1, j, c * int(i64::from(i)));
        }
    }
    out
}

pub fn partial_y(poly: &SparsePoly2) -> SparsePoly2 {
    let mut out = SparsePoly2::new();
    for (&(i, j), c) in poly {
        if j > 0 {
            insert_term(&mut out, i, j - 1, c * int(i64::from(j)));
        }
    }
    out
}

pub fn mul2(a: &SparsePoly2, b: &SparsePoly2) -> SparsePoly2 {
    let mut out = SparsePoly2::new();
    for (&(i1, j1), c1) in a {
        for (&(i2, j2), c2) in b {
            insert_term(&mut out, i1 + i2, j1 + j2, c1 * c2);
        }
    }
    out
}

pub fn sub2(a: &SparsePoly2, b: &SparsePoly2) -> SparsePoly2 {
    let mut out = a.clone();
    for (&(i, j), c) in b {
        insert_term(&mut out, i, j, -c);
    }
    out
}

pub fn eval2(poly: &SparsePoly2, x: f64, y: f64) -> f64 {
    poly.iter()
        .map(|(&(i, j), c)| crate::algebra::to_f64(c) * x.powi(i as i32) * y.powi(j as i32))
        .sum()
}

/// Coefficients `h_{ij}` of `H = x^2 y - x^3 y - x^2 y^2`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HamiltonianTable;

impl HamiltonianTable {
    pub const TERMS: [((i64, i64), i64); 3] = [((2, 1), 1), ((3, 1), -1), ((2, 2), -1)];

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, Rational)> {
        Self::TERMS.iter().map(|&((i, j), c)| (i, j, int(c)))
    }

    pub fn as_poly(&self) -> SparsePoly2 {
        let mut out = SparsePoly2::new();
        for (i, j, c) in self.terms() {
            insert_term(&mut out, i as u32, j as u32, c);
        }
        out
    }

    pub fn eval(x: f64, y: f64) -> f64 {
        x * x * y * (1.0 - x - y)
    }

    /// `(H_x, H_y) = (x y (2 - 3x - 2y), x^2 (1 - x - 2y))`.
    pub fn gradient(x: f64, y: f64) -> (f64, f64) {
        (
            x * y * (2.0 - 3.0 * x - 2.0 * y),
            x * x * (1.0 - x - 2.0 * y),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_expands_h() {
        let h = HamiltonianTable.as_poly();
        for &(x, y) in &[(0.3, 0.2), (0.5, 0.25), (0.1, 0.7)] {
            assert!((eval2(&h, x, y) - HamiltonianTable::eval(x, y)).abs() < 1e-15);
        }
        let (hx, hy) = HamiltonianTable::gradient(0.3, 0.2);
        assert!((eval2(&partial_x(&h), 0.3, 0.2) - hx).abs() < 1e-15);
        assert!((eval2(&partial_y(&h), 0.3, 0.2) - hy).abs() < 1e-15);
    }

    #[test]
    fn center_is_critical_with_value_one_sixty_fourth() {
        let h = HamiltonianTable.as_poly();
        let center = |p: &SparsePoly2| {
            p.iter().fold(Rational::zero(), |acc, (&(i, j), c)| {
                acc + c
                    * crate::algebra::rat(1, 2).pow(i as i32)
                    * crate::algebra::rat(1, 4).pow(j as i32)
            })
        };
        assert_eq!(center(&h), crate::algebra::rat(1, 64));
        assert!(center(&partial_x(&h)).is_zero());
        assert!(center(&partial_y(&h)).is_zero());
    }
}
