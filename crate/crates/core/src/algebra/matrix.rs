use serde::Serialize;

use super::poly::Poly;
use super::rational::Rational;
use super::AlgebraError;

/// Dense row-major matrix of polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch);
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Poly::one();
        }
        m
    }

    /// Constant matrix from rational rows.
    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self, AlgebraError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::DimensionMismatch);
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|c| Poly::constant(c.clone()))
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> &Poly {
        &self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Poly) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    fn zip(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Result<Self, AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::DimensionMismatch);
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch);
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn scale_poly(&self, p: &Poly) -> Self {
        self.map(|e| e * p)
    }

    /// Substitutes a rational value for `t`; the result has constant entries.
    pub fn eval(&self, at: &Rational) -> Self {
        self.map(|e| Poly::constant(e.eval(at)))
    }

    pub fn row(&self, row: usize) -> &[Poly] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    fn require_square(&self) -> Result<usize, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::DimensionMismatch);
        }
        Ok(self.rows)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<Poly, AlgebraError> {
        let n = self.require_square()?;
        let mut m: Vec<Vec<Poly>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = Poly::one();
        for k in 0..n {
            let Some(pivot) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return Ok(Poly::zero());
            };
            if pivot != k {
                m.swap(pivot, k);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.exact_div(&prev)?;
                }
                m[i][k] = Poly::zero();
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let entries = (0..self.rows)
            .filter(|&r| r != skip_row)
            .flat_map(|r| {
                (0..self.cols)
                    .filter(move |&c| c != skip_col)
                    .map(move |c| (r, c))
            })
            .map(|(r, c)| self.get(r, c).clone())
            .collect();
        Self {
            rows: self.rows - 1,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Classical adjoint: `adj(M) * M = det(M) * I`.
    pub fn adjugate(&self) -> Result<Self, AlgebraError> {
        let n = self.require_square()?;
        if n == 1 {
            return Ok(Self::identity(1));
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let cofactor = self.minor(i, j).determinant()?;
                let signed = if (i + j) % 2 == 0 {
                    cofactor
                } else {
                    -cofactor
                };
                out.set(j, i, signed);
            }
        }
        Ok(out)
    }

    /// Rows of coefficient arrays (fraction strings), for document output.
    pub fn to_wire(&self) -> Vec<Vec<Vec<String>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(Poly::fraction_strings).collect())
            .collect()
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{int, rat};

    fn a_plus_tb() -> PolyMatrix {
        let p = |c0: Rational, c1: Rational| Poly::new(vec![c0, c1]);
        let z = || int(0);
        PolyMatrix::new(
            3,
            3,
            vec![
                p(z(), rat(2, 3)),
                p(rat(-1, 12), z()),
                p(rat(1, 12), z()),
                p(z(), z()),
                p(rat(-1, 56), rat(4, 7)),
                p(rat(1, 56), z()),
                p(z(), z()),
                p(rat(-5, 504), rat(2, 21)),
                p(rat(5, 504), rat(4, 9)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn identity_determinant() {
        assert_eq!(PolyMatrix::identity(3).determinant().unwrap(), Poly::one());
    }

    #[test]
    fn determinant_of_pencil() {
        // t^2 (64 t - 1) / 378
        let expected = Poly::new(vec![int(0), int(0), rat(-1, 378), rat(64, 378)]);
        assert_eq!(a_plus_tb().determinant().unwrap(), expected);
    }

    #[test]
    fn substitution_at_zero() {
        let at0 = a_plus_tb().eval(&int(0));
        assert_eq!(at0.get(0, 1), &Poly::constant(rat(-1, 12)));
        assert_eq!(at0.get(0, 0), &Poly::zero());
        assert_eq!(at0.get(2, 2), &Poly::constant(rat(5, 504)));
    }

    #[test]
    fn adjugate_identity() {
        let m = a_plus_tb();
        let det = m.determinant().unwrap();
        let lhs = m.adjugate().unwrap().mul(&m).unwrap();
        assert_eq!(lhs, PolyMatrix::identity(3).scale_poly(&det));
    }

    #[test]
    fn pivoting_and_singular() {
        let swap = PolyMatrix::from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap();
        assert_eq!(swap.determinant().unwrap(), Poly::constant(int(-1)));
        let singular =
            PolyMatrix::from_rows(&[vec![int(1), int(2)], vec![int(2), int(4)]]).unwrap();
        assert!(singular.determinant().unwrap().is_zero());
    }

    #[test]
    fn dimension_errors() {
        let a = PolyMatrix::identity(2);
        let b = PolyMatrix::identity(3);
        assert!(a.mul(&b).is_err());
        assert!(a.add(&b).is_err());
        assert!(PolyMatrix::zeros(2, 3).determinant().is_err());
        assert!(PolyMatrix::new(2, 2, vec![Poly::one()]).is_err());
    }
}
