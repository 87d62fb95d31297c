//! Sign-change detection of `I(t) = p1 J1 + p2 J2 + p3 J3` on a uniform grid.
//!
//! This only finds zeros where `I` changes sign between grid points, so it
//! gives a lower bound on the zero count.

use super::{check_level, j_vector, Jvector, OracleError, DEFAULT_TOL};
use crate::exec::Execution;
use crate::petrov::{PetrovVector, PolynomialForm, ReductionEngine};

const REFINE_WIDTH: f64 = 1e-10;

/// Quadrature `J` values on a uniform grid (endpoints included).
#[derive(Clone, Debug, PartialEq)]
pub struct JTable {
    pub ts: Vec<f64>,
    pub js: Vec<Jvector>,
    pub tol: f64,
}

impl JTable {
    pub fn build(
        grid_n: usize,
        t_lo: f64,
        t_hi: f64,
        tol: f64,
        exec: Execution,
    ) -> Result<Self, OracleError> {
        if grid_n < 100 {
            return Err(OracleError::TooFew {
                what: "grid points",
                min: 100,
                got: grid_n,
            });
        }
        check_level(t_lo)?;
        check_level(t_hi)?;
        if t_lo >= t_hi {
            return Err(OracleError::Interval(t_lo, t_hi));
        }
        let step = (t_hi - t_lo) / (grid_n - 1) as f64;
        let ts: Vec<f64> = (0..grid_n)
            .map(|i| {
                if i + 1 == grid_n {
                    t_hi
                } else {
                    t_lo + step * i as f64
                }
            })
            .collect();
        let js = exec
            .map(&ts, |&t| j_vector(t, tol))
            .into_iter()
            .collect::<Result<_, _>>()?;
        Ok(Self { ts, js, tol })
    }

    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }
}

fn value(petrov: &PetrovVector, t: f64, tol: f64) -> Result<f64, OracleError> {
    Ok(petrov.eval_f64(t, j_vector(t, tol)?.as_array()))
}

/// Refined zero locations of `I` for a precomputed table.
pub fn zeros_from_table(petrov: &PetrovVector, table: &JTable) -> Result<Vec<f64>, OracleError> {
    if petrov.is_zero() {
        return Ok(Vec::new());
    }
    let vals: Vec<f64> = table
        .ts
        .iter()
        .zip(&table.js)
        .map(|(&t, j)| petrov.eval_f64(t, j.as_array()))
        .collect();
    let mut out = Vec::new();
    for i in 0..vals.len() {
        if vals[i] == 0.0 {
            out.push(table.ts[i]);
            continue;
        }
        let Some(&next) = vals.get(i + 1) else { break };
        if next == 0.0 || (vals[i] > 0.0) == (next > 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (table.ts[i], table.ts[i + 1]);
        let lo_positive = vals[i] > 0.0;
        while hi - lo > REFINE_WIDTH {
            let mid = 0.5 * (lo + hi);
            let v = value(petrov, mid, table.tol)?;
            if v == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (v > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Zeros of `∮ ω` detected on `grid_n` points of `[t_lo, t_hi]`.
pub fn count_zeros_numeric(
    form: &PolynomialForm,
    grid_n: usize,
    t_lo: f64,
    t_hi: f64,
) -> Result<Vec<f64>, OracleError> {
    let petrov = ReductionEngine::shared().reduce_form(form)?;
    let table = JTable::build(grid_n, t_lo, t_hi, DEFAULT_TOL, Execution::default())?;
    zeros_from_table(&petrov, &table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, Poly};
    use crate::oracle::{EDGE, T_MAX};

    fn table() -> JTable {
        JTable::build(120, EDGE, T_MAX - EDGE, DEFAULT_TOL, Execution::default()).unwrap()
    }

    #[test]
    fn positive_integral_has_no_zeros() {
        let z = count_zeros_numeric(
            &PolynomialForm::dy_term(2, 1, int(1)),
            100,
            EDGE,
            T_MAX - EDGE,
        )
        .unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn planted_polynomial_zero() {
        // (t - 1/100) J3 vanishes exactly at 1/100
        let v = PetrovVector::new(
            Poly::zero(),
            Poly::zero(),
            Poly::new(vec![rat(-1, 100), int(1)]),
        );
        let z = zeros_from_table(&v, &table()).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0] - 0.01).abs() < 1e-9);
    }

    #[test]
    fn scaling_keeps_zero_list() {
        let v = PetrovVector::new(Poly::zero(), Poly::one(), Poly::constant(int(-1)));
        let t = table();
        let a = zeros_from_table(&v, &t).unwrap();
        let b = zeros_from_table(&v.scale(&int(3)), &t).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_grid() {
        assert!(matches!(
            JTable::build(10, EDGE, 0.01, DEFAULT_TOL, Execution::Sequential),
            Err(OracleError::TooFew { .. })
        ));
        assert!(matches!(
            JTable::build(100, 0.01, 0.005, DEFAULT_TOL, Execution::Sequential),
            Err(OracleError::Interval(..))
        ));
    }
}
