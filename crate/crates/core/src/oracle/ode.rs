//! Propagation of `D(t) J' = Q(t) J` with an adaptive 8th-order Dormand-Prince
//! integrator.
//!
//! The level `t` rides along as a fourth state component with `t' = 1`, so the
//! solver only ever sees an autonomous system (its last stage time is wrong
//! for explicitly time-dependent right-hand sides).

use ode_solvers::{Dop853, OutputType, System, Vector4};

use super::{Jvector, OracleError, EDGE, T_MAX};
use crate::picard_fuchs::derived;

struct PfRhs {
    q: [[Vec<f64>; 3]; 3],
    d: Vec<f64>,
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * t + v)
}

impl System<f64, Vector4<f64>> for PfRhs {
    fn system(&self, _x: f64, y: &Vector4<f64>, dy: &mut Vector4<f64>) {
        let t = y[3];
        let d = horner(&self.d, t);
        for i in 0..3 {
            dy[i] = (0..3).map(|j| horner(&self.q[i][j], t) * y[j]).sum::<f64>() / d;
        }
        dy[3] = 1.0;
    }
}

fn rhs() -> Result<PfRhs, OracleError> {
    let sys = derived().map_err(|e| OracleError::Ode(e.to_string()))?;
    let q = std::array::from_fn(|i| std::array::from_fn(|j| sys.pf.q.get(i, j).to_f64_coeffs()));
    Ok(PfRhs {
        q,
        d: sys.pf.d.to_f64_coeffs(),
    })
}

/// `J(t1)` from `J(t0) = j0`. Both ends must lie in `[1e-4, 1/64 - 1e-4]`,
/// away from the roots of `D`. Positivity is checked at every accepted step.
pub fn integrate_pf(t0: f64, j0: Jvector, t1: f64, tol: f64) -> Result<Jvector, OracleError> {
    let inside = |t: f64| (EDGE..=T_MAX - EDGE).contains(&t);
    if !inside(t0) || !inside(t1) {
        return Err(OracleError::Interval(t0.min(t1), t0.max(t1)));
    }
    if t0 == t1 {
        return Ok(j0);
    }
    let y0 = Vector4::new(j0.j1, j0.j2, j0.j3, t0);
    let scale = j0
        .as_array()
        .iter()
        .fold(f64::INFINITY, |m, v| m.min(v.abs()));
    let mut solver = Dop853::new(rhs()?, t0, t1, t1 - t0, y0, tol, tol * scale * 1e-3);
    solver.set_output(OutputType::Sparse);
    solver
        .integrate()
        .map_err(|e| OracleError::Ode(e.to_string()))?;
    for (t, y) in solver.x_out().iter().zip(solver.y_out()) {
        if !(y[0] > 0.0 && y[1] > 0.0 && y[2] > 0.0) {
            return Err(OracleError::Positivity(*t));
        }
    }
    let last = solver
        .y_out()
        .last()
        .ok_or_else(|| OracleError::Ode("no output".into()))?;
    Ok(Jvector::from_array([last[0], last[1], last[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{j_vector, T_SEED};

    #[test]
    fn identity_step() {
        let j = Jvector::from_array([1.0, 2.0, 3.0]);
        assert_eq!(integrate_pf(0.01, j, 0.01, 1e-10).unwrap(), j);
    }

    #[test]
    fn rejects_singular_ends() {
        let j = Jvector::from_array([1.0, 1.0, 1.0]);
        assert!(matches!(
            integrate_pf(1e-5, j, 0.01, 1e-10),
            Err(OracleError::Interval(..))
        ));
        assert!(matches!(
            integrate_pf(0.01, j, T_MAX, 1e-10),
            Err(OracleError::Interval(..))
        ));
    }

    #[test]
    fn agrees_with_quadrature() {
        let j0 = j_vector(T_SEED, 1e-12).unwrap();
        for &t in &[1.0 / 80.0, 1.0 / 200.0] {
            let ode = integrate_pf(T_SEED, j0, t, 1e-12).unwrap();
            let quad = j_vector(t, 1e-12).unwrap();
            for (a, b) in ode.as_array().iter().zip(quad.as_array()) {
                assert!((a - b).abs() <= 1e-8 * b, "{a} vs {b} at {t}");
            }
        }
    }
}
