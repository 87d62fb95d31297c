//! Contour quadrature over `δ(t)`: composite Gauss-Legendre in the ray angle,
//! panel count doubled until two successive values agree.

use std::f64::consts::TAU;
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use super::oval::{ray_point, RayPoint};
use super::{check_level, Jvector, OracleError, MAX_POINTS};
use crate::petrov::PolynomialForm;

const NODES_PER_PANEL: usize = 16;
const FIRST_PANELS: usize = 8;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(NODES_PER_PANEL).unwrap())
            .as_node_weight_pairs()
            .to_vec()
    })
}

fn for_each_node(
    t: f64,
    panels: usize,
    mut visit: impl FnMut(f64, &RayPoint),
) -> Result<(), OracleError> {
    let h = TAU / panels as f64;
    for p in 0..panels {
        let a = p as f64 * h;
        for &(xi, w) in rule() {
            let theta = a + 0.5 * h * (1.0 + xi);
            visit(0.5 * h * w, &ray_point(t, theta)?);
        }
    }
    Ok(())
}

/// Integrates `m` quantities at once. `integrand` writes each value and a
/// magnitude (used to recognize values that are zero up to rounding).
fn adaptive(
    t: f64,
    tol: f64,
    m: usize,
    what: impl Fn() -> String,
    integrand: impl Fn(&RayPoint, &mut [f64], &mut [f64]),
) -> Result<Vec<f64>, OracleError> {
    check_level(t)?;
    let mut prev: Option<Vec<f64>> = None;
    let mut panels = FIRST_PANELS;
    let (mut vals, mut mags) = (vec![0.0; m], vec![0.0; m]);
    loop {
        let points = panels * NODES_PER_PANEL;
        if points > MAX_POINTS {
            return Err(OracleError::NonConvergence {
                what: what(),
                points: MAX_POINTS,
            });
        }
        let mut sum = vec![0.0; m];
        let mut mag = vec![0.0; m];
        for_each_node(t, panels, |w, pt| {
            integrand(pt, &mut vals, &mut mags);
            for i in 0..m {
                sum[i] += w * vals[i];
                mag[i] += w * mags[i].abs();
            }
        })?;
        if let Some(p) = &prev {
            let done = (0..m).all(|i| {
                // rounding floor: an integral that cancels to zero never
                // settles relative to its own size
                let noise = 64.0 * f64::EPSILON * mag[i];
                (sum[i] - p[i]).abs() <= (tol * sum[i].abs().max(1e-30)).max(noise)
            });
            if done {
                return Ok(sum);
            }
        }
        prev = Some(sum);
        panels *= 2;
    }
}

fn powi(v: f64, e: i64) -> f64 {
    v.powi(e as i32)
}

/// `I_{k,l}(t) = ∬ x^k y^l` over the region bounded by `δ(t)`.
///
/// Uses `(k+1)^{-1} ∮ x^{k+1} y^l dy`, or `-(l+1)^{-1} ∮ x^k y^{l+1} dx` when
/// `k = -1`.
pub fn eval_monomial_integral(k: i64, l: i64, t: f64, tol: f64) -> Result<f64, OracleError> {
    if k != -1 {
        let c = 1.0 / (k + 1) as f64;
        let v = adaptive(
            t,
            tol,
            1,
            || format!("I_{{{k},{l}}}"),
            |p, v, m| {
                v[0] = c * powi(p.x, k + 1) * powi(p.y, l) * p.dy;
                m[0] = v[0];
            },
        )?;
        Ok(v[0])
    } else {
        eval_monomial_integral_dx(k, l, t, tol)
    }
}

/// The same integral through the `dx` contour form.
pub fn eval_monomial_integral_dx(k: i64, l: i64, t: f64, tol: f64) -> Result<f64, OracleError> {
    if l == -1 {
        return Err(OracleError::BadIndex { k, l });
    }
    let c = -1.0 / (l + 1) as f64;
    let v = adaptive(
        t,
        tol,
        1,
        || format!("I_{{{k},{l}}} (dx form)"),
        |p, v, m| {
            v[0] = c * powi(p.x, k) * powi(p.y, l + 1) * p.dx;
            m[0] = v[0];
        },
    )?;
    Ok(v[0])
}

/// `∮_{δ(t)} p dx + q dy`.
pub fn eval_form_integral(form: &PolynomialForm, t: f64, tol: f64) -> Result<f64, OracleError> {
    let v = adaptive(
        t,
        tol,
        1,
        || "form integral".into(),
        |pt, v, m| {
            let (p, q) = form.eval_f64(pt.x, pt.y);
            let (a, b) = (p * pt.dx, q * pt.dy);
            v[0] = a + b;
            m[0] = a.abs() + b.abs();
        },
    )?;
    Ok(v[0])
}

/// `(J1, J2, J3) = (I_{0,0}, I_{2,0}, I_{3,0})` from one set of samples.
pub fn j_vector(t: f64, tol: f64) -> Result<Jvector, OracleError> {
    let v = adaptive(
        t,
        tol,
        3,
        || "J vector".into(),
        |p, v, m| {
            let base = p.x * p.dy;
            let x2 = p.x * p.x;
            v[0] = base;
            v[1] = x2 * base / 3.0;
            v[2] = x2 * p.x * base / 4.0;
            m.copy_from_slice(v);
        },
    )?;
    Ok(Jvector::from_array([v[0], v[1], v[2]]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::oracle::T_MAX;
    use crate::petrov::{MonomialIndex, ReductionEngine};

    const TOL: f64 = 1e-10;

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * a.abs().max(b.abs())
    }

    #[test]
    fn exact_form_vanishes() {
        let v = eval_form_integral(&PolynomialForm::dh(), 0.01, TOL).unwrap();
        assert!(v.abs() < 1e-15, "{v}");
        let dy = eval_form_integral(&PolynomialForm::dy_term(0, 0, int(1)), 0.01, TOL).unwrap();
        assert!(dy.abs() < 1e-15);
    }

    #[test]
    fn green_and_orientation() {
        for &t in &[1e-3, 1.0 / 128.0, 1.0 / 80.0] {
            let area = eval_monomial_integral(0, 0, t, TOL).unwrap();
            assert!(area > 0.0);
            let ydx = eval_form_integral(&PolynomialForm::dx_term(0, 1, int(1)), t, TOL).unwrap();
            assert!(close(ydx, -area, 1e-10));
            let xdy = eval_form_integral(&PolynomialForm::dy_term(1, 0, int(1)), t, TOL).unwrap();
            assert!(close(xdy, area, 1e-10));
        }
    }

    #[test]
    fn contour_forms_agree() {
        let t = 1.0 / 128.0;
        let a = eval_monomial_integral(1, 1, t, TOL).unwrap();
        let b = eval_monomial_integral_dx(1, 1, t, TOL).unwrap();
        assert!(close(a, b, 1e-10));
    }

    #[test]
    fn shrinking_area() {
        let a = eval_monomial_integral(0, 0, T_MAX - 1e-8, TOL).unwrap();
        assert!(a > 0.0 && a <= 1e-5, "{a}");
        let b = eval_monomial_integral(0, 0, T_MAX - 2e-8, TOL).unwrap();
        // area is linear in the distance to the maximum
        assert!((b / a - 2.0).abs() < 1e-3);
    }

    #[test]
    fn j_vector_matches_single_integrals() {
        let t = 0.006;
        let j = j_vector(t, TOL).unwrap();
        assert!(j.is_positive());
        assert!(close(
            j.j1,
            eval_monomial_integral(0, 0, t, TOL).unwrap(),
            1e-10
        ));
        assert!(close(
            j.j2,
            eval_monomial_integral(2, 0, t, TOL).unwrap(),
            1e-10
        ));
        assert!(close(
            j.j3,
            eval_monomial_integral(3, 0, t, TOL).unwrap(),
            1e-10
        ));
    }

    #[test]
    fn reduction_prediction() {
        let t = 0.009;
        let j = j_vector(t, 1e-12).unwrap();
        let engine = ReductionEngine::new();
        let i21 = eval_monomial_integral(2, 1, t, 1e-12).unwrap();
        assert!(close(i21, (j.j2 - j.j3) / 2.0, 1e-9));
        let v = engine
            .reduce_form(&PolynomialForm::dy_term(2, 1, int(1)))
            .unwrap();
        let direct = eval_form_integral(&PolynomialForm::dy_term(2, 1, int(1)), t, 1e-12).unwrap();
        assert!(close(direct, v.eval_f64(t, j.as_array()), 1e-9));
        let v = engine.reduce_monomial(MonomialIndex::new(4, 3)).unwrap();
        let i43 = eval_monomial_integral(4, 3, t, 1e-12).unwrap();
        assert!(close(i43, v.eval_f64(t, j.as_array()), 1e-8));
    }

    #[test]
    fn negative_first_index_uses_dx_form() {
        let t = 0.01;
        let a = eval_monomial_integral(-1, 0, t, TOL).unwrap();
        assert!(a > 0.0);
        assert!(matches!(
            eval_monomial_integral(-1, -1, t, TOL),
            Err(OracleError::BadIndex { .. })
        ));
    }
}
