//! Radial parametrization of the oval `H = t` around the center.
//!
//! `log H` is concave on the open triangle `x, y > 0, x + y < 1`, so `H`
//! decreases monotonically along every ray from the maximum and the ray meets
//! the oval exactly once before reaching the triangle's boundary.

use std::f64::consts::TAU;

use super::{check_level, OracleError, CENTER, T_MAX};

#[derive(Clone, Debug, PartialEq)]
pub struct Oval {
    pub t: f64,
    /// Counterclockwise, closed implicitly.
    pub points: Vec<(f64, f64)>,
    pub angles: Vec<f64>,
}

/// A point of the oval with its derivative in the angle.
#[derive(Clone, Copy, Debug)]
pub(crate) struct RayPoint {
    pub x: f64,
    pub y: f64,
    pub dx: f64,
    pub dy: f64,
}

/// `1/64 - H(center + r u)` as `a2 r^2 + a3 r^3 + a4 r^4`; expanding about
/// the center avoids the cancellation in `H - t` when `t` is near `1/64`.
fn drop_coeffs(c: f64, s: f64) -> [f64; 3] {
    [
        0.1875 * c * c + 0.25 * c * s + 0.25 * s * s,
        c * c * s + c * s * s + 0.25 * c * c * c,
        c * c * c * s + c * c * s * s,
    ]
}

/// Distance from the center to the triangle boundary along `(c, s)`.
fn boundary_distance(c: f64, s: f64) -> f64 {
    let (cx, cy) = CENTER;
    let mut r = f64::INFINITY;
    if c < 0.0 {
        r = r.min(cx / -c);
    }
    if s < 0.0 {
        r = r.min(cy / -s);
    }
    if c + s > 0.0 {
        r = r.min((1.0 - cx - cy) / (c + s));
    }
    r
}

/// Safeguarded Newton on `1/64 - H(center + r u) = 1/64 - t` along the ray.
pub(crate) fn ray_point(t: f64, theta: f64) -> Result<RayPoint, OracleError> {
    let (s, c) = theta.sin_cos();
    let (cx, cy) = CENTER;
    let [a2, a3, a4] = drop_coeffs(c, s);
    let delta = T_MAX - t;
    let f = |r: f64| r * r * (a2 + r * (a3 + r * a4)) - delta;
    let df = |r: f64| r * (2.0 * a2 + r * (3.0 * a3 + r * 4.0 * a4));

    let mut lo = 0.0;
    let mut hi = boundary_distance(c, s);
    if !hi.is_finite() || delta <= 0.0 || f(hi) <= 0.0 {
        return Err(OracleError::Bracket { theta });
    }
    let mut r = (delta / a2).sqrt().min(0.5 * hi);
    for _ in 0..200 {
        let v = f(r);
        if v < 0.0 {
            lo = r;
        } else {
            hi = r;
        }
        let mut next = r - v / df(r);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let done = (next - r).abs() <= 4.0 * f64::EPSILON * r || hi - lo <= 4.0 * f64::EPSILON * hi;
        r = next;
        if done {
            break;
        }
    }
    let (x, y) = (cx + r * c, cy + r * s);
    // grad H / r, with 2 - 3x - 2y and 1 - x - 2y written in the offsets
    let gx = x * y * (-3.0 * c - 2.0 * s);
    let gy = x * x * (-c - 2.0 * s);
    let r_theta = -r * (gy * c - gx * s) / (gx * c + gy * s);
    Ok(RayPoint {
        x,
        y,
        dx: r_theta * c - r * s,
        dy: r_theta * s + r * c,
    })
}

/// `n_points` points of `δ(t)` at uniformly spaced angles.
pub fn trace_oval(t: f64, n_points: usize) -> Result<Oval, OracleError> {
    check_level(t)?;
    if n_points < 64 {
        return Err(OracleError::TooFew {
            what: "oval points",
            min: 64,
            got: n_points,
        });
    }
    let angles: Vec<f64> = (0..n_points)
        .map(|i| TAU * i as f64 / n_points as f64)
        .collect();
    let points = angles
        .iter()
        .map(|&a| ray_point(t, a).map(|p| (p.x, p.y)))
        .collect::<Result<_, _>>()?;
    Ok(Oval { t, points, angles })
}

/// Winding number of the closed polygon around `at`.
pub fn winding_number(points: &[(f64, f64)], at: (f64, f64)) -> i64 {
    let n = points.len();
    let mut total = 0.0;
    for i in 0..n {
        let (x0, y0) = points[i];
        let (x1, y1) = points[(i + 1) % n];
        let a0 = (y0 - at.1).atan2(x0 - at.0);
        let a1 = (y1 - at.1).atan2(x1 - at.0);
        let mut d = a1 - a0;
        if d > std::f64::consts::PI {
            d -= TAU;
        } else if d < -std::f64::consts::PI {
            d += TAU;
        }
        total += d;
    }
    (total / TAU).round() as i64
}
