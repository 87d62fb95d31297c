//! Picard-Fuchs system of the generators `J = (J1, J2, J3)`, derived from the
//! reduction engine rather than transcribed.
//!
//! The derivative identity `I_{k,0} = d/dt (I_{k+2,1} - I_{k+3,1} - 2 I_{k+2,2})`
//! at `k = 0, 2, 3` gives `J = d/dt ((A + tB) J)` once the right-hand sides are
//! reduced. From there `(A + tB) J' = (I - B) J`, and solving exactly gives
//! `D J' = Q J` with `D` the reduced common denominator.

use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{int, rat, AlgebraError, Poly, PolyMatrix};
use crate::petrov::{MonomialIndex, PetrovVector, ReductionEngine, ReductionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("derived system is inconsistent: {0}")]
    Inconsistent(String),
}

/// `J = d/dt((A + tB) J)` and its solved form `D J' = Q J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfSystem {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
    pub q: PolyMatrix,
    pub d: Poly,
}

impl PfSystem {
    pub fn pencil(&self) -> PolyMatrix {
        self.a
            .add(&self.b.scale_poly(&Poly::t()))
            .expect("3x3 matrices")
    }

    pub fn identity_minus_b(&self) -> PolyMatrix {
        PolyMatrix::identity(3).sub(&self.b).expect("3x3 matrices")
    }

    /// Numeric `Q(t)` and `D(t)`.
    pub fn eval_f64(&self, t: f64) -> ([[f64; 3]; 3], f64) {
        let mut q = [[0.0; 3]; 3];
        for (i, row) in q.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.q.get(i, j).eval_f64(t);
            }
        }
        (q, self.d.eval_f64(t))
    }
}

/// `coeff(t) · t^(half_exponent / 2)`: a polynomial times a power of `√t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfPowerPoly {
    pub coeff: Poly,
    pub half_exponent: i32,
}

impl HalfPowerPoly {
    pub fn new(coeff: Poly, half_exponent: i32) -> Self {
        let mut out = Self {
            coeff,
            half_exponent,
        };
        out.normalize();
        out
    }

    pub fn poly(coeff: Poly) -> Self {
        Self::new(coeff, 0)
    }

    /// Pulls powers of `t` out of the coefficient into the exponent.
    fn normalize(&mut self) {
        if self.coeff.is_zero() {
            self.half_exponent = 0;
            return;
        }
        while self.coeff.coeff(0).is_zero() {
            self.coeff = self.coeff.exact_div(&Poly::t()).expect("t divides");
            self.half_exponent += 2;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    /// Sum of two terms; `None` when the exponents differ in parity (the sum
    /// is then not of this shape).
    pub fn add(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        let gap = self.half_exponent - other.half_exponent;
        if gap % 2 != 0 {
            return None;
        }
        let (low, high) = if gap >= 0 {
            (other, self)
        } else {
            (self, other)
        };
        let lifted = high.coeff.shift((gap.unsigned_abs() / 2) as usize);
        Some(Self::new(&low.coeff + &lifted, low.half_exponent))
    }

    /// As a polynomial when the exponent is a nonnegative even integer.
    pub fn as_poly(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        (self.half_exponent >= 0 && self.half_exponent % 2 == 0)
            .then(|| self.coeff.shift((self.half_exponent / 2) as usize))
    }
}

/// One scalar equation `D · t^(e/2) · V' = cx X + cy Y + cz Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XyzRow {
    pub lhs_half_exponent: i32,
    pub x: HalfPowerPoly,
    pub y: HalfPowerPoly,
    pub z: HalfPowerPoly,
}

/// The system in the variables `X = t^(-1/2) J1`, `Y = J2`, `Z = J3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XyzSystem {
    pub x: XyzRow,
    pub y: XyzRow,
    pub z: XyzRow,
}

/// `D w' = a2 w^2 + a1 w + a0` for `w = Y / Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RiccatiW {
    pub a2: Poly,
    pub a1: Poly,
    pub a0: Poly,
}

impl RiccatiW {
    pub fn rhs_f64(&self, t: f64, w: f64) -> f64 {
        self.a2.eval_f64(t) * w * w + self.a1.eval_f64(t) * w + self.a0.eval_f64(t)
    }
}

fn combination(engine: &ReductionEngine, k: i64) -> Result<PetrovVector, ReductionError> {
    let r = |k, l| engine.reduce_monomial(MonomialIndex::new(k, l));
    Ok(r(k + 2, 1)?
        .sub(&r(k + 3, 1)?)
        .sub(&r(k + 2, 2)?.scale(&int(2))))
}

/// Derives `A`, `B`, `Q`, `D` from the reduction engine.
pub fn derive_pf(engine: &ReductionEngine) -> Result<PfSystem, PfError> {
    let mut a_rows = Vec::with_capacity(3);
    let mut b_rows = Vec::with_capacity(3);
    // J1 = I_{0,0}, J2 = I_{2,0}, J3 = I_{3,0}
    for k in [0, 2, 3] {
        let v = combination(engine, k)?;
        let mut a_row = Vec::with_capacity(3);
        let mut b_row = Vec::with_capacity(3);
        for p in v.components() {
            if p.degree().unwrap_or(0) > 1 {
                return Err(PfError::Inconsistent(format!(
                    "row for I_{{{k},0}} has a coefficient of degree > 1: {p}"
                )));
            }
            a_row.push(p.coeff(0));
            b_row.push(p.coeff(1));
        }
        a_rows.push(a_row);
        b_rows.push(b_row);
    }
    let a = PolyMatrix::from_rows(&a_rows)?;
    let b = PolyMatrix::from_rows(&b_rows)?;

    let pencil = a.add(&b.scale_poly(&Poly::t()))?;
    let rhs = PolyMatrix::identity(3).sub(&b)?;
    let det = pencil.determinant()?;
    if det.is_zero() {
        return Err(PfError::Inconsistent("A + tB is singular".into()));
    }
    // J' = adj(A + tB) (I - B) J / det
    let numer = pencil.adjugate()?.mul(&rhs)?;
    let common = numer.entries().iter().fold(det.clone(), |g, e| g.gcd(e));
    let (_, d) = det.exact_div(&common)?.primitive_part();
    let mut q = PolyMatrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            q.set(i, j, (numer.get(i, j) * &d).exact_div(&det)?);
        }
    }
    if q.max_degree().unwrap_or(0) > 1 {
        return Err(PfError::Inconsistent(
            "Q(t) has an entry of degree > 1".into(),
        ));
    }
    Ok(PfSystem { a, b, q, d })
}

/// Rewrites `D J' = Q J` in `X = t^(-1/2) J1`, `Y = J2`, `Z = J3`.
///
/// Writing `J_i = t^(e_i/2) V_i` with `e = (1, 0, 0)`, row `i` becomes
/// `D t^(e_i/2) V_i' = Σ_j Q_ij t^(e_j/2) V_j - δ_ij (e_i/2)(D/t) t^(e_i/2) V_i`.
pub fn xyz_system(pf: &PfSystem) -> Result<XyzSystem, PfError> {
    let halves = [1, 0, 0];
    let mut rows = Vec::with_capacity(3);
    for i in 0..3 {
        let mut coeffs = Vec::with_capacity(3);
        for j in 0..3 {
            let mut c = HalfPowerPoly::new(pf.q.get(i, j).clone(), halves[j]);
            if i == j && halves[i] != 0 {
                let drift =
                    HalfPowerPoly::new(pf.d.scale(&rat(-halves[i] as i64, 2)), halves[i] - 2);
                c = c
                    .add(&drift)
                    .ok_or_else(|| PfError::Inconsistent("mixed half-integer powers".into()))?;
            }
            coeffs.push(c);
        }
        let mut it = coeffs.into_iter();
        rows.push(XyzRow {
            lhs_half_exponent: halves[i],
            x: it.next().unwrap(),
            y: it.next().unwrap(),
            z: it.next().unwrap(),
        });
    }
    let mut it = rows.into_iter();
    Ok(XyzSystem {
        x: it.next().unwrap(),
        y: it.next().unwrap(),
        z: it.next().unwrap(),
    })
}

/// The Riccati equation for `w = Y / Z`.
///
/// `D w' = (D Y' Z - Y D Z') / Z^2`; the numerator is expanded as a quadratic
/// form in `(Y, Z)` and divided by `Z^2`.
pub fn riccati_w(xyz: &XyzSystem) -> Result<RiccatiW, PfError> {
    if !xyz.y.x.is_zero() || !xyz.z.x.is_zero() {
        return Err(PfError::Inconsistent(
            "Y' or Z' depends on X; no Riccati equation in w = Y/Z".into(),
        ));
    }
    let poly = |h: &HalfPowerPoly| {
        h.as_poly()
            .ok_or_else(|| PfError::Inconsistent("fractional power in the Y, Z block".into()))
    };
    let (yy, yz) = (poly(&xyz.y.y)?, poly(&xyz.y.z)?);
    let (zy, zz) = (poly(&xyz.z.y)?, poly(&xyz.z.z)?);
    // (yy Y + yz Z) Z - Y (zy Y + zz Z) = [Y^2, YZ, Z^2] coefficients
    let numerator = [-&zy, &yy - &zz, yz];
    let [a2, a1, a0] = numerator;
    Ok(RiccatiW { a2, a1, a0 })
}

/// Everything derived from the reduction engine, computed once.
#[derive(Clone, Debug)]
pub struct DerivedSystem {
    pub pf: PfSystem,
    pub xyz: XyzSystem,
    pub riccati: RiccatiW,
}

pub fn derive_all(engine: &ReductionEngine) -> Result<DerivedSystem, PfError> {
    let pf = derive_pf(engine)?;
    let xyz = xyz_system(&pf)?;
    let riccati = riccati_w(&xyz)?;
    Ok(DerivedSystem { pf, xyz, riccati })
}

/// Process-wide derived system (shared reduction engine).
pub fn derived() -> Result<&'static DerivedSystem, PfError> {
    static CELL: OnceLock<Result<DerivedSystem, PfError>> = OnceLock::new();
    CELL.get_or_init(|| derive_all(ReductionEngine::shared()))
        .as_ref()
        .map_err(Clone::clone)
}

/// Constant matrix as rows of fraction strings.
pub fn constant_rows(m: &PolyMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|p| crate::algebra::fraction_string(&p.coeff(0)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Rational;

    fn system() -> PfSystem {
        derive_pf(&ReductionEngine::new()).unwrap()
    }

    fn consts(m: &PolyMatrix) -> Vec<Vec<Rational>> {
        (0..3)
            .map(|i| m.row(i).iter().map(|p| p.coeff(0)).collect())
            .collect()
    }

    #[test]
    fn a_matrix() {
        let pf = system();
        assert_eq!(
            consts(&pf.a),
            vec![
                vec![int(0), rat(-1, 12), rat(1, 12)],
                vec![int(0), rat(-1, 56), rat(1, 56)],
                vec![int(0), rat(-5, 504), rat(5, 504)],
            ]
        );
        assert!(pf.a.max_degree().unwrap_or(0) == 0);
    }

    #[test]
    fn b_matrix() {
        let pf = system();
        assert_eq!(
            consts(&pf.b),
            vec![
                vec![rat(2, 3), int(0), int(0)],
                vec![int(0), rat(4, 7), int(0)],
                vec![int(0), rat(2, 21), rat(4, 9)],
            ]
        );
    }

    #[test]
    fn q_and_d() {
        let pf = system();
        assert_eq!(pf.d, Poly::from_ints(&[0, -1, 64]));
        let lin = |c0: Rational, c1: i64| Poly::new(vec![c0, int(c1)]);
        assert_eq!(pf.q.get(0, 0), &lin(rat(-1, 2), 32));
        assert_eq!(pf.q.get(0, 1), &Poly::constant(int(9)));
        assert_eq!(pf.q.get(0, 2), &Poly::constant(int(-10)));
        assert!(pf.q.get(1, 0).is_zero() && pf.q.get(2, 0).is_zero());
        assert_eq!(pf.q.get(1, 1), &lin(rat(3, 2), 48));
        assert_eq!(pf.q.get(1, 2), &Poly::constant(rat(-5, 2)));
        assert_eq!(pf.q.get(2, 1), &lin(rat(3, 2), -24));
        assert_eq!(pf.q.get(2, 2), &lin(rat(-5, 2), 80));
    }

    #[test]
    fn solved_form_identity() {
        let pf = system();
        let lhs = pf.pencil().mul(&pf.q).unwrap();
        let rhs = pf.identity_minus_b().scale_poly(&pf.d);
        assert!(lhs.sub(&rhs).unwrap().is_zero());
    }

    #[test]
    fn xyz_rows() {
        let pf = system();
        let xyz = xyz_system(&pf).unwrap();
        assert!(xyz.x.x.is_zero());
        assert_eq!(xyz.x.y.as_poly().unwrap(), Poly::constant(int(9)));
        assert_eq!(xyz.x.z.as_poly().unwrap(), Poly::constant(int(-10)));
        assert_eq!(xyz.x.lhs_half_exponent, 1);
        assert!(xyz.y.x.is_zero() && xyz.z.x.is_zero());
        assert_eq!(
            xyz.y.y.as_poly().unwrap(),
            Poly::new(vec![rat(3, 2), int(48)])
        );
        assert_eq!(xyz.y.z.as_poly().unwrap(), Poly::constant(rat(-5, 2)));
        assert_eq!(
            xyz.z.y.as_poly().unwrap(),
            Poly::new(vec![rat(3, 2), int(-24)])
        );
        assert_eq!(
            xyz.z.z.as_poly().unwrap(),
            Poly::new(vec![rat(-5, 2), int(80)])
        );
        // at Y = Z the X row collapses to (9 - 10) Y
        let at_equal = &xyz.x.y.as_poly().unwrap() + &xyz.x.z.as_poly().unwrap();
        assert_eq!(at_equal, Poly::constant(int(-1)));
    }

    #[test]
    fn riccati_coefficients() {
        let r = riccati_w(&xyz_system(&system()).unwrap()).unwrap();
        assert_eq!(r.a2, Poly::new(vec![rat(-3, 2), int(24)]));
        assert_eq!(r.a1, Poly::from_ints(&[4, -32]));
        assert_eq!(r.a0, Poly::constant(rat(-5, 2)));
    }

    #[test]
    fn half_powers() {
        let h = HalfPowerPoly::new(Poly::from_ints(&[0, 0, 3]), -1);
        assert_eq!(h.coeff, Poly::constant(int(3)));
        assert_eq!(h.half_exponent, 3);
        assert!(h.as_poly().is_none());
        let s = HalfPowerPoly::new(Poly::one(), 1)
            .add(&HalfPowerPoly::new(Poly::one(), 3))
            .unwrap();
        assert_eq!(s, HalfPowerPoly::new(Poly::from_ints(&[1, 1]), 1));
        assert!(HalfPowerPoly::new(Poly::one(), 1)
            .add(&HalfPowerPoly::poly(Poly::one()))
            .is_none());
        let cancel = HalfPowerPoly::new(Poly::one(), 1)
            .add(&HalfPowerPoly::new(Poly::constant(int(-1)), 1))
            .unwrap();
        assert!(cancel.is_zero());
    }
}
