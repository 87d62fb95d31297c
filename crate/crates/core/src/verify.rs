//! Named invariant suites, shared by the CLI and the tests.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{int, parse_rational, rat, Poly, PolyMatrix, Rational};
use crate::exec::Execution;
use crate::fuzz::{run_fuzz, FuzzConfig, FuzzError};
use crate::oracle::{eval_monomial_integral, j_vector, OracleError, T_MAX};
use crate::petrov::relations::{level_pair, reduced_pair, three_term, LinearRelation};
use crate::petrov::{
    relation_residual, IdentityInstance, MonomialIndex, PetrovVector, ReductionEngine,
    ReductionError, RelationKind,
};
use crate::picard_fuchs::{derived, PfError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Fuzz(#[from] FuzzError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Pf(#[from] PfError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Relations,
    Eq13,
    Pf,
    Riccati,
    Limits,
    Fuzz,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Self::Relations,
        Self::Eq13,
        Self::Pf,
        Self::Riccati,
        Self::Limits,
        Self::Fuzz,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Relations => "relations",
            Self::Eq13 => "eq13",
            Self::Pf => "pf",
            Self::Riccati => "riccati",
            Self::Limits => "limits",
            Self::Fuzz => "fuzz",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        Self {
            suite: suite.name().into(),
            ..Default::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn poly(coeffs: &[&str]) -> Poly {
    Poly::new(
        coeffs
            .iter()
            .map(|c| parse_rational(c).expect("fixture"))
            .collect(),
    )
}

type Row = (
    i64,
    i64,
    &'static [&'static str],
    &'static [&'static str],
    &'static [&'static str],
);

/// Reference decompositions of eight monomials, `(k, l, p1, p2, p3)`.
pub fn eq13_fixture() -> Vec<(MonomialIndex, PetrovVector)> {
    let rows: [Row; 8] = [
        (2, 1, &[], &["1/2"], &["-1/2"]),
        (3, 1, &[], &["1/4"], &["-1/4"]),
        (4, 1, &[], &["1/7", "-4/7"], &["-1/7"]),
        (5, 1, &[], &["5/56", "-6/7"], &["-5/56"]),
        (6, 1, &[], &["5/84", "-4/7"], &["-5/84", "-2/3"]),
        (2, 2, &["0", "-1/3"], &["1/6"], &["-1/6"]),
        (4, 2, &[], &["1/28", "-1/7"], &["-1/28"]),
        (5, 2, &[], &["5/252", "-4/21"], &["-5/252", "1/9"]),
    ];
    rows.iter()
        .map(|(k, l, p1, p2, p3)| {
            (
                MonomialIndex::new(*k, *l),
                PetrovVector::new(poly(p1), poly(p2), poly(p3)),
            )
        })
        .collect()
}

fn constant_matrix(rows: [[Rational; 3]; 3]) -> PolyMatrix {
    let rows: Vec<Vec<Rational>> = rows.into_iter().map(|r| r.into_iter().collect()).collect();
    PolyMatrix::from_rows(&rows).expect("3x3")
}

/// Reference `(A, B)`.
pub fn pf_fixture() -> (PolyMatrix, PolyMatrix) {
    let a = constant_matrix([
        [int(0), rat(-1, 12), rat(1, 12)],
        [int(0), rat(-1, 56), rat(1, 56)],
        [int(0), rat(-5, 504), rat(5, 504)],
    ]);
    let b = constant_matrix([
        [rat(2, 3), int(0), int(0)],
        [int(0), rat(4, 7), int(0)],
        [int(0), rat(2, 21), rat(4, 9)],
    ]);
    (a, b)
}

/// Reference `Q(t)` and `D(t)`.
pub fn q_fixture() -> (PolyMatrix, Poly) {
    let lin = |c0: Rational, c1: i64| Poly::new(vec![c0, int(c1)]);
    let c = |v: Rational| Poly::constant(v);
    let q = PolyMatrix::new(
        3,
        3,
        vec![
            lin(rat(-1, 2), 32),
            c(int(9)),
            c(int(-10)),
            Poly::zero(),
            lin(rat(3, 2), 48),
            c(rat(-5, 2)),
            Poly::zero(),
            lin(rat(3, 2), -24),
            lin(rat(-5, 2), 80),
        ],
    )
    .expect("3x3");
    (q, Poly::from_ints(&[0, -1, 64]))
}

/// Reference `(a2, a1, a0)`.
pub fn riccati_fixture() -> [Poly; 3] {
    [
        Poly::new(vec![rat(-3, 2), int(24)]),
        Poly::from_ints(&[4, -32]),
        Poly::constant(rat(-5, 2)),
    ]
}

/// Numeric `(lhs - rhs, scale)` of one identity instance at `t`; derivative
/// right-hand sides use a central difference with step `h`.
pub fn identity_residual(
    inst: &IdentityInstance,
    t: f64,
    tol: f64,
    h: f64,
) -> Result<(f64, f64), OracleError> {
    let integral = |idx: MonomialIndex, at: f64| eval_monomial_integral(idx.k, idx.l, at, tol);
    let lhs_factor =
        crate::algebra::to_f64(&inst.lhs_scale) * if inst.lhs_times_t { t } else { 1.0 };
    let lhs = lhs_factor * integral(inst.lhs, t)?;
    let mut rhs = 0.0;
    let mut scale = lhs.abs();
    for (c, idx) in &inst.rhs {
        let term = if inst.rhs_differentiated {
            (integral(*idx, t + h)? - integral(*idx, t - h)?) / (2.0 * h)
        } else {
            integral(*idx, t)?
        };
        let v = crate::algebra::to_f64(c) * term;
        scale = scale.max(v.abs());
        rhs += v;
    }
    Ok((lhs - rhs, scale))
}

/// `(‖D J' - Q J‖, ‖J‖)` with `J'` by central differences.
pub fn pf_residual(t: f64, tol: f64, h: f64) -> Result<(f64, f64), VerifyError> {
    let sys = derived()?;
    let (q, d) = sys.pf.eval_f64(t);
    let j = j_vector(t, tol)?.as_array();
    let (jp, jm) = (
        j_vector(t + h, tol)?.as_array(),
        j_vector(t - h, tol)?.as_array(),
    );
    let mut norm = 0.0;
    for i in 0..3 {
        let deriv = (jp[i] - jm[i]) / (2.0 * h);
        let r = d * deriv - (0..3).map(|k| q[i][k] * j[k]).sum::<f64>();
        norm += r * r;
    }
    let jn = j.iter().map(|v| v * v).sum::<f64>().sqrt();
    Ok((norm.sqrt(), jn))
}

/// `(D w' - (a2 w^2 + a1 w + a0), scale)` for `w = J2 / J3`.
pub fn riccati_residual(t: f64, tol: f64, h: f64) -> Result<(f64, f64), VerifyError> {
    let sys = derived()?;
    let w = |at: f64| -> Result<f64, OracleError> {
        let j = j_vector(at, tol)?;
        Ok(j.j2 / j.j3)
    };
    let w0 = w(t)?;
    let deriv = (w(t + h)? - w(t - h)?) / (2.0 * h);
    let r = &sys.riccati;
    let terms = [
        r.a2.eval_f64(t) * w0 * w0,
        r.a1.eval_f64(t) * w0,
        r.a0.eval_f64(t),
    ];
    let lhs = sys.pf.d.eval_f64(t) * deriv;
    let scale = terms.iter().fold(lhs.abs(), |m, v| m.max(v.abs()));
    Ok((lhs - terms.iter().sum::<f64>(), scale))
}

fn residual_of(
    rel: &LinearRelation,
    engine: &ReductionEngine,
) -> Result<PetrovVector, ReductionError> {
    rel.terms().try_fold(PetrovVector::zero(), |acc, (i, c)| {
        Ok(acc.add(&engine.reduce_monomial(*i)?.mul_poly(c)))
    })
}

fn relations(report: &mut SuiteReport) -> Result<(), VerifyError> {
    let engine = ReductionEngine::shared();
    for k in 0..=4 {
        for l in 0..=4 {
            let (a, b) = level_pair(k, l);
            let (c, d) = reduced_pair(k, l);
            for (name, rel) in [("R1", a), ("R2", b), ("pair 1", c), ("pair 2", d)] {
                let zero = residual_of(&rel, engine)?.is_zero();
                report.check(zero, || {
                    format!("{name} at ({k},{l}) does not vanish on the table")
                });
            }
            let zero = residual_of(&three_term(k - 1, l), engine)?.is_zero();
            report.check(zero, || {
                format!("three-term at ({},{l}) does not vanish", k - 1)
            });
        }
    }
    for &t in &[1.0 / 128.0, 1.0 / 80.0] {
        for k in 0..=2 {
            for l in 0..=2 {
                for kind in RelationKind::ALL {
                    let inst = relation_residual(kind, k, l);
                    let (bound, h) = if kind.is_differential() {
                        (1e-5, 1e-7)
                    } else {
                        (1e-8, 0.0)
                    };
                    let (r, s) = identity_residual(&inst, t, 1e-12, h)?;
                    report.check(r.abs() <= bound * s, || {
                        format!("{inst} at t = {t}: residual {r:e} (scale {s:e})")
                    });
                }
            }
        }
    }
    Ok(())
}

fn eq13(report: &mut SuiteReport) -> Result<(), VerifyError> {
    let engine = ReductionEngine::shared();
    for (idx, expected) in eq13_fixture() {
        let got = engine.reduce_monomial(idx)?;
        report.check(got == expected, || {
            format!("{idx}: got {got}, expected {expected}")
        });
    }
    Ok(())
}

fn pf(report: &mut SuiteReport) -> Result<(), VerifyError> {
    let sys = derived()?;
    let (a, b) = pf_fixture();
    let (q, d) = q_fixture();
    report.check(sys.pf.a == a, || {
        "A differs from the reference".into()
    });
    report.check(sys.pf.b == b, || {
        "B differs from the reference".into()
    });
    report.check(sys.pf.q == q, || {
        "Q(t) differs from the reference".into()
    });
    report.check(sys.pf.d == d, || {
        format!("D = {}, expected 64t^2 - t", sys.pf.d)
    });
    let pencil = sys.pf.pencil();
    let lhs = pencil.mul(&sys.pf.q).expect("3x3");
    let rhs = sys.pf.identity_minus_b().scale_poly(&sys.pf.d);
    report.check(lhs == rhs, || "(A + tB) Q != D (I - B)".into());
    let det = pencil.determinant().expect("square");
    let expected = Poly::new(vec![int(0), int(0), int(-1), int(64)]).scale(&rat(1, 378));
    report.check(det == expected, || format!("det(A + tB) = {det}"));
    for &t in &[1.0 / 200.0, 1.0 / 128.0, 1.0 / 100.0, 1.0 / 80.0] {
        let (r, jn) = pf_residual(t, 1e-12, 1e-7)?;
        report.check(r <= 1e-5 * jn, || format!("PF residual {r:e} at t = {t}"));
    }
    Ok(())
}

fn riccati(report: &mut SuiteReport) -> Result<(), VerifyError> {
    let sys = derived()?;
    let [a2, a1, a0] = riccati_fixture();
    report.check(sys.riccati.a2 == a2, || format!("a2 = {}", sys.riccati.a2));
    report.check(sys.riccati.a1 == a1, || format!("a1 = {}", sys.riccati.a1));
    report.check(sys.riccati.a0 == a0, || format!("a0 = {}", sys.riccati.a0));
    for &t in &[1.0 / 200.0, 1.0 / 128.0, 1.0 / 100.0, 1.0 / 80.0] {
        let (r, s) = riccati_residual(t, 1e-12, 1e-7)?;
        report.check(r.abs() <= 1e-5 * s, || {
            format!("Riccati residual {r:e} at t = {t}")
        });
    }
    Ok(())
}

fn limits(report: &mut SuiteReport) -> Result<(), VerifyError> {
    let t = T_MAX - 1e-6;
    let area = eval_monomial_integral(0, 0, t, 1e-12)?;
    for k in 0..=3 {
        for l in 0..=3 {
            let ratio = eval_monomial_integral(k, l, t, 1e-12)? / area;
            let expect = 0.5f64.powi(k as i32) * 0.25f64.powi(l as i32);
            report.check((ratio - expect).abs() <= 1e-2, || {
                format!("I_{{{k},{l}}}/I_{{0,0}} = {ratio}, expected {expect}")
            });
        }
    }
    Ok(())
}

fn fuzz(report: &mut SuiteReport, seed: u64, exec: Execution) -> Result<(), VerifyError> {
    let config = FuzzConfig {
        seed,
        ..Default::default()
    };
    let result = run_fuzz(&config, exec)?;
    for case in &result.cases {
        report.checks += 1;
        for v in &case.violations {
            report
                .failures
                .push(format!("form #{} (n = {}): {v}", case.index, case.n));
        }
    }
    Ok(())
}

pub fn run_suite(suite: Suite, seed: u64, exec: Execution) -> Result<SuiteReport, VerifyError> {
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Relations => relations(&mut report)?,
        Suite::Eq13 => eq13(&mut report)?,
        Suite::Pf => pf(&mut report)?,
        Suite::Riccati => riccati(&mut report)?,
        Suite::Limits => limits(&mut report)?,
        Suite::Fuzz => fuzz(&mut report, seed, exec)?,
    }
    Ok(report)
}
