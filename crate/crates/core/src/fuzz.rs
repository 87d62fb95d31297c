//! Seeded random forms and the soundness check of the zero-count chain:
//! detected zeros <= instance bound <= degree-based chain <= worst case
//! <= 7n/4 + 9, plus the exact degree ledger.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{int, rat, Rational};
use crate::bound::{certify, three_halves_chain, BoundError, BoundOutcome};
use crate::exec::Execution;
use crate::oracle::{
    zeros_from_table, JTable, OracleError, DEFAULT_GRID, DEFAULT_TOL, EDGE, T_MAX,
};
use crate::petrov::{PolynomialForm, ReductionEngine, ReductionError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuzzError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FuzzConfig {
    pub seed: u64,
    pub per_degree: usize,
    pub max_degree: usize,
    pub grid_n: usize,
    pub t_lo: f64,
    pub t_hi: f64,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            per_degree: 100,
            max_degree: 8,
            grid_n: DEFAULT_GRID,
            t_lo: EDGE,
            t_hi: T_MAX - EDGE,
        }
    }
}

fn coefficient(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let den = rng.gen_range(1..=4i64);
        let num = rng.gen_range(-5 * den..=5 * den);
        if num != 0 {
            return rat(num, den);
        }
    }
}

/// One sparse form of degree exactly `n` (1 to 4 terms, coefficients in
/// `[-5, 5]`).
pub fn random_form(rng: &mut ChaCha8Rng, n: usize) -> PolynomialForm {
    let n = n as u32;
    let terms = rng.gen_range(1..=4);
    let mut form = PolynomialForm::zero();
    while form.is_zero() || form.degree() != n as usize {
        form = PolynomialForm::zero();
        for term in 0..terms {
            let total = if term == 0 { n } else { rng.gen_range(0..=n) };
            let i = rng.gen_range(0..=total);
            let c = coefficient(rng);
            let key = (i, total - i);
            // a repeated monomial would sum past the coefficient range
            if rng.gen_bool(0.5) {
                if !form.p().contains_key(&key) {
                    form.add_p(key.0, key.1, c);
                }
            } else if !form.q().contains_key(&key) {
                form.add_q(key.0, key.1, c);
            }
        }
    }
    form
}

/// `per_degree` forms for each `n` in `1..=max_degree`, degree-major.
pub fn corpus(seed: u64, per_degree: usize, max_degree: usize) -> Vec<PolynomialForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (1..=max_degree)
        .flat_map(|n| (0..per_degree).map(move |_| n))
        .map(|n| random_form(&mut rng, n))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzCase {
    pub index: usize,
    pub n: usize,
    pub zeros: usize,
    pub instance_bound: Option<usize>,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DegreeSummary {
    pub n: usize,
    pub forms: usize,
    pub identically_zero: usize,
    pub max_zeros: usize,
    pub max_instance_bound: usize,
    pub worst_case_chain: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub cases: Vec<FuzzCase>,
    pub per_degree: Vec<DegreeSummary>,
}

impl FuzzReport {
    pub fn violations(&self) -> impl Iterator<Item = (usize, &String)> {
        self.cases
            .iter()
            .flat_map(|c| c.violations.iter().map(move |v| (c.index, v)))
    }

    pub fn passed(&self) -> bool {
        self.violations().next().is_none()
    }
}

fn check_case(index: usize, form: &PolynomialForm, table: &JTable) -> Result<FuzzCase, FuzzError> {
    let n = form.degree();
    let petrov = ReductionEngine::shared().reduce_form(form)?;
    let mut violations = Vec::new();
    let quarter = n / 4;
    for (i, d) in petrov.degrees().iter().enumerate() {
        if d.is_some_and(|d| d > quarter) {
            violations.push(format!("deg p{} = {d:?} > floor({n}/4)", i + 1));
        }
    }
    let outcome = certify(&petrov, n)?;
    let zeros = zeros_from_table(&petrov, table)?.len();
    let mut bound = None;
    match &outcome {
        BoundOutcome::IdenticallyZero { .. } => {}
        BoundOutcome::Certificate(c) => {
            bound = Some(c.instance_bound);
            let mut check = |ok: bool, what: String| {
                if !ok {
                    violations.push(what);
                }
            };
            check(
                zeros <= c.instance_bound,
                format!("{zeros} zeros > instance bound {}", c.instance_bound),
            );
            check(
                c.instance_bound <= c.degree_bound,
                "instance bound above its degree chain".into(),
            );
            check(
                c.degree_bound <= c.worst_case_chain,
                format!(
                    "degree chain {} > worst case {}",
                    c.degree_bound, c.worst_case_chain
                ),
            );
            check(
                c.worst_case_s_chain == three_halves_chain(n),
                format!(
                    "worst-case s-chain {} != floor(3n/2) + 8",
                    c.worst_case_s_chain
                ),
            );
            check(
                int(c.worst_case_chain as i64) <= c.generic_bound,
                "worst case above 7n/4 + 9".into(),
            );
            check(
                c.generic_bound == rat(7 * n as i64, 4) + int(9),
                "generic bound is not 7n/4 + 9".into(),
            );
            let half = |d: Option<usize>| d.is_none_or(|d| 2 * d <= n + 4);
            check(
                half(c.degrees.tp1) && half(c.degrees.tp2),
                "deg tp_i > n/2 + 2".into(),
            );
            check(
                c.degrees.c.is_none_or(|d| d <= n + 5),
                "deg C > n + 5".into(),
            );
        }
    }
    Ok(FuzzCase {
        index,
        n,
        zeros,
        instance_bound: bound,
        violations,
    })
}

pub fn run_fuzz(config: &FuzzConfig, exec: Execution) -> Result<FuzzReport, FuzzError> {
    let forms = corpus(config.seed, config.per_degree, config.max_degree);
    let table = JTable::build(config.grid_n, config.t_lo, config.t_hi, DEFAULT_TOL, exec)?;
    let cases = exec
        .map_range(forms.len(), |i| check_case(i, &forms[i], &table))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let per_degree = (1..=config.max_degree)
        .map(|n| {
            let mut s = DegreeSummary {
                n,
                worst_case_chain: crate::bound::worst_case_chain(n),
                ..Default::default()
            };
            for c in cases.iter().filter(|c| c.n == n) {
                s.forms += 1;
                s.max_zeros = s.max_zeros.max(c.zeros);
                match c.instance_bound {
                    Some(b) => s.max_instance_bound = s.max_instance_bound.max(b),
                    None => s.identically_zero += 1,
                }
            }
            s
        })
        .collect();
    Ok(FuzzReport {
        seed: config.seed,
        cases,
        per_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible_and_degree_exact() {
        let a = corpus(7, 5, 8);
        assert_eq!(a, corpus(7, 5, 8));
        assert_ne!(a, corpus(8, 5, 8));
        for (i, f) in a.iter().enumerate() {
            assert_eq!(f.degree(), i / 5 + 1);
        }
    }

    #[test]
    fn coefficients_stay_in_range() {
        use num_traits::Signed;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let c = coefficient(&mut rng);
            assert!(c.abs() <= int(5) && c != int(0));
        }
        for f in corpus(3, 20, 4) {
            for c in f.p().values().chain(f.q().values()) {
                assert!(c.abs() <= int(5));
            }
        }
    }

    #[test]
    fn small_run_is_sound() {
        let config = FuzzConfig {
            seed: 1,
            per_degree: 3,
            max_degree: 4,
            grid_n: 100,
            ..Default::default()
        };
        let report = run_fuzz(&config, Execution::default()).unwrap();
        assert_eq!(report.cases.len(), 12);
        assert!(
            report.passed(),
            "{:?}",
            report.violations().collect::<Vec<_>>()
        );
    }
}
