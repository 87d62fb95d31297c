//! `abelian`: reduction, Picard-Fuchs data, evaluation, zero search, bound
//! certificates and verification suites for the Abelian integrals of
//! `H = x^2 y (1 - x - y)`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical non-convergence.

use std::path::PathBuf;
use std::process::ExitCode;

use abelian_core::algebra::{parse_rational_or_decimal, rat, to_f64};
use abelian_core::bound::{certify, BoundOutcome};
use abelian_core::exec::Execution;
use abelian_core::oracle::{
    eval_form_integral, eval_monomial_integral, integrate_pf, j_vector, zeros_from_table, JTable,
    OracleError, DEFAULT_GRID, DEFAULT_TOL, EDGE, T_MAX, T_SEED,
};
use abelian_core::petrov::{
    DegreeProfile, FormError, PetrovVector, PolynomialForm, ReductionEngine, ReductionError,
};
use abelian_core::picard_fuchs::{constant_rows, derived, PfError};
use abelian_core::verify::{run_suite, Suite, VerifyError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "abelian",
    version,
    about = "Abelian integrals of x^2 y (1 - x - y)"
)]
struct Cli {
    /// Run grid and corpus work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a form or monomial integral over (J1, J2, J3).
    Reduce(Target),
    /// Print the Picard-Fuchs data.
    Pf {
        #[arg(long, value_enum)]
        emit: Emit,
    },
    /// Evaluate the integral at one level (CSV).
    Eval {
        #[command(flatten)]
        target: Target,
        /// Level, as a fraction or decimal in (0, 1/64).
        #[arg(long, value_parser = parse_level)]
        t: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Method::Quad)]
        method: Method,
    },
    /// Locate sign changes of the integral on a grid (CSV).
    Zeros {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, value_parser = parse_level, default_value_t = EDGE)]
        t_lo: f64,
        #[arg(long, value_parser = parse_level, default_value_t = T_MAX - EDGE)]
        t_hi: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Certify an upper bound on the number of zeros (JSON).
    Bound(Target),
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Target {
    /// JSON form document `{"p": [[i, j, "c"], ...], "q": [...]}` for
    /// `P dx + Q dy`.
    #[arg(long)]
    form: Option<PathBuf>,
    /// The area integral of `x^K y^L` over the oval interior.
    #[arg(long, num_args = 2, value_names = ["K", "L"], allow_negative_numbers = true)]
    monomial: Option<Vec<i64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Matrices,
    Ode,
    Riccati,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Quad,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Relations,
    Eq13,
    Pf,
    Riccati,
    Limits,
    Fuzz,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Relations => Suite::Relations,
            SuiteArg::Eq13 => Suite::Eq13,
            SuiteArg::Pf => Suite::Pf,
            SuiteArg::Riccati => Suite::Riccati,
            SuiteArg::Limits => Suite::Limits,
            SuiteArg::Fuzz => Suite::Fuzz,
        }
    }
}

fn parse_level(s: &str) -> Result<f64, String> {
    let t = parse_rational_or_decimal(s).map_err(|e| e.to_string())?;
    if t <= rat(0, 1) || t >= rat(1, 64) {
        return Err(format!("level {s} is outside (0, 1/64)"));
    }
    Ok(to_f64(&t))
}

enum Failure {
    Verification(String),
    Input(String),
    Numeric(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Verification(_) => 1,
            Self::Input(_) => 2,
            Self::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Verification(m) | Self::Input(m) | Self::Numeric(m) => m,
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Reduction(r) => r.into(),
            e if e.is_convergence() => Self::Numeric(e.to_string()),
            e => Self::Input(e.to_string()),
        }
    }
}

impl From<ReductionError> for Failure {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::NegativeIndex { .. } => Self::Input(e.to_string()),
            e => Self::Verification(e.to_string()),
        }
    }
}

impl From<FormError> for Failure {
    fn from(e: FormError) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<PfError> for Failure {
    fn from(e: PfError) -> Self {
        Self::Verification(e.to_string())
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Oracle(o) => o.into(),
            VerifyError::Reduction(r) => r.into(),
            e => Self::Verification(e.to_string()),
        }
    }
}

/// A target resolved to its form, its Petrov vector and (for monomials) its
/// index.
struct Resolved {
    form: PolynomialForm,
    petrov: PetrovVector,
    monomial: Option<(i64, i64)>,
}

fn resolve(target: &Target) -> Result<Resolved, Failure> {
    let engine = ReductionEngine::shared();
    if let Some(path) = &target.form {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let form = PolynomialForm::from_json(&text)?;
        let petrov = engine.reduce_form(&form)?;
        return Ok(Resolved {
            form,
            petrov,
            monomial: None,
        });
    }
    let Some([k, l]) = target.monomial.as_deref().map(|v| [v[0], v[1]]) else {
        return Err(Failure::Input("need --form or --monomial".into()));
    };
    if k < 0 || l < 0 {
        return Err(ReductionError::NegativeIndex { k, l }.into());
    }
    // ∮ x^(k+1) y^l dy / (k+1) is the area integral of x^k y^l
    let form = PolynomialForm::dy_term(k as u32 + 1, l as u32, rat(1, k + 1));
    let petrov = engine.reduce_form(&form)?;
    Ok(Resolved {
        form,
        petrov,
        monomial: Some((k, l)),
    })
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn reduce(target: &Target) -> Result<(), Failure> {
    let r = resolve(target)?;
    let mut out = json!({
        "form": r.form.to_document(),
        "n": r.form.degree(),
        "petrov": r.petrov,
        "degrees": DegreeProfile::of(r.form.degree(), &r.petrov),
    });
    if let Some((k, l)) = r.monomial {
        out["monomial"] = json!([k, l]);
    }
    print_json(&out);
    Ok(())
}

fn pf(emit: Emit) -> Result<(), Failure> {
    let sys = derived()?;
    let out = match emit {
        Emit::Matrices => json!({ "A": constant_rows(&sys.pf.a), "B": constant_rows(&sys.pf.b) }),
        Emit::Ode => json!({ "Q": sys.pf.q.to_wire(), "D": sys.pf.d }),
        Emit::Riccati => json!(sys.riccati),
    };
    print_json(&out);
    Ok(())
}

fn eval(target: &Target, t: f64, tol: f64, method: Method) -> Result<(), Failure> {
    let r = resolve(target)?;
    let (value, j) = match method {
        Method::Quad => {
            let value = match r.monomial {
                Some((k, l)) => eval_monomial_integral(k, l, t, tol)?,
                None => eval_form_integral(&r.form, t, tol)?,
            };
            (value, j_vector(t, tol)?)
        }
        Method::Ode => {
            let seed = j_vector(T_SEED, tol)?;
            let j = integrate_pf(T_SEED, seed, t, tol)?;
            (r.petrov.eval_f64(t, j.as_array()), j)
        }
    };
    println!("t,value,j1,j2,j3");
    println!("{t:e},{value:e},{:e},{:e},{:e}", j.j1, j.j2, j.j3);
    Ok(())
}

fn zeros(
    target: &Target,
    grid: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    exec: Execution,
) -> Result<(), Failure> {
    let r = resolve(target)?;
    let table = JTable::build(grid, lo, hi, tol, exec)?;
    let found = zeros_from_table(&r.petrov, &table)?;
    println!("index,t");
    for (i, t) in found.iter().enumerate() {
        println!("{i},{t:e}");
    }
    Ok(())
}

fn bound(target: &Target) -> Result<(), Failure> {
    let r = resolve(target)?;
    let n = r.form.degree();
    let outcome = certify(&r.petrov, n).map_err(|e| Failure::Verification(e.to_string()))?;
    let mut out = json!(outcome);
    if let BoundOutcome::Certificate(c) = &outcome {
        out["comparison"] = json!(format!(
            "{} <= {}: {}",
            c.instance_bound,
            abelian_core::algebra::fraction_string(&c.generic_bound),
            c.within_generic()
        ));
    }
    print_json(&out);
    Ok(())
}

fn verify(suite: Suite, seed: u64, exec: Execution) -> Result<(), Failure> {
    let report = run_suite(suite, seed, exec)?;
    print_json(&json!(report));
    if report.passed() {
        return Ok(());
    }
    for f in report.failures.iter().take(10) {
        eprintln!("failure: {f}");
    }
    Err(Failure::Verification(format!(
        "suite {suite}: {} of {} checks failed",
        report.failures.len(),
        report.checks
    )))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match &cli.command {
        Command::Reduce(target) => reduce(target),
        Command::Pf { emit } => pf(*emit),
        Command::Eval {
            target,
            t,
            tol,
            method,
        } => eval(target, *t, *tol, *method),
        Command::Zeros {
            target,
            grid,
            t_lo,
            t_hi,
            tol,
        } => zeros(target, *grid, *t_lo, *t_hi, *tol, exec),
        Command::Bound(target) => bound(target),
        Command::Verify { suite, seed } => verify((*suite).into(), *seed, exec),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
