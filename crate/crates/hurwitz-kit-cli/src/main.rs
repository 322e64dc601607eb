//! Command-line front-end for the stability toolkit.
//!
//! Every subcommand is a thin adapter: parse files, call the library, map the
//! outcome to an exit code. No numerical logic lives here.
//!
//! Exit codes: 0 = the requested property holds (or the command succeeded),
//! 1 = definite negative verdict, 2 = malformed input or violated structural
//! precondition, 3 = inconclusive at the working tolerance, oracle
//! disagreement, or a failed internal consistency check.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hurwitz_kit::certify::{certify_with_oracles, CertKind, StabilityVerdict, Verdict};
use hurwitz_kit::chart::{lift_symmetric_direct, phi, phi_inverse};
use hurwitz_kit::family::{lift_metzler, sample_ball_family, BallFamilySpec};
use hurwitz_kit::insulin;
use hurwitz_kit::json;
use hurwitz_kit::positive::{equilibrium, simulate, PositiveLinearSystem};
use hurwitz_kit::scalar::{Mode, Scalar, Tolerance};
use hurwitz_kit::Error;

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Environment variable that overrides any `--seed` flag or config seed.
const SEED_ENV: &str = "HURWITZ_KIT_SEED";

#[derive(Parser)]
#[command(
    name = "hurwitz-kit",
    version,
    about = "Stability certificates for symmetric and Metzler matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify Hurwitz stability and cross-check against classical oracles.
    Certify(CertifyArgs),
    /// Apply one Schur-complement reduction step to a matrix.
    Reduce(ReduceArgs),
    /// Rebuild an (n+1)-dimensional matrix from a base and fiber parameters.
    Lift(LiftArgs),
    /// Map a Hurwitz symmetric matrix to chart coordinates or back.
    Chart(ChartArgs),
    /// Sample a Frobenius-ball family of stable matrices and lift each member.
    Sample(SampleArgs),
    /// Solve for the positive equilibrium of a Metzler system.
    Equilibrium(EquilibriumArgs),
    /// Integrate a positive linear system with fixed-step RK4; prints CSV.
    Simulate(SimulateArgs),
    /// Run the bundled insulin-model walkthrough.
    InsulinDemo(InsulinDemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Symmetric,
    Metzler,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum LiftKindArg {
    Symmetric,
    Metzler,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartDirection {
    Forward,
    Inverse,
}

#[derive(Args)]
struct CertifyArgs {
    /// Matrix class whose reduction law applies.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// Arithmetic mode for the computation; input entries are converted.
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Sign tolerance for float mode. Rejected in exact mode.
    #[arg(long)]
    tol: Option<f64>,
    /// Matrix JSON file.
    #[arg(long)]
    input: PathBuf,
    /// Write the certificate JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Matrix JSON file; the arithmetic mode is taken from the file.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct LiftArgs {
    /// Class of lift: symmetric (direct corner) or metzler (h, k, corner).
    #[arg(value_enum)]
    kind: LiftKindArg,
    /// Base matrix JSON file; must certify as Hurwitz in its class.
    #[arg(long)]
    base: PathBuf,
    /// Fiber parameter JSON file.
    #[arg(long)]
    params: PathBuf,
}

#[derive(Args)]
struct ChartArgs {
    /// forward maps a matrix to (base, k); inverse maps (base, k) back.
    #[arg(value_enum)]
    direction: ChartDirection,
    /// Matrix JSON (forward) or chart-point JSON (inverse).
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct SampleArgs {
    /// Ball-family configuration JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct EquilibriumArgs {
    /// System JSON file with fields "a" (matrix) and "b" (vector).
    #[arg(long)]
    system: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// System JSON file with fields "a" (matrix) and "b" (vector).
    #[arg(long)]
    system: PathBuf,
    /// Initial state: JSON array of nonnegative numbers.
    #[arg(long)]
    x0: PathBuf,
    /// Step size; must be positive.
    #[arg(long)]
    dt: f64,
    /// Number of RK4 steps.
    #[arg(long)]
    steps: usize,
}

#[derive(Args)]
struct InsulinDemoArgs {
    /// Number of restricted-family members to sample in stage 3; 0 skips it.
    #[arg(long, default_value_t = 100)]
    family_count: usize,
    /// Seed for the family-sampling stage.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace the bundled 7x7 matrix with this file (exercises failure paths).
    #[arg(long)]
    data: Option<PathBuf>,
}

/// A failed command: diagnostic for stderr plus the process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Failure {
        let code = match err {
            Error::TolDisagreement { .. }
            | Error::Inconclusive { .. }
            | Error::OracleDisagreement(_)
            | Error::Internal { .. } => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Certify(args) => cmd_certify(args),
        Command::Reduce(args) => cmd_reduce(args),
        Command::Lift(args) => cmd_lift(args),
        Command::Chart(args) => cmd_chart(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Equilibrium(args) => cmd_equilibrium(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::InsulinDemo(args) => cmd_insulin_demo(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Writes to stdout; a closed pipe (e.g. downstream `head`) is not an error.
fn print_raw(text: &str) -> Result<(), Failure> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure::input(format!("stdout: {e}"))),
    }
}

fn print_line(text: &str) -> Result<(), Failure> {
    print_raw(text)?;
    print_raw("\n")
}

/// Prints to stdout, or writes to `out` when given.
fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => print_line(text),
    }
}

/// Seed precedence: environment variable, then `--seed`, then `fallback`.
fn effective_seed(flag: Option<u64>, fallback: u64) -> Result<u64, Failure> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse::<u64>().map_err(|_| {
            Failure::input(format!(
                "{SEED_ENV} must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(flag.unwrap_or(fallback)),
        Err(std::env::VarError::NotUnicode(_)) => {
            Err(Failure::input(format!("{SEED_ENV} is not valid unicode")))
        }
    }
}

fn scalar_display(s: &Scalar) -> String {
    s.rational_string()
        .unwrap_or_else(|| json::fmt_f64(s.to_f64()))
}

fn cmd_certify(args: CertifyArgs) -> Result<u8, Failure> {
    let parsed = json::matrix_from_json(&read_input(&args.input)?)?;
    let (matrix, tol) = match args.mode {
        ModeArg::Exact => {
            if args.tol.is_some() {
                return Err(Failure::input(
                    "--tol applies to float mode only; exact mode decides signs exactly",
                ));
            }
            let m = match parsed.mode() {
                Mode::Exact => parsed,
                Mode::Float => parsed.to_exact(),
            };
            (m, Tolerance::exact())
        }
        ModeArg::Float => {
            let tol = match args.tol {
                Some(eps) => Tolerance::float(eps)?,
                None => Tolerance::default_float(),
            };
            let m = match parsed.mode() {
                Mode::Float => parsed,
                Mode::Exact => parsed.to_float(),
            };
            (m, tol)
        }
    };
    let kind = match args.kind {
        KindArg::Symmetric => CertKind::Symmetric,
        KindArg::Metzler => CertKind::Metzler,
    };
    match certify_with_oracles(&matrix, kind, &tol) {
        Ok(verdict) => {
            let code = if verdict.hurwitz {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            };
            emit(&json::verdict_to_json(&verdict), args.out.as_ref())?;
            Ok(code)
        }
        Err(Error::OracleDisagreement(disagreement)) => {
            // Still emit the certificate so the conflict can be inspected.
            let verdict = StabilityVerdict {
                hurwitz: disagreement.certificate.verdict == Verdict::Hurwitz,
                certificate: disagreement.certificate,
                oracle_agreement: Some(disagreement.oracles),
            };
            emit(&json::verdict_to_json(&verdict), args.out.as_ref())?;
            Err(Failure {
                code: EXIT_INCONCLUSIVE,
                message: "recursive certifier and oracles disagree".into(),
            })
        }
        Err(err) => Err(err.into()),
    }
}

fn cmd_reduce(args: ReduceArgs) -> Result<u8, Failure> {
    let matrix = json::matrix_from_json(&read_input(&args.input)?)?;
    let tol = Tolerance::for_mode(matrix.mode());
    let reduced = matrix.partition()?.schur_reduce(&tol)?;
    print_line(&json::matrix_to_json(&reduced))?;
    Ok(EXIT_OK)
}

fn cmd_lift(args: LiftArgs) -> Result<u8, Failure> {
    let base = json::matrix_from_json(&read_input(&args.base)?)?;
    let params_text = read_input(&args.params)?;
    let tol = Tolerance::for_mode(base.mode());
    let lifted = match args.kind {
        LiftKindArg::Symmetric => {
            let params = json::direct_lift_params_from_json(&params_text)?;
            lift_symmetric_direct(&base, &params, &tol)?
        }
        LiftKindArg::Metzler => {
            let params = json::metzler_lift_params_from_json(&params_text)?;
            lift_metzler(&base, &params, &tol)?
        }
    };
    print_line(&json::matrix_to_json(&lifted))?;
    Ok(EXIT_OK)
}

fn cmd_chart(args: ChartArgs) -> Result<u8, Failure> {
    let text = read_input(&args.input)?;
    // Chart coordinates are float-valued; exact inputs are converted.
    let tol = Tolerance::default_float();
    match args.direction {
        ChartDirection::Forward => {
            let parsed = json::matrix_from_json(&text)?;
            let matrix = match parsed.mode() {
                Mode::Float => parsed,
                Mode::Exact => parsed.to_float(),
            };
            let point = phi(&matrix, &tol)?;
            print_line(&json::chart_point_to_json(&point))?;
        }
        ChartDirection::Inverse => {
            let point = json::chart_point_from_json(&text, &tol)?;
            let matrix = phi_inverse(&point, &tol)?;
            print_line(&json::matrix_to_json(&matrix))?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_sample(args: SampleArgs) -> Result<u8, Failure> {
    let (spec, lift_k_bounds) = json::ball_config_from_json(&read_input(&args.config)?)?;
    let seed = effective_seed(args.seed, spec.seed())?;
    let spec = BallFamilySpec::new(spec.center().clone(), spec.radius(), spec.count(), seed)?;
    match sample_ball_family(&spec, lift_k_bounds, &Tolerance::default_float()) {
        Ok(report) => {
            print_line(&json::family_report_to_json(&report))?;
            Ok(EXIT_OK)
        }
        Err(Error::EmptyFamily) => Err(Failure {
            code: EXIT_NEGATIVE,
            message: "no sampled matrix certified as stable".into(),
        }),
        Err(err) => Err(err.into()),
    }
}

/// Validation inside the system constructor is mode-aware on its own, so a
/// float tolerance is safe here even for exact files.
fn load_system(path: &PathBuf) -> Result<PositiveLinearSystem, Failure> {
    Ok(json::system_from_json(
        &read_input(path)?,
        &Tolerance::default_float(),
    )?)
}

fn cmd_equilibrium(args: EquilibriumArgs) -> Result<u8, Failure> {
    let sys = load_system(&args.system)?;
    let tol = Tolerance::for_mode(sys.a().mode());
    let eq = equilibrium(&sys, &tol)?;
    print_line(&json::equilibrium_to_json(&eq))?;
    Ok(EXIT_OK)
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8, Failure> {
    let sys = load_system(&args.system)?;
    let x0 = json::f64_vector_from_json(&read_input(&args.x0)?)?;
    let trajectory = simulate(&sys, &x0, args.dt, args.steps)?;
    print_raw(&json::trajectory_to_csv(&trajectory))?;
    Ok(EXIT_OK)
}

fn cmd_insulin_demo(args: InsulinDemoArgs) -> Result<u8, Failure> {
    let matrix = match &args.data {
        Some(path) => json::matrix_from_json(&read_input(path)?)?,
        None => insulin::a7(),
    };
    let seed = effective_seed(None, args.seed)?;
    let report = insulin::demo(&matrix, args.family_count, seed);

    let corner = report
        .b6_corner
        .as_ref()
        .map(|s| scalar_display(s))
        .unwrap_or_else(|| "unavailable".into());
    print_line(&format!(
        "stage 1: reduce 7x7 matrix to its 6x6 Schur complement; corner entry (6,6) = {corner} ... {}",
        pass_fail(report.reduction_ok)
    ))?;
    print_line(&format!(
        "stage 2: nominal fiber parameters rebuild the 7x7 matrix byte-for-byte ... {}",
        pass_fail(report.nominal_ok)
    ))?;
    match &report.family {
        Some(outcome) => print_line(&format!(
            "stage 3: restricted family: {} members requested, {} draws, {} certified, {} stability failures ... {}",
            outcome.requested,
            outcome.tried,
            outcome.certified,
            outcome.failures,
            pass_fail(report.family_ok)
        ))?,
        None if args.family_count == 0 => {
            print_line("stage 3: restricted family sampling skipped (family-count 0)")?
        }
        None => print_line(&format!(
            "stage 3: restricted family sampling ... {}",
            pass_fail(false)
        ))?,
    }
    match &report.equilibrium {
        Some(eq) => {
            let entries: Vec<String> = eq.x_bar.iter().map(scalar_display).collect();
            print_line(&format!(
                "stage 4: equilibrium for unit input at compartment 2: x_bar = ({}) ... {}",
                entries.join(", "),
                pass_fail(report.equilibrium_ok)
            ))?;
        }
        None => print_line(&format!("stage 4: equilibrium solve ... {}", pass_fail(false)))?,
    }

    match report.first_failure_stage() {
        None => Ok(EXIT_OK),
        Some(stage) => Err(Failure {
            code: EXIT_INCONCLUSIVE,
            message: format!("demo stage {stage} failed"),
        }),
    }
}

fn pass_fail(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
