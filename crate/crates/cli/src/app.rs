//! Command-line definitions and dispatch.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qphase::io::{load_amplitudes, load_hamiltonian, ProtocolResultDocument};
use qphase::protocol::run_protocol;
use qphase::{rng, Completion, HamiltonianSpec, PhaseMode, ProtocolConfig, ProtocolMode};

use crate::demo::{demo_quadratic, linear_software_state};
use crate::error::{CliError, CliResult};
use crate::export::{read_sweep_rows, with_output, write_json, write_records_csv, write_sweep_csv, Format};
use crate::sweep::{fit_rows, sweep_success, SweepConfig, SweepMode, DEFAULT_POINTS};
use crate::trotter::trotter_table;
use crate::verify::{oscillator_test_state, verify, Suite, VerifyOptions};

#[derive(Debug, Parser)]
#[command(name = "qphase", version, about = "Phase-transformation protocol experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Post-selected quadratic phase on a uniform state.
    DemoQuadratic(DemoArgs),
    /// Success probability over a Δ grid, with a model fit.
    SweepSuccess(SweepArgs),
    /// Fit 1 − a·sin²(bΔ/2 − c) to a sweep CSV or JSON report.
    Fit(FitArgs),
    /// Trotter error against the dense exponential.
    Trotter(TrotterArgs),
    /// Run property suites; exits 1 on any failure.
    Verify(VerifyArgs),
    /// Run the protocol on amplitude files.
    Protocol(ProtocolArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompletionArg {
    Householder,
    GramSchmidt,
}

impl From<CompletionArg> for Completion {
    fn from(c: CompletionArg) -> Self {
        match c {
            CompletionArg::Householder => Completion::Householder,
            CompletionArg::GramSchmidt => Completion::GramSchmidt,
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true, conflicts_with = "alpha")]
    pub delta: f64,
    /// Target coefficient of x²; sets Δ = α·A/m with A = Σx².
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub cycles: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub delta_max: f64,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    pub points: usize,
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 100)]
    pub repetitions: usize,
    #[arg(long, env = rng::SEED_ENV, default_value_t = rng::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "sampled")]
    pub mode: SweepMode,
    #[arg(long, value_enum, default_value = "householder")]
    pub completion: CompletionArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Sweep CSV (delta,p_mean,p_std,p_exact) or JSON report.
    #[arg(long)]
    pub input: PathBuf,
    /// Shots per estimate used by the sweep; sets the weight floor.
    #[arg(long, default_value_t = 1000)]
    pub shots: usize,
    #[arg(long, default_value_t = 100)]
    pub repetitions: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrotterMode {
    Exact,
    Protocol,
}

#[derive(Debug, Args)]
pub struct TrotterArgs {
    /// Harmonic-oscillator grid size when no --spec is given.
    #[arg(long, default_value_t = 3)]
    pub qubits: usize,
    #[arg(long, default_value_t = 1.0)]
    pub time: f64,
    /// Hamiltonian JSON document; overrides --qubits and --time.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Initial amplitudes as a JSON list of [re, im]; default is a Gaussian centred at 1.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32])]
    pub steps: Vec<usize>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: TrotterMode,
    /// Protocol cycles per diagonal phase in protocol mode.
    #[arg(long, default_value_t = 100)]
    pub cycles: usize,
    #[arg(long, value_enum, default_value = "householder")]
    pub completion: CompletionArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, env = rng::SEED_ENV, default_value_t = rng::DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolModeArg {
    Sampled,
    Postselected,
    Exact,
}

#[derive(Debug, Args)]
pub struct ProtocolArgs {
    /// Primary state ψ, JSON list of [re, im].
    #[arg(long)]
    pub psi: PathBuf,
    /// Software state φ, JSON list of [re, im].
    #[arg(long)]
    pub phi: PathBuf,
    #[arg(long, allow_negative_numbers = true, required_unless_present = "alpha", conflicts_with = "alpha")]
    pub delta: Option<f64>,
    /// Total phase coefficient; Δ = α/m.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 100)]
    pub cycles: usize,
    #[arg(long, value_enum, default_value = "sampled")]
    pub mode: ProtocolModeArg,
    #[arg(long, value_enum, default_value = "householder")]
    pub completion: CompletionArg,
    #[arg(long, env = rng::SEED_ENV, default_value_t = rng::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::DemoQuadratic(a) => run_demo(a),
        Command::SweepSuccess(a) => run_sweep(a),
        Command::Fit(a) => run_fit(a),
        Command::Trotter(a) => run_trotter(a),
        Command::Verify(a) => run_verify(a),
        Command::Protocol(a) => run_protocol_cmd(a),
    }
}

fn run_demo(a: DemoArgs) -> CliResult<()> {
    if a.cycles == 0 {
        return Err(CliError::Usage("--cycles must be at least 1".into()));
    }
    let delta = match a.alpha {
        Some(alpha) => {
            if a.qubits < 1 || a.qubits > 12 {
                return Err(CliError::Usage(format!("--qubits must be in 1..=12, got {}", a.qubits)));
            }
            let (_, sum_sq) = linear_software_state(a.qubits)?;
            alpha * sum_sq / a.cycles as f64
        }
        None => a.delta,
    };
    let report = demo_quadratic(delta, a.cycles, a.qubits)?;
    with_output(a.out.output.as_deref(), |w| match a.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&report, w),
        Format::Csv => write_records_csv(&report.rows, w),
    })
}

fn run_sweep(a: SweepArgs) -> CliResult<()> {
    let config = SweepConfig {
        delta_min: a.delta_min,
        delta_max: a.delta_max,
        delta_points: a.points,
        n_shot: a.shots,
        n_repetition: a.repetitions,
        seed: a.seed,
        mode: a.mode,
        qubits: a.qubits,
        completion: a.completion.into(),
    };
    let report = sweep_success(&config)?;
    for &i in &report.flagged {
        let r = &report.rows[i];
        eprintln!("warning: delta {} mean {} is far from exact {}", r.delta, r.p_mean, r.p_exact);
    }
    let f = &report.fit;
    eprintln!(
        "fit: a = {:.6} ± {:.1e}, b = {:.6} ± {:.1e}, c = {:.6} ± {:.1e}",
        f.a, f.stderr_a, f.b, f.stderr_b, f.c, f.stderr_c
    );
    with_output(a.out.output.as_deref(), |w| match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => write_sweep_csv(&report.rows, w),
        Format::Json => write_json(&report, w),
    })
}

fn run_fit(a: FitArgs) -> CliResult<()> {
    if a.shots == 0 || a.repetitions == 0 {
        return Err(CliError::Usage("shots and repetitions must be at least 1".into()));
    }
    let rows = read_sweep_rows(&a.input)?;
    let fit = fit_rows(&rows, a.shots, a.repetitions)?;
    with_output(a.out.output.as_deref(), |w| match a.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&fit, w),
        Format::Csv => write_records_csv(std::slice::from_ref(&fit), w),
    })
}

fn run_trotter(a: TrotterArgs) -> CliResult<()> {
    let spec = match &a.spec {
        Some(path) => load_hamiltonian(path).map_err(|e| input_error(path, e))?,
        None => HamiltonianSpec::harmonic_oscillator(a.qubits, a.time, 1)?,
    };
    let initial = match &a.input {
        Some(path) => load_amplitudes(path).map_err(|e| input_error(path, e))?,
        None => oscillator_test_state(spec.n, 1.0)?,
    };
    let mode = match a.mode {
        TrotterMode::Exact => PhaseMode::Exact,
        TrotterMode::Protocol => PhaseMode::Protocol { cycles: a.cycles, completion: a.completion.into() },
    };
    let report = trotter_table(&spec, &initial, &a.steps, mode)?;
    with_output(a.out.output.as_deref(), |w| match a.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&report, w),
        Format::Csv => write_records_csv(&report.rows, w),
    })
}

fn run_verify(a: VerifyArgs) -> CliResult<()> {
    let options = VerifyOptions { seed: a.seed, ..Default::default() };
    let report = verify(a.suite, &options)?;
    for c in &report.checks {
        eprintln!(
            "{} {:?}/{} worst {:e} (limit {:e})",
            if c.passed { "PASS" } else { "FAIL" },
            c.suite,
            c.name,
            c.worst,
            c.threshold
        );
    }
    with_output(a.out.output.as_deref(), |w| match a.out.format.unwrap_or(Format::Json) {
        Format::Json => write_json(&report, w),
        Format::Csv => write_records_csv(&report.checks, w),
    })?;
    if report.passed {
        Ok(())
    } else {
        let failed = report.checks.iter().filter(|c| !c.passed).count();
        Err(CliError::Verification(format!("{failed} check(s) failed")))
    }
}

fn run_protocol_cmd(a: ProtocolArgs) -> CliResult<()> {
    let psi = load_amplitudes(&a.psi).map_err(|e| input_error(&a.psi, e))?;
    let phi = load_amplitudes(&a.phi).map_err(|e| input_error(&a.phi, e))?;
    let mode = match a.mode {
        ProtocolModeArg::Sampled => ProtocolMode::Sampled,
        ProtocolModeArg::Postselected => ProtocolMode::Postselected,
        ProtocolModeArg::Exact => ProtocolMode::Exact,
    };
    let config = match (a.delta, a.alpha) {
        (_, Some(alpha)) => ProtocolConfig::from_alpha(alpha, a.cycles, mode)?,
        (Some(delta), None) => ProtocolConfig::from_delta(delta, a.cycles, mode)?,
        (None, None) => return Err(CliError::Usage("one of --delta or --alpha is required".into())),
    }
    .with_seed(a.seed)
    .with_completion(a.completion.into());
    let result = run_protocol(&psi, phi.amplitudes(), &config)?;
    let doc = ProtocolResultDocument::from(&result);
    with_output(a.output.as_deref(), |w| write_json(&doc, w))
}

/// File-level problems (missing, unreadable, malformed) map to exit code 3.
fn input_error(path: &std::path::Path, e: qphase::Error) -> CliError {
    match e {
        qphase::Error::Io(io) => CliError::io(path, io),
        qphase::Error::Json(_) | qphase::Error::Format(_) => CliError::input(path, e),
        other => CliError::Core(other),
    }
}
