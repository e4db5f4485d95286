//! `qteam` — command-line front end for the team-decision library.
//!
//! Subcommands: `classify` (the 256-class table), `orbit` (symmetry orbit of
//! one class), `solve` (exact optima of one instance, optionally plus a
//! quantum strategy evaluation or see-saw search), `witness` (the built-in
//! advantage witness and its verified cost), `verify` (the full randomized
//! audit), and `report` (render a saved audit report).
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on
//! malformed input or usage errors. All stdout output is deterministic for a
//! fixed command line; timings go to stderr.

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qteam_core::io::{self, float17};
use qteam_core::quantum::seesaw::{seesaw_optimize, SeesawOptions};
use qteam_core::quantum::strategy_violations;
use qteam_core::scalar::scalar_to_string;
use qteam_core::verification::{audit_chi_grid, audit_theorem, AuditReport};
use qteam_core::{
    classify, enumerate_classes, half_cac_witness, local_optimum, ns_optimum, orbit_paths,
    quantum_cost, BinaryCostPair, ProblemInstance, Rat64, Scalar,
};
use num_rational::BigRational;
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

mod render;

/// Tolerance for accepting a user-supplied quantum strategy (density-matrix
/// and projector invariants are checked in doubles).
const STRATEGY_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "qteam",
    version,
    about = "Exact solvers and a machine audit for binary two-agent team decision problems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the classification of all 256 cost-pair classes
    Classify(ClassifyArgs),
    /// Print the symmetry orbit of one class
    Orbit(OrbitArgs),
    /// Solve an instance exactly over deterministic, no-signalling and centralized policies
    Solve(SolveArgs),
    /// Emit the built-in advantage witness instance, strategy, and verified cost
    Witness(WitnessArgs),
    /// Run the full randomized classification audit
    Verify(VerifyArgs),
    /// Render a saved audit report
    Report(ReportArgs),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ClassifyFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = ClassifyFormat::Csv)]
    format: ClassifyFormat,
    /// Write to this file instead of standard output
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct OrbitArgs {
    /// Packed class code 0-255 (low nibble: −1 entries of M, high nibble: of
    /// N; bit k of a nibble is entry (k/2, k mod 2))
    code: u8,
    /// Write to this file instead of standard output
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file (keys M, N, prior, chi; rationals as "p/q")
    #[arg(long, value_name = "FILE")]
    instance: PathBuf,
    /// Also evaluate this strategy JSON file on the instance
    #[arg(long, value_name = "FILE")]
    strategy: Option<PathBuf>,
    /// Also search for a quantum strategy with this many see-saw restarts
    #[arg(long, value_name = "RESTARTS")]
    seesaw: Option<usize>,
    /// Seed for the see-saw search
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write to this file instead of standard output
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Also write the witness instance JSON to this file
    #[arg(long, value_name = "FILE")]
    instance_out: Option<PathBuf>,
    /// Also write the witness strategy JSON to this file
    #[arg(long, value_name = "FILE")]
    strategy_out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Seed for all sampling (priors, χ draws, see-saw restarts)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled instances per class
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Comma-separated χ values as fractions, e.g. "1/4,1/2,1,2"
    /// (default: the six standard values plus four seeded draws)
    #[arg(long, value_name = "LIST")]
    chi_grid: Option<String>,
    /// Write the full audit report JSON to this file
    #[arg(long, value_name = "FILE")]
    report_out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Table,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    /// Audit report JSON file, as written by `verify --report-out`
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    format: ReportFormat,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify(args) => run_classify(args)?,
        Command::Orbit(args) => run_orbit(args)?,
        Command::Solve(args) => run_solve(args)?,
        Command::Witness(args) => run_witness(args)?,
        Command::Verify(args) => return run_verify(args),
        Command::Report(args) => run_report(args)?,
    }
    Ok(ExitCode::SUCCESS)
}

/// Prints to stdout, exiting quietly if the reader went away (e.g. piped
/// into `head`) — the default `print!` would panic on the broken pipe.
fn print_stdout(contents: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(err) = stdout.write_all(contents.as_bytes()).and_then(|()| stdout.flush()) {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing to stdout: {err}");
        std::process::exit(2);
    }
}

/// Writes `contents` to `output`, or to stdout when no path was given.
fn emit(output: Option<&Path>, contents: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, contents)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print_stdout(contents),
    }
    Ok(())
}

fn pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn run_classify(args: ClassifyArgs) -> Result<()> {
    let records: Vec<_> = enumerate_classes().into_iter().map(classify).collect();
    let contents = match args.format {
        ClassifyFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "pair_bitmask",
                "m",
                "n",
                "cell",
                "orbit_representative",
                "verdict",
            ])?;
            for r in &records {
                w.write_record([
                    r.pair.code().to_string(),
                    r.mn.0.to_string(),
                    r.mn.1.to_string(),
                    r.cell.to_string(),
                    r.orbit_representative.code().to_string(),
                    r.verdict.to_string(),
                ])?;
            }
            String::from_utf8(w.into_inner()?).expect("CSV output is ASCII")
        }
        ClassifyFormat::Json => {
            let mut s = serde_json::to_string_pretty(&records)?;
            s.push('\n');
            s
        }
    };
    emit(args.output.as_deref(), &contents)
}

fn run_orbit(args: OrbitArgs) -> Result<()> {
    let pair = BinaryCostPair::from_code(args.code);
    let record = classify(pair);
    let members: Vec<Value> = orbit_paths(pair)
        .iter()
        .map(|(member, path)| {
            json!({
                "code": member.code(),
                "path": path.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let out = json!({
        "code": args.code,
        "representative": record.orbit_representative.code(),
        "cell": record.cell,
        "verdict": record.verdict,
        "size": members.len(),
        "members": members,
    });
    emit(args.output.as_deref(), &pretty(&out))
}

fn load_instance(path: &Path) -> Result<ProblemInstance<BigRational>> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(io::instance_from_str(&text)
        .with_context(|| format!("parsing instance {}", path.display()))?)
}

fn run_solve(args: SolveArgs) -> Result<()> {
    let instance = load_instance(&args.instance)?;
    let record = classify(*instance.pair());
    let (local_value, local_label) = local_optimum(&instance);
    let (ns_value, ns_label) = ns_optimum(&instance);
    let (centralized_value, centralized_argmin) = instance.centralized_optimum();

    let mut out = json!({
        "class": {
            "pair_bitmask": record.pair.code(),
            "m": record.mn.0,
            "n": record.mn.1,
            "cell": record.cell,
            "verdict": record.verdict,
        },
        "chi": scalar_to_string(instance.chi()),
        "local": {
            "value": scalar_to_string(&local_value),
            "argmin": local_label.to_string(),
        },
        "no_signalling": {
            "value": scalar_to_string(&ns_value),
            "argmin": ns_label.to_string(),
        },
        "centralized": {
            "value": scalar_to_string(&centralized_value),
            "argmin": centralized_argmin
                .iter()
                .map(|&(ua, ub)| json!([ua, ub]))
                .collect::<Vec<_>>(),
        },
        "gaps": {
            "no_signalling_below_local": ns_value < local_value,
            "centralized_below_local": centralized_value < local_value,
        },
    });
    let root = out.as_object_mut().expect("built as an object");

    if let Some(path) = &args.strategy {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let strategy = io::strategy_from_str(&text)
            .with_context(|| format!("parsing strategy {}", path.display()))?;
        let violations = strategy_violations(&strategy, STRATEGY_TOL);
        if !violations.is_empty() {
            bail!(
                "strategy {} is not a valid quantum strategy: {}",
                path.display(),
                violations.join("; ")
            );
        }
        let value = quantum_cost(&instance, &strategy);
        root.insert(
            "quantum_strategy".into(),
            json!({
                "value": float17(value),
                "below_local": value < local_value.to_f64(),
            }),
        );
    }

    if let Some(restarts) = args.seesaw {
        if restarts == 0 {
            bail!("--seesaw needs at least one restart");
        }
        let opts = SeesawOptions {
            restarts,
            seed: args.seed,
            ..SeesawOptions::default()
        };
        let started = Instant::now();
        let outcome = seesaw_optimize(&instance, &opts);
        eprintln!(
            "see-saw: {} restarts in {:.2?}",
            restarts,
            started.elapsed()
        );
        root.insert(
            "seesaw".into(),
            json!({
                "restarts": restarts,
                "seed": args.seed,
                "value": float17(outcome.value),
                "converged": outcome.converged,
                "iterations": outcome.iterations,
                "restart_index": outcome.restart_index,
                "below_local": outcome.value < local_value.to_f64(),
            }),
        );
    }

    emit(args.output.as_deref(), &pretty(&out))
}

fn run_witness(args: WitnessArgs) -> Result<()> {
    let (instance, strategy) = half_cac_witness::<BigRational>();
    let instance_json = io::instance_to_json(&instance);
    let strategy_json = io::strategy_to_json(&strategy);
    if let Some(path) = &args.instance_out {
        emit(Some(path), &pretty(&instance_json))?;
    }
    if let Some(path) = &args.strategy_out {
        emit(Some(path), &pretty(&strategy_json))?;
    }

    let (local_value, _) = local_optimum(&instance);
    let (ns_value, _) = ns_optimum(&instance);
    let quantum = quantum_cost(&instance, &strategy);
    let out = json!({
        "instance": instance_json,
        "strategy": strategy_json,
        "verification": {
            "strategy_valid": strategy_violations(&strategy, STRATEGY_TOL).is_empty(),
            "local_value": scalar_to_string(&local_value),
            "no_signalling_value": scalar_to_string(&ns_value),
            "quantum_value": float17(quantum),
            "gap_below_local": float17(local_value.to_f64() - quantum),
            "advantage": quantum < local_value.to_f64(),
        },
    });
    emit(None, &pretty(&out))
}

fn parse_chi_grid(text: &str) -> Result<Vec<Rat64>> {
    let mut grid = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let chi: Rat64 = part
            .parse()
            .map_err(|e| anyhow::anyhow!("invalid χ value {part:?}: {e}"))?;
        if chi <= Rat64::from_integer(0) {
            bail!("χ values must be positive, got {part:?}");
        }
        grid.push(chi);
    }
    Ok(grid)
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    let grid = match &args.chi_grid {
        Some(text) => parse_chi_grid(text)?,
        None => audit_chi_grid(args.seed),
    };
    let started = Instant::now();
    let report = audit_theorem(args.seed, args.samples, &grid);
    eprintln!(
        "audit: {} classes x {} samples in {:.2?}",
        report.classes.len(),
        args.samples,
        started.elapsed()
    );
    if let Some(path) = &args.report_out {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        emit(Some(path), &s)?;
    }
    print_stdout(&render::summary(&report));
    Ok(if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_report(args: ReportArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let report: AuditReport = serde_json::from_str(&text)
        .with_context(|| format!("parsing audit report {}", args.input.display()))?;
    match args.format {
        ReportFormat::Table => print_stdout(&render::summary(&report)),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            print_stdout(&s);
        }
    }
    Ok(())
}
