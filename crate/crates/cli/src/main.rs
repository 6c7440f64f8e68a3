//! `gatecert`: certify, sweep and verify single-qubit models from the shell.
//!
//! Exit codes: 0 success, 1 usage, 2 bad input or I/O, 3 degenerate model.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gatecert_core::experiments::{export_csv, scatter_sweep, summary_path};
use gatecert_core::protocol::{run_protocol, sample_complexity, Verdict};
use gatecert_core::randmodels::{NoiseConfig, NoiseKind};
use gatecert_core::universal::{verify_universal, DEFAULT_TOL};
use gatecert_core::{
    certify, s_gate_spec, universal_spec, validate, Error, ProtocolSpec, QuantumModel,
};

#[derive(Parser, Debug)]
#[command(
    name = "gatecert",
    version,
    about = "Classical certification of single-qubit gates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract the gauge and score a model against the target.
    Certify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = SpecKind::SGate)]
        spec: SpecKind,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample random noisy models and write the distance/failure scatter.
    Sweep {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, env = "GATECERT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = NoiseArg::Unitary)]
        noise: NoiseArg,
        /// Depolarizing strength.
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        /// Amplitude-damping strength.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        alpha_min: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha_max: f64,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        threads: Option<usize>,
        /// CSV path; the summary goes next to it as `<stem>.summary.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Repetitions needed to reach distance `eps` with confidence `1 − delta`.
    Complexity {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Distance-per-failure constant; omit to bound the failure probability itself.
        #[arg(long)]
        slope: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Simulate the protocol against a model.
    Run {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = SpecKind::SGate)]
        spec: SpecKind,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, env = "GATECERT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Exact check of the universal gate set {s, S, h, t}.
    Universal {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SpecKind {
    SGate,
    Universal,
}

impl SpecKind {
    fn spec(self) -> ProtocolSpec {
        match self {
            SpecKind::SGate => s_gate_spec(),
            SpecKind::Universal => universal_spec(),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum NoiseArg {
    Unitary,
    Depolarizing,
    AmplitudeDamping,
}

enum Failure {
    Usage(String),
    Input(String),
    Degenerate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Input(_) => 2,
            Failure::Degenerate(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Degenerate(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_degeneracy() {
            Failure::Degenerate(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CmdResult = Result<(), Failure>;

fn load_model(path: &Path) -> Result<QuantumModel, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let model = QuantumModel::from_json(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let violations = validate(&model);
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("  {v}")).collect();
        return Err(Failure::Input(format!(
            "{}: invalid model\n{}",
            path.display(),
            lines.join("\n")
        )));
    }
    Ok(model)
}

fn write_file(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_certify(model: &Path, spec: SpecKind, out: Option<&Path>) -> CmdResult {
    let model = load_model(model)?;
    let report = certify(&model, &spec.spec())?;
    let json = report.to_json();
    if let Some(out) = out {
        write_file(out, &(json.clone() + "\n"))?;
    }
    println!("{json}");
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    samples: u64,
    seed: u64,
    noise: NoiseArg,
    p: f64,
    gamma: f64,
    alpha_min: f64,
    alpha_max: f64,
    threads: Option<usize>,
    out: &Path,
) -> CmdResult {
    let kind = match noise {
        NoiseArg::Unitary => NoiseKind::Unitary,
        NoiseArg::Depolarizing => NoiseKind::Depolarizing { p },
        NoiseArg::AmplitudeDamping => NoiseKind::AmplitudeDamping { gamma },
    };
    let cfg = NoiseConfig::unitary(alpha_min, alpha_max, seed).with_kind(kind);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::Usage("--threads must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Failure::Usage(e.to_string()))?;
    let output = pool.install(|| scatter_sweep(samples, &cfg))?;
    export_csv(&output.points, &output.summary, out)?;
    eprintln!(
        "wrote {} and {}",
        out.display(),
        summary_path(out).display()
    );
    println!(
        "{}",
        serde_json::to_string_pretty(&output.summary).expect("summary serializes")
    );
    Ok(())
}

fn cmd_complexity(eps: f64, delta: f64, slope: Option<f64>, json: bool) -> CmdResult {
    let n = sample_complexity(eps, delta, slope).map_err(|e| Failure::Usage(e.to_string()))?;
    if json {
        let v = serde_json::json!({ "eps": eps, "delta": delta, "slope": slope, "repetitions": n });
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{n}");
    }
    Ok(())
}

fn cmd_run(model: &Path, spec: SpecKind, n: u64, seed: u64, json: bool) -> CmdResult {
    let model = load_model(model)?;
    let res = run_protocol(&model, &spec.spec(), n, seed)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&res).expect("json"));
        return Ok(());
    }
    match res.verdict {
        Verdict::Accept => println!("accept after {} repetitions", res.repetitions_executed),
        Verdict::Reject => println!(
            "reject at repetition {}: sequence {} gave {}",
            res.repetitions_executed,
            res.failing_sequence.as_ref().expect("set on reject"),
            res.observed_outcome.expect("set on reject"),
        ),
    }
    Ok(())
}

fn cmd_universal(model: &Path, tol: f64, json: bool) -> CmdResult {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Failure::Usage(format!(
            "--tol must lie in (0, 1), got {tol}"
        )));
    }
    let model = load_model(model)?;
    let rep = verify_universal(&model, tol);
    if json {
        println!("{}", rep.to_json());
        return Ok(());
    }
    let width = rep
        .checks
        .iter()
        .map(|c| c.name.chars().count())
        .max()
        .unwrap_or(0);
    for c in &rep.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("{mark}  {:width$}  {}", c.name, c.detail);
    }
    println!();
    println!("verdict     {}", if rep.passed() { "pass" } else { "fail" });
    println!("conjugated  {}", rep.conjugated);
    println!("t branch    {}", rep.t_branch);
    Ok(())
}

fn dispatch(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Certify { model, spec, out } => cmd_certify(&model, spec, out.as_deref()),
        Command::Sweep {
            samples,
            seed,
            noise,
            p,
            gamma,
            alpha_min,
            alpha_max,
            threads,
            out,
        } => cmd_sweep(
            samples, seed, noise, p, gamma, alpha_min, alpha_max, threads, &out,
        ),
        Command::Complexity {
            eps,
            delta,
            slope,
            json,
        } => cmd_complexity(eps, delta, slope, json),
        Command::Run {
            model,
            spec,
            n,
            seed,
            json,
        } => cmd_run(&model, spec, n, seed, json),
        Command::Universal { model, tol, json } => cmd_universal(&model, tol, json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
