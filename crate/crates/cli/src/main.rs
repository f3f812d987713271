//! `pf`: p-norm estimation for truncated covariant convolution operators,
//! random-walk entropy reports, and the invariant-suite runner.
//!
//! Every run prints one canonical JSON report to stdout embedding the tool
//! version, the parsed config, and the seed; identical config and seed give
//! byte-identical output. Wall time and a memory estimate go to stderr.
//! Exit codes: 0 success, 2 precondition/parse error, 3 resource cap,
//! 4 internal invariant violation.

mod commands;

use clap::{Args, Parser, Subcommand};
use pf_core::Error;
use serde::Serialize;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "pf", version, about = "l^p-pseudofunction norms and entropy criteria", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the PF_p norm of an element file via its truncated operator
    Norm(NormArgs),
    /// Avez entropy and speed of a random walk, with extrapolations
    Entropy(EntropyArgs),
    /// Harish-Chandra Xi-function samples along geodesics
    Xi(XiArgs),
    /// Exoticness criteria (ii)/(iii) and their p-intervals
    Criteria(CriteriaArgs),
    /// Empirical Kahane-Khintchine moment ratios
    Kahane(KahaneArgs),
    /// Run the module invariant suites
    Check(CheckArgs),
}

#[derive(Args, Serialize)]
pub(crate) struct NormArgs {
    /// Group spec: free:<k>, cyclic:<n>, product:<spec>,<spec>
    #[arg(long)]
    pub group: String,
    /// Path to the element JSON file
    #[arg(long)]
    pub element: String,
    /// Exponent p in (1, oo)
    #[arg(long)]
    pub p: f64,
    /// Truncation radius R
    #[arg(long)]
    pub radius: usize,
    /// Amplification dimension m
    #[arg(long, default_value_t = 1)]
    pub amplify: usize,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "json")]
    pub format: String,
    /// Override the element memory cap (also PF_MEM_CAP)
    #[arg(long)]
    pub mem_cap: Option<usize>,
}

#[derive(Args, Serialize)]
pub(crate) struct EntropyArgs {
    #[arg(long)]
    pub group: String,
    /// srw, lazy:<q>, or a measure JSON file path
    #[arg(long)]
    pub measure: String,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    #[arg(long, default_value_t = 0)]
    pub mc_samples: usize,
    /// Horizon for the speed recursion (radial walks)
    #[arg(long, default_value_t = 2000)]
    pub speed_n: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Report entropies in bits instead of nats
    #[arg(long, default_value_t = false)]
    pub bits: bool,
    #[arg(long, default_value = "json")]
    pub format: String,
    #[arg(long)]
    pub mem_cap: Option<usize>,
}

#[derive(Args, Serialize)]
pub(crate) struct XiArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub measure: String,
    /// Inclusive length range, e.g. 0..8
    #[arg(long, default_value = "0..8")]
    pub lengths: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "json")]
    pub format: String,
    #[arg(long)]
    pub mem_cap: Option<usize>,
}

#[derive(Args, Serialize)]
pub(crate) struct CriteriaArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub measure: String,
    /// Furstenberg entropy of the stationary space (free parameter)
    #[arg(long)]
    pub hx: f64,
    /// Exponent p >= 2
    #[arg(long)]
    pub p: f64,
    /// Override the Avez entropy (otherwise estimated from the measure)
    #[arg(long)]
    pub h: Option<f64>,
    /// Override the speed (otherwise estimated from the measure)
    #[arg(long)]
    pub ell: Option<f64>,
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "json")]
    pub format: String,
    #[arg(long)]
    pub mem_cap: Option<usize>,
}

#[derive(Args, Serialize)]
pub(crate) struct KahaneArgs {
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value = "json")]
    pub format: String,
}

#[derive(Args, Serialize)]
pub(crate) struct CheckArgs {
    /// group, algebra, pnorm, rademacher, walk, or all
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = "json")]
    pub format: String,
}

#[derive(Serialize)]
struct Envelope<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    config: &'a C,
    seed: u64,
    result: serde_json::Value,
}

/// Outcome of a subcommand: the JSON result plus an optional CSV rendering
/// (sequence-valued reports only) and a memory high-water estimate.
pub(crate) struct RunOutput {
    pub result: serde_json::Value,
    pub csv: Option<String>,
    pub mem_estimate: usize,
    /// set by `check` when an invariant failed
    pub invariant_failure: bool,
}

impl RunOutput {
    pub fn json(result: serde_json::Value, mem_estimate: usize) -> Self {
        RunOutput {
            result,
            csv: None,
            mem_estimate,
            invariant_failure: false,
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Structural(_) | Error::Precondition(_) => 2,
        Error::Resource { .. } => 3,
        Error::Internal(_) => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Structural(_) => "structural",
        Error::Precondition(_) => "precondition",
        Error::Resource { .. } => "resource",
        Error::Internal(_) => "internal",
    }
}

pub(crate) fn resolve_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("PF_MEM_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(pf_core::group::DEFAULT_MEM_CAP)
}

fn emit<C: Serialize>(
    command: &'static str,
    config: &C,
    seed: u64,
    format: &str,
    out: RunOutput,
) -> i32 {
    match format {
        "json" => {
            let envelope = Envelope {
                tool: "pf",
                version: env!("CARGO_PKG_VERSION"),
                command,
                config,
                seed,
                result: out.result,
            };
            println!(
                "{}",
                serde_json::to_string(&envelope).expect("report serialization cannot fail")
            );
        }
        "csv" => match out.csv {
            Some(csv) => print!("{csv}"),
            None => {
                let e = Error::precondition(format!(
                    "--format csv is available only for sequence-valued reports, not `{command}`"
                ));
                return fail_with(&e);
            }
        },
        other => {
            let e = Error::precondition(format!("unknown format {other:?} (json or csv)"));
            return fail_with(&e);
        }
    }
    if out.invariant_failure {
        4
    } else {
        0
    }
}

fn fail_with(e: &Error) -> i32 {
    let obj = serde_json::json!({
        "error": { "kind": error_kind(e), "message": e.to_string() }
    });
    println!("{obj}");
    exit_code(e)
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let (code, mem) = match &cli.command {
        Command::Norm(args) => run(args, "norm", args.seed, &args.format, commands::norm),
        Command::Entropy(args) => run(args, "entropy", args.seed, &args.format, commands::entropy),
        Command::Xi(args) => run(args, "xi", args.seed, &args.format, commands::xi),
        Command::Criteria(args) => {
            run(args, "criteria", args.seed, &args.format, commands::criteria)
        }
        Command::Kahane(args) => run(args, "kahane", args.seed, &args.format, commands::kahane),
        Command::Check(args) => run(args, "check", args.seed, &args.format, commands::check),
    };
    eprintln!(
        "pf: wall_ms={} mem_estimate_bytes={}",
        start.elapsed().as_millis(),
        mem
    );
    std::process::exit(code);
}

fn run<A: Serialize>(
    args: &A,
    name: &'static str,
    seed: u64,
    format: &str,
    f: impl Fn(&A) -> pf_core::Result<RunOutput>,
) -> (i32, usize) {
    match f(args) {
        Ok(out) => {
            let mem = out.mem_estimate;
            (emit(name, args, seed, format, out), mem)
        }
        Err(e) => (fail_with(&e), 0),
    }
}
