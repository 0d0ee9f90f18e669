//! `sgcat`: singularity-category invariants from the command line.
//!
//! Exit codes: 0 ok, 1 certificate verification failed, 2 bad input,
//! 3 internal invariant breach.

mod commands;
mod input;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SGCAT_OUT_DIR";

#[derive(Debug)]
pub enum CliError {
    Verification(String),
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    /// Library error with the offending input named.
    pub fn located(what: &str, e: sgcat::Error) -> CliError {
        let msg = format!("{what}: {e}");
        if e.is_internal() {
            CliError::Internal(msg)
        } else if matches!(e, sgcat::Error::Verification(_)) {
            CliError::Verification(msg)
        } else {
            CliError::Input(msg)
        }
    }
}

impl From<sgcat::Error> for CliError {
    fn from(e: sgcat::Error) -> CliError {
        if e.is_internal() {
            CliError::Internal(e.to_string())
        } else if matches!(e, sgcat::Error::Verification(_)) {
            CliError::Verification(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "sgcat", version, about = "Exact singularity-category invariants of finite-dimensional algebras")]
struct Cli {
    /// Report path. Defaults to $SGCAT_OUT_DIR/<command>.json, else stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Recorded in every report.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
pub struct AlgebraArg {
    /// Algebra JSON file, or `corpus:NAME`.
    #[arg(long, short = 'a')]
    pub algebra: String,
}

#[derive(Args, Debug, Serialize)]
pub struct ChainKnobs {
    /// Syzygy cutoff K.
    #[arg(long, default_value_t = 12)]
    pub cutoff: usize,
    /// Stabilization window.
    #[arg(long, default_value_t = 3)]
    pub window: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct LengthKnobs {
    /// Word-length truncation for cycles.
    #[arg(long, default_value_t = 8)]
    pub lmax: usize,
    /// Word-length truncation for boundaries.
    #[arg(long, default_value_t = 4)]
    pub mmax: usize,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Dimension, simples, projectives, pd of the top and the trichotomy verdict.
    Analyze {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        #[command(flatten)]
        #[serde(flatten)]
        knobs: ChainKnobs,
        /// Shift range for the trichotomy probe.
        #[arg(long, default_value_t = 5)]
        range: i64,
    },
    /// Dimensions of Hom(M, Σ^{nd} M) in the singularity category for |n| ≤ range.
    Gamma {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        /// `top`, `regular`, `simple:V`, `projective:V` or a module JSON file.
        #[arg(long, default_value = "top")]
        module: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 5)]
        range: i64,
        #[command(flatten)]
        #[serde(flatten)]
        knobs: ChainKnobs,
    },
    /// Search for a virtual d-periodicity certificate.
    CertifyVp {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value = "top")]
        module: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value_t = 12)]
        cutoff: usize,
        /// Closure search: largest module dimension.
        #[arg(long, default_value_t = 64)]
        max_dim: usize,
        /// Closure search: extension depth.
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        /// Closure search: number of isoclasses kept.
        #[arg(long, default_value_t = 256)]
        max_classes: usize,
    },
    /// Look for n ≥ 1 with Hom(X, Σ^n X) ≠ 0 in the singularity category.
    Presilting {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value = "top")]
        module: String,
        #[arg(long, default_value_t = 5)]
        nmax: i64,
        #[command(flatten)]
        #[serde(flatten)]
        knobs: ChainKnobs,
    },
    /// Leavitt presentation, dg axiom check and cohomology approximants.
    Leavitt {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = 5)]
        range: i64,
        #[command(flatten)]
        #[serde(flatten)]
        lengths: LengthKnobs,
        /// Word length for the dg axiom check.
        #[arg(long, default_value_t = 6)]
        axioms: usize,
    },
    /// Compare Leavitt cohomology with Hom(Λ₀, Σ^n Λ₀) degree by degree.
    Crosscheck {
        #[command(flatten)]
        #[serde(flatten)]
        alg: AlgebraArg,
        #[arg(long, default_value_t = 5)]
        range: i64,
        #[command(flatten)]
        #[serde(flatten)]
        lengths: LengthKnobs,
        #[command(flatten)]
        #[serde(flatten)]
        knobs: ChainKnobs,
    },
    /// Replay certificates (bare, or inside a certify-vp report).
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::Gamma { .. } => "gamma",
            Command::CertifyVp { .. } => "certify-vp",
            Command::Presilting { .. } => "presilting",
            Command::Leavitt { .. } => "leavitt",
            Command::Crosscheck { .. } => "crosscheck",
            Command::Verify { .. } => "verify",
        }
    }
}

fn write_report(cli: &Cli, report: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    let path = match (&cli.out, std::env::var_os(OUT_DIR_ENV)) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => Some(PathBuf::from(dir).join(format!("{}.json", cli.command.name()))),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|e| CliError::Input(format!("{}: {e}", parent.display())))?;
            }
            fs::write(&p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
            if cli.verbose > 0 {
                eprintln!("wrote {}", p.display());
            }
        }
        None => {
            std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?;
        }
    }
    Ok(())
}

/// The subcommand's own options, without the enum tag.
fn config(cmd: &Command) -> Value {
    match serde_json::to_value(cmd).expect("config serializes") {
        Value::Object(mut m) => m.remove(cmd.name()).unwrap_or(Value::Null),
        v => v,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = commands::run(&cli.command);
    let (result, failure) = match outcome {
        Ok(r) => (Some(r), None),
        // verify still reports which files failed
        Err((partial, e)) => (partial, Some(e)),
    };
    if let Some(result) = result {
        let report = json!({
            "tool": "sgcat",
            "version": env!("CARGO_PKG_VERSION"),
            "command": cli.command.name(),
            "config": config(&cli.command),
            "seed": cli.seed,
            "result": result,
        });
        if let Err(e) = write_report(&cli, &report) {
            eprintln!("sgcat: {e}");
            return ExitCode::from(e.exit_code());
        }
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("sgcat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
