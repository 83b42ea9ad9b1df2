use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use superball::geometry::GreedyParams;
use superball::Method;
use superball_cli::commands::{self, emit, json_line, OutputFormat};
use superball_cli::curve::{DEFAULT_P_MAX, DEFAULT_P_MIN, DEFAULT_SAMPLES};
use superball_cli::verify::{Fault, Level, VerifyOptions, DEFAULT_SEED};
use superball_cli::CliError;

/// Upper bounds on the packing exponent of ℓp balls.
#[derive(Debug, Parser)]
#[command(name = "superball", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    New,
    Rankin,
    #[value(name = "kl_transfer", alias = "kl-transfer")]
    KlTransfer,
    Vdcs,
    Composite,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::New => Method::New,
            MethodArg::Rankin => Method::Rankin,
            MethodArg::KlTransfer => Method::KlTransfer,
            MethodArg::Vdcs => Method::Vdcs,
            MethodArg::Composite => Method::Composite,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> OutputFormat {
        match f {
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Text => OutputFormat::Text,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FaultArg {
    TransferExponent,
}

#[derive(Debug, clap::Args)]
struct Range {
    #[arg(long, default_value_t = DEFAULT_P_MIN)]
    p_min: f64,
    #[arg(long, default_value_t = DEFAULT_P_MAX)]
    p_max: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one bound at one p.
    Bound {
        #[arg(long)]
        p: f64,
        #[arg(long, value_enum, default_value = "composite")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
    /// Tabulate every bound over a range of p as CSV.
    Curve {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Plot the previous and improved bounds as SVG.
    Figure {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a greedy ℓp spherical code and export it as JSON.
    Codes {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        d: f64,
        #[arg(long, default_value_t = GreedyParams::DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, env = "SUPERBALL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every property suite.
    Verify {
        #[arg(long, env = "SUPERBALL_SEED", default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Bound { p, method, format } => {
            let report = commands::bound(p, method.into())?;
            emit(None, &commands::render_bound(&report, format.into()))?;
        }
        Command::Curve { range, out } => {
            let csv = commands::curve(range.p_min, range.p_max, range.samples)?;
            emit(out.as_deref(), &csv)?;
        }
        Command::Figure { range, out } => {
            let svg = commands::figure(range.p_min, range.p_max, range.samples)?;
            emit(out.as_deref(), &svg)?;
        }
        Command::Codes { n, p, d, trials, seed, out } => {
            let witness = commands::codes(n, p, d, trials, seed)?;
            emit(out.as_deref(), &json_line(&witness))?;
        }
        Command::Verify { seed, level, format, out, inject_fault } => {
            let report = commands::run_verify(VerifyOptions {
                seed,
                level: match level {
                    LevelArg::Quick => Level::Quick,
                    LevelArg::Full => Level::Full,
                },
                fault: inject_fault.map(|FaultArg::TransferExponent| Fault::TransferExponent),
            });
            let rendered = match format {
                FormatArg::Json => json_line(&report),
                FormatArg::Text => report.to_text(),
            };
            emit(out.as_deref(), &rendered)?;
            if let Some(failed) = report.first_failure() {
                eprintln!(
                    "verification failed in {}: {}",
                    failed.name,
                    failed.first_counterexample.as_deref().unwrap_or("no counterexample recorded")
                );
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
