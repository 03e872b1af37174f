//! `repliq`: analyse and design replication studies with an equivalence
//! design under the two-trials rule and the sceptical TOST procedure.

mod analyze;
mod design;
mod error;
mod ingest;
mod oc;
mod output;
mod simulate;

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use error::{CliError, CliResult};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "repliq", version, about = "Equivalence replication studies: analysis, design and operating characteristics")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,

    /// One-sided significance level
    #[arg(long, global = true, default_value_t = repliq::DEFAULT_ALPHA, value_parser = parse_alpha)]
    alpha: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide replication success for completed study pairs
    Analyze(analyze::Args),
    /// Relative sample size of a replication for a target power
    Design(design::Args),
    /// Operating characteristics over a grid
    Oc(oc::Args),
    /// Monte Carlo success rate of a rule for a known truth
    Simulate(simulate::Args),
}

/// Equivalence margin: `strict` (0.18), `liberal` (0.36) or a positive number.
pub fn parse_margin(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "strict" => Ok(repliq::STRICT_MARGIN),
        "liberal" => Ok(repliq::LIBERAL_MARGIN),
        other => match other.parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
            _ => Err(format!("margin must be strict, liberal or a positive number, got {s:?}")),
        },
    }
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(a) if a > 0.0 && a < 0.5 => Ok(a),
        _ => Err(format!("alpha must lie in (0, 0.5), got {s:?}")),
    }
}

fn run(cli: Cli, out: &mut impl Write) -> CliResult<()> {
    match cli.command {
        Command::Analyze(args) => analyze::run(&args, cli.alpha, cli.format, out),
        Command::Design(args) => design::run(&args, cli.alpha, cli.format, out),
        Command::Oc(args) => oc::run(&args, cli.alpha, cli.format, out),
        Command::Simulate(args) => simulate::run(&args, cli.alpha, cli.format, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut out).and_then(|_| out.flush().map_err(CliError::from)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("repliq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
