//! `repliq simulate`: Monte Carlo success rates checked against the analytic value.

use std::io::Write;
use std::path::PathBuf;

use clap::ValueEnum;
use repliq::mc::{simulate_rule, Rule, Scenario, DEFAULT_N_SIM};
use repliq::{sceptical, two_trials};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{json_lines, num, Format, Table};

/// Environment variable that overrides every other seed source.
pub const SEED_ENV: &str = "REPLIQ_SEED";

/// Tolerance, in standard errors, for the analytic cross-check.
const AGREEMENT_SE: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    TwoTrials,
    Sceptical,
    Both,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// JSON file with theta_o, theta_r, delta, sigma_o, sigma_r[, n_sim, seed]
    #[arg(long, conflicts_with_all = ["theta_o", "theta_r", "delta", "sigma_o", "sigma_r"])]
    scenario: Option<PathBuf>,
    /// True original effect
    #[arg(long)]
    theta_o: Option<f64>,
    /// True replication effect
    #[arg(long)]
    theta_r: Option<f64>,
    /// Equivalence margin
    #[arg(long)]
    delta: Option<f64>,
    /// Original standard error
    #[arg(long)]
    sigma_o: Option<f64>,
    /// Replication standard error
    #[arg(long)]
    sigma_r: Option<f64>,
    /// Which rule to simulate
    #[arg(long, value_enum, default_value = "both")]
    rule: RuleArg,
    /// Number of replicates (overrides the scenario file)
    #[arg(long)]
    n_sim: Option<u64>,
    /// Random seed (overrides the scenario file; REPLIQ_SEED overrides both)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct SimRow {
    rule: Rule,
    rate: f64,
    std_err: f64,
    n_sim: u64,
    seed: u64,
    analytic: f64,
    z: f64,
    agrees: bool,
}

fn load(args: &Args) -> CliResult<Scenario> {
    let mut scenario = match &args.scenario {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<Scenario>(&text)
                .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
        }
        None => match (args.theta_o, args.theta_r, args.delta, args.sigma_o, args.sigma_r) {
            (Some(theta_o), Some(theta_r), Some(delta), Some(sigma_o), Some(sigma_r)) => {
                Scenario { theta_o, theta_r, delta, sigma_o, sigma_r, n_sim: DEFAULT_N_SIM, seed: 0 }
            }
            _ => {
                return Err(CliError::Usage(
                    "give --scenario FILE, or all of --theta-o --theta-r --delta --sigma-o --sigma-r".to_string(),
                ))
            }
        },
    };
    if let Some(n) = args.n_sim {
        scenario.n_sim = n;
    }
    if let Some(s) = args.seed {
        scenario.seed = s;
    }
    if let Ok(raw) = std::env::var(SEED_ENV) {
        scenario.seed = raw
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} = {raw:?} is not an unsigned integer")))?;
    }
    let invalid = scenario.invalid_fields();
    if !invalid.is_empty() {
        return Err(CliError::Input(format!("invalid scenario fields: {}", invalid.join(", "))));
    }
    Ok(scenario)
}

fn simulate(scenario: &Scenario, rule: Rule, alpha: f64) -> CliResult<SimRow> {
    let est = simulate_rule(scenario, rule, alpha)?;
    let truth = scenario.truth();
    let analytic = match rule {
        Rule::TwoTrials => two_trials::success_probability(&truth, alpha)?,
        Rule::Sceptical => sceptical::success_probability(&truth, alpha)?,
    };
    let se = est.std_err.max(1.0 / est.n_sim as f64);
    Ok(SimRow {
        rule,
        rate: est.rate,
        std_err: est.std_err,
        n_sim: est.n_sim,
        seed: scenario.seed,
        analytic,
        z: (est.rate - analytic) / se,
        agrees: est.agrees_with(analytic, AGREEMENT_SE),
    })
}

pub fn run(args: &Args, alpha: f64, format: Format, out: &mut impl Write) -> CliResult<()> {
    let scenario = load(args)?;
    let rules: &[Rule] = match args.rule {
        RuleArg::TwoTrials => &[Rule::TwoTrials],
        RuleArg::Sceptical => &[Rule::Sceptical],
        RuleArg::Both => &[Rule::TwoTrials, Rule::Sceptical],
    };
    let rows = rules.iter().map(|&r| simulate(&scenario, r, alpha)).collect::<CliResult<Vec<_>>>()?;
    match format {
        Format::Json => json_lines(out, &rows),
        Format::Table => {
            let mut table = Table::new(vec!["rule", "rate", "std_err", "analytic", "z", "n_sim", "seed", "check"]);
            for r in &rows {
                table.push(vec![
                    serde_json::to_value(r.rule).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
                    num(r.rate),
                    num(r.std_err),
                    num(r.analytic),
                    format!("{:.2}", r.z),
                    r.n_sim.to_string(),
                    r.seed.to_string(),
                    if r.agrees { "PASS" } else { "FAIL" }.to_string(),
                ]);
            }
            write!(out, "{}", table.render())?;
            Ok(())
        }
    }
}
