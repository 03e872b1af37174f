//! `repliq design`: replication sample size for a target power.

use std::io::Write;

use clap::ValueEnum;
use repliq::{sceptical, two_trials, DesignInput, Error, PowerFlavor, StudyResult};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{json_lines, num, opt, Format, Table};
use crate::parse_margin;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Flavor {
    Conditional,
    Predictive,
}

impl From<Flavor> for PowerFlavor {
    fn from(f: Flavor) -> Self {
        match f {
            Flavor::Conditional => PowerFlavor::Conditional,
            Flavor::Predictive => PowerFlavor::Predictive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Both,
    Sceptical,
    TwoTrials,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// One-sided p-value of the original study against the upper margin
    #[arg(long, requires = "f_o", conflicts_with_all = ["theta_o", "se_o"])]
    p_o_plus: Option<f64>,
    /// Original estimate in margin units, in [0, 1)
    #[arg(long)]
    f_o: Option<f64>,

    /// Original effect estimate
    #[arg(long, requires = "se_o")]
    theta_o: Option<f64>,
    /// Original standard error
    #[arg(long)]
    se_o: Option<f64>,
    /// Equivalence margin when the original is given as an estimate
    #[arg(long, default_value = "liberal", value_parser = parse_margin)]
    margin: f64,

    /// Target power
    #[arg(long, default_value_t = 0.8)]
    target: f64,
    /// Power definition
    #[arg(long, value_enum, default_value = "conditional")]
    flavor: Flavor,
    /// Which method(s) to size
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    /// Size a two-trials replication even when the original is not significant
    #[arg(long)]
    allow_nonsignificant: bool,
    /// Relative sample size actually used, for comparison
    #[arg(long)]
    actual_c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Ok,
    Refused,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct DesignRow {
    method: &'static str,
    flavor: PowerFlavor,
    p_o_plus: f64,
    f_o: f64,
    target: f64,
    status: Status,
    required_c: Option<f64>,
    conditional_t1e: Option<f64>,
    power_supremum: Option<f64>,
    note: Option<String>,
}

fn design_input(args: &Args, alpha: f64) -> CliResult<DesignInput> {
    let flavor = args.flavor.into();
    if let (Some(p), Some(f)) = (args.p_o_plus, args.f_o) {
        return Ok(DesignInput::new(p, f, alpha, args.target, flavor)?);
    }
    if let (Some(t), Some(s)) = (args.theta_o, args.se_o) {
        return Ok(DesignInput::from_study(StudyResult::new(t, s)?, args.margin, alpha, args.target, flavor)?);
    }
    Err(CliError::Usage("give --p-o-plus with --f-o, or --theta-o with --se-o".to_string()))
}

fn size(
    method: &'static str,
    design: &DesignInput,
    outcome: repliq::Result<f64>,
    t1e: impl Fn(f64) -> repliq::Result<f64>,
    actual_c: Option<f64>,
) -> CliResult<DesignRow> {
    let mut row = DesignRow {
        method,
        flavor: design.power_flavor,
        p_o_plus: design.p_o_plus,
        f_o: design.f_o,
        target: design.target_power,
        status: Status::Ok,
        required_c: None,
        conditional_t1e: None,
        power_supremum: None,
        note: None,
    };
    match outcome {
        Ok(c) => {
            row.required_c = Some(c);
            row.conditional_t1e = Some(t1e(c)?);
            if let Some(actual) = actual_c {
                let relation = if actual < c { "smaller" } else { "not smaller" };
                row.note = Some(format!("actual c = {} is {relation} than required", num(actual)));
            }
        }
        Err(Error::Refused(msg)) => {
            row.status = Status::Refused;
            row.note = Some(msg);
        }
        Err(Error::Infeasible { supremum, .. }) => {
            row.status = Status::Infeasible;
            row.power_supremum = Some(supremum);
            row.note = Some(format!("power never exceeds {}", num(supremum)));
        }
        Err(e) => return Err(e.into()),
    }
    Ok(row)
}

pub fn run(args: &Args, alpha: f64, format: Format, out: &mut impl Write) -> CliResult<()> {
    if let Some(c) = args.actual_c {
        if !(c > 0.0 && c.is_finite()) {
            return Err(CliError::Usage(format!("--actual-c must be positive, got {c}")));
        }
    }
    let design = design_input(args, alpha)?;
    let mut rows = Vec::new();
    if matches!(args.method, Method::Both | Method::TwoTrials) {
        let c = two_trials::required_c_with(&design, args.allow_nonsignificant);
        let t1e = |c| two_trials::conditional_t1e_at(&design.with_flavor(PowerFlavor::Conditional), c);
        rows.push(size("two-trials", &design, c, t1e, args.actual_c)?);
    }
    if matches!(args.method, Method::Both | Method::Sceptical) {
        let c = sceptical::required_c(&design);
        let t1e = |c| sceptical::conditional_t1e_at(&design.with_flavor(PowerFlavor::Conditional), c);
        rows.push(size("sceptical", &design, c, t1e, args.actual_c)?);
    }
    match format {
        Format::Json => json_lines(out, &rows),
        Format::Table => {
            let mut table =
                Table::new(vec!["method", "flavor", "p_o_plus", "f_o", "target", "status", "required_c", "cond_t1e", "note"]);
            for r in &rows {
                table.push(vec![
                    r.method.to_string(),
                    format!("{:?}", r.flavor).to_lowercase(),
                    num(r.p_o_plus),
                    num(r.f_o),
                    num(r.target),
                    format!("{:?}", r.status).to_lowercase(),
                    opt(r.required_c),
                    opt(r.conditional_t1e),
                    r.note.clone().unwrap_or_default(),
                ]);
            }
            write!(out, "{}", table.render())?;
            Ok(())
        }
    }
}
