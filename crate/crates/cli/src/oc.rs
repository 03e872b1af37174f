//! `repliq oc`: operating characteristics evaluated over a grid.

use std::io::Write;

use clap::ValueEnum;
use repliq::{sceptical, two_trials, DesignInput, Error, Execution, PowerFlavor};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::output::{json_lines, num, opt, Format, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    /// Success probability with both true effects zero, over c
    ProjectPower,
    /// Success probability with both true effects on the margin, over c
    OverallT1e,
    /// Success probability with θ_o = 0 and θ_r = δ, over c
    PartialT1e,
    /// Largest original p-value compatible with success, over c
    BoundsPo,
    /// Largest replication p-value compatible with success, over c
    BoundsPr,
    /// Conditional Type-I error at the designed c, over p_o_plus
    CondT1e,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Log,
    Linear,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// Which curve to evaluate
    #[arg(long, value_enum)]
    curve: Curve,
    /// First grid value (c, or p_o_plus for cond-t1e)
    #[arg(long)]
    from: Option<f64>,
    /// Last grid value
    #[arg(long)]
    to: Option<f64>,
    /// Number of grid points
    #[arg(long, default_value_t = 25)]
    points: usize,
    /// Grid spacing
    #[arg(long, value_enum, default_value = "log")]
    scale: Scale,
    /// Type-II error of the original study at θ = 0
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    /// Estimates in margin units (bounds and cond-t1e curves)
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,0.9")]
    f_o: Vec<f64>,
    /// Conditional power used to size the replication (cond-t1e)
    #[arg(long, default_value_t = 0.8)]
    target: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct OcRow {
    curve: Curve,
    x_name: &'static str,
    x: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<f64>,
    two_trials: Option<f64>,
    sceptical: Option<f64>,
}

fn grid(args: &Args, alpha: f64) -> CliResult<Vec<f64>> {
    let (lo, hi) = match args.curve {
        Curve::CondT1e => (args.from.unwrap_or(1e-4), args.to.unwrap_or(alpha * 0.999)),
        _ => (args.from.unwrap_or(0.1), args.to.unwrap_or(10.0)),
    };
    let bad = |m: String| Err(CliError::Usage(m));
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && lo <= hi) {
        return bad(format!("grid needs 0 < from <= to, got from = {lo}, to = {hi}"));
    }
    if args.curve == Curve::CondT1e && hi >= 1.0 {
        return bad(format!("p_o_plus grid must stay below 1, got to = {hi}"));
    }
    if args.points == 0 || (args.points == 1 && lo != hi) {
        return bad(format!("{} point(s) cannot span [{lo}, {hi}]", args.points));
    }
    if args.points == 1 {
        return Ok(vec![lo]);
    }
    let n = (args.points - 1) as f64;
    Ok((0..args.points)
        .map(|i| {
            let t = i as f64 / n;
            match args.scale {
                Scale::Log => (lo.ln() + (hi.ln() - lo.ln()) * t).exp(),
                Scale::Linear => lo + (hi - lo) * t,
            }
        })
        .collect())
}

/// `Refused` means the method has no value at this point.
fn optional(r: repliq::Result<f64>) -> repliq::Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Refused(_)) | Err(Error::Infeasible { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn evaluate(curve: Curve, x: f64, f: Option<f64>, args: &Args, alpha: f64) -> repliq::Result<OcRow> {
    let beta = args.beta;
    let (x_name, tt, sc) = match curve {
        Curve::ProjectPower => ("c", two_trials::project_power(beta, x, alpha)?, sceptical::project_power(beta, x, alpha)?),
        Curve::OverallT1e => ("c", two_trials::overall_t1e(beta, x, alpha)?, sceptical::overall_t1e(beta, x, alpha)?),
        Curve::PartialT1e => ("c", two_trials::partial_t1e(beta, x, alpha)?, sceptical::partial_t1e(beta, x, alpha)?),
        Curve::BoundsPo => {
            let f = f.expect("bounds rows carry f");
            ("c", two_trials::bound_po_plus(f, x, alpha)?, sceptical::bound_po_plus(f, x, alpha)?)
        }
        Curve::BoundsPr => {
            let f = f.expect("bounds rows carry f");
            ("c", two_trials::bound_pr_plus(f, x, alpha)?, sceptical::bound_pr_plus(f, x, alpha)?)
        }
        Curve::CondT1e => {
            let design = DesignInput::new(x, f.expect("cond-t1e rows carry f"), alpha, args.target, PowerFlavor::Conditional)?;
            let tt = optional(two_trials::required_c(&design).and_then(|c| two_trials::conditional_t1e_at(&design, c)))?;
            let sc = optional(sceptical::conditional_t1e(&design))?;
            return Ok(OcRow { curve, x_name: "p_o_plus", x, f: Some(design.f_o), two_trials: tt, sceptical: sc });
        }
    };
    Ok(OcRow { curve, x_name, x, f, two_trials: Some(tt), sceptical: Some(sc) })
}

pub fn run(args: &Args, alpha: f64, format: Format, out: &mut impl Write) -> CliResult<()> {
    if !(args.beta > 0.0 && args.beta < 1.0) {
        return Err(CliError::Usage(format!("--beta must lie in (0, 1), got {}", args.beta)));
    }
    if !(args.target > 0.0 && args.target < 1.0) {
        return Err(CliError::Usage(format!("--target must lie in (0, 1), got {}", args.target)));
    }
    let xs = grid(args, alpha)?;
    let per_f = matches!(args.curve, Curve::BoundsPo | Curve::BoundsPr | Curve::CondT1e);
    if per_f {
        if let Some(f) = args.f_o.iter().find(|f| !(0.0..1.0).contains(*f)) {
            return Err(CliError::Usage(format!("--f-o values must lie in [0, 1), got {f}")));
        }
    }
    let points: Vec<(f64, Option<f64>)> = if per_f {
        args.f_o.iter().flat_map(|&f| xs.iter().map(move |&x| (x, Some(f)))).collect()
    } else {
        xs.iter().map(|&x| (x, None)).collect()
    };
    let results = Execution::default().map(&points, |&(x, f)| evaluate(args.curve, x, f, args, alpha));
    let rows = results.into_iter().collect::<repliq::Result<Vec<_>>>()?;

    match format {
        Format::Json => json_lines(out, &rows),
        Format::Table => {
            let x_name = rows.first().map_or("x", |r| r.x_name);
            let mut table = Table::new(if per_f {
                vec![x_name, "f", "two_trials", "sceptical"]
            } else {
                vec![x_name, "two_trials", "sceptical"]
            });
            for r in &rows {
                let mut cells = vec![num(r.x)];
                if per_f {
                    cells.push(opt(r.f));
                }
                cells.push(opt(r.two_trials));
                cells.push(opt(r.sceptical));
                table.push(cells);
            }
            write!(out, "{}", table.render())?;
            Ok(())
        }
    }
}
