//! `repliq analyze`: success decisions for completed study pairs.

use std::io::Write;
use std::path::PathBuf;

use repliq::tost::fisher_transform;
use repliq::{sceptical, two_trials, CorrelationStudy, EquivalenceProblem, StudyResult};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::ingest::{read_studies, ColumnMap, StudyRecord};
use crate::output::{json_lines, num, yes_no, Format, Table};
use crate::parse_margin;

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
pub struct Args {
    /// CSV file with columns id,r_o,n_o,r_r,n_r[,delta]
    #[arg(long, conflicts_with_all = ["theta_o", "r_o"])]
    input: Option<PathBuf>,

    /// Header mapping for the CSV, e.g. `r_o=orig_r,n_o=orig_n`
    #[arg(long, requires = "input", value_parser = ColumnMap::parse)]
    columns: Option<ColumnMap>,

    /// Equivalence margin used when a row gives no delta
    #[arg(long, default_value = "liberal", value_parser = parse_margin)]
    margin: f64,

    /// Label for a pair given on the command line
    #[arg(long, default_value = "study")]
    id: String,

    /// Original effect estimate
    #[arg(long, requires_all = ["se_o", "theta_r", "se_r"], conflicts_with = "r_o")]
    theta_o: Option<f64>,
    /// Original standard error
    #[arg(long)]
    se_o: Option<f64>,
    /// Replication effect estimate
    #[arg(long)]
    theta_r: Option<f64>,
    /// Replication standard error
    #[arg(long)]
    se_r: Option<f64>,

    /// Original correlation
    #[arg(long, requires_all = ["n_o", "r_r", "n_r"])]
    r_o: Option<f64>,
    /// Original sample size
    #[arg(long)]
    n_o: Option<u64>,
    /// Replication correlation
    #[arg(long)]
    r_r: Option<f64>,
    /// Replication sample size
    #[arg(long)]
    n_r: Option<u64>,
}

/// Decisions of both methods for one study pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub id: String,
    pub theta_o: f64,
    pub se_o: f64,
    pub theta_r: f64,
    pub se_r: f64,
    pub delta: f64,
    pub c: f64,
    pub p_o_max: f64,
    pub p_r_max: f64,
    pub p_max: f64,
    pub two_trials_success: bool,
    pub p_s_minus: f64,
    pub p_s_plus: f64,
    pub p_s_max: f64,
    pub sceptical_success: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct RowError {
    id: String,
    row: Option<usize>,
    error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
enum Entry {
    Report(ReportRow),
    Error(RowError),
}

pub fn report(id: &str, problem: &EquivalenceProblem, alpha: f64) -> repliq::Result<ReportRow> {
    let tt = two_trials::decide(problem, alpha)?;
    let sc = sceptical::decide(problem, alpha)?;
    Ok(ReportRow {
        id: id.to_string(),
        theta_o: problem.original.estimate,
        se_o: problem.original.std_err,
        theta_r: problem.replication.estimate,
        se_r: problem.replication.std_err,
        delta: problem.margin,
        c: problem.variance_ratio(),
        p_o_max: tt.p_o_max,
        p_r_max: tt.p_r_max,
        p_max: tt.p_max,
        two_trials_success: tt.success,
        p_s_minus: sc.p_s_minus,
        p_s_plus: sc.p_s_plus,
        p_s_max: sc.p_s_max,
        sceptical_success: sc.success,
    })
}

fn record_problem(rec: &StudyRecord, margin: f64) -> repliq::Result<EquivalenceProblem> {
    let original = fisher_transform(CorrelationStudy { r: rec.r_o, n: rec.n_o })?;
    let replication = fisher_transform(CorrelationStudy { r: rec.r_r, n: rec.n_r })?;
    EquivalenceProblem::new(original, replication, rec.delta.unwrap_or(margin))
}

fn entries(args: &Args, alpha: f64) -> CliResult<Vec<Entry>> {
    let analyse = |id: &str, row: Option<usize>, problem: repliq::Result<EquivalenceProblem>| {
        match problem.and_then(|p| report(id, &p, alpha)) {
            Ok(r) => Entry::Report(r),
            Err(e) => Entry::Error(RowError { id: id.to_string(), row, error: e.to_string() }),
        }
    };
    if let Some(path) = &args.input {
        let columns = args.columns.clone().unwrap_or_default();
        let (records, issues) = read_studies(path, &columns)?;
        let mut out: Vec<(usize, Entry)> = records
            .iter()
            .map(|rec| (rec.row, analyse(&rec.id, Some(rec.row), record_problem(rec, args.margin))))
            .collect();
        out.extend(issues.into_iter().map(|i| {
            let id = i.id.unwrap_or_else(|| format!("row{}", i.row));
            (i.row, Entry::Error(RowError { id, row: Some(i.row), error: i.message }))
        }));
        out.sort_by_key(|(row, _)| *row);
        return Ok(out.into_iter().map(|(_, e)| e).collect());
    }
    if let (Some(to), Some(so), Some(tr), Some(sr)) = (args.theta_o, args.se_o, args.theta_r, args.se_r) {
        let problem = StudyResult::new(to, so)
            .and_then(|o| EquivalenceProblem::new(o, StudyResult::new(tr, sr)?, args.margin))
            .map_err(CliError::from)?;
        return Ok(vec![Entry::Report(report(&args.id, &problem, alpha)?)]);
    }
    if let (Some(r_o), Some(n_o), Some(r_r), Some(n_r)) = (args.r_o, args.n_o, args.r_r, args.n_r) {
        let rec = StudyRecord { row: 1, id: args.id.clone(), r_o, n_o, r_r, n_r, delta: None };
        let problem = record_problem(&rec, args.margin)?;
        return Ok(vec![Entry::Report(report(&args.id, &problem, alpha)?)]);
    }
    Err(CliError::Usage(
        "give --input FILE, or --theta-o/--se-o/--theta-r/--se-r, or --r-o/--n-o/--r-r/--n-r".to_string(),
    ))
}

pub fn run(args: &Args, alpha: f64, format: Format, out: &mut impl Write) -> CliResult<()> {
    let entries = entries(args, alpha)?;
    match format {
        Format::Json => json_lines(out, &entries),
        Format::Table => {
            let mut table = Table::new(vec![
                "id", "theta_o", "se_o", "theta_r", "se_r", "delta", "c", "p_max", "two_trials", "p_s_max", "sceptical",
            ]);
            let mut errors = Vec::new();
            for entry in &entries {
                match entry {
                    Entry::Report(r) => table.push(vec![
                        r.id.clone(),
                        num(r.theta_o),
                        num(r.se_o),
                        num(r.theta_r),
                        num(r.se_r),
                        num(r.delta),
                        num(r.c),
                        num(r.p_max),
                        yes_no(r.two_trials_success),
                        num(r.p_s_max),
                        yes_no(r.sceptical_success),
                    ]),
                    Entry::Error(e) => errors.push(e),
                }
            }
            write!(out, "{}", table.render())?;
            for e in errors {
                match e.row {
                    Some(row) => writeln!(out, "error: row {row} ({}): {}", e.id, e.error)?,
                    None => writeln!(out, "error: {}: {}", e.id, e.error)?,
                }
            }
            Ok(())
        }
    }
}
