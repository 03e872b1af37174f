//! CSV ingestion of study pairs reported as correlations.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// One CSV row before validation.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRecord {
    pub row: usize,
    pub id: String,
    pub r_o: f64,
    pub n_o: u64,
    pub r_r: f64,
    pub n_r: u64,
    pub delta: Option<f64>,
}

/// A row that could not be parsed, with its 1-based data row number.
#[derive(Debug, Clone, PartialEq)]
pub struct RowIssue {
    pub row: usize,
    pub id: Option<String>,
    pub message: String,
}

const KEYS: [&str; 6] = ["id", "r_o", "n_o", "r_r", "n_r", "delta"];
const REQUIRED: [&str; 4] = ["r_o", "n_o", "r_r", "n_r"];

/// Maps logical column names to CSV headers.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMap(HashMap<&'static str, String>);

impl Default for ColumnMap {
    fn default() -> Self {
        Self(KEYS.iter().map(|&k| (k, k.to_string())).collect())
    }
}

impl ColumnMap {
    /// Parses `key=header,...`; unmentioned keys keep their default header.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let mut map = Self::default();
        for pair in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, header) = pair
                .split_once('=')
                .ok_or_else(|| format!("column mapping {pair:?} is not of the form key=header"))?;
            let key = KEYS
                .iter()
                .find(|&&k| k == key.trim())
                .ok_or_else(|| format!("unknown column key {:?}; expected one of {}", key.trim(), KEYS.join(", ")))?;
            map.0.insert(key, header.trim().to_string());
        }
        Ok(map)
    }

    fn header(&self, key: &str) -> &str {
        &self.0[key]
    }
}

/// Reads study pairs; malformed rows are reported individually.
pub fn read_studies(path: &Path, columns: &ColumnMap) -> CliResult<(Vec<StudyRecord>, Vec<RowIssue>)> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_studies(&text, columns).map_err(|m| CliError::Input(format!("{}: {m}", path.display())))
}

pub fn parse_studies(text: &str, columns: &ColumnMap) -> Result<(Vec<StudyRecord>, Vec<RowIssue>), String> {
    if text.trim().is_empty() {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    let position = |key: &str| headers.iter().position(|h| h == columns.header(key));
    let missing: Vec<&str> = REQUIRED.iter().copied().filter(|k| position(k).is_none()).collect();
    if !missing.is_empty() {
        let names: Vec<&str> = missing.iter().map(|k| columns.header(k)).collect();
        return Err(format!("missing required column(s): {}", names.join(", ")));
    }
    let idx: HashMap<&str, Option<usize>> = KEYS.iter().map(|&k| (k, position(k))).collect();

    let mut records = Vec::new();
    let mut issues = Vec::new();
    for (i, result) in reader.records().enumerate() {
        let row = i + 1;
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                issues.push(RowIssue { row, id: None, message: e.to_string() });
                continue;
            }
        };
        let field = |key: &str| idx[key].and_then(|j| record.get(j)).unwrap_or("");
        let id = match field("id") {
            "" => format!("row{row}"),
            s => s.to_string(),
        };
        match parse_row(row, id.clone(), &field) {
            Ok(rec) => records.push(rec),
            Err(message) => issues.push(RowIssue { row, id: Some(id), message }),
        }
    }
    Ok((records, issues))
}

fn parse_row<'a>(row: usize, id: String, field: &impl Fn(&str) -> &'a str) -> Result<StudyRecord, String> {
    let r = |key: &str| -> Result<f64, String> {
        let x: f64 = field(key).parse().map_err(|_| format!("{key} = {:?} is not a number", field(key)))?;
        if x.abs() < 1.0 {
            Ok(x)
        } else {
            Err(format!("{key} = {x} must satisfy |r| < 1"))
        }
    };
    let n = |key: &str| -> Result<u64, String> {
        let x: u64 = field(key).parse().map_err(|_| format!("{key} = {:?} is not a whole number", field(key)))?;
        if x > 3 {
            Ok(x)
        } else {
            Err(format!("{key} = {x} must exceed 3"))
        }
    };
    let delta = match field("delta") {
        "" => None,
        s => match s.parse::<f64>() {
            Ok(d) if d > 0.0 && d.is_finite() => Some(d),
            _ => return Err(format!("delta = {s:?} must be a positive number")),
        },
    };
    Ok(StudyRecord { row, id, r_o: r("r_o")?, n_o: n("n_o")?, r_r: r("r_r")?, n_r: n("n_r")?, delta })
}
