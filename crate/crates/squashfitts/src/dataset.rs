//! CSV schema for squash trials.
//!
//! ```text
//! # key=value            optional metadata lines, before the header
//! person,shot,trial,db_cm,t_s,dp_cm,mt_s[,v_mps,id_bits,ir_bps]
//! ```
//!
//! Decimal separator is always `.`. Shot labels are case-insensitive. The
//! derived columns, when present, are ignored on input and recomputed.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use squashfitts_core::{
    derive_trial, real_time_from_slowmo, validate_against_court, CourtGeometry, ShotKind,
    TrialRecord,
};

use crate::Error;

pub const RAW_COLUMNS: [&str; 7] = ["person", "shot", "trial", "db_cm", "t_s", "dp_cm", "mt_s"];
pub const DERIVED_COLUMNS: [&str; 3] = ["v_mps", "id_bits", "ir_bps"];
/// Decimals used for derived columns on output.
pub const DERIVED_DECIMALS: usize = 6;

const BUNDLED: &str = include_str!("../data/table1.csv");

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Dataset {
    pub trials: Vec<TrialRecord>,
    pub metadata: BTreeMap<String, String>,
}

/// A problem tied to a row (1-based line number; 0 for the header) and column.
#[derive(Debug, Clone, PartialEq)]
pub struct RowError {
    pub row: usize,
    pub field: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RowWarning {
    pub row: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub errors: Vec<RowError>,
    pub warnings: Vec<RowWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, row: usize, field: &str, message: impl Into<String>) {
        self.errors.push(RowError {
            row,
            field: field.to_string(),
            message: message.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.errors {
            writeln!(
                f,
                "error: row {}, column `{}`: {}",
                e.row, e.field, e.message
            )?;
        }
        for w in &self.warnings {
            writeln!(f, "warning: row {}: {}", w.row, w.message)?;
        }
        write!(
            f,
            "{} error(s), {} warning(s)",
            self.errors.len(),
            self.warnings.len()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParseOptions {
    /// When set, `t_s` values are slowed-video readings and get divided by it.
    pub slowdown_factor: Option<f64>,
    pub geometry: CourtGeometry,
}

pub fn parse_csv(text: &str) -> (Dataset, ValidationReport) {
    parse_csv_with(text, &ParseOptions::default())
}

pub fn parse_csv_with(text: &str, options: &ParseOptions) -> (Dataset, ValidationReport) {
    let mut report = ValidationReport::default();
    let mut dataset = Dataset::default();

    for line in text.lines().take_while(|l| l.trim_start().starts_with('#')) {
        let body = line.trim_start().trim_start_matches('#').trim();
        if let Some((k, v)) = body.split_once('=') {
            dataset
                .metadata
                .insert(k.trim().to_string(), v.trim().to_string());
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = match reader.headers() {
        Ok(h) if !h.is_empty() && !(h.len() == 1 && h[0].is_empty()) => h.clone(),
        Ok(_) => {
            report.error(0, "header", "no header");
            return (dataset, report);
        }
        Err(e) => {
            report.error(0, "header", format!("unreadable header: {e}"));
            return (dataset, report);
        }
    };

    let mut index = [0usize; 7];
    for (slot, name) in index.iter_mut().zip(RAW_COLUMNS) {
        match header.iter().position(|h| h == name) {
            Some(i) => *slot = i,
            None => report.error(0, name, "missing required column"),
        }
    }
    for h in header.iter() {
        if !RAW_COLUMNS.contains(&h) && !DERIVED_COLUMNS.contains(&h) {
            report.warnings.push(RowWarning {
                row: 0,
                message: format!("unknown column `{h}` ignored"),
            });
        }
    }
    if !report.is_ok() {
        return (dataset, report);
    }

    if let Some(factor) = options.slowdown_factor {
        dataset
            .metadata
            .insert("slowdown_factor".to_string(), factor.to_string());
    }

    let mut seen = HashSet::new();
    for result in reader.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line() as usize);
                report.error(row, "record", format!("malformed record: {e}"));
                continue;
            }
        };
        let row = record.position().map_or(0, |p| p.line() as usize);
        let cell = |i: usize| record.get(index[i]).unwrap_or("");
        let before = report.errors.len();

        let person = parse_positive_int(cell(0), row, "person", &mut report);
        let shot = match cell(1).parse::<ShotKind>() {
            Ok(s) => Some(s),
            Err(e) => {
                report.error(row, "shot", e.to_string());
                None
            }
        };
        let trial = parse_positive_int(cell(2), row, "trial", &mut report);
        let mut measures = [0.0f64; 4];
        for (k, m) in measures.iter_mut().enumerate() {
            let name = RAW_COLUMNS[3 + k];
            if let Some(v) = parse_positive_f64(cell(3 + k), row, name, &mut report) {
                *m = v;
            }
        }
        if report.errors.len() > before {
            continue;
        }
        let (Some(person_id), Some(shot), Some(trial_index)) = (person, shot, trial) else {
            continue;
        };

        let mut ball_time_s = measures[1];
        if let Some(factor) = options.slowdown_factor {
            match real_time_from_slowmo(ball_time_s, factor) {
                Ok(t) => ball_time_s = t,
                Err(e) => {
                    report.error(row, "t_s", e.to_string());
                    continue;
                }
            }
        }

        let trial = TrialRecord {
            person_id,
            shot,
            trial_index,
            ball_distance_cm: measures[0],
            ball_time_s,
            player_distance_cm: measures[2],
            movement_time_s: measures[3],
        };
        if !seen.insert(trial.key()) {
            report.error(row, "trial", format!("duplicate trial {}", trial.key()));
            continue;
        }
        for w in validate_against_court(&trial, &options.geometry) {
            report.warnings.push(RowWarning {
                row,
                message: w.to_string(),
            });
        }
        dataset.trials.push(trial);
    }
    (dataset, report)
}

fn parse_positive_int(
    cell: &str,
    row: usize,
    field: &str,
    report: &mut ValidationReport,
) -> Option<u32> {
    match cell.parse::<u32>() {
        Ok(v) if v > 0 => Some(v),
        Ok(_) => {
            report.error(row, field, "must be a positive integer");
            None
        }
        Err(_) => {
            report.error(row, field, format!("`{cell}` is not a positive integer"));
            None
        }
    }
}

fn parse_positive_f64(
    cell: &str,
    row: usize,
    field: &str,
    report: &mut ValidationReport,
) -> Option<f64> {
    match cell.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Some(v),
        Ok(v) => {
            report.error(row, field, format!("must be positive, got {v}"));
            None
        }
        Err(_) => {
            report.error(row, field, format!("`{cell}` is not a number"));
            None
        }
    }
}

/// Serializes a dataset. Raw values use the shortest representation that
/// parses back to the same `f64`.
pub fn write_csv(dataset: &Dataset, include_derived: bool) -> Result<String, Error> {
    if dataset.trials.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut out = String::new();
    for (k, v) in &dataset.metadata {
        out.push_str(&format!("# {k}={v}\n"));
    }
    let mut header: Vec<&str> = RAW_COLUMNS.to_vec();
    if include_derived {
        header.extend(DERIVED_COLUMNS);
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for t in &dataset.trials {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}",
            t.person_id,
            t.shot,
            t.trial_index,
            t.ball_distance_cm,
            t.ball_time_s,
            t.player_distance_cm,
            t.movement_time_s
        ));
        if include_derived {
            let d = derive_trial(t)?;
            out.push_str(&format!(
                ",{:.p$},{:.p$},{:.p$}",
                d.ball_speed_mps,
                d.id_bits,
                d.info_rate_bps,
                p = DERIVED_DECIMALS
            ));
        }
        out.push('\n');
    }
    Ok(out)
}

/// The 36-trial reference dataset shipped in `data/table1.csv`.
pub fn bundled_table1() -> Dataset {
    let (dataset, report) = parse_csv(BUNDLED);
    debug_assert!(
        report.is_ok(),
        "bundled dataset must parse cleanly: {report}"
    );
    dataset
}

pub fn bundled_csv() -> &'static str {
    BUNDLED
}
