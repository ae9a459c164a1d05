//! Batch metric input.
//!
//! A CSV file with the header
//!
//! ```text
//! id,kind,sma,m1_sma,m1_overlap,m1_alignment,m2_sma,m2_overlap,m2_alignment,...
//! ```
//!
//! and one context per row. `kind` is `individual` or `group`.
//!
//! * `individual`: `sma` is the target's ability; each `m<k>` triplet is one
//!   other person with `m<k>_sma` left empty, `overlap` = SSI and
//!   `alignment` = GA.
//! * `group`: `sma` is left empty; each triplet is one member with
//!   `m<k>_sma` = SMA, `overlap` = GI and `alignment` = SIGA.
//!
//! Rows may stop early; a fully empty triplet ends the row's list.

use std::path::Path;

use thiserror::Error;

use crate::metrics::{self, GroupContext, GroupMember, IndividualContext, MetricError};
use crate::sigfig::format_sig;

use super::output::{num, text, Table};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsInputError {
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("range error at row {row}, column {column}: {source}")]
    Range {
        row: usize,
        column: String,
        source: MetricError,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordKind {
    Individual,
    Group,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricRecord {
    Individual { id: String, context: IndividualContext },
    Group { id: String, context: GroupContext },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricResult {
    pub id: String,
    pub kind: RecordKind,
    pub metric: &'static str,
    pub value: f64,
}

impl MetricRecord {
    pub fn evaluate(&self) -> MetricResult {
        match self {
            MetricRecord::Individual { id, context } => MetricResult {
                id: id.clone(),
                kind: RecordKind::Individual,
                metric: "ISMI",
                value: metrics::ismi(context),
            },
            MetricRecord::Group { id, context } => MetricResult {
                id: id.clone(),
                kind: RecordKind::Group,
                metric: "GSMI",
                value: metrics::gsmi(context),
            },
        }
    }
}

fn expected_header(triplets: usize) -> Vec<String> {
    let mut h = vec!["id".to_string(), "kind".to_string(), "sma".to_string()];
    for k in 1..=triplets {
        h.extend([
            format!("m{k}_sma"),
            format!("m{k}_overlap"),
            format!("m{k}_alignment"),
        ]);
    }
    h
}

pub fn parse_metrics_csv(input: &str) -> Result<Vec<MetricRecord>, MetricsInputError> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input.as_bytes());
    let header_err = |column: &str, message: String| MetricsInputError::Parse {
        row: 1,
        column: column.to_string(),
        message,
    };
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| header_err("-", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.len() < 3 || !(header.len() - 3).is_multiple_of(3) {
        return Err(header_err(
            "-",
            format!("expected id,kind,sma followed by m<k> triplets, got {} columns", header.len()),
        ));
    }
    let expected = expected_header((header.len() - 3) / 3);
    if let Some((got, want)) = header.iter().zip(&expected).find(|(g, w)| g != w) {
        return Err(header_err(got, format!("expected column `{want}`")));
    }

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| MetricsInputError::Parse {
            row: line,
            column: "-".into(),
            message: e.to_string(),
        })?;
        if row.len() > header.len() {
            return Err(MetricsInputError::Parse {
                row: line,
                column: format!("#{}", header.len() + 1),
                message: format!("row has {} fields, header has {}", row.len(), header.len()),
            });
        }
        records.push(parse_row(line, &row, &header)?);
    }
    Ok(records)
}

fn parse_row(line: usize, row: &csv::StringRecord, header: &[String]) -> Result<MetricRecord, MetricsInputError> {
    let field = |c: usize| row.get(c).unwrap_or("");
    let parse_err = |c: usize, message: String| MetricsInputError::Parse {
        row: line,
        column: header[c].clone(),
        message,
    };
    let number = |c: usize| -> Result<Option<f64>, MetricsInputError> {
        let raw = field(c);
        if raw.is_empty() {
            return Ok(None);
        }
        raw.parse::<f64>()
            .map(Some)
            .map_err(|_| parse_err(c, format!("`{raw}` is not a number")))
    };
    let required = |c: usize| number(c)?.ok_or_else(|| parse_err(c, "value required".into()));
    let range = |c: usize, source: MetricError| MetricsInputError::Range {
        row: line,
        column: header[c].clone(),
        source,
    };

    let id = field(0).to_string();
    if id.is_empty() {
        return Err(parse_err(0, "id required".into()));
    }
    let kind = match field(1) {
        "individual" => RecordKind::Individual,
        "group" => RecordKind::Group,
        other => return Err(parse_err(1, format!("kind must be `individual` or `group`, got `{other}`"))),
    };

    let triplets = (header.len() - 3) / 3;
    let mut entries = Vec::new();
    for k in 0..triplets {
        let c = 3 + 3 * k;
        let cells = [number(c)?, number(c + 1)?, number(c + 2)?];
        if cells.iter().all(Option::is_none) {
            if (k + 1..triplets).any(|j| (0..3).any(|o| !field(3 + 3 * j + o).is_empty())) {
                return Err(parse_err(c, "empty triplet followed by more values".into()));
            }
            break;
        }
        entries.push((c, cells));
    }

    match kind {
        RecordKind::Individual => {
            let sma_value = required(2)?;
            let sma = metrics::SociallyMindedAbility::new(sma_value).map_err(|e| range(2, e))?;
            let mut contributors = Vec::new();
            for (c, cells) in entries {
                if cells[0].is_some() {
                    return Err(parse_err(c, "must be empty for individual rows".into()));
                }
                let ssi = cells[1].ok_or_else(|| parse_err(c + 1, "value required".into()))?;
                let ga = cells[2].ok_or_else(|| parse_err(c + 2, "value required".into()))?;
                let ssi = metrics::SharedSocialIdentity::new(ssi).map_err(|e| range(c + 1, e))?;
                let ga = metrics::GoalAlignment::new(ga).map_err(|e| range(c + 2, e))?;
                contributors.push(metrics::Contributor { ssi, ga });
            }
            Ok(MetricRecord::Individual {
                id,
                context: IndividualContext::new(sma, contributors),
            })
        }
        RecordKind::Group => {
            if !field(2).is_empty() {
                return Err(parse_err(2, "must be empty for group rows".into()));
            }
            let mut members = Vec::new();
            for (c, cells) in entries {
                let get = |o: usize| cells[o].ok_or_else(|| parse_err(c + o, "value required".into()));
                let (sma, gi, siga) = (get(0)?, get(1)?, get(2)?);
                members.push(GroupMember {
                    sma: metrics::SociallyMindedAbility::new(sma).map_err(|e| range(c, e))?,
                    gi: metrics::GroupIdentification::new(gi).map_err(|e| range(c + 1, e))?,
                    siga: metrics::SalientIdentityGoalAlignment::new(siga).map_err(|e| range(c + 2, e))?,
                });
            }
            let context = GroupContext::new(members).map_err(|e| range(3.min(header.len() - 1), e))?;
            Ok(MetricRecord::Group { id, context })
        }
    }
}

pub fn cmd_metrics(path: &Path) -> Result<Table, MetricsInputError> {
    let input = std::fs::read_to_string(path).map_err(|e| MetricsInputError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    Ok(results_table(&parse_metrics_csv(&input)?))
}

pub fn results_table(records: &[MetricRecord]) -> Table {
    let mut t = Table::new(["id", "metric", "value", "value_2sf"]);
    for r in records.iter().map(MetricRecord::evaluate) {
        t.push(vec![
            text(r.id),
            text(r.metric),
            num(r.value),
            text(format_sig(r.value, 2)),
        ]);
    }
    t
}
