//! Recomputes the thirteen published worked examples and checks each against
//! its printed two-significant-figure value.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::metrics::{self, GroupContext, IndividualContext};
use crate::sigfig::format_sig;

use super::output::{num, text, Table};

#[derive(Debug, Clone, PartialEq)]
pub enum ExampleInputs {
    /// Target SMA and `(SSI, GA)` per other person.
    Individual { sma: f64, contributors: Vec<(f64, f64)> },
    /// `(SMA, GI, SIGA)` per member.
    Group { members: Vec<(f64, f64, f64)> },
}

impl ExampleInputs {
    pub fn describe(&self) -> String {
        let fmt = |x: &f64| x.to_string();
        match self {
            ExampleInputs::Individual { sma, contributors } => format!(
                "SMA={sma}; (SSI,GA)=[{}]",
                contributors
                    .iter()
                    .map(|(s, g)| format!("({},{})", fmt(s), fmt(g)))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            ExampleInputs::Group { members } => format!(
                "(SMA,GI,SIGA)=[{}]",
                members
                    .iter()
                    .map(|(a, b, c)| format!("({},{},{})", fmt(a), fmt(b), fmt(c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkedExample {
    pub id: &'static str,
    pub metric: &'static str,
    pub inputs: ExampleInputs,
    /// Value as printed in the source, two significant figures.
    pub printed: &'static str,
    /// Exact value of the printed arithmetic, derived by hand.
    pub exact: f64,
    /// Set when the printed value disagrees with its own arithmetic.
    pub known_discrepancy: Option<&'static str>,
}

fn individual(sma: f64, contributors: &[(f64, f64)]) -> ExampleInputs {
    ExampleInputs::Individual {
        sma,
        contributors: contributors.to_vec(),
    }
}

fn group(members: &[(f64, f64, f64)]) -> ExampleInputs {
    ExampleInputs::Group {
        members: members.to_vec(),
    }
}

const FIVE_ALIGNED: [(f64, f64); 5] = [(0.5, 0.5), (0.3, 0.7), (0.4, 0.3), (0.7, 0.3), (0.5, 0.9)];

/// All thirteen examples, in publication order.
pub fn worked_examples() -> Vec<WorkedExample> {
    let ex = |id, metric, inputs, printed, exact| WorkedExample {
        id,
        metric,
        inputs,
        printed,
        exact,
        known_discrepancy: None,
    };
    vec![
        ex("WE1", "ISMI", individual(0.7, &[(0.5, 0.5)]), "0.18", 0.175),
        ex(
            "WE2",
            "ISMI",
            individual(0.7, &[(0.5, 0.5), (0.3, 0.7), (0.4, -0.8), (0.7, -0.3), (0.0, -0.9)]),
            "-0.049",
            -0.049,
        ),
        ex("WE3", "GSMI", group(&[(0.7, 0.3, 0.5), (0.8, 0.8, 0.3)]), "0.15", 0.1485),
        ex(
            "WE4",
            "GSMI",
            group(&[
                (0.7, 0.3, 0.5),
                (0.8, 0.8, 0.3),
                (0.6, 0.2, -0.8),
                (0.9, 0.7, 0.4),
                (0.5, 0.3, -0.1),
            ]),
            "0.088",
            0.0876,
        ),
        ex("A1", "ISMI", individual(0.7, &[(0.5, 0.5), (0.3, 0.7)]), "0.32", 0.322),
        ex("A2", "ISMI", individual(0.7, &FIVE_ALIGNED), "0.87", 0.868),
        ex("A3", "ISMI", individual(0.3, &FIVE_ALIGNED), "0.37", 0.372),
        ex(
            "A4",
            "ISMI",
            individual(0.7, &[(0.1, 0.5), (0.2, 0.7), (0.0, 0.3), (0.1, 0.3), (0.1, 0.9)]),
            "0.22",
            0.217,
        ),
        WorkedExample {
            known_discrepancy: Some("printed 0.11, but 0.7 x 0.6 x 0.5 / 1 = 0.21"),
            ..ex("B1", "GSMI", group(&[(0.7, 0.6, 0.5)]), "0.11", 0.21)
        },
        ex(
            "B2",
            "GSMI",
            group(&[
                (0.7, 0.6, 0.5),
                (0.8, 0.8, 0.3),
                (0.3, 0.2, 0.8),
                (0.9, 0.7, 0.4),
                (0.2, 0.5, 0.2),
            ]),
            "0.14",
            0.1444,
        ),
        ex(
            "B3",
            "GSMI",
            group(&[
                (0.8, 0.6, 0.5),
                (0.9, 0.8, 0.3),
                (1.0, 0.2, 0.8),
                (0.8, 0.7, 0.4),
                (0.9, 0.5, 0.2),
            ]),
            "0.19",
            0.186,
        ),
        ex(
            "B4",
            "GSMI",
            group(&[
                (0.7, 0.6, 0.9),
                (0.8, 0.8, 0.7),
                (0.3, 0.2, 0.8),
                (0.9, 0.7, 0.8),
                (0.2, 0.5, 0.9),
            ]),
            "0.29",
            0.2936,
        ),
        ex(
            "B5",
            "GSMI",
            group(&[
                (0.7, 0.9, 0.5),
                (0.8, 0.9, 0.3),
                (0.3, 0.7, 0.8),
                (0.9, 0.8, 0.4),
                (0.2, 0.7, 0.2),
            ]),
            "0.20",
            0.203,
        ),
    ]
}

/// SHA-256 over the comma-joined example ids.
pub const EXAMPLE_ID_DIGEST: &str =
    "1f5c912694e21a358e387b0dbf38a5b184d921eefc3b8cced95e1158337401e8";

pub fn example_id_digest(examples: &[WorkedExample]) -> String {
    let ids: Vec<&str> = examples.iter().map(|e| e.id).collect();
    hex::encode(Sha256::digest(ids.join(",").as_bytes()))
}

/// The metric functions under test; swappable so a broken implementation
/// can be shown to fail.
#[derive(Clone, Copy)]
pub struct Evaluators {
    pub ismi: fn(&IndividualContext) -> f64,
    pub gsmi: fn(&GroupContext) -> f64,
}

impl Default for Evaluators {
    fn default() -> Self {
        Evaluators {
            ismi: metrics::ismi,
            gsmi: metrics::gsmi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Fail,
    KnownPaperDiscrepancy,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::KnownPaperDiscrepancy => "KNOWN_PAPER_DISCREPANCY",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExampleRecord {
    pub id: &'static str,
    pub metric: &'static str,
    pub inputs: String,
    pub computed: f64,
    pub computed_2sf: String,
    pub printed: &'static str,
    pub exact: f64,
    pub status: Status,
    pub diagnostic: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub records: Vec<ExampleRecord>,
    pub id_digest_ok: bool,
}

impl ValidationReport {
    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Status::Fail) == 0 && self.id_digest_ok {
            0
        } else {
            1
        }
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new([
            "id", "metric", "computed", "computed_2sf", "printed", "status", "diagnostic",
        ]);
        for r in &self.records {
            t.push(vec![
                text(r.id),
                text(r.metric),
                num(r.computed),
                text(&r.computed_2sf),
                text(r.printed),
                text(r.status.as_str()),
                text(&r.diagnostic),
            ]);
        }
        t
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}/{} match, {} known discrepancy, {} failed{}",
            self.count(Status::Pass),
            self.records.len(),
            self.count(Status::KnownPaperDiscrepancy),
            self.count(Status::Fail),
            if self.id_digest_ok {
                ""
            } else {
                "; example set does not match its checksum"
            }
        )
    }
}

const EXACT_TOLERANCE: f64 = 1e-12;

fn check(example: &WorkedExample, eval: &Evaluators) -> ExampleRecord {
    let computed = match &example.inputs {
        ExampleInputs::Individual { sma, contributors } => {
            (eval.ismi)(&IndividualContext::from_raw(*sma, contributors).expect("inputs in range"))
        }
        ExampleInputs::Group { members } => {
            (eval.gsmi)(&GroupContext::from_raw(members).expect("inputs in range"))
        }
    };
    let shown = format_sig(computed, 2);
    let exact_ok = (computed - example.exact).abs() <= EXACT_TOLERANCE;
    let (status, diagnostic) = match example.known_discrepancy {
        _ if !exact_ok => (
            Status::Fail,
            format!("computed {computed} differs from exact {}", example.exact),
        ),
        None if shown == example.printed => (Status::Pass, String::new()),
        None => (
            Status::Fail,
            format!("computed {shown} at 2 s.f., printed {}", example.printed),
        ),
        Some(note) => (Status::KnownPaperDiscrepancy, note.to_string()),
    };
    ExampleRecord {
        id: example.id,
        metric: example.metric,
        inputs: example.inputs.describe(),
        computed,
        computed_2sf: shown,
        printed: example.printed,
        exact: example.exact,
        status,
        diagnostic,
    }
}

pub fn validate_with(examples: &[WorkedExample], eval: &Evaluators) -> ValidationReport {
    ValidationReport {
        records: examples.iter().map(|e| check(e, eval)).collect(),
        id_digest_ok: example_id_digest(examples) == EXAMPLE_ID_DIGEST,
    }
}

pub fn cmd_validate() -> ValidationReport {
    validate_with(&worked_examples(), &Evaluators::default())
}
