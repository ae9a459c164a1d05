//! Cross-product parameter sweeps with resumable CSV output.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use rayon::prelude::*;
use serde_json::Value;

use crate::metrics::SociallyMindedAbility;
use crate::relevance::{LevelTag, PerceiverReadiness};
use crate::sim::{evaluate, run_episode, PolicyKind, ScenarioConfig};

use super::output::{num, text, Table};
use super::{write_atomic, CliError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamName {
    Agents,
    Horizon,
    FitThreshold,
    PerceptNoise,
    Sma,
    IndividualPrior,
    SubgroupPrior,
    GroupPrior,
    Policy,
}

impl ParamName {
    const ALL: [(ParamName, &'static str); 9] = [
        (ParamName::Agents, "agents"),
        (ParamName::Horizon, "horizon"),
        (ParamName::FitThreshold, "fit_threshold"),
        (ParamName::PerceptNoise, "percept_noise"),
        (ParamName::Sma, "sma"),
        (ParamName::IndividualPrior, "individual_prior"),
        (ParamName::SubgroupPrior, "subgroup_prior"),
        (ParamName::GroupPrior, "group_prior"),
        (ParamName::Policy, "policy"),
    ];

    pub fn as_str(self) -> &'static str {
        ParamName::ALL
            .iter()
            .find(|(p, _)| *p == self)
            .map(|(_, s)| *s)
            .expect("every name listed")
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParamName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ParamName::ALL
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(p, _)| *p)
            .ok_or_else(|| {
                let names: Vec<&str> = ParamName::ALL.iter().map(|(_, n)| *n).collect();
                format!("unknown sweep parameter `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// `name=v1,v2,...`
#[derive(Debug, Clone, PartialEq)]
pub struct SweepParam {
    pub name: ParamName,
    pub values: Vec<String>,
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, values) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=v1,v2,..., got `{s}`"))?;
        let name: ParamName = name.trim().parse()?;
        let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
        if values.iter().any(String::is_empty) {
            return Err(format!("empty value in `{s}`"));
        }
        for v in &values {
            let numeric = !matches!(name, ParamName::Policy);
            if numeric && !v.parse::<f64>().is_ok_and(f64::is_finite) {
                return Err(format!("{name} value `{v}` is not a finite number"));
            }
        }
        Ok(SweepParam { name, values })
    }
}

/// `0,1,5` or `0..4` (end exclusive).
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let bad = |_| format!("invalid seed list `{s}`");
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a >= b {
            return Err(format!("empty seed range `{s}`"));
        }
        return Ok((a..b).collect());
    }
    s.split(',').map(|v| v.trim().parse().map_err(bad)).collect()
}

fn number<T: FromStr>(name: ParamName, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("{name} value `{v}` has the wrong type"))
}

/// Applies one parameter value to every agent (or the scenario) in `config`.
pub fn apply(mut config: ScenarioConfig, name: ParamName, value: &str) -> Result<ScenarioConfig, String> {
    let prior = |config: &mut ScenarioConfig, level: LevelTag, p: f64| -> Result<(), String> {
        for a in &mut config.agents {
            let r = a.readiness;
            let mut v = [
                r.prior(LevelTag::Individual),
                r.prior(LevelTag::Subgroup),
                r.prior(LevelTag::Group),
            ];
            v[level as usize] = p;
            a.readiness = PerceiverReadiness::new(v[0], v[1], v[2]).map_err(|e| e.to_string())?;
        }
        Ok(())
    };
    match name {
        ParamName::Agents => {
            let n: usize = number(name, value)?;
            if n == 0 {
                return Err("agents must be at least 1".into());
            }
            let roster = config.agents.clone();
            config.agents = roster.iter().cycle().take(n).cloned().collect();
        }
        ParamName::Horizon => config.horizon = number(name, value)?,
        ParamName::FitThreshold => config.landscape.fit_threshold = number(name, value)?,
        ParamName::PerceptNoise => config.percept_noise = number(name, value)?,
        ParamName::Sma => {
            let sma = SociallyMindedAbility::new(number(name, value)?).map_err(|e| e.to_string())?;
            config.agents.iter_mut().for_each(|a| a.sma = sma);
        }
        ParamName::IndividualPrior => prior(&mut config, LevelTag::Individual, number(name, value)?)?,
        ParamName::SubgroupPrior => prior(&mut config, LevelTag::Subgroup, number(name, value)?)?,
        ParamName::GroupPrior => prior(&mut config, LevelTag::Group, number(name, value)?)?,
        ParamName::Policy => {
            let policy: PolicyKind = value.parse()?;
            config = config.with_policy(policy);
        }
    }
    config.validate().map_err(|e| e.to_string())?;
    Ok(config)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub base: ScenarioConfig,
    pub params: Vec<SweepParam>,
    pub seeds: Vec<u64>,
}

/// One point of the cross product.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cell {
    pub values: Vec<String>,
    pub seed: u64,
}

impl SweepPlan {
    /// First parameter varies slowest, seed fastest.
    pub fn cells(&self) -> Vec<Cell> {
        let mut combos: Vec<Vec<String>> = vec![Vec::new()];
        for p in &self.params {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    p.values.iter().map(move |v| {
                        let mut c = prefix.clone();
                        c.push(v.clone());
                        c
                    })
                })
                .collect();
        }
        combos
            .into_iter()
            .flat_map(|values| {
                self.seeds.iter().map(move |&seed| Cell {
                    values: values.clone(),
                    seed,
                })
            })
            .collect()
    }

    pub fn headers(&self) -> Vec<String> {
        let mut h: Vec<String> = self.params.iter().map(|p| p.name.to_string()).collect();
        h.push("seed".into());
        h.extend(RESULT_COLUMNS.iter().map(|s| s.to_string()));
        h
    }

    fn config_for(&self, cell: &Cell) -> Result<ScenarioConfig, String> {
        self.params
            .iter()
            .zip(&cell.values)
            .try_fold(self.base.clone(), |c, (p, v)| apply(c, p.name, v))
    }
}

const RESULT_COLUMNS: [&str; 11] = [
    "status",
    "error",
    "sites_completed",
    "group_attainment",
    "total_reward",
    "mean_gsmi",
    "final_gsmi",
    "mean_attainment",
    "attainment_socially_minded",
    "attainment_pure_individual",
    "attainment_fixed_collective",
];

fn run_cell(plan: &SweepPlan, cell: &Cell) -> Vec<Value> {
    let mut row: Vec<Value> = cell.values.iter().map(|v| text(v.as_str())).collect();
    row.push(Value::from(cell.seed));
    let outcome = plan
        .config_for(cell)
        .and_then(|c| run_episode(&c, cell.seed).map_err(|e| e.to_string()))
        .and_then(|log| evaluate(&log).map_err(|e| e.to_string()));
    match outcome {
        Ok(report) => {
            let n = report.agents.len().max(1) as f64;
            row.extend([
                text("ok"),
                Value::Null,
                Value::from(report.sites_completed),
                num(report.group_attainment),
                num(report.total_reward),
                num(report.mean_gsmi),
                num(report.final_gsmi),
                num(report.agents.iter().map(|a| a.attainment).sum::<f64>() / n),
            ]);
            row.extend(
                PolicyKind::ALL
                    .iter()
                    .map(|p| num(report.policy_attainment.get(p).copied())),
            );
        }
        Err(message) => {
            row.extend([text("error"), text(message)]);
            row.extend(std::iter::repeat_n(Value::Null, RESULT_COLUMNS.len() - 2));
        }
    }
    row
}

fn cell_key(row: &[String], params: usize) -> Option<Cell> {
    Some(Cell {
        values: row.get(..params)?.to_vec(),
        seed: row.get(params)?.parse().ok()?,
    })
}

/// Rows of an earlier run of the same sweep whose status is `ok`.
fn completed_rows(path: &Path, plan: &SweepPlan) -> Result<BTreeMap<Cell, Vec<Value>>, CliError> {
    let mut done = BTreeMap::new();
    if !path.exists() {
        return Ok(done);
    }
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io(e.to_string()))?;
    let headers = reader.headers().map_err(|e| CliError::Io(e.to_string()))?.clone();
    if headers.iter().ne(plan.headers().iter().map(String::as_str)) {
        return Err(CliError::Usage(format!(
            "{} holds a different sweep; remove it or choose another --out",
            path.display()
        )));
    }
    let status = plan.params.len() + 1;
    for record in reader.records() {
        let fields: Vec<String> = record
            .map_err(|e| CliError::Io(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if fields.get(status).map(String::as_str) != Some("ok") {
            continue;
        }
        if let Some(cell) = cell_key(&fields, plan.params.len()) {
            let params = plan.params.len();
            let row = fields
                .into_iter()
                .enumerate()
                .map(|(i, f)| match f.parse::<serde_json::Number>() {
                    _ if i < params => Value::String(f),
                    _ if f.is_empty() => Value::Null,
                    Ok(n) => Value::Number(n),
                    Err(_) => Value::String(f),
                })
                .collect();
            done.insert(cell, row);
        }
    }
    Ok(done)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutcome {
    pub table: Table,
    /// Cells run by this invocation; the rest were resumed from disk.
    pub executed: usize,
    pub failed: usize,
}

/// Runs every cell not already recorded as `ok` in `out`, rewriting `out`
/// atomically after each cell finishes.
pub fn cmd_sweep(plan: &SweepPlan, out: &Path) -> Result<SweepOutcome, CliError> {
    let cells = plan.cells();
    let mut done = completed_rows(out, plan)?;
    done.retain(|cell, _| cells.contains(cell));
    let pending: Vec<&Cell> = cells.iter().filter(|c| !done.contains_key(*c)).collect();
    let headers = plan.headers();
    let render = |rows: &BTreeMap<Cell, Vec<Value>>| {
        let mut t = Table::new(headers.clone());
        for cell in &cells {
            if let Some(r) = rows.get(cell) {
                t.push(r.clone());
            }
        }
        t
    };

    let state = Mutex::new(done);
    pending.par_iter().try_for_each(|cell| {
        let row = run_cell(plan, cell);
        let mut rows = state.lock().expect("no panics while holding the lock");
        rows.insert((*cell).clone(), row);
        write_atomic(out, render(&rows).render_csv().as_bytes())
    })?;

    let rows = state.into_inner().expect("no panics while holding the lock");
    if pending.is_empty() {
        write_atomic(out, render(&rows).render_csv().as_bytes())?;
    }
    let table = render(&rows);
    let status = plan.params.len() + 1;
    let failed = table
        .rows
        .iter()
        .filter(|r| r[status] != text("ok"))
        .count();
    Ok(SweepOutcome {
        table,
        executed: pending.len(),
        failed,
    })
}
