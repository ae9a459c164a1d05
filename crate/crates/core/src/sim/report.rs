use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::AgentId;

use super::config::PolicyKind;
use super::log::EpisodeLog;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("incomplete log: {0}")]
    IncompleteLog(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentReport {
    pub id: AgentId,
    pub policy: PolicyKind,
    pub mean_ismi: Option<f64>,
    pub final_ismi: Option<f64>,
    pub attainment: f64,
    /// Ticks elapsed when the personal goal was fully attained.
    pub ticks_to_goal: Option<u32>,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub scenario: String,
    pub seed: u64,
    pub ticks: u32,
    pub agents: Vec<AgentReport>,
    pub mean_gsmi: Option<f64>,
    pub final_gsmi: Option<f64>,
    /// Mean personal attainment of the agents running each policy.
    pub policy_attainment: BTreeMap<PolicyKind, f64>,
    pub group_attainment: f64,
    pub total_reward: f64,
    pub sites_completed: usize,
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> Option<f64> {
    let n = values.len();
    (n > 0).then(|| values.sum::<f64>() / n as f64)
}

/// Aggregates a finished log. Pure function of the log.
pub fn evaluate(log: &EpisodeLog) -> Result<MetricsReport, ReportError> {
    let summary = log
        .summary
        .as_ref()
        .ok_or_else(|| ReportError::IncompleteLog("no summary record".into()))?;
    let header = &log.header;
    if log.ticks.len() != header.horizon as usize || summary.ticks_run != header.horizon {
        return Err(ReportError::IncompleteLog(format!(
            "{} of {} ticks recorded",
            log.ticks.len(),
            header.horizon
        )));
    }
    let n = header.agents.len();
    if summary.attainment.len() != n || log.ticks.iter().any(|t| t.agents.len() != n) {
        return Err(ReportError::IncompleteLog("agent roster mismatch".into()));
    }

    let agents: Vec<AgentReport> = header
        .agents
        .iter()
        .enumerate()
        .map(|(i, meta)| AgentReport {
            id: meta.id,
            policy: meta.policy,
            mean_ismi: mean(log.ticks.iter().map(|t| t.agents[i].ismi)),
            final_ismi: log.ticks.last().map(|t| t.agents[i].ismi),
            attainment: summary.attainment[i],
            ticks_to_goal: log
                .ticks
                .iter()
                .find(|t| t.agents[i].attainment >= 1.0)
                .map(|t| t.tick + 1),
            reward: log.ticks.iter().map(|t| t.agents[i].reward).sum(),
        })
        .collect();

    let mut by_policy: BTreeMap<PolicyKind, Vec<f64>> = BTreeMap::new();
    for a in &agents {
        by_policy.entry(a.policy).or_default().push(a.attainment);
    }

    Ok(MetricsReport {
        scenario: header.scenario.clone(),
        seed: header.seed,
        ticks: summary.ticks_run,
        mean_gsmi: mean(log.ticks.iter().map(|t| t.gsmi)),
        final_gsmi: log.ticks.last().map(|t| t.gsmi),
        policy_attainment: by_policy
            .into_iter()
            .map(|(k, v)| (k, mean(v.into_iter()).unwrap_or(0.0)))
            .collect(),
        group_attainment: summary.group_attainment,
        total_reward: summary.total_reward,
        sites_completed: summary.site_completion.iter().flatten().count(),
        agents,
    })
}
