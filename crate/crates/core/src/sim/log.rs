use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::metrics::{GroupContext, IndividualContext};
use crate::relevance::SelfDefinition;
use crate::AgentId;

use super::config::{PolicyKind, ScenarioConfig, SiteKind};
use super::world::{Action, Intention, Position};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentMeta {
    pub id: AgentId,
    pub policy: PolicyKind,
    pub sma: f64,
    pub goal: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteMeta {
    pub position: Position,
    pub kind: SiteKind,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogHeader {
    pub scenario: String,
    pub seed: u64,
    pub config_digest: String,
    pub horizon: u32,
    pub agents: Vec<AgentMeta>,
    pub sites: Vec<SiteMeta>,
}

impl LogHeader {
    pub fn new(config: &ScenarioConfig, seed: u64) -> Self {
        LogHeader {
            scenario: config.name.clone(),
            seed,
            config_digest: config.digest(),
            horizon: config.horizon,
            agents: config
                .agents
                .iter()
                .enumerate()
                .map(|(i, a)| AgentMeta {
                    id: AgentId(i as u32),
                    policy: a.policy,
                    sma: a.sma.value(),
                    goal: a.goal.clone(),
                })
                .collect(),
            sites: config
                .sites
                .iter()
                .map(|s| SiteMeta {
                    position: s.position.into(),
                    kind: s.kind,
                    reward: s.reward,
                })
                .collect(),
        }
    }
}

/// One agent's state at the end of a tick.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentTick {
    pub id: AgentId,
    pub position: Position,
    pub intention: Intention,
    pub action: Action,
    pub self_definition: SelfDefinition,
    /// Reward granted this tick.
    pub reward: f64,
    pub attainment: f64,
    pub ismi: f64,
    pub context: IndividualContext,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TickRecord {
    pub tick: u32,
    pub agents: Vec<AgentTick>,
    /// Sites completed this tick.
    pub completed: Vec<usize>,
    pub gsmi: f64,
    pub group_context: GroupContext,
    pub group_attainment: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeSummary {
    pub ticks_run: u32,
    pub attainment: Vec<f64>,
    pub group_attainment: f64,
    pub total_reward: f64,
    /// Tick each site was completed on, if it was.
    pub site_completion: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLog {
    pub header: LogHeader,
    pub ticks: Vec<TickRecord>,
    pub summary: Option<EpisodeSummary>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum Line {
    Header(LogHeader),
    Tick(TickRecord),
    Summary(EpisodeSummary),
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum LineRef<'a> {
    Header(&'a LogHeader),
    Tick(&'a TickRecord),
    Summary(&'a EpisodeSummary),
}

/// Position, action and reward of each agent on one tick.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStep {
    pub tick: u32,
    pub moves: Vec<(Position, Action, f64)>,
}

impl EpisodeLog {
    /// One JSON object per line: a header, then each tick, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let mut line = |value: &LineRef| -> std::io::Result<()> {
            serde_json::to_writer(&mut out, value)?;
            out.write_all(b"\n")
        };
        line(&LineRef::Header(&self.header))?;
        for t in &self.ticks {
            line(&LineRef::Tick(t))?;
        }
        if let Some(s) = &self.summary {
            line(&LineRef::Summary(s))?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json writes UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, String> {
        let mut header = None;
        let mut ticks = Vec::new();
        let mut summary = None;
        for (i, raw) in input.lines().enumerate() {
            let raw = raw.map_err(|e| e.to_string())?;
            if raw.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&raw).map_err(|e| format!("line {}: {e}", i + 1))? {
                Line::Header(h) => header = Some(h),
                Line::Tick(t) => ticks.push(t),
                Line::Summary(s) => summary = Some(s),
            }
        }
        Ok(EpisodeLog {
            header: header.ok_or("missing header line")?,
            ticks,
            summary,
        })
    }

    pub fn trajectory(&self) -> Vec<TrajectoryStep> {
        self.ticks
            .iter()
            .map(|t| TrajectoryStep {
                tick: t.tick,
                moves: t
                    .agents
                    .iter()
                    .map(|a| (a.position, a.action, a.reward))
                    .collect(),
            })
            .collect()
    }
}
