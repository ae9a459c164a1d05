use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::metrics::SociallyMindedAbility;
use crate::relevance::{NormPrototypes, PerceiverReadiness, SelfDefinition};
use crate::AgentId;

use super::config::{LandscapeConfig, PolicyKind, ScenarioConfig, SiteKind};

/// Grid cell, `(x, y)`; north is decreasing `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Position(pub u32, pub u32);

impl Position {
    pub fn manhattan(self, other: Position) -> u32 {
        self.0.abs_diff(other.0) + self.1.abs_diff(other.1)
    }

    pub fn apply(self, action: Action) -> Position {
        let Position(x, y) = self;
        match action {
            Action::North => Position(x, y.saturating_sub(1)),
            Action::South => Position(x, y + 1),
            Action::West => Position(x.saturating_sub(1), y),
            Action::East => Position(x + 1, y),
            Action::Stay | Action::Interact => self,
        }
    }
}

impl From<[u32; 2]> for Position {
    fn from(p: [u32; 2]) -> Self {
        Position(p[0], p[1])
    }
}

/// Primitive actions, in their fixed order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Stay,
    North,
    South,
    East,
    West,
    Interact,
}

pub const ACTION_BINS: usize = 6;

impl Action {
    pub fn bin(self) -> usize {
        self as usize
    }
}

/// What an agent decides to pursue this tick; the decision-level action set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Intention {
    Idle,
    Pursue(usize),
}

impl Intention {
    /// `[Idle, Pursue(0), .., Pursue(n - 1)]`.
    pub fn all(sites: usize) -> Vec<Intention> {
        std::iter::once(Intention::Idle)
            .chain((0..sites).map(Intention::Pursue))
            .collect()
    }

    pub fn task(self) -> Option<usize> {
        match self {
            Intention::Idle => None,
            Intention::Pursue(s) => Some(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSite {
    pub position: Position,
    pub kind: SiteKind,
    /// Co-located interacting agents needed, exactly.
    pub required: usize,
    pub reward: f64,
    pub completed_at: Option<u32>,
}

impl TaskSite {
    pub fn is_active(&self) -> bool {
        self.completed_at.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    pub id: AgentId,
    pub position: Position,
    pub policy: PolicyKind,
    pub sma: SociallyMindedAbility,
    pub readiness: PerceiverReadiness,
    pub prototypes: NormPrototypes,
    pub goal: Vec<f64>,
    pub perceived_rewards: Option<Vec<f64>>,
    /// Site pursued last tick; the task tag other agents observe.
    pub task: Option<usize>,
    pub recent_actions: VecDeque<Action>,
    pub self_definition: SelfDefinition,
    /// Fraction of the agent's personal goal achieved; never decreases.
    pub goal_progress: f64,
    pub reward: f64,
}

/// Everything `step` needs, including the generator state.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub tick: u32,
    pub width: u32,
    pub height: u32,
    pub sites: Vec<TaskSite>,
    pub agents: Vec<AgentState>,
    pub percept_noise: f64,
    pub landscape: LandscapeConfig,
    pub rng: ChaCha8Rng,
}

impl WorldState {
    /// Initial world for a validated scenario. Start cells are drawn from
    /// the seeded generator in agent order.
    pub fn new(config: &ScenarioConfig, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let roster = config.agents.len();
        let sites = config
            .sites
            .iter()
            .map(|s| TaskSite {
                position: s.position.into(),
                kind: s.kind,
                required: s.kind.required_agents(roster),
                reward: s.reward,
                completed_at: None,
            })
            .collect();
        let agents = config
            .agents
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let id = AgentId(i as u32);
                AgentState {
                    id,
                    position: spawn(&mut rng, a.start, a.spawn_radius, config.grid.width, config.grid.height),
                    policy: a.policy,
                    sma: a.sma,
                    readiness: a.readiness,
                    prototypes: a.prototypes.clone(),
                    goal: a.goal.clone(),
                    perceived_rewards: a.perceived_rewards.clone(),
                    task: None,
                    recent_actions: VecDeque::new(),
                    self_definition: SelfDefinition::individual(id),
                    goal_progress: 0.0,
                    reward: 0.0,
                }
            })
            .collect();
        WorldState {
            tick: 0,
            width: config.grid.width,
            height: config.grid.height,
            sites,
            agents,
            percept_noise: config.percept_noise,
            landscape: config.landscape.clone(),
            rng,
        }
    }

    pub fn agent_ids(&self) -> Vec<AgentId> {
        self.agents.iter().map(|a| a.id).collect()
    }

    /// Mean of all goal vectors: the superordinate goal.
    pub fn group_goal(&self) -> Vec<f64> {
        mean_goal(self.agents.iter().map(|a| a.goal.as_slice()), self.sites.len())
    }

    /// Fraction of the positive value `goal` places on site rewards that has
    /// been realised. Zero when the goal values nothing.
    pub fn attainment(&self, goal: &[f64]) -> f64 {
        let (mut done, mut total) = (0.0, 0.0);
        for (site, g) in self.sites.iter().zip(goal) {
            let value = g.max(0.0) * site.reward;
            total += value;
            if !site.is_active() {
                done += value;
            }
        }
        if total > 0.0 {
            done / total
        } else {
            0.0
        }
    }
}

pub(crate) fn mean_goal<'a>(goals: impl Iterator<Item = &'a [f64]>, dim: usize) -> Vec<f64> {
    let mut sum = vec![0.0; dim];
    let mut n = 0usize;
    for g in goals {
        sum.iter_mut().zip(g).for_each(|(s, v)| *s += v);
        n += 1;
    }
    if n > 0 {
        sum.iter_mut().for_each(|s| *s /= n as f64);
    }
    sum
}

fn spawn(rng: &mut ChaCha8Rng, start: [u32; 2], radius: u32, width: u32, height: u32) -> Position {
    if radius == 0 {
        return start.into();
    }
    let r = radius as i64;
    let mut draw = |c: u32, limit: u32| {
        let offset = rng.random_range(-r..=r);
        (c as i64 + offset).clamp(0, limit as i64 - 1) as u32
    };
    let x = draw(start[0], width);
    let y = draw(start[1], height);
    Position(x, y)
}
