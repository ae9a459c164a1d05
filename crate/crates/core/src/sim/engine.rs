//! The sense → self-define → influence → act loop.
//!
//! Every tick reads only the previous world state. Per-agent work runs on the
//! rayon pool and is collected in agent order; all mutation happens in one
//! serial commit, so logs do not depend on the number of threads.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::influence::{
    fuse_perception, shape_utility, weight_decisions, ActionScores, Observation, UtilitySpec,
};
use crate::landscape::{
    build_social_landscape, extract_features, AgentFeatureMatrix, AgentObservation, FeatureSchema,
    LandscapeParams,
};
use crate::metrics::{
    self, Contributor, GoalAlignment, GroupContext, GroupIdentification, GroupMember,
    IndividualContext, SalientIdentityGoalAlignment, SharedSocialIdentity,
};
use crate::relevance::{select_self_defining, SelfDefinition};
use crate::AgentId;

use super::config::{ConfigError, PolicyKind, ScenarioConfig};
use super::log::{AgentTick, EpisodeLog, EpisodeSummary, LogHeader, TickRecord};
use super::world::{mean_goal, Action, AgentState, Intention, Position, WorldState, ACTION_BINS};

/// Score of pursuing a site that is already completed.
pub const UNAVAILABLE: f64 = -1.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    ConfigInvalid(#[from] ConfigError),
}

/// Cosine similarity, 0 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        (dot / (na * nb)).clamp(-1.0, 1.0)
    }
}

/// Metric inputs implied by the current self-definitions and goals.
///
/// * SSI(p, q): p's salience when p and q share a non-singleton self-defining
///   structure, else 0.
/// * GA(p, q): cosine of goal vectors.
/// * GI(m): m's salience when its self-defining structure is the whole group.
/// * SIGA(m): cosine between the goal of m's salient identity (own goal, or
///   the member-mean goal of its structure) and the mean goal of everyone.
pub fn derive_context_metrics(world: &WorldState) -> (Vec<IndividualContext>, GroupContext) {
    let n = world.agents.len();
    let dim = world.sites.len();
    let individual = world
        .agents
        .iter()
        .map(|p| {
            let def = &p.self_definition;
            let contributors = world
                .agents
                .iter()
                .filter(|q| q.id != p.id)
                .map(|q| {
                    let shared = !def.structure.is_singleton()
                        && def.structure.id == q.self_definition.structure.id;
                    Contributor {
                        ssi: SharedSocialIdentity::new(if shared { def.salience } else { 0.0 })
                            .expect("salience in [0, 1]"),
                        ga: GoalAlignment::new(cosine(&p.goal, &q.goal)).expect("cosine in [-1, 1]"),
                    }
                })
                .collect();
            IndividualContext::new(p.sma, contributors)
        })
        .collect();

    let group_goal = world.group_goal();
    let members = world
        .agents
        .iter()
        .map(|m| {
            let def = &m.self_definition;
            let gi = if def.structure.len() == n {
                def.salience
            } else {
                0.0
            };
            let identity_goal = if def.is_individual() {
                m.goal.clone()
            } else {
                mean_goal(
                    def.structure
                        .members
                        .iter()
                        .map(|id| world.agents[id.0 as usize].goal.as_slice()),
                    dim,
                )
            };
            GroupMember {
                sma: m.sma,
                gi: GroupIdentification::new(gi).expect("salience in [0, 1]"),
                siga: SalientIdentityGoalAlignment::new(cosine(&identity_goal, &group_goal))
                    .expect("cosine in [-1, 1]"),
            }
        })
        .collect();
    (
        individual,
        GroupContext::new(members).expect("scenarios have at least one agent"),
    )
}

/// What every agent observes of every other agent, as landscape features.
pub fn observed_features(world: &WorldState) -> AgentFeatureMatrix {
    let schema = FeatureSchema {
        position_scale: (world.width.max(world.height).saturating_sub(1)).max(1) as f64,
        position_weight: world.landscape.position_weight,
        task_count: world.sites.len(),
        task_weight: world.landscape.task_weight,
        action_bins: ACTION_BINS,
        action_weight: world.landscape.action_weight,
    };
    let view: BTreeMap<AgentId, AgentObservation> = world
        .agents
        .iter()
        .map(|a| {
            (
                a.id,
                AgentObservation {
                    position: [a.position.0 as f64, a.position.1 as f64],
                    task: a.task,
                    recent_actions: a.recent_actions.iter().map(|x| x.bin()).collect(),
                },
            )
        })
        .collect();
    extract_features(&world.agent_ids(), &view, &schema).expect("world view covers every agent")
}

fn self_define(world: &WorldState, agent: &AgentState, features: Option<&AgentFeatureMatrix>) -> SelfDefinition {
    match agent.policy {
        PolicyKind::PureIndividual => SelfDefinition::individual(agent.id),
        PolicyKind::FixedCollective => SelfDefinition::whole_group(agent.id, world.agent_ids()),
        PolicyKind::SociallyMinded => {
            let features = features.expect("features computed for socially-minded agents");
            let params = LandscapeParams {
                fit_threshold: world.landscape.fit_threshold,
            };
            let landscape =
                build_social_landscape(agent.id, features, &params).expect("non-empty context");
            select_self_defining(
                agent.id,
                &landscape,
                features,
                &agent.readiness,
                &agent.prototypes,
            )
            .expect("landscape covers every agent")
        }
    }
}

/// Per-intention utilities given the agent's (fused) reward beliefs.
fn utility_spec(world: &WorldState, agent: &AgentState, def: &SelfDefinition, beliefs: &[f64]) -> UtilitySpec {
    let row = |weights: &dyn Fn(usize) -> f64| -> Vec<f64> {
        std::iter::once(0.0)
            .chain((0..world.sites.len()).map(|s| weights(s) * beliefs[s]))
            .collect()
    };
    let peers = world
        .agents
        .iter()
        .filter(|q| q.id != agent.id)
        .map(|q| (q.id, row(&|s| q.goal[s])))
        .collect();
    let structure_goal = mean_goal(
        def.structure
            .members
            .iter()
            .map(|id| world.agents[id.0 as usize].goal.as_slice()),
        world.sites.len(),
    );
    let staffable = |s: usize| world.sites[s].required <= def.structure.len();
    let structure = row(&|s| if staffable(s) { structure_goal[s] } else { 0.0 });
    UtilitySpec::new(row(&|s| agent.goal[s]), peers, structure).expect("finite utilities")
}

/// Greedy shortest-path step toward `target`; larger axis gap first, x on ties.
fn move_toward(from: Position, target: Position) -> Action {
    let dx = target.0 as i64 - from.0 as i64;
    let dy = target.1 as i64 - from.1 as i64;
    if dx == 0 && dy == 0 {
        Action::Interact
    } else if dx.abs() >= dy.abs() {
        if dx > 0 {
            Action::East
        } else {
            Action::West
        }
    } else if dy > 0 {
        Action::South
    } else {
        Action::North
    }
}

pub struct StepOutcome {
    pub world: WorldState,
    pub record: TickRecord,
}

pub fn step(world: &WorldState) -> WorldState {
    step_with_record(world).world
}

pub fn step_with_record(world: &WorldState) -> StepOutcome {
    let mut rng = world.rng.clone();
    let n_sites = world.sites.len();

    // Percepts: believed reward per site, plus noise drawn in agent/site order.
    let percepts: Vec<Observation> = world
        .agents
        .iter()
        .map(|a| {
            let values = world
                .sites
                .iter()
                .enumerate()
                .map(|(s, site)| {
                    let noise = (rng.random::<f64>() * 2.0 - 1.0) * world.percept_noise;
                    if site.is_active() {
                        let base = a.perceived_rewards.as_ref().map_or(site.reward, |p| p[s]);
                        base + noise
                    } else {
                        0.0
                    }
                })
                .collect();
            Observation::certain(a.id, values)
        })
        .collect();

    let features = world
        .agents
        .iter()
        .any(|a| a.policy == PolicyKind::SociallyMinded)
        .then(|| observed_features(world));
    let defs: Vec<SelfDefinition> = world
        .agents
        .par_iter()
        .map(|a| self_define(world, a, features.as_ref()))
        .collect();

    let intentions = Intention::all(n_sites);
    let own_scores: Vec<(AgentId, ActionScores<Intention>)> = world
        .agents
        .par_iter()
        .zip(&defs)
        .map(|(a, def)| {
            let peers: Vec<Observation> = def
                .peers()
                .map(|q| percepts[q.0 as usize].clone())
                .collect();
            let fused = fuse_perception(&percepts[a.id.0 as usize], &peers, def)
                .expect("percepts share one dimension");
            let shaped = shape_utility(&utility_spec(world, a, def, &fused.values), def);
            let scores = intentions
                .iter()
                .map(|i| match *i {
                    Intention::Idle => 0.0,
                    Intention::Pursue(s) if world.sites[s].is_active() => {
                        let d = a.position.manhattan(world.sites[s].position) as f64;
                        shaped[s + 1] / (1.0 + d)
                    }
                    Intention::Pursue(_) => UNAVAILABLE,
                })
                .collect();
            (a.id, ActionScores::new(intentions.clone(), scores).expect("finite scores"))
        })
        .collect();

    let chosen: Vec<Intention> = own_scores
        .par_iter()
        .zip(&defs)
        .map(|((_, own), def)| {
            *weight_decisions(own, &own_scores, def)
                .expect("shared action set")
                .argmax()
        })
        .collect();

    let actions: Vec<Action> = world
        .agents
        .iter()
        .zip(&chosen)
        .map(|(a, i)| match *i {
            Intention::Idle => Action::Stay,
            Intention::Pursue(s) => move_toward(a.position, world.sites[s].position),
        })
        .collect();

    // Commit.
    let mut next = world.clone();
    next.rng = rng;
    let mut rewards = vec![0.0; world.agents.len()];
    let mut completed = Vec::new();
    for (s, site) in next.sites.iter_mut().enumerate() {
        if !site.is_active() {
            continue;
        }
        let participants: Vec<usize> = world
            .agents
            .iter()
            .enumerate()
            .filter(|(i, a)| actions[*i] == Action::Interact && a.position == site.position)
            .map(|(i, _)| i)
            .collect();
        if !participants.is_empty() && participants.len() == site.required {
            site.completed_at = Some(world.tick);
            completed.push(s);
            let share = site.reward / participants.len() as f64;
            participants.iter().for_each(|&p| rewards[p] += share);
        }
    }
    let window = world.landscape.action_window;
    let (width, height) = (world.width, world.height);
    for (i, agent) in next.agents.iter_mut().enumerate() {
        let moved = agent.position.apply(actions[i]);
        agent.position = Position(moved.0.min(width - 1), moved.1.min(height - 1));
        agent.task = chosen[i].task();
        agent.recent_actions.push_back(actions[i]);
        while agent.recent_actions.len() > window {
            agent.recent_actions.pop_front();
        }
        agent.self_definition = defs[i].clone();
        agent.reward += rewards[i];
    }
    let progress: Vec<f64> = next.agents.iter().map(|a| next.attainment(&a.goal)).collect();
    for (agent, p) in next.agents.iter_mut().zip(progress) {
        agent.goal_progress = agent.goal_progress.max(p);
    }
    next.tick = world.tick + 1;

    let (contexts, group_context) = derive_context_metrics(&next);
    let agents = next
        .agents
        .iter()
        .zip(contexts)
        .enumerate()
        .map(|(i, (a, context))| AgentTick {
            id: a.id,
            position: a.position,
            intention: chosen[i],
            action: actions[i],
            self_definition: a.self_definition.clone(),
            reward: rewards[i],
            attainment: a.goal_progress,
            ismi: metrics::ismi(&context),
            context,
        })
        .collect();
    let record = TickRecord {
        tick: world.tick,
        agents,
        completed,
        gsmi: metrics::gsmi(&group_context),
        group_context,
        group_attainment: next.attainment(&next.group_goal()),
    };
    StepOutcome {
        world: next,
        record,
    }
}

/// Runs a scenario for its horizon and returns the full log.
pub fn run_episode(config: &ScenarioConfig, seed: u64) -> Result<EpisodeLog, SimError> {
    config.validate()?;
    let mut world = WorldState::new(config, seed);
    let mut ticks = Vec::with_capacity(config.horizon as usize);
    for _ in 0..config.horizon {
        let outcome = step_with_record(&world);
        world = outcome.world;
        ticks.push(outcome.record);
    }
    let summary = EpisodeSummary {
        ticks_run: world.tick,
        attainment: world.agents.iter().map(|a| a.goal_progress).collect(),
        group_attainment: world.attainment(&world.group_goal()),
        total_reward: world.agents.iter().map(|a| a.reward).sum(),
        site_completion: world.sites.iter().map(|s| s.completed_at).collect(),
    };
    Ok(EpisodeLog {
        header: LogHeader::new(config, seed),
        ticks,
        summary: Some(summary),
    })
}

/// World after `ticks` steps, without logging.
pub fn advance(config: &ScenarioConfig, seed: u64, ticks: u32) -> Result<WorldState, SimError> {
    config.validate()?;
    let mut world = WorldState::new(config, seed);
    for _ in 0..ticks {
        world = step(&world);
    }
    Ok(world)
}

#[allow(dead_code)]
fn _assert_send_sync() {
    fn check<T: Send + Sync>() {}
    check::<WorldState>();
    check::<VecDeque<Action>>();
}
