//! Social influence: how a self-definition shapes what an agent perceives,
//! how it decides and what it values.
//!
//! With an individual self-definition every operation here returns the
//! agent's own input untouched. Otherwise members of the self-defining
//! structure contribute in proportion to the normalised salience. Agents
//! outside the structure never contribute.
//!
//! Weighted means are summed over the structure in agent-id order (the agent's
//! own term at its id position), so every member of a structure computes
//! bit-identical blends from the same inputs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::relevance::SelfDefinition;
use crate::AgentId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfluenceError {
    #[error("observation of {agent} has {got} channels, expected {expected}")]
    DimensionMismatch {
        agent: AgentId,
        expected: usize,
        got: usize,
    },
    #[error("scores of {0} are over a different action set")]
    ActionSetMismatch(AgentId),
    #[error("invalid {0}")]
    Invalid(String),
}

/// Percept over the scenario's observable channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub owner: AgentId,
    pub values: Vec<f64>,
    /// Per-channel weight applied to this observation when fusing.
    pub confidence: Vec<f64>,
}

impl Observation {
    pub fn new(owner: AgentId, values: Vec<f64>, confidence: Vec<f64>) -> Result<Self, InfluenceError> {
        if values.len() != confidence.len() {
            return Err(InfluenceError::DimensionMismatch {
                agent: owner,
                expected: values.len(),
                got: confidence.len(),
            });
        }
        if confidence.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(InfluenceError::Invalid(format!(
                "confidence of {owner}: weights must be finite and non-negative"
            )));
        }
        Ok(Observation {
            owner,
            values,
            confidence,
        })
    }

    /// Observation with every channel at confidence 1.
    pub fn certain(owner: AgentId, values: Vec<f64>) -> Self {
        let confidence = vec![1.0; values.len()];
        Observation {
            owner,
            values,
            confidence,
        }
    }
}

/// Channel-wise weighted mean of the agent's own percept and those of its
/// structure peers (own weight 1, peer weight = salience, each scaled by the
/// per-channel confidence). Channels with zero total weight keep the own value.
pub fn fuse_perception(
    own: &Observation,
    peers: &[Observation],
    self_def: &SelfDefinition,
) -> Result<Observation, InfluenceError> {
    let dim = own.values.len();
    for p in peers {
        if p.values.len() != dim || p.confidence.len() != dim {
            return Err(InfluenceError::DimensionMismatch {
                agent: p.owner,
                expected: dim,
                got: p.values.len(),
            });
        }
    }
    if self_def.is_individual() || self_def.salience == 0.0 {
        return Ok(own.clone());
    }

    let contributors = in_structure_order(own, peers, self_def, |o| o.owner);
    let values = (0..dim)
        .map(|c| {
            let (mut num, mut den) = (0.0, 0.0);
            for (obs, weight) in &contributors {
                let w = weight * obs.confidence[c];
                num += w * obs.values[c];
                den += w;
            }
            if den > 0.0 {
                num / den
            } else {
                own.values[c]
            }
        })
        .collect();
    Ok(Observation {
        owner: own.owner,
        values,
        confidence: own.confidence.clone(),
    })
}

/// The agent's own item plus in-structure peers, sorted by agent id, each
/// with its blending weight.
fn in_structure_order<'a, T>(
    own: &'a T,
    peers: &'a [T],
    self_def: &SelfDefinition,
    owner: impl Fn(&T) -> AgentId,
) -> Vec<(&'a T, f64)> {
    let mut members: BTreeMap<AgentId, (&T, f64)> = BTreeMap::new();
    members.insert(self_def.agent, (own, 1.0));
    for p in peers {
        let id = owner(p);
        if id != self_def.agent && self_def.structure.contains(id) {
            members.entry(id).or_insert((p, self_def.salience));
        }
    }
    members.into_values().collect()
}

/// Scores over a fixed, ordered action set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionScores<A> {
    pub actions: Vec<A>,
    pub scores: Vec<f64>,
}

impl<A: PartialEq + Clone> ActionScores<A> {
    pub fn new(actions: Vec<A>, scores: Vec<f64>) -> Result<Self, InfluenceError> {
        if actions.is_empty() || actions.len() != scores.len() {
            return Err(InfluenceError::Invalid(
                "action scores need one score per action and a non-empty action set".into(),
            ));
        }
        if scores.iter().any(|s| !s.is_finite()) {
            return Err(InfluenceError::Invalid("action scores must be finite".into()));
        }
        Ok(ActionScores { actions, scores })
    }

    /// Highest-scoring action; ties go to the earliest action in the set.
    pub fn argmax(&self) -> &A {
        let mut best = 0;
        for (i, s) in self.scores.iter().enumerate() {
            if *s > self.scores[best] {
                best = i;
            }
        }
        &self.actions[best]
    }

    pub fn score(&self, action: &A) -> Option<f64> {
        self.actions
            .iter()
            .position(|a| a == action)
            .map(|i| self.scores[i])
    }
}

/// `(own + s·Σ peers) / (1 + s·|peers|)` per action, over in-structure peers.
pub fn weight_decisions<A: PartialEq + Clone>(
    own: &ActionScores<A>,
    peer_scores: &[(AgentId, ActionScores<A>)],
    self_def: &SelfDefinition,
) -> Result<ActionScores<A>, InfluenceError> {
    for (peer, scores) in peer_scores {
        if scores.actions != own.actions {
            return Err(InfluenceError::ActionSetMismatch(*peer));
        }
    }
    if self_def.is_individual() || self_def.salience == 0.0 {
        return Ok(own.clone());
    }
    let own_entry = (self_def.agent, own.clone());
    let contributors = in_structure_order(&own_entry, peer_scores, self_def, |(id, _)| *id);
    let scores = (0..own.actions.len())
        .map(|a| {
            let (mut num, mut den) = (0.0, 0.0);
            for ((_, s), weight) in &contributors {
                num += weight * s.scores[a];
                den += weight;
            }
            num / den
        })
        .collect();
    Ok(ActionScores {
        actions: own.actions.clone(),
        scores,
    })
}

/// Per-action benefits to the agent, to each peer, and to the structure itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilitySpec {
    pub self_utility: Vec<f64>,
    pub peer_utilities: BTreeMap<AgentId, Vec<f64>>,
    pub structure_utility: Vec<f64>,
}

impl UtilitySpec {
    pub fn new(
        self_utility: Vec<f64>,
        peer_utilities: BTreeMap<AgentId, Vec<f64>>,
        structure_utility: Vec<f64>,
    ) -> Result<Self, InfluenceError> {
        let n = self_utility.len();
        let rows = std::iter::once(&self_utility)
            .chain(peer_utilities.values())
            .chain(std::iter::once(&structure_utility));
        for row in rows {
            if row.len() != n {
                return Err(InfluenceError::Invalid(format!(
                    "utility rows must all have {n} actions"
                )));
            }
            if row.iter().any(|u| !u.is_finite()) {
                return Err(InfluenceError::Invalid("utilities must be finite".into()));
            }
        }
        Ok(UtilitySpec {
            self_utility,
            peer_utilities,
            structure_utility,
        })
    }
}

/// `U'(a) = self(a) + s · (Σ_{q in structure} peer(q, a) + structure(a))`.
pub fn shape_utility(spec: &UtilitySpec, self_def: &SelfDefinition) -> Vec<f64> {
    if self_def.is_individual() || self_def.salience == 0.0 {
        return spec.self_utility.clone();
    }
    (0..spec.self_utility.len())
        .map(|a| {
            let peers: f64 = spec
                .peer_utilities
                .iter()
                .filter(|(q, _)| **q != self_def.agent && self_def.structure.contains(**q))
                .map(|(_, u)| u[a])
                .sum();
            spec.self_utility[a] + self_def.salience * (peers + spec.structure_utility[a])
        })
        .collect()
}
