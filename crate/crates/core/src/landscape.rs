//! Social landscape modelling: which groups are there, and who is in them.
//!
//! An observer turns what it sees of every present agent into a feature
//! vector, builds a single-linkage merge tree over those vectors and keeps a
//! parsimonious set of partitions: everyone as an individual, the best
//! intermediate cut of the tree (only if its comparative fit is high enough),
//! and the whole group. Comparative fit is the meta-contrast ratio, mean
//! between-category distance over mean within-category distance.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::AgentId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandscapeError {
    #[error("no observation for agent {0}")]
    MissingAgent(AgentId),
    #[error("invalid observation for agent {agent}: {reason}")]
    InvalidObservation { agent: AgentId, reason: String },
    #[error("feature matrix: {0}")]
    InvalidFeatures(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("cannot build a landscape for an empty context")]
    EmptyContext,
    #[error("observer {0} is not present in the context")]
    UnknownObserver(AgentId),
    #[error("an agentic structure needs at least one member")]
    EmptyStructure,
}

/// Per-agent feature vectors with a shared dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentFeatureMatrix {
    agent_ids: Vec<AgentId>,
    features: Vec<Vec<f64>>,
}

impl AgentFeatureMatrix {
    pub fn new(agent_ids: Vec<AgentId>, features: Vec<Vec<f64>>) -> Result<Self, LandscapeError> {
        if agent_ids.len() != features.len() {
            return Err(LandscapeError::InvalidFeatures(format!(
                "{} ids but {} feature rows",
                agent_ids.len(),
                features.len()
            )));
        }
        let unique: BTreeSet<_> = agent_ids.iter().collect();
        if unique.len() != agent_ids.len() {
            return Err(LandscapeError::InvalidFeatures("duplicate agent id".into()));
        }
        if let Some(first) = features.first() {
            let dim = first.len();
            if dim == 0 {
                return Err(LandscapeError::InvalidFeatures("dimension must be at least 1".into()));
            }
            for (id, row) in agent_ids.iter().zip(&features) {
                if row.len() != dim {
                    return Err(LandscapeError::InvalidFeatures(format!(
                        "agent {id} has dimension {}, expected {dim}",
                        row.len()
                    )));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(LandscapeError::InvalidFeatures(format!(
                        "agent {id} has a non-finite feature"
                    )));
                }
            }
        }
        Ok(AgentFeatureMatrix {
            agent_ids,
            features,
        })
    }

    pub fn agent_ids(&self) -> &[AgentId] {
        &self.agent_ids
    }

    pub fn len(&self) -> usize {
        self.agent_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agent_ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.features.first().map_or(0, Vec::len)
    }

    pub fn row(&self, agent: AgentId) -> Option<&[f64]> {
        self.index_of(agent).map(|i| self.features[i].as_slice())
    }

    pub fn index_of(&self, agent: AgentId) -> Option<usize> {
        self.agent_ids.iter().position(|&a| a == agent)
    }

    pub fn rows(&self) -> impl Iterator<Item = (AgentId, &[f64])> {
        self.agent_ids
            .iter()
            .copied()
            .zip(self.features.iter().map(Vec::as_slice))
    }

    /// Every feature multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        AgentFeatureMatrix {
            agent_ids: self.agent_ids.clone(),
            features: self
                .features
                .iter()
                .map(|row| row.iter().map(|v| v * k).collect())
                .collect(),
        }
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// What an observer can see of one agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentObservation {
    pub position: [f64; 2],
    /// Index of the task the agent is currently pursuing, if any.
    pub task: Option<usize>,
    /// Recent actions as indices into the action histogram bins.
    pub recent_actions: Vec<usize>,
}

/// Fixed feature layout: `[x, y, task one-hot.., action histogram..]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    /// Positions are divided by this before weighting.
    pub position_scale: f64,
    pub position_weight: f64,
    pub task_count: usize,
    pub task_weight: f64,
    pub action_bins: usize,
    pub action_weight: f64,
}

impl FeatureSchema {
    pub fn dim(&self) -> usize {
        2 + self.task_count + self.action_bins
    }
}

/// Maps observations of the present agents onto the schema, in `present` order.
pub fn extract_features(
    present: &[AgentId],
    world_view: &BTreeMap<AgentId, AgentObservation>,
    schema: &FeatureSchema,
) -> Result<AgentFeatureMatrix, LandscapeError> {
    let scale = if schema.position_scale > 0.0 {
        schema.position_scale
    } else {
        1.0
    };
    let mut rows = Vec::with_capacity(present.len());
    for &agent in present {
        let obs = world_view
            .get(&agent)
            .ok_or(LandscapeError::MissingAgent(agent))?;
        let mut row = Vec::with_capacity(schema.dim());
        row.extend(obs.position.iter().map(|p| p / scale * schema.position_weight));

        let mut tasks = vec![0.0; schema.task_count];
        if let Some(task) = obs.task {
            *tasks
                .get_mut(task)
                .ok_or_else(|| LandscapeError::InvalidObservation {
                    agent,
                    reason: format!("task {task} outside schema of {}", schema.task_count),
                })? = schema.task_weight;
        }
        row.extend(tasks);

        let mut histogram = vec![0.0; schema.action_bins];
        for &action in &obs.recent_actions {
            *histogram
                .get_mut(action)
                .ok_or_else(|| LandscapeError::InvalidObservation {
                    agent,
                    reason: format!("action {action} outside {} bins", schema.action_bins),
                })? += 1.0;
        }
        if !obs.recent_actions.is_empty() {
            let n = obs.recent_actions.len() as f64;
            histogram
                .iter_mut()
                .for_each(|h| *h = *h / n * schema.action_weight);
        }
        row.extend(histogram);
        rows.push(row);
    }
    AgentFeatureMatrix::new(present.to_vec(), rows)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StructureId(String);

impl StructureId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for StructureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A collective of agents that can act together. Singletons encode the
/// individual self. The id is derived from the member set, so the same
/// members always yield the same id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgenticStructure {
    pub id: StructureId,
    pub members: BTreeSet<AgentId>,
}

impl AgenticStructure {
    pub fn new(members: impl IntoIterator<Item = AgentId>) -> Result<Self, LandscapeError> {
        let members: BTreeSet<AgentId> = members.into_iter().collect();
        if members.is_empty() {
            return Err(LandscapeError::EmptyStructure);
        }
        let id = members
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("+");
        Ok(AgenticStructure {
            id: StructureId(id),
            members,
        })
    }

    pub fn singleton(agent: AgentId) -> Self {
        AgenticStructure::new([agent]).expect("one member")
    }

    pub fn contains(&self, agent: AgentId) -> bool {
        self.members.contains(&agent)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_singleton(&self) -> bool {
        self.members.len() == 1
    }
}

/// Comparative fit of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetaContrastScore {
    Finite(f64),
    /// Zero within-category spread with positive between-category spread.
    Max,
}

impl MetaContrastScore {
    pub const NEUTRAL: MetaContrastScore = MetaContrastScore::Finite(1.0);

    /// Maps `[0, ∞]` onto `[0, 1]` via `s / (1 + s)`.
    pub fn squashed(self) -> f64 {
        match self {
            MetaContrastScore::Finite(s) => s / (1.0 + s),
            MetaContrastScore::Max => 1.0,
        }
    }

    pub fn exceeds(self, threshold: f64) -> bool {
        match self {
            MetaContrastScore::Finite(s) => s > threshold,
            MetaContrastScore::Max => true,
        }
    }
}

impl Eq for MetaContrastScore {}

impl PartialOrd for MetaContrastScore {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MetaContrastScore {
    fn cmp(&self, other: &Self) -> Ordering {
        use MetaContrastScore::*;
        match (self, other) {
            (Max, Max) => Ordering::Equal,
            (Max, Finite(_)) => Ordering::Greater,
            (Finite(_), Max) => Ordering::Less,
            (Finite(a), Finite(b)) => a.total_cmp(b),
        }
    }
}

/// Ratio of mean between-category distance to mean within-category distance.
///
/// Partitions without any within pairs (all singletons) or without any
/// between pairs (one category) score the neutral 1, as does a context with
/// no spread at all.
pub fn meta_contrast_ratio(
    partition: &[AgenticStructure],
    features: &AgentFeatureMatrix,
) -> Result<MetaContrastScore, LandscapeError> {
    let labels = partition_labels(partition, features)?;
    let rows: Vec<&[f64]> = features.rows().map(|(_, r)| r).collect();

    let (mut within, mut n_within) = (0.0, 0usize);
    let (mut between, mut n_between) = (0.0, 0usize);
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            let d = euclidean(rows[i], rows[j]);
            if labels[i] == labels[j] {
                within += d;
                n_within += 1;
            } else {
                between += d;
                n_between += 1;
            }
        }
    }
    if n_within == 0 || n_between == 0 {
        return Ok(MetaContrastScore::NEUTRAL);
    }
    let within = within / n_within as f64;
    let between = between / n_between as f64;
    Ok(if within == 0.0 {
        if between > 0.0 {
            MetaContrastScore::Max
        } else {
            MetaContrastScore::NEUTRAL
        }
    } else {
        MetaContrastScore::Finite(between / within)
    })
}

/// Category index of every agent, in feature-matrix order.
fn partition_labels(
    partition: &[AgenticStructure],
    features: &AgentFeatureMatrix,
) -> Result<Vec<usize>, LandscapeError> {
    let mut labels: Vec<Option<usize>> = vec![None; features.len()];
    for (label, structure) in partition.iter().enumerate() {
        if structure.is_empty() {
            return Err(LandscapeError::InvalidPartition("empty structure".into()));
        }
        for &agent in &structure.members {
            let idx = features.index_of(agent).ok_or_else(|| {
                LandscapeError::InvalidPartition(format!("{agent} is not in the context"))
            })?;
            if labels[idx].replace(label).is_some() {
                return Err(LandscapeError::InvalidPartition(format!(
                    "{agent} appears in more than one structure"
                )));
            }
        }
    }
    labels
        .into_iter()
        .zip(features.agent_ids())
        .map(|(label, agent)| {
            label.ok_or_else(|| LandscapeError::InvalidPartition(format!("{agent} is missing")))
        })
        .collect()
}

/// One step of the single-linkage merge tree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    /// The agent pair realising the linkage distance.
    pub pair: (AgentId, AgentId),
    pub distance: f64,
}

/// Single-linkage agglomeration over Euclidean distances.
///
/// Pairs are taken in order of increasing distance, ties broken by the
/// smaller agent-id pair; a pair whose agents are already in one cluster is
/// skipped. Returns `n - 1` merges for `n` agents.
pub fn single_linkage(features: &AgentFeatureMatrix) -> Vec<Merge> {
    let ids = features.agent_ids();
    let rows: Vec<&[f64]> = features.rows().map(|(_, r)| r).collect();
    let mut pairs = Vec::new();
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let key = if ids[i] < ids[j] {
                (ids[i], ids[j])
            } else {
                (ids[j], ids[i])
            };
            pairs.push((euclidean(rows[i], rows[j]), key, i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut parent: Vec<usize> = (0..ids.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    let mut merges = Vec::with_capacity(ids.len().saturating_sub(1));
    for (distance, pair, i, j) in pairs {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri != rj {
            parent[ri.max(rj)] = ri.min(rj);
            merges.push(Merge { pair, distance });
        }
    }
    merges
}

/// Partitions obtained by applying the first `k` merges, for `k = 0..n`.
/// Element 0 is all singletons, the last is the whole group.
pub fn tree_cuts(features: &AgentFeatureMatrix, merges: &[Merge]) -> Vec<Vec<AgenticStructure>> {
    let ids = features.agent_ids();
    let mut clusters: Vec<BTreeSet<AgentId>> = ids.iter().map(|&a| BTreeSet::from([a])).collect();
    let mut cuts = vec![to_partition(&clusters)];
    for merge in merges {
        let a = clusters
            .iter()
            .position(|c| c.contains(&merge.pair.0))
            .expect("merge agent present");
        let b = clusters
            .iter()
            .position(|c| c.contains(&merge.pair.1))
            .expect("merge agent present");
        let (keep, drop) = (a.min(b), a.max(b));
        let moved = clusters.remove(drop);
        clusters[keep].extend(moved);
        cuts.push(to_partition(&clusters));
    }
    cuts
}

fn to_partition(clusters: &[BTreeSet<AgentId>]) -> Vec<AgenticStructure> {
    let mut partition: Vec<AgenticStructure> = clusters
        .iter()
        .map(|c| AgenticStructure::new(c.iter().copied()).expect("non-empty cluster"))
        .collect();
    partition.sort_by_key(|s| *s.members.first().expect("non-empty"));
    partition
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeParams {
    /// An intermediate cut is kept only if its meta-contrast strictly exceeds this.
    pub fit_threshold: f64,
}

impl Default for LandscapeParams {
    fn default() -> Self {
        LandscapeParams { fit_threshold: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelKind {
    Individuals,
    Subgroups,
    WholeGroup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LandscapeLevel {
    pub kind: LevelKind,
    pub structures: Vec<AgenticStructure>,
    pub fit: MetaContrastScore,
    membership: BTreeMap<AgentId, usize>,
}

impl LandscapeLevel {
    fn new(kind: LevelKind, structures: Vec<AgenticStructure>, fit: MetaContrastScore) -> Self {
        let membership = structures
            .iter()
            .enumerate()
            .flat_map(|(i, s)| s.members.iter().map(move |&a| (a, i)))
            .collect();
        LandscapeLevel {
            kind,
            structures,
            fit,
            membership,
        }
    }

    pub fn structure_of(&self, agent: AgentId) -> Option<&AgenticStructure> {
        self.membership.get(&agent).map(|&i| &self.structures[i])
    }
}

/// An observer's model of the candidate agentic structures in its context.
#[derive(Debug, Clone, PartialEq)]
pub struct SocialLandscape {
    pub observer: AgentId,
    pub levels: Vec<LandscapeLevel>,
}

impl SocialLandscape {
    pub fn agents(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.levels[0].membership.keys().copied()
    }

    /// Every `(level index, structure)` containing `agent`, finest level first.
    pub fn structures_containing(&self, agent: AgentId) -> Vec<(usize, &AgenticStructure)> {
        self.levels
            .iter()
            .enumerate()
            .filter_map(|(i, level)| level.structure_of(agent).map(|s| (i, s)))
            .collect()
    }

    pub fn members_of(&self, id: &StructureId) -> Option<&BTreeSet<AgentId>> {
        self.levels
            .iter()
            .flat_map(|l| &l.structures)
            .find(|s| &s.id == id)
            .map(|s| &s.members)
    }

    pub fn level(&self, kind: LevelKind) -> Option<&LandscapeLevel> {
        self.levels.iter().find(|l| l.kind == kind)
    }
}

/// The intermediate tree cut with the highest meta-contrast, if any exists.
/// Ties go to the coarser cut.
pub fn best_intermediate_cut(
    features: &AgentFeatureMatrix,
) -> Result<Option<(Vec<AgenticStructure>, MetaContrastScore)>, LandscapeError> {
    let merges = single_linkage(features);
    let cuts = tree_cuts(features, &merges);
    let mut best: Option<(Vec<AgenticStructure>, MetaContrastScore)> = None;
    if cuts.len() > 2 {
        for cut in &cuts[1..cuts.len() - 1] {
            let score = meta_contrast_ratio(cut, features)?;
            if best.as_ref().is_none_or(|(_, b)| score >= *b) {
                best = Some((cut.clone(), score));
            }
        }
    }
    Ok(best)
}

pub fn build_social_landscape(
    observer: AgentId,
    features: &AgentFeatureMatrix,
    params: &LandscapeParams,
) -> Result<SocialLandscape, LandscapeError> {
    if features.is_empty() {
        return Err(LandscapeError::EmptyContext);
    }
    if features.index_of(observer).is_none() {
        return Err(LandscapeError::UnknownObserver(observer));
    }
    let ids = features.agent_ids();
    let singletons: Vec<AgenticStructure> =
        to_partition(&ids.iter().map(|&a| BTreeSet::from([a])).collect::<Vec<_>>());
    let mut levels = vec![LandscapeLevel::new(
        LevelKind::Individuals,
        singletons.clone(),
        meta_contrast_ratio(&singletons, features)?,
    )];
    if ids.len() == 1 {
        return Ok(SocialLandscape { observer, levels });
    }
    if let Some((cut, score)) = best_intermediate_cut(features)? {
        if score.exceeds(params.fit_threshold) {
            levels.push(LandscapeLevel::new(LevelKind::Subgroups, cut, score));
        }
    }
    let whole = vec![AgenticStructure::new(ids.iter().copied())?];
    let fit = meta_contrast_ratio(&whole, features)?;
    levels.push(LandscapeLevel::new(LevelKind::WholeGroup, whole, fit));
    Ok(SocialLandscape { observer, levels })
}
