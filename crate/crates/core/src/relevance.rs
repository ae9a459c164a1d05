//! Self-relevance of candidate structures and selection of the one
//! structure that defines an agent in the current context.
//!
//! Raw salience = comparative fit × normative fit × perceiver readiness for
//! the structure's level. Comparative fit is the meta-contrast of the level the
//! structure was found on, squashed into `[0, 1]`; the individual and
//! whole-group levels carry the neutral score 1 and so squash to 0.5, leaving
//! readiness to arbitrate between them.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::landscape::{euclidean, AgentFeatureMatrix, AgenticStructure, SocialLandscape};
use crate::AgentId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelevanceError {
    #[error("{agent} is not a member of structure {structure}")]
    NotAMember { agent: AgentId, structure: String },
    #[error("structure {0} is not part of the landscape")]
    NotInLandscape(String),
    #[error("prototype has dimension {prototype}, features have {features}")]
    DimensionMismatch { prototype: usize, features: usize },
    #[error("no features for agent {0}")]
    MissingFeatures(AgentId),
    #[error("landscape has no candidate structure for {0}")]
    NoCandidates(AgentId),
    #[error("invalid perceiver readiness: {0}")]
    InvalidReadiness(String),
    #[error("normative scale must be positive, got {0}")]
    InvalidScale(f64),
}

/// Granularity of an identity.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum LevelTag {
    Individual,
    Subgroup,
    Group,
}

impl LevelTag {
    /// Tag of `structure` in a context with `present` agents.
    pub fn of(structure: &AgenticStructure, present: usize) -> LevelTag {
        if structure.is_singleton() {
            LevelTag::Individual
        } else if structure.len() >= present {
            LevelTag::Group
        } else {
            LevelTag::Subgroup
        }
    }
}

/// Prior predisposition to identify at each level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawReadiness")]
pub struct PerceiverReadiness {
    individual: f64,
    subgroup: f64,
    group: f64,
}

#[derive(Deserialize)]
struct RawReadiness {
    individual: f64,
    subgroup: f64,
    group: f64,
}

impl TryFrom<RawReadiness> for PerceiverReadiness {
    type Error = RelevanceError;

    fn try_from(raw: RawReadiness) -> Result<Self, Self::Error> {
        PerceiverReadiness::new(raw.individual, raw.subgroup, raw.group)
    }
}

impl PerceiverReadiness {
    pub fn new(individual: f64, subgroup: f64, group: f64) -> Result<Self, RelevanceError> {
        let priors = [individual, subgroup, group];
        if priors.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(RelevanceError::InvalidReadiness(format!(
                "priors must be finite and non-negative, got {priors:?}"
            )));
        }
        if priors.iter().all(|&p| p == 0.0) {
            return Err(RelevanceError::InvalidReadiness(
                "at least one prior must be positive".into(),
            ));
        }
        Ok(PerceiverReadiness {
            individual,
            subgroup,
            group,
        })
    }

    pub fn uniform() -> Self {
        PerceiverReadiness::new(1.0, 1.0, 1.0).expect("valid")
    }

    pub fn prior(&self, level: LevelTag) -> f64 {
        match level {
            LevelTag::Individual => self.individual,
            LevelTag::Subgroup => self.subgroup,
            LevelTag::Group => self.group,
        }
    }
}

impl Default for PerceiverReadiness {
    fn default() -> Self {
        PerceiverReadiness::uniform()
    }
}

/// Expected feature vectors per identity level, for normative fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormPrototypes {
    #[serde(default)]
    pub prototypes: BTreeMap<LevelTag, Vec<f64>>,
    /// Distance at which normative fit falls to `exp(-1)`.
    #[serde(default = "default_norm_scale")]
    pub scale: f64,
}

fn default_norm_scale() -> f64 {
    1.0
}

impl Default for NormPrototypes {
    fn default() -> Self {
        NormPrototypes::none()
    }
}

impl NormPrototypes {
    pub fn none() -> Self {
        NormPrototypes {
            prototypes: BTreeMap::new(),
            scale: 1.0,
        }
    }

    pub fn get(&self, level: LevelTag) -> Option<&[f64]> {
        self.prototypes.get(&level).map(Vec::as_slice)
    }
}

/// `exp(-mean distance of members to the prototype / scale)`; 1 without a prototype.
pub fn normative_fit(
    structure: &AgenticStructure,
    features: &AgentFeatureMatrix,
    prototype: Option<&[f64]>,
    scale: f64,
) -> Result<f64, RelevanceError> {
    let Some(prototype) = prototype else {
        return Ok(1.0);
    };
    if !(scale.is_finite() && scale > 0.0) {
        return Err(RelevanceError::InvalidScale(scale));
    }
    if prototype.len() != features.dim() {
        return Err(RelevanceError::DimensionMismatch {
            prototype: prototype.len(),
            features: features.dim(),
        });
    }
    let mut total = 0.0;
    for &member in &structure.members {
        let row = features
            .row(member)
            .ok_or(RelevanceError::MissingFeatures(member))?;
        total += euclidean(row, prototype);
    }
    let mean = total / structure.len() as f64;
    Ok((-mean / scale).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalienceScore {
    pub structure: AgenticStructure,
    pub level: LevelTag,
    pub value: f64,
}

/// Raw salience of `structure` for `target`.
///
/// A structure listed on several levels (a singleton that is also a
/// category of the subgroup cut) takes the best comparative fit among them.
pub fn structure_salience(
    target: AgentId,
    structure: &AgenticStructure,
    landscape: &SocialLandscape,
    features: &AgentFeatureMatrix,
    readiness: &PerceiverReadiness,
    prototypes: &NormPrototypes,
) -> Result<SalienceScore, RelevanceError> {
    if !structure.contains(target) {
        return Err(RelevanceError::NotAMember {
            agent: target,
            structure: structure.id.to_string(),
        });
    }
    let comparative = landscape
        .levels
        .iter()
        .filter(|level| level.structures.iter().any(|s| s.id == structure.id))
        .map(|level| level.fit.squashed())
        .max_by(f64::total_cmp)
        .ok_or_else(|| RelevanceError::NotInLandscape(structure.id.to_string()))?;

    let level = LevelTag::of(structure, landscape.levels[0].structures.len());
    let normative = normative_fit(structure, features, prototypes.get(level), prototypes.scale)?;
    Ok(SalienceScore {
        structure: structure.clone(),
        level,
        value: comparative * normative * readiness.prior(level),
    })
}

/// The single structure an agent treats as self-defining, with its
/// normalised salience.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfDefinition {
    pub agent: AgentId,
    pub structure: AgenticStructure,
    pub salience: f64,
    pub level_tag: LevelTag,
}

impl SelfDefinition {
    pub fn new(
        agent: AgentId,
        structure: AgenticStructure,
        salience: f64,
        level_tag: LevelTag,
    ) -> Result<Self, RelevanceError> {
        if !structure.contains(agent) {
            return Err(RelevanceError::NotAMember {
                agent,
                structure: structure.id.to_string(),
            });
        }
        assert!(
            (0.0..=1.0).contains(&salience),
            "salience {salience} outside [0, 1]"
        );
        Ok(SelfDefinition {
            agent,
            structure,
            salience,
            level_tag,
        })
    }

    /// Fully individual self-definition.
    pub fn individual(agent: AgentId) -> Self {
        SelfDefinition {
            agent,
            structure: AgenticStructure::singleton(agent),
            salience: 1.0,
            level_tag: LevelTag::Individual,
        }
    }

    /// Whole-group self-definition at full salience.
    pub fn whole_group(agent: AgentId, everyone: impl IntoIterator<Item = AgentId>) -> Self {
        let structure = AgenticStructure::new(everyone).expect("non-empty group");
        let level_tag = LevelTag::of(&structure, structure.len());
        SelfDefinition::new(agent, structure, 1.0, level_tag).expect("agent is in the group")
    }

    pub fn is_individual(&self) -> bool {
        self.level_tag == LevelTag::Individual
    }

    /// Members of the self-defining structure other than the agent itself.
    pub fn peers(&self) -> impl Iterator<Item = AgentId> + '_ {
        self.structure
            .members
            .iter()
            .copied()
            .filter(move |&m| m != self.agent)
    }
}

/// Picks the most salient structure containing `target`.
///
/// Ties go to the lower level (individual before subgroup before group),
/// then to the smaller structure id. If every candidate has zero salience the
/// individual structure is returned with salience 0.
pub fn select_self_defining(
    target: AgentId,
    landscape: &SocialLandscape,
    features: &AgentFeatureMatrix,
    readiness: &PerceiverReadiness,
    prototypes: &NormPrototypes,
) -> Result<SelfDefinition, RelevanceError> {
    let mut candidates: Vec<SalienceScore> = Vec::new();
    for (_, structure) in landscape.structures_containing(target) {
        if candidates.iter().any(|c| c.structure.id == structure.id) {
            continue;
        }
        candidates.push(structure_salience(
            target, structure, landscape, features, readiness, prototypes,
        )?);
    }
    let total: f64 = candidates.iter().map(|c| c.value).sum();
    let best = candidates
        .into_iter()
        .reduce(|best, c| {
            let better = c.value > best.value
                || (c.value == best.value
                    && (c.level, &c.structure.id) < (best.level, &best.structure.id));
            if better {
                c
            } else {
                best
            }
        })
        .ok_or(RelevanceError::NoCandidates(target))?;
    let salience = if total > 0.0 {
        (best.value / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    SelfDefinition::new(target, best.structure, salience, best.level)
}
