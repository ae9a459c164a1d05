use serde::{Deserialize, Serialize};

use super::MetricError;

macro_rules! bounded_quantity {
    ($(#[$meta:meta])* $name:ident, $label:literal, $min:expr, $max:expr) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
        #[serde(try_from = "f64", into = "f64")]
        pub struct $name(f64);

        impl $name {
            pub const MIN: f64 = $min;
            pub const MAX: f64 = $max;
            pub const LABEL: &'static str = $label;

            pub fn new(value: f64) -> Result<Self, MetricError> {
                if value.is_finite() && (Self::MIN..=Self::MAX).contains(&value) {
                    Ok(Self(value))
                } else {
                    Err(MetricError::OutOfRange {
                        quantity: Self::LABEL,
                        value,
                        min: Self::MIN,
                        max: Self::MAX,
                    })
                }
            }

            pub fn value(self) -> f64 {
                self.0
            }
        }

        impl TryFrom<f64> for $name {
            type Error = MetricError;

            fn try_from(value: f64) -> Result<Self, Self::Error> {
                Self::new(value)
            }
        }

        impl From<$name> for f64 {
            fn from(q: $name) -> f64 {
                q.0
            }
        }
    };
}

bounded_quantity!(
    /// Stable individual-difference ability relevant to acting with others.
    SociallyMindedAbility, "SMA", 0.0, 1.0
);
bounded_quantity!(
    /// Two-way self-overlap between a target and one other agent in a context.
    /// Also used for the generalised self-overlap of the aligned-ability form.
    SharedSocialIdentity, "SSI", 0.0, 1.0
);
bounded_quantity!(
    /// Goal alignment between a target and one other agent, from fully
    /// opposed (-1) to fully aligned (1). Also used for generalised goal-overlap.
    GoalAlignment, "GA", -1.0, 1.0
);
bounded_quantity!(
    /// One-way self-overlap of a member with the group.
    GroupIdentification, "GI", 0.0, 1.0
);
bounded_quantity!(
    /// Alignment between the goals of a member's salient identity and the group's goals.
    SalientIdentityGoalAlignment, "SIGA", -1.0, 1.0
);
bounded_quantity!(
    /// Ability weighted by self-overlap and goal-overlap with a target unit.
    AlignedAbility, "AA", -1.0, 1.0
);

/// One other agent's contribution to a target's social resources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contributor {
    pub ssi: SharedSocialIdentity,
    pub ga: GoalAlignment,
}

impl Contributor {
    pub fn new(ssi: f64, ga: f64) -> Result<Self, MetricError> {
        Ok(Contributor {
            ssi: SharedSocialIdentity::new(ssi)?,
            ga: GoalAlignment::new(ga)?,
        })
    }
}

/// A target agent and every other agent present in one context.
///
/// Contributors are kept in the order they were supplied; an empty list is a
/// target alone in the context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualContext {
    pub target_sma: SociallyMindedAbility,
    pub contributors: Vec<Contributor>,
}

impl IndividualContext {
    pub fn new(target_sma: SociallyMindedAbility, contributors: Vec<Contributor>) -> Self {
        IndividualContext {
            target_sma,
            contributors,
        }
    }

    /// Builds a context from raw `(ssi, ga)` pairs, validating every value.
    pub fn from_raw(sma: f64, pairs: &[(f64, f64)]) -> Result<Self, MetricError> {
        let contributors = pairs
            .iter()
            .map(|&(ssi, ga)| Contributor::new(ssi, ga))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IndividualContext::new(
            SociallyMindedAbility::new(sma)?,
            contributors,
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupMember {
    pub sma: SociallyMindedAbility,
    pub gi: GroupIdentification,
    pub siga: SalientIdentityGoalAlignment,
}

impl GroupMember {
    pub fn new(sma: f64, gi: f64, siga: f64) -> Result<Self, MetricError> {
        Ok(GroupMember {
            sma: SociallyMindedAbility::new(sma)?,
            gi: GroupIdentification::new(gi)?,
            siga: SalientIdentityGoalAlignment::new(siga)?,
        })
    }
}

/// The members of a target group present in one context. Never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<GroupMember>", into = "Vec<GroupMember>")]
pub struct GroupContext {
    members: Vec<GroupMember>,
}

impl GroupContext {
    pub fn new(members: Vec<GroupMember>) -> Result<Self, MetricError> {
        if members.is_empty() {
            return Err(MetricError::EmptyGroup);
        }
        Ok(GroupContext { members })
    }

    pub fn from_raw(triples: &[(f64, f64, f64)]) -> Result<Self, MetricError> {
        let members = triples
            .iter()
            .map(|&(sma, gi, siga)| GroupMember::new(sma, gi, siga))
            .collect::<Result<Vec<_>, _>>()?;
        GroupContext::new(members)
    }

    pub fn members(&self) -> &[GroupMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl TryFrom<Vec<GroupMember>> for GroupContext {
    type Error = MetricError;

    fn try_from(members: Vec<GroupMember>) -> Result<Self, Self::Error> {
        GroupContext::new(members)
    }
}

impl From<GroupContext> for Vec<GroupMember> {
    fn from(ctx: GroupContext) -> Self {
        ctx.members
    }
}
