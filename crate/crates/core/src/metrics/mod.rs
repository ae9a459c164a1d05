//! Individual and group socially-minded intelligence.
//!
//! Individual socially-minded intelligence (ISMI) is a target's ability
//! multiplied by its social resources, the sum of shared social identity times
//! goal alignment over everyone else present. Group socially-minded
//! intelligence (GSMI) is the mean over members of ability times group
//! identification times salient-identity goal alignment. Both can be written
//! as sums of *aligned abilities* (ability × self-overlap × goal-overlap).
//!
//! All arithmetic is exact with a single rounding step, so the factored and
//! the aligned-ability forms return the same `f64`, and the result does not
//! depend on the order in which contributors are listed.

mod exact;
mod types;

use thiserror::Error;

use exact::Exact;
pub use types::{
    AlignedAbility, Contributor, GoalAlignment, GroupContext, GroupIdentification, GroupMember,
    IndividualContext, SalientIdentityGoalAlignment, SharedSocialIdentity, SociallyMindedAbility,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("{quantity} must lie in [{min}, {max}], got {value}")]
    OutOfRange {
        quantity: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("a group context needs at least one member")]
    EmptyGroup,
}

fn exact_social_resource(ctx: &IndividualContext) -> Exact {
    ctx.contributors
        .iter()
        .map(|c| Exact::product(&[c.ssi.value(), c.ga.value()]))
        .sum()
}

fn exact_aligned_ability(ability: f64, self_overlap: f64, goal_overlap: f64) -> Exact {
    Exact::product(&[ability, self_overlap, goal_overlap])
}

/// Social resources available to the target: Σ SSI × GA over contributors.
pub fn social_resource(ctx: &IndividualContext) -> f64 {
    exact_social_resource(ctx).round()
}

/// `SMA × SR`.
pub fn ismi(ctx: &IndividualContext) -> f64 {
    Exact::of(ctx.target_sma.value())
        .mul(&exact_social_resource(ctx))
        .round()
}

/// Mean of `SMA × GI × SIGA` over the group's members.
pub fn gsmi(ctx: &GroupContext) -> f64 {
    let total: Exact = ctx
        .members()
        .iter()
        .map(|m| Exact::product(&[m.sma.value(), m.gi.value(), m.siga.value()]))
        .sum();
    total.div_count(ctx.len()).round()
}

/// Ability of a bearer weighted by its self-overlap and goal-overlap with a
/// target unit. The bearer is the target for ISMI and each member for GSMI.
pub fn aligned_ability(
    ability: SociallyMindedAbility,
    self_overlap: SharedSocialIdentity,
    goal_overlap: GoalAlignment,
) -> AlignedAbility {
    let value = exact_aligned_ability(ability.value(), self_overlap.value(), goal_overlap.value())
        .round();
    AlignedAbility::new(value).expect("product of bounded factors")
}

/// ISMI as the sum of the target's aligned abilities toward each contributor.
pub fn ismi_via_aligned_abilities(ctx: &IndividualContext) -> f64 {
    let sma = ctx.target_sma.value();
    ctx.contributors
        .iter()
        .map(|c| exact_aligned_ability(sma, c.ssi.value(), c.ga.value()))
        .sum::<Exact>()
        .round()
}

/// GSMI as the mean aligned ability of members toward the group, with GI as
/// self-overlap and SIGA as goal-overlap.
pub fn gsmi_via_aligned_abilities(ctx: &GroupContext) -> f64 {
    ctx.members()
        .iter()
        .map(|m| exact_aligned_ability(m.sma.value(), m.gi.value(), m.siga.value()))
        .sum::<Exact>()
        .div_count(ctx.len())
        .round()
}

/// Total SSI times mean GA. Equal to the social resource when every
/// contributor shares one SSI and one GA value; a biased estimate otherwise.
pub fn homogeneous_sr_approximation(total_ssi: f64, mean_ga: f64) -> Result<f64, MetricError> {
    if !(total_ssi.is_finite() && total_ssi >= 0.0) {
        return Err(MetricError::OutOfRange {
            quantity: "total SSI",
            value: total_ssi,
            min: 0.0,
            max: f64::INFINITY,
        });
    }
    GoalAlignment::new(mean_ga)?;
    Ok(Exact::product(&[total_ssi, mean_ga]).round())
}

#[cfg(test)]
mod tests {
    use super::*;

    const WE2: [(f64, f64); 5] = [(0.5, 0.5), (0.3, 0.7), (0.4, -0.8), (0.7, -0.3), (0.0, -0.9)];
    const A2: [(f64, f64); 5] = [(0.5, 0.5), (0.3, 0.7), (0.4, 0.3), (0.7, 0.3), (0.5, 0.9)];

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn social_resource_examples() {
        let we1 = IndividualContext::from_raw(0.7, &[(0.5, 0.5)]).unwrap();
        assert!(close(social_resource(&we1), 0.25));
        let alone = IndividualContext::from_raw(0.7, &[]).unwrap();
        assert_eq!(social_resource(&alone), 0.0);
        let we2 = IndividualContext::from_raw(0.7, &WE2).unwrap();
        assert!(close(social_resource(&we2), -0.07));
    }

    type IsmiCase = (f64, &'static [(f64, f64)], f64);
    type GsmiCase = (&'static [(f64, f64, f64)], f64);

    #[test]
    fn ismi_examples() {
        let cases: [IsmiCase; 6] = [
            (0.7, &[(0.5, 0.5)], 0.175),
            (0.7, &WE2, -0.049),
            (0.7, &[(0.5, 0.5), (0.3, 0.7)], 0.322),
            (0.7, &A2, 0.868),
            (0.3, &A2, 0.372),
            (
                0.7,
                &[(0.1, 0.5), (0.2, 0.7), (0.0, 0.3), (0.1, 0.3), (0.1, 0.9)],
                0.217,
            ),
        ];
        for (sma, pairs, expected) in cases {
            let ctx = IndividualContext::from_raw(sma, pairs).unwrap();
            assert!(close(ismi(&ctx), expected), "{pairs:?}: {}", ismi(&ctx));
            assert_eq!(ismi(&ctx), ismi_via_aligned_abilities(&ctx));
        }
        for sma in [0.0, 0.3, 1.0] {
            let ctx = IndividualContext::from_raw(sma, &[]).unwrap();
            assert_eq!(ismi(&ctx), 0.0);
            assert_eq!(ismi_via_aligned_abilities(&ctx), 0.0);
        }
    }

    #[test]
    fn gsmi_examples() {
        let cases: [GsmiCase; 7] = [
            (&[(0.7, 0.3, 0.5), (0.8, 0.8, 0.3)], 0.1485),
            (
                &[
                    (0.7, 0.3, 0.5),
                    (0.8, 0.8, 0.3),
                    (0.6, 0.2, -0.8),
                    (0.9, 0.7, 0.4),
                    (0.5, 0.3, -0.1),
                ],
                0.0876,
            ),
            (&[(0.7, 0.6, 0.5)], 0.21),
            (
                &[
                    (0.7, 0.6, 0.5),
                    (0.8, 0.8, 0.3),
                    (0.3, 0.2, 0.8),
                    (0.9, 0.7, 0.4),
                    (0.2, 0.5, 0.2),
                ],
                0.1444,
            ),
            (
                &[
                    (0.8, 0.6, 0.5),
                    (0.9, 0.8, 0.3),
                    (1.0, 0.2, 0.8),
                    (0.8, 0.7, 0.4),
                    (0.9, 0.5, 0.2),
                ],
                0.186,
            ),
            (
                &[
                    (0.7, 0.6, 0.9),
                    (0.8, 0.8, 0.7),
                    (0.3, 0.2, 0.8),
                    (0.9, 0.7, 0.8),
                    (0.2, 0.5, 0.9),
                ],
                0.2936,
            ),
            (
                &[
                    (0.7, 0.9, 0.5),
                    (0.8, 0.9, 0.3),
                    (0.3, 0.7, 0.8),
                    (0.9, 0.8, 0.4),
                    (0.2, 0.7, 0.2),
                ],
                0.203,
            ),
        ];
        for (members, expected) in cases {
            let ctx = GroupContext::from_raw(members).unwrap();
            assert!(close(gsmi(&ctx), expected), "{members:?}: {}", gsmi(&ctx));
            assert_eq!(gsmi(&ctx), gsmi_via_aligned_abilities(&ctx));
        }
        let unidentified = GroupContext::from_raw(&[(0.9, 0.0, 0.5), (0.4, 0.0, -1.0)]).unwrap();
        assert_eq!(gsmi_via_aligned_abilities(&unidentified), 0.0);
    }

    #[test]
    fn aligned_ability_examples() {
        let aa = |a, s, g| {
            aligned_ability(
                SociallyMindedAbility::new(a).unwrap(),
                SharedSocialIdentity::new(s).unwrap(),
                GoalAlignment::new(g).unwrap(),
            )
            .value()
        };
        assert!(close(aa(0.7, 0.5, 0.5), 0.175));
        assert_eq!(aa(0.4, 0.0, -0.6), 0.0);
        assert_eq!(aa(1.0, 1.0, -1.0), -1.0);
    }

    #[test]
    fn homogeneous_approximation() {
        let ctx = IndividualContext::from_raw(1.0, &[(0.5, 0.5), (0.5, 0.5)]).unwrap();
        let approx = homogeneous_sr_approximation(1.0, 0.5).unwrap();
        assert_eq!(approx, 0.5);
        assert_eq!(approx, social_resource(&ctx));
        assert_eq!(homogeneous_sr_approximation(0.0, -0.4).unwrap(), 0.0);
        // Heterogeneous WE2 inputs: total SSI 1.9, mean GA -0.16.
        let approx = homogeneous_sr_approximation(1.9, -0.16).unwrap();
        assert!(close(approx, -0.304));
        let we2 = IndividualContext::from_raw(0.7, &WE2).unwrap();
        assert!((approx - social_resource(&we2)).abs() > 0.2);
        assert!(homogeneous_sr_approximation(-0.1, 0.0).is_err());
        assert!(homogeneous_sr_approximation(1.0, 1.5).is_err());
    }

    #[test]
    fn out_of_range_inputs_are_rejected() {
        let err = Contributor::new(1.5, 0.0).unwrap_err();
        assert_eq!(err.to_string(), "SSI must lie in [0, 1], got 1.5");
        assert!(GoalAlignment::new(-1.01).is_err());
        assert!(SociallyMindedAbility::new(f64::NAN).is_err());
        assert!(GroupIdentification::new(-0.0001).is_err());
        assert!(SalientIdentityGoalAlignment::new(f64::INFINITY).is_err());
        assert_eq!(GroupContext::new(vec![]), Err(MetricError::EmptyGroup));
    }

    #[test]
    fn serde_rejects_out_of_range() {
        let ok: Contributor = serde_json::from_str(r#"{"ssi":0.5,"ga":-0.5}"#).unwrap();
        assert_eq!(ok, Contributor::new(0.5, -0.5).unwrap());
        assert!(serde_json::from_str::<Contributor>(r#"{"ssi":2.0,"ga":0.0}"#).is_err());
        assert!(serde_json::from_str::<GroupContext>("[]").is_err());
    }
}
