use std::collections::BTreeMap;

use proptest::prelude::*;

use socmind::influence::{
    fuse_perception, shape_utility, weight_decisions, ActionScores, Observation, UtilitySpec,
};
use socmind::landscape::AgenticStructure;
use socmind::relevance::{LevelTag, SelfDefinition};
use socmind::AgentId;

use super::{run_cases, Check};

pub const CASES: u32 = 500;

#[derive(Debug, Clone)]
struct Inputs {
    me: AgentId,
    observations: Vec<Observation>,
    scores: Vec<ActionScores<usize>>,
    spec: UtilitySpec,
    structure: Vec<u32>,
}

fn inputs() -> impl Strategy<Value = Inputs> {
    (2usize..=6, 1usize..=5, 1usize..=5).prop_flat_map(|(n, dim, actions)| {
        let obs = prop::collection::vec(
            (
                prop::collection::vec(-10.0..10.0f64, dim),
                prop::collection::vec(0.0..=1.0f64, dim),
            ),
            n,
        );
        let scores = prop::collection::vec(prop::collection::vec(-5.0..5.0f64, actions), n);
        let utilities = prop::collection::vec(prop::collection::vec(-5.0..5.0f64, actions), n + 1);
        let members = prop::collection::vec(any::<bool>(), n);
        (0..n, obs, scores, utilities, members).prop_map(move |(me, obs, scores, utils, members)| {
            let id = |i: usize| AgentId(i as u32);
            let observations = obs
                .into_iter()
                .enumerate()
                .map(|(i, (v, c))| Observation::new(id(i), v, c).unwrap())
                .collect();
            let scores = scores
                .into_iter()
                .map(|s| ActionScores::new((0..actions).collect(), s).unwrap())
                .collect();
            let peer_utilities: BTreeMap<AgentId, Vec<f64>> = (0..n)
                .filter(|&i| i != me)
                .map(|i| (id(i), utils[i].clone()))
                .collect();
            let spec = UtilitySpec::new(utils[me].clone(), peer_utilities, utils[n].clone()).unwrap();
            let mut structure: Vec<u32> = (0..n)
                .filter(|&i| members[i] || i == me)
                .map(|i| i as u32)
                .collect();
            if structure.len() < 2 {
                structure.push(((me + 1) % n) as u32);
            }
            Inputs {
                me: id(me),
                observations,
                scores,
                spec,
                structure,
            }
        })
    })
}

type Split = (Observation, Vec<Observation>, ActionScores<usize>, Vec<(AgentId, ActionScores<usize>)>);

fn split(inputs: &Inputs) -> Split {
    let i = inputs.me.0 as usize;
    let own_obs = inputs.observations[i].clone();
    let peers: Vec<Observation> = inputs
        .observations
        .iter()
        .filter(|o| o.owner != inputs.me)
        .cloned()
        .collect();
    let own_scores = inputs.scores[i].clone();
    let peer_scores = inputs
        .scores
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(j, s)| (AgentId(j as u32), s.clone()))
        .collect();
    (own_obs, peers, own_scores, peer_scores)
}

fn group_def(inputs: &Inputs, salience: f64) -> SelfDefinition {
    let structure = AgenticStructure::new(inputs.structure.iter().map(|&m| AgentId(m))).unwrap();
    SelfDefinition::new(inputs.me, structure, salience, LevelTag::Subgroup).unwrap()
}

fn bits(v: &[f64]) -> Vec<u64> {
    v.iter().map(|x| x.to_bits()).collect()
}

/// Individual self-definition (and zero salience) leaves every input untouched.
pub fn individual_is_identity() -> Check {
    run_cases(CASES, inputs(), |inputs| {
        let (own_obs, peers, own_scores, peer_scores) = split(&inputs);
        for def in [SelfDefinition::individual(inputs.me), group_def(&inputs, 0.0)] {
            let fused = fuse_perception(&own_obs, &peers, &def).unwrap();
            prop_assert_eq!(bits(&fused.values), bits(&own_obs.values));
            prop_assert_eq!(bits(&fused.confidence), bits(&own_obs.confidence));
            let blended = weight_decisions(&own_scores, &peer_scores, &def).unwrap();
            prop_assert_eq!(&blended.actions, &own_scores.actions);
            prop_assert_eq!(bits(&blended.scores), bits(&own_scores.scores));
            let shaped = shape_utility(&inputs.spec, &def);
            prop_assert_eq!(bits(&shaped), bits(&inputs.spec.self_utility));
        }
        Ok(())
    })
}

/// Shaped utility against a forward difference in salience: the slope is the
/// aggregate in-structure benefit, and the utility never falls when that
/// aggregate is non-negative.
pub fn shaped_utility_monotone_in_salience() -> Check {
    run_cases(CASES, (inputs(), 0.0..0.95f64), |(inputs, s)| {
        let h = 1e-3;
        let low = shape_utility(&inputs.spec, &group_def(&inputs, s));
        let high = shape_utility(&inputs.spec, &group_def(&inputs, s + h));
        for a in 0..low.len() {
            let aggregate: f64 = inputs
                .spec
                .peer_utilities
                .iter()
                .filter(|(q, _)| inputs.structure.contains(&q.0))
                .map(|(_, u)| u[a])
                .sum::<f64>()
                + inputs.spec.structure_utility[a];
            let slope = (high[a] - low[a]) / h;
            prop_assert!(
                (slope - aggregate).abs() <= 1e-6 * aggregate.abs().max(1.0),
                "slope {slope} vs aggregate {aggregate}"
            );
            if aggregate >= 0.0 {
                prop_assert!(high[a] >= low[a]);
            }
            if aggregate > 1e-6 {
                prop_assert!(high[a] > low[a]);
            }
        }
        Ok(())
    })
}

/// At full salience every member of one structure blends to the same scores.
pub fn members_agree_after_blending() -> Check {
    run_cases(CASES, inputs(), |inputs| {
        let structure = AgenticStructure::new(inputs.structure.iter().map(|&m| AgentId(m))).unwrap();
        let all: Vec<(AgentId, ActionScores<usize>)> = inputs
            .scores
            .iter()
            .enumerate()
            .map(|(j, sc)| (AgentId(j as u32), sc.clone()))
            .collect();
        let mut results = Vec::new();
        for &m in &inputs.structure {
            let def = SelfDefinition::new(AgentId(m), structure.clone(), 1.0, LevelTag::Subgroup).unwrap();
            let blended = weight_decisions(&inputs.scores[m as usize], &all, &def).unwrap();
            results.push(bits(&blended.scores));
        }
        prop_assert!(results.windows(2).all(|w| w[0] == w[1]), "{results:?}");
        Ok(())
    })
}
