//! How a shared identity changes what one agent perceives, prefers and chooses,
//! as the salience of that identity grows.

use std::collections::BTreeMap;

use socmind::influence::{
    fuse_perception, shape_utility, weight_decisions, ActionScores, Observation, UtilitySpec,
};
use socmind::landscape::AgenticStructure;
use socmind::relevance::{LevelTag, SelfDefinition};
use socmind::AgentId;

fn main() {
    let (me, mate, outsider) = (AgentId(0), AgentId(1), AgentId(2));
    let pair = AgenticStructure::new([me, mate]).unwrap();

    let own = Observation::new(me, vec![1.0, 0.0], vec![1.0, 0.5]).unwrap();
    let seen = [
        Observation::certain(mate, vec![0.0, 1.0]),
        Observation::certain(outsider, vec![9.0, 9.0]),
    ];
    let actions = vec!["rest", "help", "solo"];
    let own_scores = ActionScores::new(actions.clone(), vec![0.1, 0.2, 0.6]).unwrap();
    let peer_scores = [
        (mate, ActionScores::new(actions.clone(), vec![0.0, 0.9, 0.1]).unwrap()),
        (outsider, ActionScores::new(actions.clone(), vec![1.0, 0.0, 0.0]).unwrap()),
    ];
    let spec = UtilitySpec::new(
        vec![0.0, 0.1, 0.5],
        BTreeMap::from([(mate, vec![0.0, 0.6, -0.2]), (outsider, vec![5.0, 5.0, 5.0])]),
        vec![0.0, 0.4, 0.0],
    )
    .unwrap();

    for s in [0.0, 0.25, 0.5, 1.0] {
        let def = SelfDefinition::new(me, pair.clone(), s, LevelTag::Subgroup).unwrap();
        let fused = fuse_perception(&own, &seen, &def).unwrap();
        let blended = weight_decisions(&own_scores, &peer_scores, &def).unwrap();
        let shaped = shape_utility(&spec, &def);
        println!(
            "salience {s:.2}: percept {:?}, scores {:?} -> {}, utility {:?}",
            fused.values,
            blended.scores,
            blended.argmax(),
            shaped
        );
    }
    let alone = SelfDefinition::individual(me);
    println!("individual: choice {}", weight_decisions(&own_scores, &peer_scores, &alone).unwrap().argmax());
}
