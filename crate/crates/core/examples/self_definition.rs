//! The same landscape seen by perceivers with different readiness: which
//! structure each one takes as its self, and how salient it is.

use socmind::landscape::{build_social_landscape, AgentFeatureMatrix, LandscapeParams};
use socmind::relevance::{select_self_defining, NormPrototypes, PerceiverReadiness};
use socmind::AgentId;

fn main() {
    let points = vec![
        vec![0.0, 0.0],
        vec![0.2, 0.1],
        vec![0.1, 0.3],
        vec![5.0, 5.0],
        vec![5.2, 4.9],
    ];
    let ids = (0..points.len() as u32).map(AgentId).collect();
    let features = AgentFeatureMatrix::new(ids, points).unwrap();
    let me = AgentId(0);
    let landscape = build_social_landscape(me, &features, &LandscapeParams::default()).unwrap();

    let perceivers = [
        ("uniform", PerceiverReadiness::uniform()),
        ("individualist", PerceiverReadiness::new(1.0, 0.0, 0.0).unwrap()),
        ("team player", PerceiverReadiness::new(0.2, 1.0, 0.2).unwrap()),
        ("whole group", PerceiverReadiness::new(0.1, 0.1, 1.0).unwrap()),
    ];
    for (name, readiness) in perceivers {
        let def = select_self_defining(me, &landscape, &features, &readiness, &NormPrototypes::none()).unwrap();
        println!(
            "{name:<13} -> {} ({:?}), salience {:.3}",
            def.structure.id, def.level_tag, def.salience
        );
    }
}
