//! Six agents working in two clusters: the observer's landscape has an
//! individual level, a two-team subgroup level and the whole group.

use std::collections::BTreeMap;

use socmind::landscape::{
    build_social_landscape, extract_features, AgentObservation, FeatureSchema, LandscapeParams,
};
use socmind::AgentId;

fn main() {
    let spots = [
        ([0.0, 0.0], 0),
        ([1.0, 0.0], 0),
        ([0.0, 1.0], 0),
        ([8.0, 9.0], 1),
        ([9.0, 8.0], 1),
        ([9.0, 9.0], 1),
    ];
    let ids: Vec<AgentId> = (0..spots.len() as u32).map(AgentId).collect();
    let view: BTreeMap<AgentId, AgentObservation> = ids
        .iter()
        .zip(spots)
        .map(|(&id, (position, task))| {
            let obs = AgentObservation {
                position,
                task: Some(task),
                recent_actions: vec![task, task],
            };
            (id, obs)
        })
        .collect();
    let schema = FeatureSchema {
        position_scale: 9.0,
        position_weight: 1.0,
        task_count: 2,
        task_weight: 1.0,
        action_bins: 2,
        action_weight: 0.5,
    };
    let features = extract_features(&ids, &view, &schema).unwrap();

    for threshold in [2.0, 50.0] {
        let params = LandscapeParams { fit_threshold: threshold };
        let landscape = build_social_landscape(AgentId(0), &features, &params).unwrap();
        println!("fit threshold {threshold}:");
        for level in &landscape.levels {
            let structures: Vec<String> = level.structures.iter().map(|s| s.id.to_string()).collect();
            println!("  {:?} fit {:?}: {}", level.kind, level.fit, structures.join(" | "));
        }
    }
}
