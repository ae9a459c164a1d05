//! Four agents share a wrong belief about which site pays. The fifth sees the
//! truth. Whether it acts on it depends on how it defines itself.

use socmind::sim::{run_episode, scenarios, PolicyKind};

const DISSENTER: usize = 4;

fn main() {
    let base = scenarios::consensus_trap();
    for policy in [PolicyKind::SociallyMinded, PolicyKind::FixedCollective] {
        let config = base.clone().with_policy(policy);
        let mut reached = 0;
        for seed in 0..20 {
            let log = run_episode(&config, seed).expect("bundled scenario is valid");
            let summary = log.summary.as_ref().unwrap();
            let first = &log.ticks[0].agents[DISSENTER].self_definition;
            if summary.attainment[DISSENTER] >= 1.0 {
                reached += 1;
            }
            println!(
                "{:<17} seed {:>2}: dissenter attainment {:.2}, self-definition {} ({:?}, salience {:.3})",
                policy.as_str(),
                seed,
                summary.attainment[DISSENTER],
                first.structure.id,
                first.level_tag,
                first.salience
            );
        }
        println!("{}: dissenter reached its goal in {reached}/20 seeds\n", policy.as_str());
    }
}
