//! Two pairs, two sites that each need exactly two agents. Socially-minded
//! agents split into pairs; a fixed collective moves as one block.

use socmind::sim::{evaluate, run_episode, scenarios, PolicyKind};

fn main() {
    let base = scenarios::split_task();
    println!("policy            seed  sites  completion ticks  self-definitions at tick 0");
    for policy in PolicyKind::ALL {
        let config = base.clone().with_policy(policy);
        for seed in 0..20 {
            let log = run_episode(&config, seed).expect("bundled scenario is valid");
            let report = evaluate(&log).expect("complete log");
            let ticks = &log.summary.as_ref().unwrap().site_completion;
            let defs: Vec<String> = log.ticks[0]
                .agents
                .iter()
                .map(|a| a.self_definition.structure.id.to_string())
                .collect();
            println!(
                "{:<17} {:>4}  {:>5}  {:<18} {}",
                policy.as_str(),
                seed,
                report.sites_completed,
                format!("{ticks:?}"),
                defs.join(" ")
            );
        }
    }
}
