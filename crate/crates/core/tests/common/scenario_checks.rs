use std::io::Cursor;

use socmind::metrics::{gsmi, ismi};
use socmind::relevance::PerceiverReadiness;
use socmind::sim::{run_episode, scenarios, EpisodeLog, PolicyKind, ScenarioConfig};

use super::Check;

pub const SEEDS: u64 = 20;
const CONSENSUS_DISSENTER: usize = 4;

fn run(config: &ScenarioConfig, seed: u64) -> Result<EpisodeLog, String> {
    run_episode(config, seed).map_err(|e| format!("{} seed {seed}: {e}", config.name))
}

fn sites_completed(log: &EpisodeLog) -> usize {
    let summary = log.summary.as_ref().expect("finished episode");
    summary.site_completion.iter().filter(|c| c.is_some()).count()
}

pub fn acceptance_scenarios() -> Vec<ScenarioConfig> {
    scenarios::BUNDLED
        .iter()
        .map(|(name, _)| scenarios::bundled(name).unwrap().expect("bundled config parses"))
        .collect()
}

/// Both subgroup sites done by the socially-minded team; at most one by the
/// whole-group team.
pub fn split_task() -> Check {
    let base = scenarios::split_task();
    let (mut wins, mut fixed_ok) = (0, 0);
    for seed in 0..SEEDS {
        let social = run(&base.clone().with_policy(PolicyKind::SociallyMinded), seed)?;
        let fixed = run(&base.clone().with_policy(PolicyKind::FixedCollective), seed)?;
        if sites_completed(&social) == 2 {
            wins += 1;
        }
        if sites_completed(&fixed) <= 1 {
            fixed_ok += 1;
        }
    }
    let detail = format!(
        "socially_minded completed both sites {wins}/{SEEDS}, fixed_collective at most one {fixed_ok}/{SEEDS}"
    );
    if wins == SEEDS && fixed_ok == SEEDS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The agent with the correct belief reaches its goal when it may define
/// itself individually, and not when bound to the group.
pub fn consensus_trap() -> Check {
    let base = scenarios::consensus_trap();
    let (mut social, mut fixed) = (0, 0);
    for seed in 0..SEEDS {
        let attained = |policy| -> Result<bool, String> {
            let log = run(&base.clone().with_policy(policy), seed)?;
            Ok(log.summary.as_ref().unwrap().attainment[CONSENSUS_DISSENTER] >= 1.0)
        };
        if attained(PolicyKind::SociallyMinded)? {
            social += 1;
        }
        if !attained(PolicyKind::FixedCollective)? {
            fixed += 1;
        }
    }
    let detail = format!(
        "socially_minded dissenter reached goal {social}/{SEEDS}, fixed_collective dissenter missed it {fixed}/{SEEDS}"
    );
    if social == SEEDS && fixed == SEEDS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn individual_only(mut config: ScenarioConfig) -> ScenarioConfig {
    let readiness = PerceiverReadiness::new(1.0, 0.0, 0.0).unwrap();
    for agent in &mut config.agents {
        agent.policy = PolicyKind::SociallyMinded;
        agent.readiness = readiness;
    }
    config
}

/// Socially-minded agents with subgroup and group priors at zero move exactly
/// like pure individualists under the same seed.
pub fn baseline_sanity() -> Check {
    let mut compared = 0;
    for config in acceptance_scenarios() {
        let social = individual_only(config.clone());
        let individual = config.clone().with_policy(PolicyKind::PureIndividual);
        for seed in 0..SEEDS {
            let a = serde_json::to_vec(&run(&social, seed)?.trajectory()).unwrap();
            let b = serde_json::to_vec(&run(&individual, seed)?.trajectory()).unwrap();
            if a != b {
                return Err(format!("{} seed {seed}: trajectories differ", config.name));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} matched trajectory pairs byte-identical"))
}

pub fn scenario_limits() -> Check {
    for c in acceptance_scenarios() {
        if c.grid.width > 10 || c.grid.height > 10 || c.agents.len() > 8 || c.horizon > 200 {
            return Err(format!(
                "{}: {}x{} grid, {} agents, horizon {}",
                c.name,
                c.grid.width,
                c.grid.height,
                c.agents.len(),
                c.horizon
            ));
        }
    }
    Ok("all scenarios within 10x10, 8 agents, horizon 200".into())
}

fn in_pool(threads: usize, config: &ScenarioConfig, seed: u64) -> Result<String, String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| e.to_string())?;
    pool.install(|| run(config, seed).map(|log| log.to_jsonl()))
}

/// Replays under one thread, the machine's full width, and the default pool.
pub fn determinism() -> Check {
    let max = std::thread::available_parallelism().map_or(4, |n| n.get()).max(2);
    let mut replays = 0;
    for base in acceptance_scenarios() {
        for policy in PolicyKind::ALL {
            let config = base.clone().with_policy(policy);
            for seed in 0..5 {
                let reference = run(&config, seed)?.to_jsonl();
                let others = [
                    run(&config, seed)?.to_jsonl(),
                    in_pool(1, &config, seed)?,
                    in_pool(max, &config, seed)?,
                ];
                if others.iter().any(|o| *o != reference) {
                    return Err(format!("{} / {policy} seed {seed}: logs differ", base.name));
                }
                replays += 1;
            }
        }
    }
    Ok(format!("{replays} (config, seed) pairs byte-identical at 1 and {max} threads"))
}

/// Metrics stored in each log line against a fresh evaluation of the contexts
/// read back from the serialized log.
pub fn metric_consistency() -> Check {
    let mut ticks = 0;
    let mut worst: f64 = 0.0;
    for base in acceptance_scenarios() {
        for policy in PolicyKind::ALL {
            let config = base.clone().with_policy(policy);
            for seed in 0..SEEDS {
                let text = run(&config, seed)?.to_jsonl();
                let log = EpisodeLog::read_jsonl(Cursor::new(text))?;
                for t in &log.ticks {
                    for a in &t.agents {
                        worst = worst.max((ismi(&a.context) - a.ismi).abs());
                    }
                    worst = worst.max((gsmi(&t.group_context) - t.gsmi).abs());
                    ticks += 1;
                }
            }
        }
    }
    let detail = format!("{ticks} ticks, largest deviation {worst:e}");
    if worst <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}
