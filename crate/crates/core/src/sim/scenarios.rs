//! Scenarios shipped with the crate.

use super::config::{ConfigError, ScenarioConfig};

pub const SPLIT_TASK: &str = include_str!("../../scenarios/split_task.toml");
pub const CONSENSUS_TRAP: &str = include_str!("../../scenarios/consensus_trap.toml");
pub const SOLO_FORAGE: &str = include_str!("../../scenarios/solo_forage.toml");

/// `(name, toml)` for every bundled scenario.
pub const BUNDLED: [(&str, &str); 3] = [
    ("split-task", SPLIT_TASK),
    ("consensus-trap", CONSENSUS_TRAP),
    ("solo-forage", SOLO_FORAGE),
];

pub fn bundled(name: &str) -> Option<Result<ScenarioConfig, ConfigError>> {
    BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| ScenarioConfig::from_toml_str(text))
}

pub fn split_task() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(SPLIT_TASK).expect("bundled scenario is valid")
}

pub fn consensus_trap() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(CONSENSUS_TRAP).expect("bundled scenario is valid")
}

pub fn solo_forage() -> ScenarioConfig {
    ScenarioConfig::from_toml_str(SOLO_FORAGE).expect("bundled scenario is valid")
}
