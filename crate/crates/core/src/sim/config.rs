//! Scenario configuration: grid, horizon, roster, task sites and landscape
//! parameters, read from TOML (or JSON) with field-path error reporting.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::metrics::SociallyMindedAbility;
use crate::relevance::{NormPrototypes, PerceiverReadiness};

use super::world::ACTION_BINS;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("invalid config at `{path}`: {message}")]
    Invalid { path: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Dotted path of the offending field, when known.
    pub fn field_path(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { path, .. } => Some(path),
            ConfigError::Io { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    SociallyMinded,
    PureIndividual,
    FixedCollective,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [
        PolicyKind::SociallyMinded,
        PolicyKind::PureIndividual,
        PolicyKind::FixedCollective,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::SociallyMinded => "socially_minded",
            PolicyKind::PureIndividual => "pure_individual",
            PolicyKind::FixedCollective => "fixed_collective",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PolicyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PolicyKind::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown policy `{s}`"))
    }
}

/// How many co-located, interacting agents a site needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SiteKind {
    Solo,
    /// Exactly `k` agents.
    Subgroup(usize),
    /// Every agent in the scenario.
    Collective,
}

impl SiteKind {
    pub fn required_agents(self, roster: usize) -> usize {
        match self {
            SiteKind::Solo => 1,
            SiteKind::Subgroup(k) => k,
            SiteKind::Collective => roster,
        }
    }
}

impl fmt::Display for SiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteKind::Solo => f.write_str("solo"),
            SiteKind::Subgroup(k) => write!(f, "subgroup_{k}"),
            SiteKind::Collective => f.write_str("collective"),
        }
    }
}

impl TryFrom<String> for SiteKind {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        match s.as_str() {
            "solo" => Ok(SiteKind::Solo),
            "collective" => Ok(SiteKind::Collective),
            other => other
                .strip_prefix("subgroup_")
                .and_then(|k| k.parse::<usize>().ok())
                .filter(|&k| k >= 1)
                .map(SiteKind::Subgroup)
                .ok_or_else(|| {
                    format!("unknown site kind `{other}` (expected solo, subgroup_<k>, collective)")
                }),
        }
    }
}

impl From<SiteKind> for String {
    fn from(kind: SiteKind) -> Self {
        kind.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSize {
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub position: [u32; 2],
    pub kind: SiteKind,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentConfig {
    pub policy: PolicyKind,
    pub sma: SociallyMindedAbility,
    #[serde(default)]
    pub readiness: PerceiverReadiness,
    /// Value the agent places on completing each site, in `[-1, 1]`.
    pub goal: Vec<f64>,
    pub start: [u32; 2],
    /// Start cell is drawn uniformly within this Chebyshev radius of `start`.
    #[serde(default)]
    pub spawn_radius: u32,
    /// Scripted per-site reward beliefs replacing the true rewards.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perceived_rewards: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "is_default_prototypes")]
    pub prototypes: NormPrototypes,
}

fn is_default_prototypes(p: &NormPrototypes) -> bool {
    p.prototypes.is_empty()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LandscapeConfig {
    #[serde(default = "default_fit_threshold")]
    pub fit_threshold: f64,
    #[serde(default = "one")]
    pub position_weight: f64,
    #[serde(default = "one")]
    pub task_weight: f64,
    #[serde(default = "one")]
    pub action_weight: f64,
    /// Number of recent actions summarised in the action histogram.
    #[serde(default = "default_action_window")]
    pub action_window: usize,
}

fn default_fit_threshold() -> f64 {
    2.0
}

fn one() -> f64 {
    1.0
}

fn default_action_window() -> usize {
    4
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        LandscapeConfig {
            fit_threshold: default_fit_threshold(),
            position_weight: 1.0,
            task_weight: 1.0,
            action_weight: 1.0,
            action_window: default_action_window(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_log_name")]
    pub log: String,
    #[serde(default = "default_summary_name")]
    pub summary: String,
}

fn default_log_name() -> String {
    "episode.jsonl".into()
}

fn default_summary_name() -> String {
    "summary.json".into()
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            log: default_log_name(),
            summary: default_summary_name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub grid: GridSize,
    pub horizon: u32,
    /// Half-width of the uniform noise added to every percept channel each tick.
    #[serde(default)]
    pub percept_noise: f64,
    #[serde(default)]
    pub landscape: LandscapeConfig,
    #[serde(default)]
    pub sites: Vec<SiteConfig>,
    pub agents: Vec<AgentConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let de = toml::Deserializer::new(text);
        let config: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::invalid(path, e.into_inner().message().trim().to_string())
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_json_str(text: &str) -> Result<Self, ConfigError> {
        let mut de = serde_json::Deserializer::from_str(text);
        let config: ScenarioConfig = serde_path_to_error::deserialize(&mut de)
            .map_err(|e| ConfigError::invalid(e.path().to_string(), e.inner().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    /// Reads a `.json` file as JSON and anything else as TOML.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        if path.extension().is_some_and(|e| e == "json") {
            ScenarioConfig::from_json_str(&text)
        } else {
            ScenarioConfig::from_toml_str(&text)
        }
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&canonical))
    }

    pub fn feature_dim(&self) -> usize {
        2 + self.sites.len() + ACTION_BINS
    }

    /// Every agent switched to `policy`.
    pub fn with_policy(mut self, policy: PolicyKind) -> Self {
        self.agents.iter_mut().for_each(|a| a.policy = policy);
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let GridSize { width, height } = self.grid;
        if width == 0 || height == 0 {
            return Err(ConfigError::invalid("grid", "width and height must be at least 1"));
        }
        let in_grid = |p: [u32; 2]| p[0] < width && p[1] < height;
        non_negative("percept_noise", self.percept_noise)?;

        let l = &self.landscape;
        non_negative("landscape.fit_threshold", l.fit_threshold)?;
        non_negative("landscape.position_weight", l.position_weight)?;
        non_negative("landscape.task_weight", l.task_weight)?;
        non_negative("landscape.action_weight", l.action_weight)?;

        for (i, site) in self.sites.iter().enumerate() {
            if !in_grid(site.position) {
                return Err(ConfigError::invalid(
                    format!("sites[{i}].position"),
                    format!("{:?} lies outside the {width}x{height} grid", site.position),
                ));
            }
            non_negative(&format!("sites[{i}].reward"), site.reward)?;
        }

        if self.agents.is_empty() {
            return Err(ConfigError::invalid("agents", "at least one agent is required"));
        }
        let n_sites = self.sites.len();
        for (i, agent) in self.agents.iter().enumerate() {
            let at = |field: &str| format!("agents[{i}].{field}");
            if !in_grid(agent.start) {
                return Err(ConfigError::invalid(
                    at("start"),
                    format!("{:?} lies outside the {width}x{height} grid", agent.start),
                ));
            }
            if agent.goal.len() != n_sites {
                return Err(ConfigError::invalid(
                    at("goal"),
                    format!("expected one entry per site ({n_sites}), got {}", agent.goal.len()),
                ));
            }
            for (s, g) in agent.goal.iter().enumerate() {
                if !(g.is_finite() && (-1.0..=1.0).contains(g)) {
                    return Err(ConfigError::invalid(
                        format!("agents[{i}].goal[{s}]"),
                        format!("goal weights must lie in [-1, 1], got {g}"),
                    ));
                }
            }
            if let Some(percepts) = &agent.perceived_rewards {
                if percepts.len() != n_sites {
                    return Err(ConfigError::invalid(
                        at("perceived_rewards"),
                        format!("expected one entry per site ({n_sites}), got {}", percepts.len()),
                    ));
                }
                for (s, p) in percepts.iter().enumerate() {
                    if !p.is_finite() {
                        return Err(ConfigError::invalid(
                            format!("agents[{i}].perceived_rewards[{s}]"),
                            "must be finite",
                        ));
                    }
                }
            }
            let p = &agent.prototypes;
            if !(p.scale.is_finite() && p.scale > 0.0) {
                return Err(ConfigError::invalid(at("prototypes.scale"), "must be positive"));
            }
            for (level, proto) in &p.prototypes {
                if proto.len() != self.feature_dim() || proto.iter().any(|v| !v.is_finite()) {
                    return Err(ConfigError::invalid(
                        format!("agents[{i}].prototypes.{}", serde_json::to_string(level).unwrap().trim_matches('"')),
                        format!("expected {} finite features", self.feature_dim()),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn non_negative(path: &str, value: f64) -> Result<(), ConfigError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::invalid(
            path,
            format!("must be finite and non-negative, got {value}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "tiny"
grid = { width = 3, height = 3 }
horizon = 4

[[sites]]
position = [2, 0]
kind = "subgroup_2"
reward = 1.0

[[agents]]
policy = "socially_minded"
sma = 0.5
goal = [1.0]
start = [0, 0]
"#;

    #[test]
    fn parses_minimal_config() {
        let c = ScenarioConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.sites[0].kind, SiteKind::Subgroup(2));
        assert_eq!(c.landscape.fit_threshold, 2.0);
        assert_eq!(c.agents[0].readiness, PerceiverReadiness::uniform());
        assert_eq!(c.output.log, "episode.jsonl");
        assert_eq!(c.digest(), c.clone().digest());
        assert_eq!(c.digest().len(), 64);
    }

    #[test]
    fn range_errors_name_the_field() {
        let bad = MINIMAL.replace("sma = 0.5", "sma = 1.5");
        let err = ScenarioConfig::from_toml_str(&bad).unwrap_err();
        assert_eq!(err.field_path(), Some("agents[0].sma"), "{err}");
        assert!(err.to_string().contains("SMA must lie in [0, 1]"), "{err}");

        let bad = MINIMAL.replace("start = [0, 0]", "start = [0, 7]");
        let err = ScenarioConfig::from_toml_str(&bad).unwrap_err();
        assert_eq!(err.field_path(), Some("agents[0].start"));

        let bad = MINIMAL.replace("goal = [1.0]", "goal = [1.0, 0.0]");
        let err = ScenarioConfig::from_toml_str(&bad).unwrap_err();
        assert_eq!(err.field_path(), Some("agents[0].goal"));

        let bad = MINIMAL.replace("subgroup_2", "subgroup_x");
        let err = ScenarioConfig::from_toml_str(&bad).unwrap_err();
        assert_eq!(err.field_path(), Some("sites[0].kind"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = MINIMAL.replace("horizon = 4", "horizon = 4\nhorizn = 5");
        assert!(ScenarioConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn site_kind_round_trips_through_strings() {
        for kind in [SiteKind::Solo, SiteKind::Subgroup(3), SiteKind::Collective] {
            assert_eq!(SiteKind::try_from(kind.to_string()), Ok(kind));
        }
        assert!(SiteKind::try_from("subgroup_0".to_string()).is_err());
    }
}
