//! Seeded grid world where socially-minded and baseline agents pursue task
//! sites, with per-tick ISMI and GSMI.

pub mod config;
pub mod engine;
pub mod log;
pub mod report;
pub mod scenarios;
pub mod world;

pub use config::{AgentConfig, ConfigError, PolicyKind, ScenarioConfig, SiteKind};
pub use engine::{advance, derive_context_metrics, run_episode, step, step_with_record, SimError};
pub use log::{EpisodeLog, EpisodeSummary, TickRecord};
pub use report::{evaluate, MetricsReport, ReportError};
pub use world::{Action, Intention, Position, WorldState};
