//! Socially-minded intelligence: metrics, identity selection, and a
//! deterministic multi-agent simulator.
//!
//! The crate is organised bottom-up:
//!
//! * [`metrics`] computes ISMI, GSMI and aligned abilities from context values.
//! * [`landscape`] builds an observer's model of which groups exist.
//! * [`relevance`] picks the single self-defining structure for an agent.
//! * [`influence`] applies that self-definition to perception, decisions and
//!   utilities.
//! * [`sim`] runs seeded grid-world episodes and logs per-tick metrics.
//! * [`cli`] backs the `socmind` binary: validation, batch metrics, runs and sweeps.

pub mod cli;
pub mod ids;
pub mod influence;
pub mod landscape;
pub mod metrics;
pub mod relevance;
pub mod sigfig;
pub mod sim;

pub use ids::AgentId;
