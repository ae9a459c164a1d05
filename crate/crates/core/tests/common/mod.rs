#![allow(dead_code)]

pub mod influence_laws;
pub mod landscape_oracle;
pub mod metric_props;
pub mod scenario_checks;

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

/// `Ok(detail)` or `Err(reason)`.
pub type Check = Result<String, String>;

pub type NamedCheck = (&'static str, fn() -> Check);

/// Seeded runner, so every run explores the same cases.
pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

pub fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Check {
    runner(cases)
        .run(&strategy, test)
        .map(|()| format!("{cases} cases"))
        .map_err(|e| e.to_string())
}
