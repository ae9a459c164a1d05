use std::path::{Path, PathBuf};

use crate::sim::{evaluate, run_episode, scenarios, ConfigError, MetricsReport, ScenarioConfig};

use super::output::{num, text, Table};
use super::{write_atomic, CliError};

/// Loads a config file, or a bundled scenario by name when no such file exists.
pub fn load_config(arg: &str) -> Result<ScenarioConfig, ConfigError> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(bundled) = scenarios::bundled(arg) {
            return bundled;
        }
    }
    ScenarioConfig::load(path)
}

pub struct SimOutput {
    pub log_path: PathBuf,
    pub summary_path: PathBuf,
    pub report: MetricsReport,
}

/// Runs one episode, writing the line-delimited log and the JSON report into `out`.
pub fn cmd_sim(config: &ScenarioConfig, seed: u64, out: &Path) -> Result<SimOutput, CliError> {
    let log = run_episode(config, seed)?;
    let report = evaluate(&log).expect("a finished episode is complete");
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let log_path = out.join(&config.output.log);
    let summary_path = out.join(&config.output.summary);
    write_atomic(&log_path, log.to_jsonl().as_bytes())?;
    let summary = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
    write_atomic(&summary_path, summary.as_bytes())?;
    Ok(SimOutput {
        log_path,
        summary_path,
        report,
    })
}

pub fn report_table(report: &MetricsReport) -> Table {
    let mut t = Table::new([
        "agent",
        "policy",
        "attainment",
        "ticks_to_goal",
        "mean_smi",
        "final_smi",
        "reward",
    ]);
    for a in &report.agents {
        t.push(vec![
            text(a.id.to_string()),
            text(a.policy.as_str()),
            num(a.attainment),
            a.ticks_to_goal.map_or(serde_json::Value::Null, Into::into),
            num(a.mean_ismi),
            num(a.final_ismi),
            num(a.reward),
        ]);
    }
    t.push(vec![
        text("group"),
        text("all"),
        num(report.group_attainment),
        serde_json::Value::Null,
        num(report.mean_gsmi),
        num(report.final_gsmi),
        num(report.total_reward),
    ]);
    t
}
