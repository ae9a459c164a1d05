//! Policy x agent-count sweep over the split-task scenario, written to a CSV
//! in the system temp directory. Rerunning resumes from that file.

use socmind::cli::sweep::{cmd_sweep, SweepParam, SweepPlan};
use socmind::cli::OutputFormat;
use socmind::sim::scenarios;

fn main() {
    let plan = SweepPlan {
        base: scenarios::split_task(),
        params: vec![
            "policy=socially_minded,pure_individual,fixed_collective".parse::<SweepParam>().unwrap(),
            "agents=2,4".parse().unwrap(),
        ],
        seeds: (0..3).collect(),
    };
    let out = std::env::temp_dir().join("socmind_sweep_example.csv");
    let outcome = cmd_sweep(&plan, &out).unwrap();
    print!("{}", outcome.table.render(OutputFormat::Table));
    println!("{} cells run now, {} failed; results in {}", outcome.executed, outcome.failed, out.display());
}
