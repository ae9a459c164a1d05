//! Recomputes the thirteen published worked examples.

use socmind::cli::validate::cmd_validate;
use socmind::cli::OutputFormat;

fn main() {
    let report = cmd_validate();
    print!("{}", report.table().render(OutputFormat::Table));
    println!("{}", report.summary_line());
    std::process::exit(report.exit_code());
}
