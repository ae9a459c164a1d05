//! ISMI for one person and GSMI for a group, directly and from CSV rows.

use socmind::cli::metrics_input::{parse_metrics_csv, results_table};
use socmind::cli::OutputFormat;
use socmind::metrics::{gsmi, ismi, social_resource, GroupContext, IndividualContext};

fn main() {
    let alice = IndividualContext::from_raw(0.7, &[(0.5, 0.5), (0.3, 0.7), (0.4, -0.8)]).unwrap();
    println!("social resource {:.4}, ISMI {:.4}", social_resource(&alice), ismi(&alice));

    let team = GroupContext::from_raw(&[(0.7, 0.3, 0.5), (0.8, 0.8, 0.3), (0.6, 0.2, -0.8)]).unwrap();
    println!("GSMI {:.4}\n", gsmi(&team));

    let csv = "\
id,kind,sma,m1_sma,m1_overlap,m1_alignment,m2_sma,m2_overlap,m2_alignment
alice,individual,0.7,,0.5,0.5,,0.3,0.7
team,group,,0.7,0.3,0.5,0.8,0.8,0.3
";
    let records = parse_metrics_csv(csv).unwrap();
    print!("{}", results_table(&records).render(OutputFormat::Table));
}
