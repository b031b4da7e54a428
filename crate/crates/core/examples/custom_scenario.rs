//! Scenarios written inline and run without touching the filesystem.

use spinmix::scenario::{emit_report, parse_scenario, run_scenario, Format};

const BELL: &str = r#"
schema_version = 1
name = "bell-singlet"
n_sites = 2
routes = ["dense", "trace"]

[state]
kind = "custom-ensemble"

[[state.members]]
weight = 1
amplitudes = [[0, 0], ["sqrt(1/2)", 0], ["-sqrt(1/2)", 0], [0, 0]]

[[observables]]
axis = "z"
expected_mean = 0
expected_variance = 0
source = "the singlet has zero total spin"

[[observables]]
label = "s1_z"
terms = [{ site = 1, axis = "z" }]
expected_mean = 0
expected_variance = "1/4"
source = "each half of the singlet alone is unpolarized"
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_scenario(&parse_scenario(BELL)?)?;
    print!("{}", emit_report(&report, Format::Csv));
    println!("passed: {}", report.passed);
    Ok(())
}
