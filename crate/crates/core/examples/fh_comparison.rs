//! A single maximally mixed spin next to four spins in a pure state: the
//! numbers coincide in places, the systems do not.

use spinmix::scenario::{emit_report, load_scenario, run_scenario, Format};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_scenario(&load_scenario("fh-comparison")?)?;
    print!("{}", emit_report(&report, Format::Text));
    if let Some(c) = &report.comparison {
        println!("\nverdict: {} ({})", c.verdict, c.note);
    }
    Ok(())
}
