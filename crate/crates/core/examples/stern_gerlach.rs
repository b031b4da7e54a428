//! Simulated per-site measurements of the balanced x state.

use spinmix::observables::moments_product_fast;
use spinmix::sampler::{empirical_stats, sample_shots, site_outcome_probs};
use spinmix::states::psi_delta;
use spinmix::{Axis, SignPattern};

fn main() -> spinmix::Result<()> {
    let shots = 100_000;
    let seed = 4242;
    let state = psi_delta(Axis::X, &SignPattern::first_balanced(4)?);
    println!("site 1 outcome probabilities along z: {:?}", site_outcome_probs(&state, 1, Axis::Z)?);

    for axis in [Axis::X, Axis::Z] {
        let records = sample_shots(&state, axis, shots, seed)?;
        let stats = empirical_stats(&records)?;
        let exact = moments_product_fast(&state, axis);
        println!(
            "S_{axis}: sampled mean {:+.5} +- {:.5}, variance {:.5} (exact {}, {})",
            stats.empirical_mean, stats.stderr_mean, stats.empirical_variance, exact.mean, exact.variance
        );
        println!("  first shots: {:?}", records.iter().take(3).map(|r| &r.outcomes).collect::<Vec<_>>());
    }
    Ok(())
}
