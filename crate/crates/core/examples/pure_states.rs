//! Moments of the balanced product states |psi_delta> along x and z,
//! computed three ways.
//!
//! ```text
//! cargo run -p spinmix --example pure_states
//! ```

use spinmix::observables::{collective, moments_product_fast, moments_pure_dense, moments_trace};
use spinmix::states::density_from_ensemble;
use spinmix::{Axis, Ensemble, SignPattern};

fn main() -> spinmix::Result<()> {
    println!("{:<4} {:<5} {:<4} {:>14} {:>14} {:>14}", "N", "prep", "obs", "dense", "trace", "product-fast");
    for prep in [Axis::X, Axis::Z] {
        for n in [2, 4, 8] {
            let state = spinmix::states::psi_delta(prep, &SignPattern::first_balanced(n)?);
            let pure = state.to_pure_state()?;
            let rho = density_from_ensemble(&Ensemble::pure(state.clone()))?;
            for axis in [Axis::X, Axis::Z] {
                let obs = collective(axis, n)?;
                let d = moments_pure_dense(&pure, &obs)?;
                let t = moments_trace(&rho, &obs)?;
                let f = moments_product_fast(&state, axis);
                println!(
                    "{n:<4} {prep:<5} S_{axis:<2} {:>14} {:>14} {:>14}",
                    format!("({:.3}, {:.3})", d.mean, d.variance),
                    format!("({:.3}, {:.3})", t.mean, t.variance),
                    format!("({:.3}, {:.3})", f.mean, f.variance),
                );
            }
        }
    }
    Ok(())
}
