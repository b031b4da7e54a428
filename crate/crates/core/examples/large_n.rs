//! Product states far beyond dense reach.
//!
//! ```text
//! cargo run --release -p spinmix --example large_n -- 10000000
//! ```

use std::time::Instant;

use spinmix::observables::{collective, moments_product_fast, moments_pure_dense};
use spinmix::states::psi_delta;
use spinmix::{Axis, SignPattern, SpinError};

fn main() -> spinmix::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1_000_000);
    let start = Instant::now();
    let state = psi_delta(Axis::X, &SignPattern::first_balanced(n)?);
    for axis in Axis::ALL {
        let r = moments_product_fast(&state, axis);
        println!("N={n} S_{axis}: mean {} variance {}", r.mean, r.variance);
    }
    println!("elapsed {:.2?}", start.elapsed());

    // the dense route refuses politely
    match state.to_pure_state() {
        Err(e @ SpinError::DenseCapExceeded { .. }) => println!("dense route: {e}"),
        Err(e) => return Err(e),
        Ok(pure) => {
            let m = moments_pure_dense(&pure, &collective(Axis::Z, n)?)?;
            println!("dense route: ({}, {})", m.mean, m.variance);
        }
    }
    Ok(())
}
