//! The totally unpolarized state I/2^N: same moments for every axis.

use spinmix::observables::{collective, moments_ensemble, moments_product_fast_ensemble, moments_trace};
use spinmix::states::{maximally_mixed, maximally_mixed_ensemble, polarization_vector};
use spinmix::Axis;

fn main() -> spinmix::Result<()> {
    for n in [2, 4, 8] {
        let rho = maximally_mixed(n)?;
        let ens = maximally_mixed_ensemble(n)?;
        for axis in Axis::ALL {
            let obs = collective(axis, n)?;
            let t = moments_trace(&rho, &obs)?;
            let e = moments_ensemble(&ens, &obs)?;
            let f = moments_product_fast_ensemble(&ens, &obs)?;
            println!(
                "N={n} S_{axis}: trace ({:.4}, {:.4})  ensemble ({:.4}, {:.4})  fast ({:.4}, {:.4})",
                t.mean, t.variance, e.mean, e.variance, f.mean, f.variance
            );
        }
    }
    let single = maximally_mixed(1)?;
    println!("single-spin polarization vector: {:?}", polarization_vector(&single)?);
    Ok(())
}
