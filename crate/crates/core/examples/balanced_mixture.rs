//! Uniform mixture over all balanced sign patterns, and how far it sits from
//! the totally unpolarized state.

use spinmix::observables::{collective, moments_ensemble, moments_trace, within_member_variance};
use spinmix::states::{balanced_mixture, balanced_patterns, density_from_ensemble, maximally_mixed};
use spinmix::Axis;

fn main() -> spinmix::Result<()> {
    let n = 4;
    let patterns = balanced_patterns(n)?;
    println!("{} balanced patterns for N = {n}:", patterns.len());
    for p in &patterns {
        println!("  {p}");
    }

    let ens = balanced_mixture(Axis::X, n)?;
    let rho = density_from_ensemble(&ens)?;
    for axis in [Axis::X, Axis::Z] {
        let obs = collective(axis, n)?;
        let a = moments_ensemble(&ens, &obs)?;
        let b = moments_trace(&rho, &obs)?;
        println!(
            "S_{axis}: ensemble ({:.6}, {:.6})  trace ({:.6}, {:.6})  within-member variance {:.6}",
            a.mean,
            a.variance,
            b.mean,
            b.variance,
            within_member_variance(&ens, &obs)?
        );
    }

    let mut eig = rho.eigenvalues();
    eig.sort_by(|a, b| b.total_cmp(a));
    println!("eigenvalues: {:?}", eig.iter().map(|e| (e * 1e9).round() / 1e9).collect::<Vec<_>>());
    println!("purity: {:.6}", rho.purity());
    println!("||rho - I/2^N||_F = {:.6}", rho.frobenius_distance(&maximally_mixed(n)?)?);
    Ok(())
}
