//! Random ensembles: averaging over members and tracing against rho agree.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinmix::algebra::axis_eigenket;
use spinmix::observables::{moments_ensemble, moments_trace, CollectiveObservable, LocalSpinTerm};
use spinmix::states::density_from_ensemble;
use spinmix::{Axis, Ensemble, ProductState, Sign};

fn main() -> spinmix::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for case in 0..20 {
        let n = rng.random_range(1..=5);
        let members: Vec<(f64, ProductState)> = (0..rng.random_range(1..=6))
            .map(|_| {
                let kets = (0..n)
                    .map(|_| {
                        let axis = Axis::ALL[rng.random_range(0..3)];
                        axis_eigenket(axis, if rng.random() { Sign::Plus } else { Sign::Minus })
                    })
                    .collect();
                Ok((rng.random_range(0.1..1.0), ProductState::new(kets)?))
            })
            .collect::<spinmix::Result<_>>()?;
        let total: f64 = members.iter().map(|(w, _)| w).sum();
        let ens = Ensemble::new(members.into_iter().map(|(w, s)| (w / total, s)).collect())?;
        let obs = CollectiveObservable::new(
            n,
            (1..=n)
                .map(|site| LocalSpinTerm {
                    site,
                    axis: Axis::ALL[rng.random_range(0..3)],
                    coefficient: rng.random_range(-1.0..1.0),
                })
                .collect(),
        )?;
        let a = moments_ensemble(&ens, &obs)?;
        let b = moments_trace(&density_from_ensemble(&ens)?, &obs)?;
        let dev = (a.mean - b.mean).abs().max((a.variance - b.variance).abs());
        worst = worst.max(dev);
        println!(
            "case {case:>2}: N={n} members={} mean {:+.6} variance {:.6} deviation {dev:.1e}",
            ens.len(),
            a.mean,
            a.variance
        );
    }
    println!("worst deviation {worst:.1e}");
    Ok(())
}
