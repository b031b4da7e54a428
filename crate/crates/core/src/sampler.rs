//! Born-rule Monte Carlo of repeated Stern-Gerlach runs.
//!
//! Each shot prepares the source state (drawing an ensemble member by weight
//! first, when the source is a mixture), measures every site along one axis
//! and records the `±1` outcomes together with the total spin `Σ outcomes / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{axis_eigenket, Axis, Sign};
use crate::error::{Result, SpinError};
use crate::states::{Ensemble, ProductState};

/// Identifier of the pseudorandom generator, recorded in every report.
/// `ChaCha8Rng::seed_from_u64` is specified independently of platform.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, seed_from_u64)";

/// One preparation + measurement cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotRecord {
    pub outcomes: Vec<i8>,
    /// `Σ outcomes / 2`, in units of ħ.
    pub total: f64,
}

/// Summary statistics over the shot totals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub shots: usize,
    pub empirical_mean: f64,
    /// Population variance (divides by `shots`).
    pub empirical_variance: f64,
    /// `sqrt(empirical_variance / shots)`.
    pub stderr_mean: f64,
}

impl SampleStats {
    /// Variance with the `n/(n−1)` correction; equal to the population value for one shot.
    pub fn corrected_variance(&self) -> f64 {
        if self.shots < 2 {
            return self.empirical_variance;
        }
        self.empirical_variance * self.shots as f64 / (self.shots - 1) as f64
    }
}

/// What gets prepared on every shot.
#[derive(Debug, Clone, Copy)]
pub enum SampleSource<'a> {
    Product(&'a ProductState),
    Ensemble(&'a Ensemble),
}

impl<'a> From<&'a ProductState> for SampleSource<'a> {
    fn from(p: &'a ProductState) -> Self {
        SampleSource::Product(p)
    }
}

impl<'a> From<&'a Ensemble> for SampleSource<'a> {
    fn from(e: &'a Ensemble) -> Self {
        SampleSource::Ensemble(e)
    }
}

/// Born probabilities `(|⟨+axis|ψᵢ⟩|², |⟨−axis|ψᵢ⟩|²)` for a 1-based site.
pub fn site_outcome_probs(state: &ProductState, site: usize, axis: Axis) -> Result<(f64, f64)> {
    let ket = state.ket(site)?;
    let plus = axis_eigenket(axis, Sign::Plus).inner(ket).norm_sqr();
    let minus = axis_eigenket(axis, Sign::Minus).inner(ket).norm_sqr();
    let total = plus + minus;
    Ok((plus / total, minus / total))
}

fn plus_probabilities(state: &ProductState, axis: Axis) -> Vec<f64> {
    (1..=state.n_sites()).map(|site| site_outcome_probs(state, site, axis).expect("site in range").0).collect()
}

fn measure(plus_probs: &[f64], rng: &mut ChaCha8Rng) -> ShotRecord {
    let outcomes: Vec<i8> = plus_probs.iter().map(|&p| if rng.random::<f64>() < p { 1 } else { -1 }).collect();
    let sum: i64 = outcomes.iter().map(|&o| i64::from(o)).sum();
    ShotRecord { outcomes, total: sum as f64 / 2.0 }
}

/// Draws `shots` independent measurement records, deterministic for a fixed `seed`.
///
/// A one-member ensemble consumes no randomness for member selection, so it
/// reproduces pure-state sampling exactly.
pub fn sample_shots<'a>(
    source: impl Into<SampleSource<'a>>,
    axis: Axis,
    shots: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match source.into() {
        SampleSource::Product(state) => {
            let probs = plus_probabilities(state, axis);
            Ok((0..shots).map(|_| measure(&probs, &mut rng)).collect())
        }
        SampleSource::Ensemble(ens) => {
            let members = ens.product_members()?;
            let probs: Vec<Vec<f64>> = members.iter().map(|(_, s)| plus_probabilities(s, axis)).collect();
            let cumulative: Vec<f64> = members
                .iter()
                .scan(0.0, |acc, (w, _)| {
                    *acc += w;
                    Some(*acc)
                })
                .collect();
            let last = cumulative.len() - 1;
            Ok((0..shots)
                .map(|_| {
                    let pick = if last == 0 {
                        0
                    } else {
                        let u = rng.random::<f64>() * cumulative[last];
                        cumulative.partition_point(|&c| c <= u).min(last)
                    };
                    measure(&probs[pick], &mut rng)
                })
                .collect())
        }
    }
}

/// Mean, population variance and standard error of the shot totals.
pub fn empirical_stats(records: &[ShotRecord]) -> Result<SampleStats> {
    if records.is_empty() {
        return Err(SpinError::NoRecords);
    }
    let n = records.len() as f64;
    let mean = records.iter().map(|r| r.total).sum::<f64>() / n;
    let variance = records.iter().map(|r| (r.total - mean).powi(2)).sum::<f64>() / n;
    Ok(SampleStats {
        shots: records.len(),
        empirical_mean: mean,
        empirical_variance: variance,
        stderr_mean: (variance / n).sqrt(),
    })
}
