#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::StandardNormal;
use spinmix::{Axis, Ensemble, PureState};

/// 2×2 spin component written out by hand, independent of the library.
pub fn half_pauli(axis: Axis) -> DMatrix<C64> {
    let z = C64::new(0.0, 0.0);
    let h = C64::new(0.5, 0.0);
    let ih = C64::new(0.0, 0.5);
    match axis {
        Axis::X => DMatrix::from_row_slice(2, 2, &[z, h, h, z]),
        Axis::Y => DMatrix::from_row_slice(2, 2, &[z, -ih, ih, z]),
        Axis::Z => DMatrix::from_row_slice(2, 2, &[h, z, z, -h]),
    }
}

/// Dense `Σᵢ cᵢ s_{αᵢ,i}` assembled from explicit Kronecker products.
pub fn dense_oracle(n: usize, terms: &[(usize, Axis, f64)]) -> DMatrix<C64> {
    let dim = 1 << n;
    let mut total = DMatrix::<C64>::zeros(dim, dim);
    for &(site, axis, coef) in terms {
        let mut m = DMatrix::<C64>::identity(1, 1);
        for s in 1..=n {
            let factor = if s == site { half_pauli(axis) } else { DMatrix::identity(2, 2) };
            m = m.kronecker(&factor);
        }
        total += m * C64::new(coef, 0.0);
    }
    total
}

pub fn collective_oracle(axis: Axis, n: usize) -> DMatrix<C64> {
    let terms: Vec<_> = (1..=n).map(|s| (s, axis, 1.0)).collect();
    dense_oracle(n, &terms)
}

/// `(⟨O⟩, ⟨O²⟩ − ⟨O⟩²)` for a state vector, by plain matrix algebra.
pub fn oracle_moments(amps: &[C64], op: &DMatrix<C64>) -> (f64, f64) {
    let v = DMatrix::from_column_slice(amps.len(), 1, amps);
    let mean = (v.adjoint() * op * &v)[(0, 0)].re;
    let second = (v.adjoint() * op * op * &v)[(0, 0)].re;
    (mean, second - mean * mean)
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn haar_state<R: Rng>(rng: &mut R, n: usize) -> PureState {
    let dim = 1 << n;
    let mut amps: Vec<C64> =
        (0..dim).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    PureState::new(amps).unwrap()
}

/// Uniform point on the probability simplex.
pub fn simplex_weights<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.iter().map(|x| x / sum).collect()
}

pub fn random_ensemble<R: Rng>(rng: &mut R, n: usize, members: usize) -> Ensemble {
    let weights = simplex_weights(rng, members);
    let members: Vec<(f64, PureState)> = weights.into_iter().map(|w| (w, haar_state(rng, n))).collect();
    Ensemble::new(members).unwrap()
}

pub fn random_axis<R: Rng>(rng: &mut R) -> Axis {
    Axis::ALL[rng.random_range(0..3)]
}
