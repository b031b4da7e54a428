//! Collective spin observables and the three evaluation routes for their moments.
//!
//! * ensemble definition: [`mean_pure_dense`], [`mean_ensemble`] and the variance twins,
//! * density-operator trace: [`mean_trace`], [`variance_trace`],
//! * product-state analytics: [`moments_product_fast`] and friends.
//!
//! The first two accept anything implementing [`Observable`], so collective
//! sums are applied term by term without building a `2^N × 2^N` matrix.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{embed_site_operator_with_cap, spin_component, Axis, DenseOperator};
use crate::error::{Result, SpinError};
use crate::states::{DensityOperator, Ensemble, ProductState, PureState};
use crate::{C64, DEFAULT_DENSE_CAP};

/// Largest imaginary part tolerated in an expectation value.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Orthonormality tolerance for user-supplied bases.
pub const BASIS_TOLERANCE: f64 = 1e-10;

/// Linear operator on the `2^N`-dimensional state space.
pub trait Observable {
    fn dim(&self) -> usize;

    /// Writes `O · input` into `out`. Both slices have length [`Observable::dim`].
    fn apply(&self, input: &[C64], out: &mut [C64]);
}

impl Observable for DenseOperator {
    fn dim(&self) -> usize {
        DenseOperator::dim(self)
    }

    fn apply(&self, input: &[C64], out: &mut [C64]) {
        let m = self.matrix();
        for (r, slot) in out.iter_mut().enumerate() {
            *slot = (0..input.len()).map(|c| m[(r, c)] * input[c]).sum();
        }
    }
}

/// `coefficient · s_axis` acting on a 1-based site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalSpinTerm {
    pub site: usize,
    pub axis: Axis,
    pub coefficient: f64,
}

/// Sum of one-local spin terms `Σ cᵢ s_{αᵢ,i}`, kept in canonical form:
/// sorted by `(site, axis)` with duplicates merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollectiveObservable {
    n_sites: usize,
    terms: Vec<LocalSpinTerm>,
}

impl CollectiveObservable {
    pub fn new(n_sites: usize, terms: Vec<LocalSpinTerm>) -> Result<Self> {
        if n_sites == 0 {
            return Err(SpinError::NoSites);
        }
        let mut merged: Vec<LocalSpinTerm> = Vec::with_capacity(terms.len());
        let mut sorted = terms;
        for t in &sorted {
            if t.site == 0 || t.site > n_sites {
                return Err(SpinError::SiteOutOfRange { site: t.site, n_sites });
            }
            if !t.coefficient.is_finite() {
                return Err(SpinError::NonFiniteCoefficient(t.coefficient));
            }
        }
        sorted.sort_by_key(|t| (t.site, t.axis));
        for t in sorted {
            match merged.last_mut() {
                Some(last) if last.site == t.site && last.axis == t.axis => last.coefficient += t.coefficient,
                _ => merged.push(t),
            }
        }
        Ok(CollectiveObservable { n_sites, terms: merged })
    }

    /// Single-site component `s_axis` on `site`.
    pub fn site(axis: Axis, site: usize, n_sites: usize) -> Result<Self> {
        Self::new(n_sites, vec![LocalSpinTerm { site, axis, coefficient: 1.0 }])
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[LocalSpinTerm] {
        &self.terms
    }

    /// Dense `2^N × 2^N` matrix of the sum.
    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn to_dense_with_cap(&self, cap: usize) -> Result<DenseOperator> {
        if self.n_sites > cap {
            return Err(SpinError::DenseCapExceeded { n_sites: self.n_sites, cap });
        }
        let dim = 1usize << self.n_sites;
        let mut matrix = DMatrix::<C64>::zeros(dim, dim);
        for t in &self.terms {
            let embedded = embed_site_operator_with_cap(&spin_component(t.axis), t.site, self.n_sites, cap)?;
            matrix += embedded.matrix() * C64::new(t.coefficient, 0.0);
        }
        DenseOperator::from_matrix(matrix)
    }

    /// Relabels `x ↔ z` in every term.
    pub fn swap_xz(&self) -> CollectiveObservable {
        let terms = self.terms.iter().map(|t| LocalSpinTerm { axis: t.axis.swap_xz(), ..*t }).collect();
        CollectiveObservable::new(self.n_sites, terms).expect("relabeling keeps sites valid")
    }
}

/// `S_axis = Σᵢ s_axis,i` over `n` sites.
pub fn collective(axis: Axis, n: usize) -> Result<CollectiveObservable> {
    let terms = (1..=n).map(|site| LocalSpinTerm { site, axis, coefficient: 1.0 }).collect();
    CollectiveObservable::new(n, terms)
}

impl Observable for CollectiveObservable {
    fn dim(&self) -> usize {
        1 << self.n_sites
    }

    fn apply(&self, input: &[C64], out: &mut [C64]) {
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for t in &self.terms {
            let shift = self.n_sites - t.site;
            let mask = 1usize << shift;
            let half = 0.5 * t.coefficient;
            for (k, slot) in out.iter_mut().enumerate() {
                let down = (k >> shift) & 1 == 1;
                *slot += match t.axis {
                    Axis::Z => input[k] * if down { -half } else { half },
                    Axis::X => input[k ^ mask] * half,
                    // ⟨+|σ_y|−⟩ = −i, ⟨−|σ_y|+⟩ = +i
                    Axis::Y => input[k ^ mask] * C64::new(0.0, if down { half } else { -half }),
                };
            }
        }
    }
}

/// Which route produced a [`MomentReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Dense,
    Trace,
    ProductFast,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Dense => "dense",
            Method::Trace => "trace",
            Method::ProductFast => "product-fast",
        })
    }
}

/// Mean (units of ħ) and variance (units of ħ²) of an observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    pub method: Method,
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(SpinError::DimensionMismatch { expected, found });
    }
    Ok(())
}

fn real_part(z: C64) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE {
        return Err(SpinError::ImaginaryResidue(z.im));
    }
    Ok(z.re)
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// First and second raw moments `(⟨O⟩, ⟨O²⟩)` in a pure state.
fn raw_moments_pure<O: Observable + ?Sized>(state: &PureState, obs: &O) -> Result<(f64, f64)> {
    check_dim(obs.dim(), state.dim())?;
    let v = state.amplitudes();
    let mut once = vec![C64::new(0.0, 0.0); v.len()];
    let mut twice = once.clone();
    obs.apply(v, &mut once);
    obs.apply(&once, &mut twice);
    Ok((real_part(dot(v, &once))?, real_part(dot(v, &twice))?))
}

/// `⟨Φ|O|Φ⟩`.
pub fn mean_pure_dense<O: Observable + ?Sized>(state: &PureState, obs: &O) -> Result<f64> {
    raw_moments_pure(state, obs).map(|(m, _)| m)
}

/// `⟨Φ|O²|Φ⟩ − ⟨Φ|O|Φ⟩²`.
pub fn variance_pure_dense<O: Observable + ?Sized>(state: &PureState, obs: &O) -> Result<f64> {
    raw_moments_pure(state, obs).map(|(m, m2)| m2 - m * m)
}

pub fn moments_pure_dense<O: Observable + ?Sized>(state: &PureState, obs: &O) -> Result<MomentReport> {
    let (m, m2) = raw_moments_pure(state, obs)?;
    Ok(MomentReport { mean: m, variance: m2 - m * m, method: Method::Dense })
}

/// Per-member raw moments `(pᵢ, ⟨O⟩ᵢ, ⟨O²⟩ᵢ)`.
fn member_moments<O: Observable + ?Sized>(ens: &Ensemble, obs: &O) -> Result<Vec<(f64, f64, f64)>> {
    check_dim(obs.dim(), 1 << ens.n_sites())?;
    ens.members()
        .iter()
        .map(|m| {
            let state = m.state.to_pure_state_with_cap(DEFAULT_DENSE_CAP)?;
            let (first, second) = raw_moments_pure(&state, obs)?;
            Ok((m.weight, first, second))
        })
        .collect()
}

/// Moments of the mixture as a whole: `Σ pᵢ⟨O⟩ᵢ` and
/// `Σ pᵢ⟨O²⟩ᵢ − (Σ pᵢ⟨O⟩ᵢ)²`.
pub fn moments_ensemble<O: Observable + ?Sized>(ens: &Ensemble, obs: &O) -> Result<MomentReport> {
    let per_member = member_moments(ens, obs)?;
    let mean: f64 = per_member.iter().map(|(p, m, _)| p * m).sum();
    let second: f64 = per_member.iter().map(|(p, _, m2)| p * m2).sum();
    Ok(MomentReport { mean, variance: second - mean * mean, method: Method::Dense })
}

pub fn mean_ensemble<O: Observable + ?Sized>(ens: &Ensemble, obs: &O) -> Result<f64> {
    moments_ensemble(ens, obs).map(|r| r.mean)
}

pub fn variance_ensemble<O: Observable + ?Sized>(ens: &Ensemble, obs: &O) -> Result<f64> {
    moments_ensemble(ens, obs).map(|r| r.variance)
}

/// Weighted average of each member's own variance, `Σ pᵢ Varᵢ(O)`.
///
/// Diagnostic only: this is not the variance of the mixture, which also
/// includes the spread of the member means.
pub fn within_member_variance<O: Observable + ?Sized>(ens: &Ensemble, obs: &O) -> Result<f64> {
    Ok(member_moments(ens, obs)?.iter().map(|(p, m, m2)| p * (m2 - m * m)).sum())
}

/// `(Tr(ρO), Tr(ρO²))`, computed as traces of `Oρ` and `O(Oρ)` column by column.
fn raw_moments_trace<O: Observable + ?Sized>(rho: &DensityOperator, obs: &O) -> Result<(f64, f64)> {
    check_dim(obs.dim(), rho.dim())?;
    let dim = rho.dim();
    let mut once = vec![C64::new(0.0, 0.0); dim];
    let mut twice = once.clone();
    let mut tr1 = C64::new(0.0, 0.0);
    let mut tr2 = C64::new(0.0, 0.0);
    for (c, column) in rho.matrix().column_iter().enumerate() {
        let column: Vec<C64> = column.iter().copied().collect();
        obs.apply(&column, &mut once);
        obs.apply(&once, &mut twice);
        tr1 += once[c];
        tr2 += twice[c];
    }
    Ok((real_part(tr1)?, real_part(tr2)?))
}

/// `Tr(ρO)`.
pub fn mean_trace<O: Observable + ?Sized>(rho: &DensityOperator, obs: &O) -> Result<f64> {
    raw_moments_trace(rho, obs).map(|(m, _)| m)
}

/// `Tr(ρO²) − Tr(ρO)²`.
pub fn variance_trace<O: Observable + ?Sized>(rho: &DensityOperator, obs: &O) -> Result<f64> {
    raw_moments_trace(rho, obs).map(|(m, m2)| m2 - m * m)
}

pub fn moments_trace<O: Observable + ?Sized>(rho: &DensityOperator, obs: &O) -> Result<MomentReport> {
    let (m, m2) = raw_moments_trace(rho, obs)?;
    Ok(MomentReport { mean: m, variance: m2 - m * m, method: Method::Trace })
}

/// Moments of `S_axis` in a product state, in `O(N)` time without allocation.
///
/// Distinct sites are uncorrelated, so the mean is `Σ mᵢ` and the variance
/// `Σ (1/4 − mᵢ²)` with `mᵢ = ⟨s_axis⟩` on site `i`. Each site term is
/// clamped at zero so a fully polarized site cannot round below it.
pub fn moments_product_fast(state: &ProductState, axis: Axis) -> MomentReport {
    let (mean, variance) = state.kets().iter().fold((0.0, 0.0), |(mean, var), ket| {
        let m = ket.spin_expectation(axis);
        (mean + m, var + (0.25 - m * m).max(0.0))
    });
    MomentReport { mean, variance, method: Method::ProductFast }
}

/// Product-state moments of an arbitrary one-local observable.
///
/// On each site the terms combine into `A = Σ_α c_α s_α = (b·σ)/2`, whose
/// square is `|b|²/4` times the identity.
pub fn moments_product_fast_observable(state: &ProductState, obs: &CollectiveObservable) -> Result<MomentReport> {
    if state.n_sites() != obs.n_sites() {
        return Err(SpinError::SiteCountMismatch { expected: obs.n_sites(), found: state.n_sites() });
    }
    let mut mean = 0.0;
    let mut variance = 0.0;
    let terms = obs.terms();
    let mut start = 0;
    while start < terms.len() {
        let site = terms[start].site;
        let end = start + terms[start..].iter().take_while(|t| t.site == site).count();
        let ket = state.ket(site)?;
        let mut site_mean = 0.0;
        let mut b_sqr = 0.0;
        for t in &terms[start..end] {
            site_mean += t.coefficient * ket.spin_expectation(t.axis);
            b_sqr += t.coefficient * t.coefficient;
        }
        mean += site_mean;
        variance += (0.25 * b_sqr - site_mean * site_mean).max(0.0);
        start = end;
    }
    Ok(MomentReport { mean, variance, method: Method::ProductFast })
}

/// Mixture moments for an ensemble whose members are all product states.
pub fn moments_product_fast_ensemble(ens: &Ensemble, obs: &CollectiveObservable) -> Result<MomentReport> {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (weight, state) in ens.product_members()? {
        let r = moments_product_fast_observable(state, obs)?;
        mean += weight * r.mean;
        second += weight * (r.variance + r.mean * r.mean);
    }
    Ok(MomentReport { mean, variance: second - mean * mean, method: Method::ProductFast })
}

fn check_orthonormal(basis: &[PureState]) -> Result<()> {
    let mut worst: f64 = 0.0;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b)? - C64::new(target, 0.0)).norm());
        }
    }
    if worst > BASIS_TOLERANCE {
        return Err(SpinError::NotOrthonormal(worst));
    }
    Ok(())
}

/// Matrix `O_kk′ = ⟨k|O|k′⟩` in an orthonormal basis.
pub fn matrix_elements<O: Observable + ?Sized>(obs: &O, basis: &[PureState]) -> Result<DMatrix<C64>> {
    for b in basis {
        check_dim(obs.dim(), b.dim())?;
    }
    check_orthonormal(basis)?;
    let applied: Vec<Vec<C64>> = basis
        .iter()
        .map(|b| {
            let mut out = vec![C64::new(0.0, 0.0); b.dim()];
            obs.apply(b.amplitudes(), &mut out);
            out
        })
        .collect();
    Ok(DMatrix::from_fn(basis.len(), basis.len(), |r, c| dot(basis[r].amplitudes(), &applied[c])))
}

/// `Σ_k |⟨k|Φ⟩|² O_kk`: the mean computed from basis probabilities alone,
/// dropping the off-diagonal (interference) contributions.
///
/// Equals `⟨Φ|O|Φ⟩` only when `O` is diagonal in the chosen basis.
pub fn diagonal_probability_mean<O: Observable + ?Sized>(
    state: &PureState,
    obs: &O,
    basis: &[PureState],
) -> Result<f64> {
    check_dim(obs.dim(), state.dim())?;
    let elements = matrix_elements(obs, basis)?;
    let mut total = 0.0;
    for (k, b) in basis.iter().enumerate() {
        total += b.inner(state)?.norm_sqr() * real_part(elements[(k, k)])?;
    }
    Ok(total)
}
