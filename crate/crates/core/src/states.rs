//! State builders: product states, pure states, ensembles and density operators.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{axis_eigenket, pauli, sites_for_dim, tensor_state_with_cap, Axis, Sign, SingleSpinKet};
use crate::error::{Result, SpinError};
use crate::{C64, DEFAULT_DENSE_CAP, TOLERANCE};

/// Largest even `N` for which all balanced orderings are enumerated.
pub const ENUMERATION_CAP: usize = 20;

/// Smallest eigenvalue accepted for a density operator.
pub const PSD_FLOOR: f64 = -1e-10;

/// Ordered list of `±1` signs, one per site.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignPattern(Vec<Sign>);

impl SignPattern {
    pub fn new(signs: Vec<Sign>) -> Result<Self> {
        if signs.is_empty() {
            return Err(SpinError::NoSites);
        }
        Ok(SignPattern(signs))
    }

    /// `+…+−…−`: the first balanced ordering in lexicographic order. No cap on `n`.
    pub fn first_balanced(n: usize) -> Result<Self> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(SpinError::OddSiteCount(n));
        }
        let mut signs = vec![Sign::Plus; n / 2];
        signs.resize(n, Sign::Minus);
        Ok(SignPattern(signs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    /// Sum of the `±1` entries.
    pub fn sum(&self) -> i64 {
        self.0.iter().map(|s| i64::from(s.value())).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.sum() == 0
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

impl FromStr for SignPattern {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let signs = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' => Ok(Sign::Minus),
                other => Err(format!("invalid sign `{other}` in pattern (expected + or -)")),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        SignPattern::new(signs).map_err(|e| e.to_string())
    }
}

impl TryFrom<String> for SignPattern {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SignPattern> for String {
    fn from(p: SignPattern) -> String {
        p.to_string()
    }
}

/// Unentangled pure state stored as one ket per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductState {
    kets: Vec<SingleSpinKet>,
}

impl ProductState {
    pub fn new(kets: Vec<SingleSpinKet>) -> Result<Self> {
        if kets.is_empty() {
            return Err(SpinError::NoSites);
        }
        Ok(ProductState { kets })
    }

    pub fn n_sites(&self) -> usize {
        self.kets.len()
    }

    pub fn kets(&self) -> &[SingleSpinKet] {
        &self.kets
    }

    /// Ket on a 1-based site.
    pub fn ket(&self, site: usize) -> Result<&SingleSpinKet> {
        if site == 0 || site > self.kets.len() {
            return Err(SpinError::SiteOutOfRange { site, n_sites: self.kets.len() });
        }
        Ok(&self.kets[site - 1])
    }

    pub fn to_pure_state(&self) -> Result<PureState> {
        self.to_pure_state_with_cap(DEFAULT_DENSE_CAP)
    }

    pub fn to_pure_state_with_cap(&self, cap: usize) -> Result<PureState> {
        tensor_state_with_cap(&self.kets, cap)
    }

    pub fn swap_xz(&self) -> ProductState {
        ProductState { kets: self.kets.iter().map(SingleSpinKet::swap_xz).collect() }
    }
}

/// Unit-norm amplitude vector over the `2^N` computational basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    n_sites: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_sites = sites_for_dim(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(SpinError::NotNormalized { norm_sqr });
        }
        Ok(PureState { n_sites, amplitudes })
    }

    pub(crate) fn from_parts_unchecked(n_sites: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_sites);
        PureState { n_sites, amplitudes }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_sites: usize, index: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(SpinError::NoSites);
        }
        let dim = 1usize << n_sites;
        if index >= dim {
            return Err(SpinError::DimensionMismatch { expected: dim, found: index });
        }
        let mut amplitudes = vec![C64::new(0.0, 0.0); dim];
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(PureState { n_sites, amplitudes })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(SpinError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|Φ⟩⟨Φ|`.
    pub fn projector(&self) -> DensityOperator {
        let a = &self.amplitudes;
        let matrix = DMatrix::from_fn(a.len(), a.len(), |r, c| a[r] * a[c].conj());
        DensityOperator { n_sites: self.n_sites, matrix }
    }
}

/// A member state of an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MemberState {
    Product(ProductState),
    Pure(PureState),
}

impl MemberState {
    pub fn n_sites(&self) -> usize {
        match self {
            MemberState::Product(p) => p.n_sites(),
            MemberState::Pure(p) => p.n_sites(),
        }
    }

    pub fn as_product(&self) -> Option<&ProductState> {
        match self {
            MemberState::Product(p) => Some(p),
            MemberState::Pure(_) => None,
        }
    }

    pub fn to_pure_state_with_cap(&self, cap: usize) -> Result<PureState> {
        match self {
            MemberState::Product(p) => p.to_pure_state_with_cap(cap),
            MemberState::Pure(p) if p.n_sites() > cap => Err(SpinError::DenseCapExceeded { n_sites: p.n_sites(), cap }),
            MemberState::Pure(p) => Ok(p.clone()),
        }
    }
}

impl From<ProductState> for MemberState {
    fn from(p: ProductState) -> Self {
        MemberState::Product(p)
    }
}

impl From<PureState> for MemberState {
    fn from(p: PureState) -> Self {
        MemberState::Pure(p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub weight: f64,
    pub state: MemberState,
}

/// Weighted collection of pure states `{(pᵢ, |Φᵢ⟩)}`. Members need not be orthogonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    n_sites: usize,
    members: Vec<Member>,
}

impl Ensemble {
    /// Validates weights (each in `[0, 1]`, sum within `1e-12` of one) and
    /// renormalizes them so the sum is exactly one.
    pub fn new<S: Into<MemberState>>(members: Vec<(f64, S)>) -> Result<Self> {
        let members: Vec<Member> = members.into_iter().map(|(weight, s)| Member { weight, state: s.into() }).collect();
        let first = members.first().ok_or(SpinError::EmptyEnsemble)?;
        let n_sites = first.state.n_sites();
        for m in &members {
            if m.state.n_sites() != n_sites {
                return Err(SpinError::SiteCountMismatch { expected: n_sites, found: m.state.n_sites() });
            }
            if !(0.0..=1.0).contains(&m.weight) {
                return Err(SpinError::InvalidWeights(format!("weight {} outside [0, 1]", m.weight)));
            }
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(SpinError::InvalidWeights(format!("weights sum to {total}")));
        }
        let members = members.into_iter().map(|m| Member { weight: m.weight / total, ..m }).collect();
        Ok(Ensemble { n_sites, members })
    }

    /// The degenerate one-member ensemble.
    pub fn pure<S: Into<MemberState>>(state: S) -> Self {
        let state = state.into();
        Ensemble { n_sites: state.n_sites(), members: vec![Member { weight: 1.0, state }] }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Product-state members with their weights, or the index of the first
    /// member that is not a product state.
    pub fn product_members(&self) -> Result<Vec<(f64, &ProductState)>> {
        self.members
            .iter()
            .enumerate()
            .map(|(i, m)| m.state.as_product().map(|p| (m.weight, p)).ok_or(SpinError::NotProductState(i)))
            .collect()
    }

    pub fn swap_xz(&self) -> Result<Ensemble> {
        let members = self
            .members
            .iter()
            .enumerate()
            .map(|(i, m)| match &m.state {
                MemberState::Product(p) => Ok(Member { weight: m.weight, state: p.swap_xz().into() }),
                MemberState::Pure(_) => Err(SpinError::NotProductState(i)),
            })
            .collect::<Result<_>>()?;
        Ok(Ensemble { n_sites: self.n_sites, members })
    }
}

/// Hermitian, unit-trace, positive semidefinite `2^N × 2^N` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_sites: usize,
    matrix: DMatrix<C64>,
}

impl DensityOperator {
    /// Validates Hermiticity and unit trace to `1e-12` and PSD to [`PSD_FLOOR`].
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(SpinError::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n_sites = sites_for_dim(matrix.nrows())?;
        let rho = DensityOperator { n_sites, matrix };
        rho.check_hermitian_unit_trace()?;
        let smallest = rho.eigenvalues()[0];
        if smallest < PSD_FLOOR {
            return Err(SpinError::NotPositive(smallest));
        }
        Ok(rho)
    }

    fn check_hermitian_unit_trace(&self) -> Result<()> {
        let defect = (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if defect > TOLERANCE {
            return Err(SpinError::NotHermitian(defect));
        }
        let trace = self.matrix.trace();
        if (trace.re - 1.0).abs() > TOLERANCE || trace.im.abs() > TOLERANCE {
            return Err(SpinError::TraceNotOne(trace.re));
        }
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `Tr(ρ²)`; one exactly for pure states.
    pub fn purity(&self) -> f64 {
        // Tr(ρ²) = Σ |ρ_jk|² for Hermitian ρ
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    pub fn frobenius_distance(&self, other: &DensityOperator) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(SpinError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok((&self.matrix - &other.matrix).norm())
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `|Ψ_axis,δ⟩`: site `i` in the `pattern[i]` eigenket of `s_axis`.
pub fn psi_delta(axis: Axis, pattern: &SignPattern) -> ProductState {
    ProductState { kets: pattern.signs().iter().map(|&s| axis_eigenket(axis, s)).collect() }
}

/// All `N!/((N/2)!)²` orderings with `N/2` plus and `N/2` minus signs, in
/// lexicographic order (`+` before `−`).
pub fn balanced_patterns(n: usize) -> Result<Vec<SignPattern>> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(SpinError::OddSiteCount(n));
    }
    if n > ENUMERATION_CAP {
        return Err(SpinError::EnumerationCapExceeded { n_sites: n, cap: ENUMERATION_CAP });
    }
    fn extend(prefix: &mut Vec<Sign>, plus_left: usize, minus_left: usize, out: &mut Vec<SignPattern>) {
        if plus_left == 0 && minus_left == 0 {
            out.push(SignPattern(prefix.clone()));
            return;
        }
        if plus_left > 0 {
            prefix.push(Sign::Plus);
            extend(prefix, plus_left - 1, minus_left, out);
            prefix.pop();
        }
        if minus_left > 0 {
            prefix.push(Sign::Minus);
            extend(prefix, plus_left, minus_left - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n / 2, n / 2, &mut out);
    Ok(out)
}

/// Equal-weight mixture of `psi_delta(axis, δ)` over every balanced `δ`.
pub fn balanced_mixture(axis: Axis, n: usize) -> Result<Ensemble> {
    let patterns = balanced_patterns(n)?;
    let weight = 1.0 / patterns.len() as f64;
    let members = patterns.iter().map(|p| Member { weight, state: psi_delta(axis, p).into() }).collect();
    Ok(Ensemble { n_sites: n, members })
}

/// `I / 2^n`.
pub fn maximally_mixed(n: usize) -> Result<DensityOperator> {
    maximally_mixed_with_cap(n, DEFAULT_DENSE_CAP)
}

pub fn maximally_mixed_with_cap(n: usize, cap: usize) -> Result<DensityOperator> {
    if n == 0 {
        return Err(SpinError::NoSites);
    }
    if n > cap {
        return Err(SpinError::DenseCapExceeded { n_sites: n, cap });
    }
    let dim = 1usize << n;
    let matrix = DMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
    Ok(DensityOperator { n_sites: n, matrix })
}

/// Uniform mixture of all `2^n` computational basis states, as product states.
///
/// Its density operator is `I / 2^n`, so it serves as an ensemble
/// representation of the maximally mixed state.
pub fn maximally_mixed_ensemble(n: usize) -> Result<Ensemble> {
    if n == 0 {
        return Err(SpinError::NoSites);
    }
    if n > ENUMERATION_CAP {
        return Err(SpinError::EnumerationCapExceeded { n_sites: n, cap: ENUMERATION_CAP });
    }
    let dim = 1usize << n;
    let weight = 1.0 / dim as f64;
    let members = (0..dim)
        .map(|index| {
            let kets = (0..n)
                .map(|i| {
                    let sign = if (index >> (n - 1 - i)) & 1 == 0 { Sign::Plus } else { Sign::Minus };
                    axis_eigenket(Axis::Z, sign)
                })
                .collect();
            Member { weight, state: ProductState { kets }.into() }
        })
        .collect();
    Ok(Ensemble { n_sites: n, members })
}

/// `ρ = Σᵢ pᵢ |Φᵢ⟩⟨Φᵢ|`.
pub fn density_from_ensemble(ens: &Ensemble) -> Result<DensityOperator> {
    density_from_ensemble_with_cap(ens, DEFAULT_DENSE_CAP)
}

pub fn density_from_ensemble_with_cap(ens: &Ensemble, cap: usize) -> Result<DensityOperator> {
    let n = ens.n_sites();
    if n > cap {
        return Err(SpinError::DenseCapExceeded { n_sites: n, cap });
    }
    let dim = 1usize << n;
    let mut matrix = DMatrix::<C64>::zeros(dim, dim);
    for m in ens.members() {
        let state = m.state.to_pure_state_with_cap(cap)?;
        let a = state.amplitudes();
        for c in 0..dim {
            let col = a[c].conj() * m.weight;
            if col == C64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..dim {
                matrix[(r, c)] += a[r] * col;
            }
        }
    }
    let rho = DensityOperator { n_sites: n, matrix };
    // positive by construction: non-negative weights on rank-one projectors
    rho.check_hermitian_unit_trace()?;
    Ok(rho)
}

/// Bloch vector `a_α = Tr(ρ σ_α)` of a single-spin density operator.
pub fn polarization_vector(rho: &DensityOperator) -> Result<[f64; 3]> {
    if rho.n_sites() != 1 {
        return Err(SpinError::NotSingleSpin(rho.n_sites()));
    }
    let mut out = [0.0; 3];
    for (slot, axis) in out.iter_mut().zip(Axis::ALL) {
        let value = (rho.matrix() * pauli(axis).matrix()).trace();
        if value.im.abs() > TOLERANCE {
            return Err(SpinError::ImaginaryResidue(value.im));
        }
        *slot = value.re;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::tensor_state;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn v_state() -> SingleSpinKet {
        SingleSpinKet::new(c(0.5, 0.0), c(0.0, 3f64.sqrt() / 2.0)).unwrap()
    }

    #[test]
    fn pattern_parsing_and_display() {
        let p: SignPattern = "++--".parse().unwrap();
        assert_eq!(p.to_string(), "++--");
        assert!(p.is_balanced());
        assert_eq!(p.sum(), 0);
        assert!("".parse::<SignPattern>().is_err());
        assert!("+x".parse::<SignPattern>().is_err());
        assert_eq!(SignPattern::first_balanced(6).unwrap().to_string(), "+++---");
        assert_eq!(SignPattern::first_balanced(3), Err(SpinError::OddSiteCount(3)));
    }

    #[test]
    fn psi_delta_builds_eigenkets() {
        let p: SignPattern = "++--".parse().unwrap();
        let state = psi_delta(Axis::X, &p);
        assert_eq!(state.n_sites(), 4);
        assert_eq!(*state.ket(3).unwrap(), axis_eigenket(Axis::X, Sign::Minus));
        let single = psi_delta(Axis::Z, &"+".parse().unwrap());
        assert_eq!(single.kets()[0].amplitudes(), [c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(state.ket(5), Err(SpinError::SiteOutOfRange { .. })));
    }

    #[test]
    fn balanced_pattern_counts() {
        let two = balanced_patterns(2).unwrap();
        assert_eq!(two.iter().map(ToString::to_string).collect::<Vec<_>>(), ["+-", "-+"]);
        assert_eq!(balanced_patterns(4).unwrap().len(), 6);
        // binomial(6, 3) by multiplicative formula
        let binom6: usize = (1..=3).fold(1, |acc, k| acc * (6 - 3 + k) / k);
        assert_eq!(balanced_patterns(6).unwrap().len(), binom6);
        let six = balanced_patterns(6).unwrap();
        assert!(six.windows(2).all(|w| w[0] < w[1]));
        assert!(six.iter().all(SignPattern::is_balanced));
        assert_eq!(balanced_patterns(3), Err(SpinError::OddSiteCount(3)));
        assert_eq!(balanced_patterns(0), Err(SpinError::OddSiteCount(0)));
        assert!(matches!(balanced_patterns(22), Err(SpinError::EnumerationCapExceeded { .. })));
    }

    #[test]
    fn balanced_mixture_weights() {
        let two = balanced_mixture(Axis::X, 2).unwrap();
        assert_eq!(two.members().iter().map(|m| m.weight).collect::<Vec<_>>(), [0.5, 0.5]);
        let four = balanced_mixture(Axis::X, 4).unwrap();
        assert_eq!(four.len(), 6);
        assert!(four.members().iter().all(|m| (m.weight - 1.0 / 6.0).abs() < 1e-15));
    }

    #[test]
    fn maximally_mixed_examples() {
        let one = maximally_mixed(1).unwrap();
        assert_eq!(one.matrix()[(0, 0)], c(0.5, 0.0));
        assert_eq!(one.matrix()[(1, 1)], c(0.5, 0.0));
        assert_eq!(one.matrix()[(0, 1)], c(0.0, 0.0));
        let two = maximally_mixed(2).unwrap();
        assert!((0..4).all(|k| two.matrix()[(k, k)] == c(0.25, 0.0)));
        for n in 1..=6 {
            assert!((maximally_mixed(n).unwrap().trace().re - 1.0).abs() < TOLERANCE);
        }
        assert!(matches!(maximally_mixed(13), Err(SpinError::DenseCapExceeded { .. })));
        assert_eq!(maximally_mixed(0), Err(SpinError::NoSites));
    }

    #[test]
    fn maximally_mixed_ensemble_matches_identity() {
        for n in 1..=4 {
            let rho = density_from_ensemble(&maximally_mixed_ensemble(n).unwrap()).unwrap();
            assert!(rho.max_abs_diff(&maximally_mixed(n).unwrap()) < TOLERANCE);
        }
    }

    #[test]
    fn density_examples() {
        let up = ProductState::new(vec![axis_eigenket(Axis::Z, Sign::Plus)]).unwrap();
        let down = ProductState::new(vec![axis_eigenket(Axis::Z, Sign::Minus)]).unwrap();
        let rho = density_from_ensemble(&Ensemble::pure(up.clone())).unwrap();
        assert_eq!(rho.matrix()[(0, 0)], c(1.0, 0.0));
        assert_eq!(rho.matrix()[(1, 1)], c(0.0, 0.0));

        let px = ProductState::new(vec![axis_eigenket(Axis::X, Sign::Plus)]).unwrap();
        let mx = ProductState::new(vec![axis_eigenket(Axis::X, Sign::Minus)]).unwrap();
        let fh = density_from_ensemble(&Ensemble::new(vec![(0.5, px), (0.5, mx)]).unwrap()).unwrap();
        assert!(fh.max_abs_diff(&maximally_mixed(1).unwrap()) < TOLERANCE);

        let skew = density_from_ensemble(&Ensemble::new(vec![(0.25, up), (0.75, down)]).unwrap()).unwrap();
        assert!((skew.matrix()[(0, 0)].re - 0.25).abs() < TOLERANCE);
        assert!((skew.matrix()[(1, 1)].re - 0.75).abs() < TOLERANCE);
        assert!(skew.matrix()[(0, 1)].norm() < TOLERANCE);
    }

    #[test]
    fn single_member_density_is_projector() {
        let state = tensor_state(&[v_state(), axis_eigenket(Axis::X, Sign::Minus)]).unwrap();
        let rho = density_from_ensemble(&Ensemble::pure(state.clone())).unwrap();
        assert!(rho.max_abs_diff(&state.projector()) < TOLERANCE);
        assert!((rho.purity() - 1.0).abs() < TOLERANCE);
    }

    #[test]
    fn ensemble_validation() {
        let up = ProductState::new(vec![axis_eigenket(Axis::Z, Sign::Plus)]).unwrap();
        let pair = ProductState::new(vec![axis_eigenket(Axis::Z, Sign::Plus); 2]).unwrap();
        assert_eq!(Ensemble::new(Vec::<(f64, ProductState)>::new()), Err(SpinError::EmptyEnsemble));
        assert!(matches!(
            Ensemble::new(vec![(0.5, up.clone()), (0.5, pair)]),
            Err(SpinError::SiteCountMismatch { .. })
        ));
        assert!(matches!(Ensemble::new(vec![(0.6, up.clone()), (0.6, up.clone())]), Err(SpinError::InvalidWeights(_))));
        assert!(matches!(
            Ensemble::new(vec![(-0.1, up.clone()), (1.1, up.clone())]),
            Err(SpinError::InvalidWeights(_))
        ));
        let ens = Ensemble::new(vec![(0.5 + 4e-13, up.clone()), (0.5, up)]).unwrap();
        let total: f64 = ens.members().iter().map(|m| m.weight).sum();
        assert!((total - 1.0).abs() <= f64::EPSILON);
    }

    #[test]
    fn different_ensembles_same_density() {
        let ket = |a, s| ProductState::new(vec![axis_eigenket(a, s)]).unwrap();
        let x = Ensemble::new(vec![(0.5, ket(Axis::X, Sign::Plus)), (0.5, ket(Axis::X, Sign::Minus))]).unwrap();
        let z = Ensemble::new(vec![(0.5, ket(Axis::Z, Sign::Plus)), (0.5, ket(Axis::Z, Sign::Minus))]).unwrap();
        let rx = density_from_ensemble(&x).unwrap();
        let rz = density_from_ensemble(&z).unwrap();
        assert!(rx.max_abs_diff(&rz) < TOLERANCE);
    }

    #[test]
    fn density_validation_rejects_bad_matrices() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.1, 0.0), c(0.2, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityOperator::from_matrix(m), Err(SpinError::NotHermitian(_))));
        let m = DMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(DensityOperator::from_matrix(m), Err(SpinError::TraceNotOne(_))));
        let m = DMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-0.5, 0.0)]);
        assert!(matches!(DensityOperator::from_matrix(m), Err(SpinError::NotPositive(_))));
        let m = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)]);
        assert!(DensityOperator::from_matrix(m).is_ok());
    }

    #[test]
    fn polarization_examples() {
        let a = polarization_vector(&maximally_mixed(1).unwrap()).unwrap();
        assert!(a.iter().all(|x| x.abs() < TOLERANCE));

        let up = tensor_state(&[axis_eigenket(Axis::Z, Sign::Plus)]).unwrap();
        let a = polarization_vector(&up.projector()).unwrap();
        assert!(a[0].abs() < TOLERANCE && a[1].abs() < TOLERANCE && (a[2] - 1.0).abs() < TOLERANCE);

        // Tr(ρσ) worked by hand for ρ = |V⟩⟨V|: ρ = [[1/4, -i√3/4], [i√3/4, 3/4]]
        let v = tensor_state(&[v_state()]).unwrap();
        let a = polarization_vector(&v.projector()).unwrap();
        assert!(a[0].abs() < TOLERANCE);
        assert!((a[1] - 3f64.sqrt() / 2.0).abs() < TOLERANCE);
        assert!((a[2] + 0.5).abs() < TOLERANCE);

        let two = maximally_mixed(2).unwrap();
        assert_eq!(polarization_vector(&two), Err(SpinError::NotSingleSpin(2)));
    }

    #[test]
    fn balanced_mixture_spectrum_in_zero_sector() {
        for n in [2usize, 4] {
            let count = balanced_patterns(n).unwrap().len() as f64;
            for axis in Axis::ALL {
                let rho = density_from_ensemble(&balanced_mixture(axis, n).unwrap()).unwrap();
                for ev in rho.eigenvalues() {
                    assert!(ev.abs() < 1e-10 || (ev - 1.0 / count).abs() < 1e-10, "{axis} n={n}: {ev}");
                }
            }
        }
    }

    #[test]
    fn sign_pattern_serde() {
        let p: SignPattern = "+-+-".parse().unwrap();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, "\"+-+-\"");
        assert_eq!(serde_json::from_str::<SignPattern>(&json).unwrap(), p);
    }
}
