//! Single-spin primitives and tensor-product assembly.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SpinError};
use crate::states::PureState;
use crate::{C64, DEFAULT_DENSE_CAP, TOLERANCE};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

/// Spatial axis of a spin component. Ordered `X < Y < Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// The axis obtained by exchanging the `x` and `z` labels.
    pub fn swap_xz(self) -> Axis {
        match self {
            Axis::X => Axis::Z,
            Axis::Y => Axis::Y,
            Axis::Z => Axis::X,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(format!("unknown axis `{other}` (expected x, y or z)")),
        }
    }
}

/// Sign of a single-spin eigenvalue: `+1/2` or `-1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// A normalized single-spin ket `α|+⟩ + β|−⟩` in the z-basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleSpinKet {
    up: C64,
    down: C64,
}

impl SingleSpinKet {
    /// Builds a ket from its z-basis amplitudes, rejecting non-unit norm.
    pub fn new(up: C64, down: C64) -> Result<Self> {
        let norm_sqr = up.norm_sqr() + down.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > TOLERANCE {
            return Err(SpinError::NotNormalized { norm_sqr });
        }
        Ok(SingleSpinKet { up, down })
    }

    pub fn up(&self) -> C64 {
        self.up
    }

    pub fn down(&self) -> C64 {
        self.down
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        [self.up, self.down]
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &SingleSpinKet) -> C64 {
        self.up.conj() * other.up + self.down.conj() * other.down
    }

    /// `⟨s_axis⟩` for this ket, in units of ħ.
    pub fn spin_expectation(&self, axis: Axis) -> f64 {
        let cross = self.up.conj() * self.down;
        match axis {
            Axis::X => cross.re,
            Axis::Y => cross.im,
            Axis::Z => 0.5 * (self.up.norm_sqr() - self.down.norm_sqr()),
        }
    }

    /// The ket with `x` and `z` labels exchanged (Hadamard image).
    pub fn swap_xz(&self) -> SingleSpinKet {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        SingleSpinKet { up: (self.up + self.down) * h, down: (self.up - self.down) * h }
    }
}

/// Square complex matrix acting on `n ≥ 1` spins (dimension `2^n`).
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_sites: usize,
    matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(SpinError::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        let n_sites = sites_for_dim(matrix.nrows())?;
        Ok(DenseOperator { n_sites, matrix })
    }

    /// Row-major construction; `rows.len()` must be a power of two.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(row) = rows.iter().find(|r| r.len() != dim) {
            return Err(SpinError::DimensionMismatch { expected: dim, found: row.len() });
        }
        Self::from_matrix(DMatrix::from_fn(dim, dim, |r, c| rows[r][c]))
    }

    pub fn identity(n_sites: usize) -> Result<Self> {
        if n_sites == 0 {
            return Err(SpinError::NoSites);
        }
        let dim = 1usize << n_sites;
        Ok(DenseOperator { n_sites, matrix: DMatrix::identity(dim, dim) })
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

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Largest entry-wise deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn mul(&self, other: &DenseOperator) -> Result<DenseOperator> {
        if self.dim() != other.dim() {
            return Err(SpinError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(DenseOperator { n_sites: self.n_sites, matrix: &self.matrix * &other.matrix })
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &DenseOperator) -> Result<DenseOperator> {
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        Ok(DenseOperator { n_sites: self.n_sites, matrix: ab.matrix - ba.matrix })
    }

    pub fn scale(&self, factor: C64) -> DenseOperator {
        DenseOperator { n_sites: self.n_sites, matrix: &self.matrix * factor }
    }

    /// Largest entry-wise distance to `other`.
    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

pub(crate) fn sites_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(SpinError::BadDimension(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Standard Pauli matrix in the z-basis.
pub fn pauli(axis: Axis) -> DenseOperator {
    let rows = match axis {
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    DenseOperator { n_sites: 1, matrix: DMatrix::from_fn(2, 2, |r, c| rows[r][c]) }
}

/// Spin component `s_α = σ_α / 2`.
pub fn spin_component(axis: Axis) -> DenseOperator {
    pauli(axis).scale(C64::new(0.5, 0.0))
}

/// Eigenket of `s_axis` with eigenvalue `sign/2`.
///
/// Phases: the `|+⟩` amplitude is real and positive, so
/// `|±x⟩ = (|+⟩ ± |−⟩)/√2` and `|±y⟩ = (|+⟩ ± i|−⟩)/√2`.
pub fn axis_eigenket(axis: Axis, sign: Sign) -> SingleSpinKet {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let s = f64::from(sign.value());
    let (up, down) = match (axis, sign) {
        (Axis::Z, Sign::Plus) => (ONE, ZERO),
        (Axis::Z, Sign::Minus) => (ZERO, ONE),
        (Axis::X, _) => (h, h * s),
        (Axis::Y, _) => (h, h * I * s),
    };
    SingleSpinKet { up, down }
}

/// Tensor product of single-spin kets; site 1 is the most significant bit.
pub fn tensor_state(kets: &[SingleSpinKet]) -> Result<PureState> {
    tensor_state_with_cap(kets, DEFAULT_DENSE_CAP)
}

pub fn tensor_state_with_cap(kets: &[SingleSpinKet], cap: usize) -> Result<PureState> {
    if kets.is_empty() {
        return Err(SpinError::NoSites);
    }
    if kets.len() > cap {
        return Err(SpinError::DenseCapExceeded { n_sites: kets.len(), cap });
    }
    let mut amps = vec![ONE];
    for ket in kets {
        amps = amps.iter().flat_map(|&a| [a * ket.up, a * ket.down]).collect();
    }
    Ok(PureState::from_parts_unchecked(kets.len(), amps))
}

/// `op` acting on `site` (1-based) of an `n_sites` assembly, identity elsewhere.
pub fn embed_site_operator(op: &DenseOperator, site: usize, n_sites: usize) -> Result<DenseOperator> {
    embed_site_operator_with_cap(op, site, n_sites, DEFAULT_DENSE_CAP)
}

pub fn embed_site_operator_with_cap(
    op: &DenseOperator,
    site: usize,
    n_sites: usize,
    cap: usize,
) -> Result<DenseOperator> {
    if op.dim() != 2 {
        return Err(SpinError::DimensionMismatch { expected: 2, found: op.dim() });
    }
    if n_sites == 0 {
        return Err(SpinError::NoSites);
    }
    if site == 0 || site > n_sites {
        return Err(SpinError::SiteOutOfRange { site, n_sites });
    }
    if n_sites > cap {
        return Err(SpinError::DenseCapExceeded { n_sites, cap });
    }
    let left = DMatrix::<C64>::identity(1 << (site - 1), 1 << (site - 1));
    let right = DMatrix::<C64>::identity(1 << (n_sites - site), 1 << (n_sites - site));
    let matrix = left.kronecker(&op.matrix).kronecker(&right);
    Ok(DenseOperator { n_sites, matrix })
}
