//! Pure and mixed states of `N` distinguishable spin-1/2 systems.
//!
//! The crate computes means and variances of collective spin observables
//! `S_α = Σᵢ s_αᵢ` along three independent routes:
//!
//! * **dense / ensemble**: `Σᵢ pᵢ ⟨Φᵢ|O|Φᵢ⟩` over the members of an ensemble
//!   (a single pure state is the one-member case),
//! * **trace**: `Tr(ρO)` with `ρ = Σᵢ pᵢ |Φᵢ⟩⟨Φᵢ|`,
//! * **product-fast**: closed-form moments for product states, `O(N)` and
//!   free of the `2^N` blowup,
//!
//! plus a seeded Born-rule sampler that mimics repeated Stern-Gerlach runs.
//! The [`scenario`] module ties everything together into declarative,
//! reproducible reports; the `spinmix` binary is a thin wrapper around it.
//!
//! Units are reduced (`ħ = 1`): single-spin components have eigenvalues `±1/2`.
//! Site indices are 1-based and site 1 is the most significant bit of a
//! computational basis index.

pub mod algebra;
pub mod error;
pub mod observables;
pub mod sampler;
pub mod scenario;
pub mod states;

pub use algebra::{Axis, DenseOperator, Sign, SingleSpinKet};
pub use error::{Result, SpinError};
pub use observables::{CollectiveObservable, LocalSpinTerm, Method, MomentReport, Observable};
pub use states::{DensityOperator, Ensemble, Member, MemberState, ProductState, PureState, SignPattern};

/// Complex amplitude type used throughout.
pub type C64 = num_complex::Complex64;

/// Absolute tolerance for equality checks on states and operators.
pub const TOLERANCE: f64 = 1e-12;

/// Largest site count for which dense vectors and matrices are built.
pub const DEFAULT_DENSE_CAP: usize = 12;
