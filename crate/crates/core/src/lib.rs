//! Multi-qubit density matrices in the Pauli basis, their 1-qubit
//! reductions, and the subgroup of local unitaries that leaves every
//! reduction fixed.
//!
//! States are stored as real coefficient vectors `r_α` over Pauli strings
//! (`ρ = Σ_α r_α σ_α`, `r_0 = 2^{-n}`). Everything in [`reduction`] and
//! [`centralizer`] works directly on those coefficients; [`oracle`] holds
//! naive dense-matrix reference implementations used to check them.

pub mod centralizer;
pub mod error;
pub mod oracle;
pub mod pauli;
pub mod reduction;
pub mod states;

pub use centralizer::{
    adjoint_action, classify_centralizer, commutes_with_reduction, compare, cyclic_unitary,
    family_discriminator, family_member, sample_centralizer, verify_subspace_invariance,
    CentralizerDescriptor, FactorClass, FactorParams, LocalFactor, LocalUnitarySpec, Verdict,
};
pub use error::{Error, Result};
pub use pauli::{
    coeffs_to_dense, dense_to_coeffs, hs_inner, sigma_dense, DenseOperator, Matrix2c, Pauli,
    PauliIndex, PauliState,
};
pub use reduction::{
    decompose, kernel_component, lm_equivalent, local_expectation, partial_trace_single,
    project_q, BlochVector, Decomposition, QProjection, TranslatedProjection,
};
pub use states::{
    make_ghz, make_product, make_werner_like, maximally_mixed, purity, validate, DensityState,
};

/// Absolute tolerance for equality of O(1) reals.
pub const EPS: f64 = 1e-10;

/// Bloch-norm cutoff below which a reduction counts as maximally mixed.
pub const CLASSIFY_TOL: f64 = 1e-9;

/// Largest imaginary residue tolerated when reading Pauli coefficients off a
/// dense matrix.
pub const HERMITICITY_TOL: f64 = 1e-9;

/// Largest qubit count for index arithmetic and dense materialization.
pub const MAX_QUBITS: usize = 12;

/// Largest qubit count for which positivity is checked by eigensolve.
pub const POSITIVITY_CHECK_MAX: usize = 8;
