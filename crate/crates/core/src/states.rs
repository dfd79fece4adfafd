//! Validated density matrices and fixture states.

use std::fmt;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::{coeffs_to_dense, dense_to_coeffs, DenseOperator, PauliState};
use crate::{EPS, POSITIVITY_CHECK_MAX};

/// Slack allowed on the positivity and purity bounds.
pub const VALIDITY_TOL: f64 = 1e-9;

/// A failed density-matrix constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// (a) a coefficient is not a finite real.
    NonReal { code: usize },
    /// (b) identity coefficient differs from `2^{-n}` (equivalently `Tr ρ ≠ 1`).
    IdentityCoefficient { found: f64, expected: f64 },
    /// (c) coefficients disagree with `2^{-n} Tr{σ_α ρ}` of their own dense form.
    Inconsistent { deviation: f64 },
    /// (d) `Tr ρ² > 1`.
    Purity { value: f64 },
    /// Negative eigenvalue.
    NotPositive { min_eigenvalue: f64 },
}

impl Violation {
    pub fn code(&self) -> &'static str {
        match self {
            Violation::NonReal { .. } => "a",
            Violation::IdentityCoefficient { .. } => "b",
            Violation::Inconsistent { .. } => "c",
            Violation::Purity { .. } => "d",
            Violation::NotPositive { .. } => "positivity",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonReal { code } => write!(f, "(a) coefficient {code} is not a finite real"),
            Violation::IdentityCoefficient { found, expected } => {
                write!(f, "(b) identity coefficient {found} != {expected}")
            }
            Violation::Inconsistent { deviation } => {
                write!(f, "(c) coefficients inconsistent with dense form ({deviation:e})")
            }
            Violation::Purity { value } => write!(f, "(d) purity {value} exceeds 1"),
            Violation::NotPositive { min_eigenvalue } => {
                write!(f, "not positive semidefinite (min eigenvalue {min_eigenvalue:e})")
            }
        }
    }
}

/// Outcome of the dense positivity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Positivity {
    Checked { min_eigenvalue: f64, max_eigenvalue: f64 },
    /// Above [`POSITIVITY_CHECK_MAX`] qubits no eigensolve is attempted.
    Unchecked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub n: usize,
    pub trace: f64,
    pub purity: f64,
    pub positivity: Positivity,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// A Pauli-coefficient state that passed [`validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    state: PauliState,
    positivity: Positivity,
}

impl DensityState {
    /// Wraps coefficients known to be a density matrix, e.g. the unitary
    /// image of a validated state.
    pub(crate) fn trusted(state: PauliState, positivity: Positivity) -> Self {
        DensityState { state, positivity }
    }

    pub fn n(&self) -> usize {
        self.state.n()
    }

    pub fn state(&self) -> &PauliState {
        &self.state
    }

    pub fn coeffs(&self) -> &[f64] {
        self.state.coeffs()
    }

    pub fn positivity(&self) -> Positivity {
        self.positivity
    }

    pub fn into_state(self) -> PauliState {
        self.state
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        coeffs_to_dense(&self.state)
    }

    pub fn tensor(&self, other: &DensityState) -> Result<DensityState> {
        let positivity = match (self.positivity, other.positivity) {
            (
                Positivity::Checked { min_eigenvalue: a0, max_eigenvalue: a1 },
                Positivity::Checked { min_eigenvalue: b0, max_eigenvalue: b1 },
            ) => {
                let products = [a0 * b0, a0 * b1, a1 * b0, a1 * b1];
                Positivity::Checked {
                    min_eigenvalue: products.iter().copied().fold(f64::INFINITY, f64::min),
                    max_eigenvalue: products.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                }
            }
            _ => Positivity::Unchecked,
        };
        Ok(DensityState {
            state: self.state.tensor(&other.state)?,
            positivity,
        })
    }
}

fn hermitian_spectrum(op: &DenseOperator) -> (f64, f64) {
    let eig = SymmetricEigen::new(op.matrix().clone());
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

fn purity_of(state: &PauliState) -> f64 {
    state.squared_norm_where(|_| true) * (1u64 << state.n()) as f64
}

/// Checks constraints (a)-(d) and positivity without consuming the state.
pub fn validation_report(state: &PauliState) -> ValidationReport {
    let n = state.n();
    let expected = 1.0 / (1u64 << n) as f64;
    let mut violations = Vec::new();

    if let Some(code) = state.coeffs().iter().position(|c| !c.is_finite()) {
        violations.push(Violation::NonReal { code });
    }
    let found = state.coeff(0);
    if (found - expected).abs() > EPS {
        violations.push(Violation::IdentityCoefficient { found, expected });
    }
    let purity = purity_of(state);
    if purity > 1.0 + VALIDITY_TOL {
        violations.push(Violation::Purity { value: purity });
    }

    let finite = !violations.iter().any(|v| matches!(v, Violation::NonReal { .. }));
    let positivity = if n <= POSITIVITY_CHECK_MAX && finite {
        // coeffs_to_dense cannot fail below the capacity cap
        let dense = coeffs_to_dense(state).expect("dense form within capacity");
        match dense_to_coeffs(&dense) {
            Ok(back) => {
                let deviation = back.max_abs_diff(state);
                if deviation > EPS {
                    violations.push(Violation::Inconsistent { deviation });
                }
            }
            Err(_) => violations.push(Violation::Inconsistent { deviation: f64::INFINITY }),
        }
        let (min_eigenvalue, max_eigenvalue) = hermitian_spectrum(&dense);
        if min_eigenvalue < -VALIDITY_TOL {
            violations.push(Violation::NotPositive { min_eigenvalue });
        }
        Positivity::Checked { min_eigenvalue, max_eigenvalue }
    } else {
        Positivity::Unchecked
    };

    ValidationReport {
        n,
        trace: found * (1u64 << n) as f64,
        purity,
        positivity,
        violations,
    }
}

/// Promotes coefficients to a [`DensityState`] if every constraint holds.
/// The identity coefficient is pinned to exactly `2^{-n}`.
pub fn validate(mut state: PauliState) -> Result<DensityState> {
    let report = validation_report(&state);
    if !report.is_valid() {
        return Err(Error::InvalidState(Box::new(report)));
    }
    state.coeffs_mut()[0] = 1.0 / (1u64 << state.n()) as f64;
    Ok(DensityState {
        state,
        positivity: report.positivity,
    })
}

/// Validates a dense matrix.
pub fn validate_dense(op: &DenseOperator) -> Result<DensityState> {
    validate(dense_to_coeffs(op)?)
}

/// `Tr ρ² = 2^n Σ_α r_α²`.
pub fn purity(rho: &DensityState) -> f64 {
    purity_of(rho.state())
}

/// `2^{-n} 1`.
pub fn maximally_mixed(n: usize) -> Result<DensityState> {
    let mut s = PauliState::zeros(n)?;
    s.coeffs_mut()[0] = 1.0 / (1u64 << n) as f64;
    let p = 1.0 / (1u64 << n) as f64;
    Ok(DensityState::trusted(
        s,
        Positivity::Checked { min_eigenvalue: p, max_eigenvalue: p },
    ))
}

/// Projector onto `(|0…0⟩ + |1…1⟩)/√2`.
pub fn make_ghz(n: usize) -> Result<DensityState> {
    if n < 2 {
        return Err(Error::Domain(format!("GHZ state needs at least 2 qubits, got {n}")));
    }
    if n > crate::MAX_QUBITS {
        return Err(Error::QubitCount { n, max: crate::MAX_QUBITS });
    }
    let dim = 1usize << n;
    let mut amp = vec![Complex64::new(0.0, 0.0); dim];
    amp[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amp[dim - 1] = amp[0];
    validate_dense(&DenseOperator::projector(&amp)?)
}

/// `⊗_k ½(1 + r⃗_k·σ⃗)`, qubit 1 first.
pub fn make_product(bloch: &[[f64; 3]]) -> Result<DensityState> {
    if bloch.is_empty() || bloch.len() > crate::MAX_QUBITS {
        return Err(Error::QubitCount { n: bloch.len(), max: crate::MAX_QUBITS });
    }
    let mut acc: Option<DensityState> = None;
    for &r in bloch {
        let q = single_qubit(r)?;
        acc = Some(match acc {
            None => q,
            Some(a) => a.tensor(&q)?,
        });
    }
    Ok(acc.unwrap())
}

/// `½(1 + r⃗·σ⃗)`.
pub fn single_qubit(r: [f64; 3]) -> Result<DensityState> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if !norm.is_finite() || norm > 1.0 + VALIDITY_TOL {
        return Err(Error::InvalidBloch { r, norm });
    }
    let s = PauliState::new(1, vec![0.5, 0.5 * r[0], 0.5 * r[1], 0.5 * r[2]])?;
    Ok(DensityState::trusted(
        s,
        Positivity::Checked {
            min_eigenvalue: 0.5 * (1.0 - norm),
            max_eigenvalue: 0.5 * (1.0 + norm),
        },
    ))
}

/// `(1 − w) 2^{-n} 1 + w GHZ_n`; every 1-qubit reduction is maximally mixed.
/// Weights outside `[−1/(2^n − 1), 1]` fail positivity.
pub fn make_werner_like(n: usize, weight: f64) -> Result<DensityState> {
    let ghz = make_ghz(n)?;
    let mut coeffs: Vec<f64> = ghz.coeffs().iter().map(|c| weight * c).collect();
    coeffs[0] = 1.0 / (1u64 << n) as f64;
    validate(PauliState::new(n, coeffs)?)
}

/// Random full-rank state `GG†/Tr(GG†)` with complex Gaussian `G`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<DensityState> {
    random_density_with_rank(n, 1 << n, rng)
}

/// Random state of rank at most `rank` (a `2^n × rank` Gaussian factor).
pub fn random_density_with_rank<R: Rng + ?Sized>(
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityState> {
    if n == 0 || n > POSITIVITY_CHECK_MAX {
        return Err(Error::QubitCount { n, max: POSITIVITY_CHECK_MAX });
    }
    let dim = 1usize << n;
    let rank = rank.clamp(1, dim);
    let g = nalgebra::DMatrix::from_fn(dim, rank, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let mut m = &g * g.adjoint();
    let tr = m.trace().re;
    m /= Complex64::new(tr, 0.0);
    // symmetrize rounding so the imaginary residue of each coefficient stays tiny
    let m = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    validate(dense_to_coeffs(&DenseOperator::new(m)?)?)
}
