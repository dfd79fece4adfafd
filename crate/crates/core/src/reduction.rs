//! 1-qubit reductions in coefficient space.
//!
//! For qubit `i` the weight-≤1 strings supported on `i` span the subspace
//! `Q_i` onto which the partial trace is injective; every other string lies
//! in its kernel `K_i`. The Bloch vector of qubit `i` is read directly from
//! the three weight-1 coefficients: `r^(a) = 2^n r_{0…a…0}`.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{same_n, vector_dot_sigma, weight_of, Matrix2c, Pauli, PauliIndex, PauliState};
use crate::states::DensityState;
use crate::{CLASSIFY_TOL, HERMITICITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    /// 1-based qubit number.
    pub qubit: usize,
    pub r: [f64; 3],
}

impl BlochVector {
    pub fn norm(&self) -> f64 {
        norm3(self.r)
    }

    pub fn is_maximally_mixed(&self, tol: f64) -> bool {
        self.norm() < tol
    }

    /// `ρ_i = ½(1 + r⃗·σ⃗)`.
    pub fn reduced_matrix(&self) -> Matrix2c {
        let half = Complex64::new(0.5, 0.0);
        (Matrix2c::identity() + vector_dot_sigma(self.r)) * half
    }
}

pub(crate) fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn check_qubit(n: usize, qubit: usize) -> Result<()> {
    if qubit == 0 || qubit > n {
        return Err(Error::QubitIndex { qubit, n });
    }
    Ok(())
}

/// Codes of `b_α` (α = 0..3) for qubit `i`: identity everywhere but `i`.
pub(crate) fn q_codes(qubit: usize) -> [usize; 4] {
    let shift = 2 * (qubit - 1);
    [0, 1 << shift, 2 << shift, 3 << shift]
}

/// Bloch vector of any Hermitian coefficient vector, without validation.
pub fn bloch_of(state: &PauliState, qubit: usize) -> Result<BlochVector> {
    let n = state.n();
    check_qubit(n, qubit)?;
    let scale = (1u64 << n) as f64;
    let codes = q_codes(qubit);
    Ok(BlochVector {
        qubit,
        r: [
            scale * state.coeff(codes[1]),
            scale * state.coeff(codes[2]),
            scale * state.coeff(codes[3]),
        ],
    })
}

/// Reduced state of `qubit` (1-based), as its Bloch vector.
pub fn partial_trace_single(rho: &DensityState, qubit: usize) -> Result<BlochVector> {
    bloch_of(rho.state(), qubit)
}

pub fn bloch_vectors(rho: &DensityState) -> Vec<BlochVector> {
    (1..=rho.n())
        .map(|q| bloch_of(rho.state(), q).expect("qubit in range"))
        .collect()
}

/// `π_{Q_i}(ρ)`: keeps the four `b_α` coefficients of qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct QProjection {
    pub qubit: usize,
    pub state: PauliState,
}

pub fn project_q_state(state: &PauliState, qubit: usize) -> Result<QProjection> {
    check_qubit(state.n(), qubit)?;
    let mut out = PauliState::zeros(state.n())?;
    for code in q_codes(qubit) {
        out.coeffs_mut()[code] = state.coeff(code);
    }
    Ok(QProjection { qubit, state: out })
}

pub fn project_q(rho: &DensityState, qubit: usize) -> Result<QProjection> {
    project_q_state(rho.state(), qubit)
}

/// `ρ_{K_i} = ρ − π_{Q_i}(ρ)`.
pub fn kernel_component_state(state: &PauliState, qubit: usize) -> Result<PauliState> {
    let q = project_q_state(state, qubit)?;
    state.checked_sub(&q.state)
}

pub fn kernel_component(rho: &DensityState, qubit: usize) -> Result<PauliState> {
    kernel_component_state(rho.state(), qubit)
}

/// `ρ̄_{Q_i}`: the three weight-1 coefficients of qubit `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslatedProjection {
    pub qubit: usize,
    pub state: PauliState,
    /// `(λ_−, λ_+)`, the two distinct eigenvalues of the dense form.
    pub eigen_pair: (f64, f64),
}

impl TranslatedProjection {
    /// Norm of the single-qubit factor, `(2^{-(n-1)} Tr ρ̄²)^{1/2}`.
    ///
    /// The dense form is `1 ⊗ … ⊗ c⃗·σ⃗ ⊗ … ⊗ 1`; dividing out the `2^{n-1}`
    /// multiplicity of each eigenvalue makes this equal `(λ_−² + λ_+²)^{1/2}`.
    pub fn norm(&self) -> f64 {
        let n = self.state.n();
        let tr_sq = self.state.squared_norm_where(|_| true) * (1u64 << n) as f64;
        (tr_sq / (1u64 << (n - 1)) as f64).sqrt()
    }

    /// Weight-1 coefficients `(r_X, r_Y, r_Z)` on this qubit.
    pub fn components(&self) -> [f64; 3] {
        let c = q_codes(self.qubit);
        [self.state.coeff(c[1]), self.state.coeff(c[2]), self.state.coeff(c[3])]
    }
}

fn translated(state: &PauliState, qubit: usize) -> TranslatedProjection {
    let mut out = PauliState::zeros(state.n()).expect("same n");
    let codes = q_codes(qubit);
    for &code in &codes[1..] {
        out.coeffs_mut()[code] = state.coeff(code);
    }
    let c = [state.coeff(codes[1]), state.coeff(codes[2]), state.coeff(codes[3])];
    let eig = SymmetricEigen::new(vector_dot_sigma(c));
    let (a, b) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    TranslatedProjection {
        qubit,
        state: out,
        eigen_pair: (a.min(b), a.max(b)),
    }
}

/// `ρ = 2^{-n} 1 + Σ_i ρ̄_{Q_i} + Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub identity_coeff: f64,
    pub translated: Vec<TranslatedProjection>,
    /// Weight ≥ 2 correlations.
    pub delta: PauliState,
}

impl Decomposition {
    pub fn recompose(&self) -> PauliState {
        let mut out = self.delta.clone();
        out.coeffs_mut()[0] = self.identity_coeff;
        for t in &self.translated {
            for &code in &q_codes(t.qubit)[1..] {
                out.coeffs_mut()[code] = t.state.coeff(code);
            }
        }
        out
    }

    /// `Tr Δ² = 2^n Σ_{w(α)≥2} r_α²`.
    pub fn delta_purity(&self) -> f64 {
        self.delta.squared_norm_where(|_| true) * (1u64 << self.delta.n()) as f64
    }
}

pub fn decompose_state(state: &PauliState) -> Decomposition {
    let n = state.n();
    let mut delta = state.clone();
    for (code, v) in delta.coeffs_mut().iter_mut().enumerate() {
        if weight_of(code) < 2 {
            *v = 0.0;
        }
    }
    Decomposition {
        identity_coeff: state.coeff(0),
        translated: (1..=n).map(|q| translated(state, q)).collect(),
        delta,
    }
}

pub fn decompose(rho: &DensityState) -> Decomposition {
    decompose_state(rho.state())
}

/// `Tr Δ²` without building the full decomposition.
pub fn delta_purity(rho: &DensityState) -> f64 {
    rho.state().squared_norm_where(|w| w >= 2) * (1u64 << rho.n()) as f64
}

/// `Tr{A ρ_i}` for a 2×2 Hermitian observable on `qubit`.
pub fn local_expectation(rho: &DensityState, qubit: usize, obs: &Matrix2c) -> Result<f64> {
    let residual = (obs - obs.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > HERMITICITY_TOL {
        return Err(Error::NotHermitian { residual });
    }
    let b = partial_trace_single(rho, qubit)?;
    // Tr{A ½(1 + r⃗·σ⃗)} = ½ Tr A + ½ Σ_a r_a Tr{A σ_a}
    let mut value = 0.5 * obs.trace().re;
    for (a, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        value += 0.5 * b.r[a] * (obs * p.matrix()).trace().re;
    }
    Ok(value)
}

/// Per-qubit largest componentwise Bloch difference.
pub fn bloch_deviation(a: &DensityState, b: &DensityState) -> Result<Vec<f64>> {
    same_n(a.n(), b.n())?;
    Ok(bloch_vectors(a)
        .iter()
        .zip(bloch_vectors(b))
        .map(|(x, y)| (0..3).map(|k| (x.r[k] - y.r[k]).abs()).fold(0.0, f64::max))
        .collect())
}

/// True iff every pair of 1-qubit reductions agrees within `tol` componentwise.
pub fn lm_equivalent(a: &DensityState, b: &DensityState, tol: f64) -> Result<bool> {
    Ok(bloch_deviation(a, b)?.iter().all(|&d| d <= tol))
}

/// [`lm_equivalent`] at the default tolerance.
pub fn lm_equivalent_default(a: &DensityState, b: &DensityState) -> Result<bool> {
    lm_equivalent(a, b, CLASSIFY_TOL)
}

/// Index of `b_α` on `qubit` as a [`PauliIndex`].
pub fn q_basis_index(n: usize, qubit: usize, p: Pauli) -> Result<PauliIndex> {
    PauliIndex::single(n, qubit, p)
}
