//! Local unitaries, their adjoint action on Pauli coefficients, and the
//! centralizer of a state's set of 1-qubit reductions.
//!
//! A local factor is `U = exp(iω n̂·σ⃗) = cos ω 1 + i sin ω n̂·σ⃗`. Conjugation
//! `σ_k ↦ U σ_k U†` is the SO(3) rotation by `−2ω` about `n̂`, so
//! `U σ_x U† = cos 2ω σ_x − sin 2ω σ_y` for `n̂ = ẑ`.
//!
//! A factor commutes with `ρ_j = ½(1 + r⃗_j·σ⃗)` iff `r⃗_j = 0` or its
//! generator is parallel to `r⃗_j`. Per qubit the centralizer is therefore
//! either all of SU(2) (3 parameters) or the one-parameter group of
//! rotations about the Bloch vector, giving dimension `3n − 2m` with `m` the
//! number of qubits whose reduction is not maximally mixed.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::{same_n, vector_dot_sigma, Matrix2c, PauliState};
use crate::reduction::{bloch_of, bloch_vectors, decompose_state, norm3, project_q_state, q_codes, BlochVector};
use crate::states::{purity, DensityState};
use crate::{CLASSIFY_TOL, EPS};

/// Allowed deviation of `U U†` from the identity.
pub const UNITARITY_TOL: f64 = 1e-9;

const CANONICAL_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

/// One tensor factor `exp(iω n̂·σ⃗)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFactor {
    axis: [f64; 3],
    angle: f64,
}

impl LocalFactor {
    pub const IDENTITY: LocalFactor = LocalFactor {
        axis: CANONICAL_AXIS,
        angle: 0.0,
    };

    /// Normalizes `axis`; a zero axis is only accepted with a zero angle.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        if !angle.is_finite() || axis.iter().any(|a| !a.is_finite()) {
            return Err(Error::Domain(format!("non-finite rotation {axis:?}, {angle}")));
        }
        if angle == 0.0 {
            return Ok(Self::IDENTITY);
        }
        let norm = norm3(axis);
        if norm < 1e-12 {
            return Err(Error::DegenerateAxis { norm });
        }
        Ok(LocalFactor {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
            angle,
        })
    }

    /// `exp(i s⃗·σ⃗)`, i.e. angle `‖s⃗‖` about `s⃗/‖s⃗‖`.
    pub fn from_generator(s: [f64; 3]) -> Result<Self> {
        let angle = norm3(s);
        if angle == 0.0 {
            return Ok(Self::IDENTITY);
        }
        Self::new(s, angle)
    }

    /// Axis `(cos φ sin θ, sin φ sin θ, cos θ)`, angle `ω`.
    pub fn from_angles(phi: f64, theta: f64, omega: f64) -> Result<Self> {
        Self::new(
            [phi.cos() * theta.sin(), phi.sin() * theta.sin(), theta.cos()],
            omega,
        )
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    /// `ω n̂`.
    pub fn generator(&self) -> [f64; 3] {
        self.axis.map(|a| a * self.angle)
    }

    pub fn inverse(&self) -> Self {
        LocalFactor {
            axis: self.axis,
            angle: -self.angle,
        }
    }

    /// `cos ω 1 + i sin ω n̂·σ⃗`.
    pub fn matrix(&self) -> Matrix2c {
        let (s, c) = self.angle.sin_cos();
        Matrix2c::identity() * Complex64::new(c, 0.0)
            + vector_dot_sigma(self.axis) * Complex64::new(0.0, s)
    }

    /// The product `self · other` (apply `other` first), back in axis-angle form.
    pub fn compose(&self, other: &LocalFactor) -> LocalFactor {
        let (s1, c1) = self.angle.sin_cos();
        let (s2, c2) = other.angle.sin_cos();
        let (n1, n2) = (self.axis, other.axis);
        let dot = n1[0] * n2[0] + n1[1] * n2[1] + n1[2] * n2[2];
        let cross = cross3(n1, n2);
        let w = c1 * c2 - s1 * s2 * dot;
        let v: [f64; 3] = std::array::from_fn(|k| c1 * s2 * n2[k] + s1 * c2 * n1[k] - s1 * s2 * cross[k]);
        let vn = norm3(v);
        if vn == 0.0 {
            // ±1: the sign is a global phase
            return LocalFactor {
                axis: CANONICAL_AXIS,
                angle: if w < 0.0 { std::f64::consts::PI } else { 0.0 },
            };
        }
        LocalFactor {
            axis: v.map(|x| x / vn),
            angle: vn.atan2(w),
        }
    }

    /// `R` with `U σ_k U† = Σ_j R[j][k] σ_j` (k, j over x, y, z).
    pub fn rotation(&self) -> [[f64; 3]; 3] {
        let theta = -2.0 * self.angle;
        let (s, c) = theta.sin_cos();
        let [x, y, z] = self.axis;
        let t = 1.0 - c;
        [
            [c + x * x * t, x * y * t - z * s, x * z * t + y * s],
            [y * x * t + z * s, c + y * y * t, y * z * t - x * s],
            [z * x * t - y * s, z * y * t + x * s, c + z * z * t],
        ]
    }
}

pub(crate) fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `U = ⊗_j U_j`, qubit 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalUnitarySpec {
    factors: Vec<LocalFactor>,
}

impl LocalUnitarySpec {
    pub fn new(factors: Vec<LocalFactor>) -> Result<Self> {
        if factors.is_empty() || factors.len() > crate::MAX_QUBITS {
            return Err(Error::QubitCount {
                n: factors.len(),
                max: crate::MAX_QUBITS,
            });
        }
        Ok(LocalUnitarySpec { factors })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(vec![LocalFactor::IDENTITY; n])
    }

    pub fn from_generators(generators: &[[f64; 3]]) -> Result<Self> {
        Self::new(
            generators
                .iter()
                .map(|&s| LocalFactor::from_generator(s))
                .collect::<Result<_>>()?,
        )
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[LocalFactor] {
        &self.factors
    }

    /// Factor on `qubit` (1-based).
    pub fn factor(&self, qubit: usize) -> &LocalFactor {
        &self.factors[qubit - 1]
    }

    pub fn matrices(&self) -> Vec<Matrix2c> {
        self.factors.iter().map(LocalFactor::matrix).collect()
    }

    pub fn inverse(&self) -> Self {
        LocalUnitarySpec {
            factors: self.factors.iter().map(LocalFactor::inverse).collect(),
        }
    }

    /// `self · other`, qubit by qubit.
    pub fn compose(&self, other: &LocalUnitarySpec) -> Result<Self> {
        same_n(self.n(), other.n())?;
        Ok(LocalUnitarySpec {
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| a.compose(b))
                .collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(|f| f.angle == 0.0)
    }
}

/// `U ρ U†` in coefficient space: each qubit's X/Y/Z digit is rotated by its
/// factor's SO(3) matrix, the identity digit is left alone.
pub fn conjugate_state(state: &PauliState, spec: &LocalUnitarySpec) -> Result<PauliState> {
    same_n(state.n(), spec.n())?;
    let mut out = state.clone();
    let len = out.len();
    for (j, factor) in spec.factors().iter().enumerate() {
        if factor.angle == 0.0 {
            continue;
        }
        let r = factor.rotation();
        let shift = 2 * j;
        let coeffs = out.coeffs_mut();
        for base in 0..len {
            if (base >> shift) & 3 != 0 {
                continue;
            }
            let codes = [base | (1 << shift), base | (2 << shift), base | (3 << shift)];
            let v = codes.map(|c| coeffs[c]);
            for (a, &code) in codes.iter().enumerate() {
                coeffs[code] = r[a][0] * v[0] + r[a][1] * v[1] + r[a][2] * v[2];
            }
        }
    }
    Ok(out)
}

/// `ad U[ρ] = U ρ U†`.
pub fn adjoint_action(rho: &DensityState, spec: &LocalUnitarySpec) -> Result<DensityState> {
    let state = conjugate_state(rho.state(), spec)?;
    Ok(DensityState::trusted(state, rho.positivity()))
}

/// `exp(iξ r⃗·σ⃗) = cos ω 1 + i sin ω r̂·σ⃗` with `ω = ξ‖r⃗‖`.
pub fn cyclic_factor(r: &BlochVector, xi: f64) -> Result<LocalFactor> {
    let norm = r.norm();
    if norm < 1e-12 {
        return Err(Error::DegenerateAxis { norm });
    }
    if xi == 0.0 {
        return Ok(LocalFactor::IDENTITY);
    }
    LocalFactor::new(r.r, xi * norm)
}

pub fn cyclic_unitary(r: &BlochVector, xi: f64) -> Result<Matrix2c> {
    Ok(cyclic_factor(r, xi)?.matrix())
}

fn unitarity_deviation(u: &Matrix2c) -> f64 {
    (u * u.adjoint() - Matrix2c::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

/// `[U, ½(1 + r⃗·σ⃗)]`.
pub fn reduction_commutator(u: &Matrix2c, r: &BlochVector) -> Result<Matrix2c> {
    let deviation = unitarity_deviation(u);
    if deviation > UNITARITY_TOL {
        return Err(Error::NotUnitary { deviation });
    }
    let rho = r.reduced_matrix();
    Ok(u * rho - rho * u)
}

/// Largest entry of `[U, ρ_j]`, compared against `tol`.
pub fn commutes_with_reduction(u: &Matrix2c, r: &BlochVector, tol: f64) -> Result<bool> {
    let c = reduction_commutator(u, r)?;
    Ok(max_entry(&c) < tol)
}

pub(crate) fn max_entry(m: &Matrix2c) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `ε_{klu}` for indices in 0..3.
pub fn levi_civita(k: usize, l: usize, u: usize) -> f64 {
    match (k, l, u) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Pauli components of `[s⃗·σ⃗, r⃗·σ⃗] = 2i Σ_{klu} s_k r_l ε_{klu} σ_u`.
/// Vanishes iff `s⃗ × r⃗ = 0`.
#[allow(clippy::needless_range_loop)]
pub fn generator_commutator(s: [f64; 3], r: [f64; 3]) -> [Complex64; 3] {
    std::array::from_fn(|u| {
        let mut acc = 0.0;
        for k in 0..3 {
            for l in 0..3 {
                acc += s[k] * r[l] * levi_civita(k, l, u);
            }
        }
        Complex64::new(0.0, 2.0 * acc)
    })
}

/// Centralizer type of one qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorClass {
    /// Maximally mixed reduction: every SU(2) element fixes it.
    Full,
    /// Only rotations about the Bloch vector fix it.
    Axis { bloch: [f64; 3] },
}

impl FactorClass {
    pub fn parameter_count(&self) -> usize {
        match self {
            FactorClass::Full => 3,
            FactorClass::Axis { .. } => 1,
        }
    }

    pub fn axis(&self) -> Option<[f64; 3]> {
        match self {
            FactorClass::Full => None,
            FactorClass::Axis { bloch } => {
                let n = norm3(*bloch);
                Some(bloch.map(|b| b / n))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerDescriptor {
    pub classes: Vec<FactorClass>,
    /// Bloch-norm cutoff used for the Full/Axis split.
    pub threshold: f64,
}

impl CentralizerDescriptor {
    pub fn n(&self) -> usize {
        self.classes.len()
    }

    /// Number of qubits with a non-maximally-mixed reduction.
    pub fn m(&self) -> usize {
        self.classes
            .iter()
            .filter(|c| matches!(c, FactorClass::Axis { .. }))
            .count()
    }

    /// `3n − 2m`.
    pub fn dim(&self) -> usize {
        3 * self.n() - 2 * self.m()
    }
}

/// Qubits with `‖r⃗‖ < tol` are `Full`, the rest `Axis`.
pub fn classify_centralizer(rho: &DensityState, tol: f64) -> CentralizerDescriptor {
    CentralizerDescriptor {
        classes: bloch_vectors(rho)
            .into_iter()
            .map(|b| {
                if b.norm() < tol {
                    FactorClass::Full
                } else {
                    FactorClass::Axis { bloch: b.r }
                }
            })
            .collect(),
        threshold: tol,
    }
}

pub fn classify_centralizer_default(rho: &DensityState) -> CentralizerDescriptor {
    classify_centralizer(rho, CLASSIFY_TOL)
}

/// Coordinates of one centralizer factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FactorParams {
    /// `ξ` in `exp(iξ r⃗·σ⃗)`; Axis qubits only.
    Cyclic(f64),
    /// `(φ, θ, ω)`; Full qubits only.
    Angles { phi: f64, theta: f64, omega: f64 },
    /// `s⃗` in `exp(i s⃗·σ⃗)`; Full qubits only.
    Generator([f64; 3]),
}

impl FactorParams {
    pub fn arity(&self) -> usize {
        match self {
            FactorParams::Cyclic(_) => 1,
            _ => 3,
        }
    }
}

/// `U = ⊗_{Axis} exp(iξ_l r⃗_l·σ⃗) ⊗_{Full} exp(i s⃗_k·σ⃗)`.
pub fn sample_centralizer(
    desc: &CentralizerDescriptor,
    params: &[FactorParams],
) -> Result<LocalUnitarySpec> {
    same_n(desc.n(), params.len())?;
    let factors = desc
        .classes
        .iter()
        .zip(params)
        .enumerate()
        .map(|(j, (class, p))| {
            let qubit = j + 1;
            match (class, *p) {
                (FactorClass::Axis { bloch }, FactorParams::Cyclic(xi)) => {
                    cyclic_factor(&BlochVector { qubit, r: *bloch }, xi)
                }
                (FactorClass::Full, FactorParams::Angles { phi, theta, omega }) => {
                    LocalFactor::from_angles(phi, theta, omega)
                }
                (FactorClass::Full, FactorParams::Generator(s)) => LocalFactor::from_generator(s),
                (class, p) => Err(Error::Arity {
                    qubit,
                    expected: class.parameter_count(),
                    got: p.arity(),
                }),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    LocalUnitarySpec::new(factors)
}

/// Draws centralizer coordinates: Axis angles uniform in `[0, 2π)`; Full
/// factors with a uniform axis on the sphere and a uniform angle in `[0, 2π)`.
pub fn random_parameters<R: Rng + ?Sized>(desc: &CentralizerDescriptor, rng: &mut R) -> Vec<FactorParams> {
    desc.classes
        .iter()
        .map(|class| match class {
            FactorClass::Axis { bloch } => {
                let angle = rng.gen_range(0.0..TAU);
                FactorParams::Cyclic(angle / norm3(*bloch))
            }
            FactorClass::Full => {
                let axis = random_unit_vector(rng);
                let angle = rng.gen_range(0.0..TAU);
                FactorParams::Generator(axis.map(|a| a * angle))
            }
        })
        .collect()
}

pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| rng.sample(StandardNormal));
        let n = norm3(v);
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

/// Commutator of one factor with its qubit's reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorDiagnostic {
    pub qubit: usize,
    pub bloch: [f64; 3],
    pub commutator: f64,
    pub admissible: bool,
}

pub fn centralizer_diagnostics(
    rho: &DensityState,
    spec: &LocalUnitarySpec,
    tol: f64,
) -> Result<Vec<FactorDiagnostic>> {
    same_n(rho.n(), spec.n())?;
    bloch_vectors(rho)
        .into_iter()
        .zip(spec.factors())
        .map(|(b, f)| {
            let commutator = max_entry(&reduction_commutator(&f.matrix(), &b)?);
            Ok(FactorDiagnostic {
                qubit: b.qubit,
                bloch: b.r,
                commutator,
                admissible: commutator < tol,
            })
        })
        .collect()
}

pub fn is_in_centralizer(rho: &DensityState, spec: &LocalUnitarySpec, tol: f64) -> Result<bool> {
    Ok(centralizer_diagnostics(rho, spec, tol)?.iter().all(|d| d.admissible))
}

/// `ρ_U = 2^{-n} 1 + Σ ρ̄_{Q_i} + U Δ U†` for `U` in the centralizer.
/// Only Δ is conjugated; the 1-qubit part is copied through.
pub fn family_member(rho: &DensityState, spec: &LocalUnitarySpec, tol: f64) -> Result<DensityState> {
    let diagnostics = centralizer_diagnostics(rho, spec, tol)?;
    if diagnostics.iter().any(|d| !d.admissible) {
        return Err(Error::NotInCentralizer(
            diagnostics.into_iter().filter(|d| !d.admissible).collect(),
        ));
    }
    let mut parts = decompose_state(rho.state());
    parts.delta = conjugate_state(&parts.delta, spec)?;
    Ok(DensityState::trusted(parts.recompose(), rho.positivity()))
}

/// Outcome of the family-exclusion test. Equal invariants are necessary
/// for membership, not sufficient.
///
/// With identical reductions `Tr Δ²` is fixed by `Tr ρ²`, so
/// `ExcludedByDeltaPurity` only fires when the Bloch differences sit inside
/// the tolerance but their squares push `Tr Δ²` past it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    ExcludedByReductions,
    ExcludedByPurity,
    ExcludedByDeltaPurity,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ExcludedByReductions => "ExcludedByReductions",
            Verdict::ExcludedByPurity => "ExcludedByPurity",
            Verdict::ExcludedByDeltaPurity => "ExcludedByDeltaPurity",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Per-qubit largest Bloch component difference.
    pub bloch_deviation: Vec<f64>,
    pub lm_equivalent: bool,
    pub purity: (f64, f64),
    pub delta_purity: (f64, f64),
    pub verdict: Verdict,
}

pub fn compare(a: &DensityState, b: &DensityState, tol: f64) -> Result<Comparison> {
    let bloch_deviation = crate::reduction::bloch_deviation(a, b)?;
    let lm_equivalent = bloch_deviation.iter().all(|&d| d <= tol);
    let purity = (purity(a), purity(b));
    let delta_purity = (crate::reduction::delta_purity(a), crate::reduction::delta_purity(b));
    let verdict = if !lm_equivalent {
        Verdict::ExcludedByReductions
    } else if (purity.0 - purity.1).abs() > tol {
        Verdict::ExcludedByPurity
    } else if (delta_purity.0 - delta_purity.1).abs() > tol {
        Verdict::ExcludedByDeltaPurity
    } else {
        Verdict::Inconclusive
    };
    Ok(Comparison {
        bloch_deviation,
        lm_equivalent,
        purity,
        delta_purity,
        verdict,
    })
}

pub fn family_discriminator(a: &DensityState, b: &DensityState, tol: f64) -> Result<Verdict> {
    Ok(compare(a, b, tol)?.verdict)
}

/// Checks that `Q_i` and `K_i` are invariant under `U`:
/// `π_{Q_i}(UρU†) = U π_{Q_i}(ρ) U†`, the kernel part of ρ stays in `K_i`,
/// and the weight ≥ 2 part stays weight ≥ 2.
pub fn verify_subspace_invariance(
    rho: &DensityState,
    spec: &LocalUnitarySpec,
    qubit: usize,
    tol: f64,
) -> Result<bool> {
    let state = rho.state();
    let lhs = project_q_state(&conjugate_state(state, spec)?, qubit)?.state;
    let rhs = conjugate_state(&project_q_state(state, qubit)?.state, spec)?;
    if lhs.max_abs_diff(&rhs) > tol {
        return Ok(false);
    }

    let kernel = crate::reduction::kernel_component_state(state, qubit)?;
    let moved = conjugate_state(&kernel, spec)?;
    if q_codes(qubit).iter().any(|&c| moved.coeff(c).abs() > tol) {
        return Ok(false);
    }

    let delta = conjugate_state(&decompose_state(state).delta, spec)?;
    let leaked = delta.squared_norm_where(|w| w < 2).sqrt();
    Ok(leaked <= tol)
}

pub fn verify_subspace_invariance_default(
    rho: &DensityState,
    spec: &LocalUnitarySpec,
    qubit: usize,
) -> Result<bool> {
    verify_subspace_invariance(rho, spec, qubit, EPS)
}

/// Bloch vector of `qubit` after the adjoint action, for reports.
pub fn rotated_bloch(rho: &DensityState, spec: &LocalUnitarySpec, qubit: usize) -> Result<BlochVector> {
    bloch_of(&conjugate_state(rho.state(), spec)?, qubit)
}
