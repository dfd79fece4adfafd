//! Naive dense-matrix reference implementations.
//!
//! Nothing here calls into the coefficient-space code paths; the Pauli
//! matrices, Kronecker products and traces are rebuilt with plain loops so
//! that agreement with [`crate::reduction`] and [`crate::centralizer`] is
//! evidence rather than tautology. Intended for `n ≤ 8`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{DenseOperator, Matrix2c};

const ORACLE_MAX_QUBITS: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `σ_0..σ_3` as row-major 2×2 arrays.
fn pauli_table() -> [[[Complex64; 2]; 2]; 4] {
    [
        [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]],
        [[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]],
        [[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]],
        [[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]],
    ]
}

fn dim_to_n(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::Shape(format!("dimension {dim} is not a power of two")));
    }
    let n = dim.trailing_zeros() as usize;
    if n > ORACLE_MAX_QUBITS {
        return Err(Error::Capacity { n, cap: ORACLE_MAX_QUBITS });
    }
    Ok(n)
}

/// Kronecker product of 2×2 factors, first factor most significant.
pub fn kron_all(factors: &[Matrix2c]) -> DMatrix<Complex64> {
    let mut acc = DMatrix::from_element(1, 1, c(1., 0.));
    for f in factors {
        let d = acc.nrows();
        let mut next = DMatrix::from_element(2 * d, 2 * d, c(0., 0.));
        for r in 0..d {
            for col in 0..d {
                let a = acc[(r, col)];
                for fr in 0..2 {
                    for fc in 0..2 {
                        next[(2 * r + fr, 2 * col + fc)] = a * f[(fr, fc)];
                    }
                }
            }
        }
        acc = next;
    }
    acc
}

/// `σ_α` for per-qubit digits, qubit 1 first.
pub fn pauli_string(digits: &[u8]) -> DMatrix<Complex64> {
    let table = pauli_table();
    let factors: Vec<Matrix2c> = digits
        .iter()
        .map(|&d| {
            let p = table[d as usize];
            Matrix2c::new(p[0][0], p[0][1], p[1][0], p[1][1])
        })
        .collect();
    kron_all(&factors)
}

/// `Tr_{all but keep}` by summing over the computational basis of the other
/// qubits. `keep` is 1-based.
pub fn dense_partial_trace(op: &DenseOperator, keep: usize) -> Result<Matrix2c> {
    let m = op.matrix();
    let dim = m.nrows();
    let n = dim_to_n(dim)?;
    if keep == 0 || keep > n {
        return Err(Error::QubitIndex { qubit: keep, n });
    }
    let bit = n - keep;
    let mut out = Matrix2c::zeros();
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = c(0., 0.);
            for rest in 0..dim {
                if (rest >> bit) & 1 != 0 {
                    continue;
                }
                let row = rest | (a << bit);
                let col = rest | (b << bit);
                acc += m[(row, col)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Bloch vector `r_a = Tr{σ_a ρ_i}` of a 2×2 reduced matrix.
pub fn bloch_from_reduced(rho: &Matrix2c) -> [f64; 3] {
    let table = pauli_table();
    let mut r = [0.0; 3];
    for a in 0..3 {
        let p = table[a + 1];
        let mut tr = c(0., 0.);
        for i in 0..2 {
            for k in 0..2 {
                tr += p[i][k] * rho[(k, i)];
            }
        }
        r[a] = tr.re;
    }
    r
}

/// `(⊗U_j) A (⊗U_j)†`.
pub fn dense_conjugate(op: &DenseOperator, units: &[Matrix2c]) -> Result<DenseOperator> {
    let n = dim_to_n(op.dim())?;
    if units.len() != n {
        return Err(Error::DimensionMismatch { left: n, right: units.len() });
    }
    for u in units {
        let deviation = (u * u.adjoint() - Matrix2c::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if deviation > 1e-12 {
            return Err(Error::NotUnitary { deviation });
        }
    }
    let big = kron_all(units);
    DenseOperator::new(&big * op.matrix() * big.adjoint())
}

pub fn dense_commutator(a: &Matrix2c, b: &Matrix2c) -> Matrix2c {
    a * b - b * a
}

/// `2^{-n} Tr{σ_α A}` for every α by direct trace with an explicit
/// Kronecker-built `σ_α`; index order matches [`crate::pauli::PauliIndex::code`].
pub fn dense_pauli_coefficients(op: &DenseOperator) -> Result<Vec<Complex64>> {
    let dim = op.dim();
    let n = dim_to_n(dim)?;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for code in 0..1usize << (2 * n) {
        let digits: Vec<u8> = (0..n).map(|j| ((code >> (2 * j)) & 3) as u8).collect();
        let s = pauli_string(&digits);
        let mut tr = c(0., 0.);
        for i in 0..dim {
            for k in 0..dim {
                tr += s[(i, k)] * op.matrix()[(k, i)];
            }
        }
        out.push(tr / dim as f64);
    }
    Ok(out)
}

/// Sorted eigenvalues of a Hermitian operator.
pub fn dense_eigenvalues(op: &DenseOperator) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(op.matrix().clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn dense_purity(op: &DenseOperator) -> f64 {
    (op.matrix() * op.matrix()).trace().re
}

/// `exp(iω n̂·σ⃗)` by power series, independent of the closed form.
pub fn su2_exp(axis: [f64; 3], omega: f64) -> Matrix2c {
    let table = pauli_table();
    let mut gen = Matrix2c::zeros();
    for a in 0..3 {
        let p = table[a + 1];
        gen += Matrix2c::new(p[0][0], p[0][1], p[1][0], p[1][1]) * c(0., omega * axis[a]);
    }
    let mut term = Matrix2c::identity();
    let mut sum = Matrix2c::identity();
    for k in 1..60 {
        term = term * gen / c(k as f64, 0.);
        sum += term;
    }
    sum
}
