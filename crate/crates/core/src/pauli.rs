//! Pauli-string indexing and conversion between dense matrices and real
//! Pauli coefficient vectors.
//!
//! Qubit 1 is the leftmost (most significant) Kronecker factor of a dense
//! operator. A [`PauliIndex`] stores the digit of qubit `j` at base-4
//! position `j - 1`, so `code = Σ digit_j · 4^(j-1)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{HERMITICITY_TOL, MAX_QUBITS};

/// A 2×2 complex matrix.
pub type Matrix2c = Matrix2<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_digit(d: u8) -> Option<Pauli> {
        match d {
            0 => Some(Pauli::I),
            1 => Some(Pauli::X),
            2 => Some(Pauli::Y),
            3 => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn digit(self) -> u8 {
        self as u8
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> Matrix2c {
        match self {
            Pauli::I => Matrix2c::new(ONE, ZERO, ZERO, ONE),
            Pauli::X => Matrix2c::new(ZERO, ONE, ONE, ZERO),
            Pauli::Y => Matrix2c::new(ZERO, -I, I, ZERO),
            Pauli::Z => Matrix2c::new(ONE, ZERO, ZERO, -ONE),
        }
    }
}

/// `v_x σ_x + v_y σ_y + v_z σ_z`.
pub fn vector_dot_sigma(v: [f64; 3]) -> Matrix2c {
    Matrix2c::new(
        Complex64::new(v[2], 0.0),
        Complex64::new(v[0], -v[1]),
        Complex64::new(v[0], v[1]),
        Complex64::new(-v[2], 0.0),
    )
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_QUBITS });
    }
    Ok(())
}

/// Base-4 multi-index identifying the Pauli string `σ_α = ⊗_j σ_{α_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliIndex {
    n: usize,
    code: usize,
}

impl PauliIndex {
    /// Builds an index from per-qubit digits, qubit 1 first.
    pub fn new(digits: &[u8]) -> Result<Self> {
        check_qubit_count(digits.len())?;
        let mut code = 0usize;
        for (j, &d) in digits.iter().enumerate() {
            if d > 3 {
                return Err(Error::MalformedIndex(format!(
                    "digit {d} on qubit {} is not in 0..=3",
                    j + 1
                )));
            }
            code |= (d as usize) << (2 * j);
        }
        Ok(PauliIndex {
            n: digits.len(),
            code,
        })
    }

    pub fn from_code(n: usize, code: usize) -> Result<Self> {
        check_qubit_count(n)?;
        if code >= 1 << (2 * n) {
            return Err(Error::MalformedIndex(format!(
                "code {code} exceeds 4^{n} - 1"
            )));
        }
        Ok(PauliIndex { n, code })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_code(n, 0)
    }

    /// Weight-1 index carrying `p` on `qubit` (1-based) and identity elsewhere.
    pub fn single(n: usize, qubit: usize, p: Pauli) -> Result<Self> {
        check_qubit_count(n)?;
        if qubit == 0 || qubit > n {
            return Err(Error::QubitIndex { qubit, n });
        }
        Ok(PauliIndex {
            n,
            code: (p.digit() as usize) << (2 * (qubit - 1)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn code(&self) -> usize {
        self.code
    }

    /// Factor on `qubit` (1-based).
    pub fn factor(&self, qubit: usize) -> Pauli {
        debug_assert!(qubit >= 1 && qubit <= self.n);
        Pauli::from_digit(digit_at(self.code, qubit - 1)).unwrap()
    }

    pub fn digits(&self) -> Vec<u8> {
        (0..self.n).map(|j| digit_at(self.code, j)).collect()
    }

    pub fn weight(&self) -> usize {
        weight_of(self.code)
    }
}

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n {
            write!(f, "{}", self.factor(j).letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliIndex {
    type Err = Error;

    /// Parses a Pauli string such as `"XIZ"`; letters run from qubit 1 to n.
    fn from_str(s: &str) -> Result<Self> {
        let digits = s
            .chars()
            .map(|c| {
                Pauli::from_letter(c)
                    .map(Pauli::digit)
                    .ok_or_else(|| Error::MalformedIndex(format!("unexpected letter {c:?} in {s:?}")))
            })
            .collect::<Result<Vec<u8>>>()?;
        PauliIndex::new(&digits)
    }
}

#[inline]
pub(crate) fn digit_at(code: usize, pos: usize) -> u8 {
    ((code >> (2 * pos)) & 3) as u8
}

/// Number of non-identity factors of a code.
#[inline]
pub fn weight_of(code: usize) -> usize {
    let mut c = code;
    let mut w = 0;
    while c != 0 {
        if c & 3 != 0 {
            w += 1;
        }
        c >>= 2;
    }
    w
}

/// A `2^n × 2^n` complex operator; qubit 1 is the most significant factor.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::Shape(format!("{rows}×{cols} is not square")));
        }
        if rows < 2 || !rows.is_power_of_two() {
            return Err(Error::Shape(format!("dimension {rows} is not a power of two")));
        }
        let n = rows.trailing_zeros() as usize;
        if n > MAX_QUBITS {
            return Err(Error::Capacity { n, cap: MAX_QUBITS });
        }
        Ok(DenseOperator { n, matrix })
    }

    /// Real diagonal operator, mostly for fixtures.
    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&x| Complex64::new(x, 0.0)),
        ));
        Self::new(d)
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalized) amplitude vector.
    pub fn projector(amplitudes: &[Complex64]) -> Result<Self> {
        let dim = amplitudes.len();
        let m = DMatrix::from_fn(dim, dim, |r, c| amplitudes[r] * amplitudes[c].conj());
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_residual(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                let d = (self.matrix[(r, c)] - self.matrix[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Real Pauli coefficients `r_α` of an n-qubit Hermitian operator,
/// indexed by [`PauliIndex::code`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliState {
    n: usize,
    coeffs: Vec<f64>,
}

impl PauliState {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_qubit_count(n)?;
        if coeffs.len() != 1 << (2 * n) {
            return Err(Error::Shape(format!(
                "{} coefficients given, 4^{n} = {} expected",
                coeffs.len(),
                1usize << (2 * n)
            )));
        }
        if let Some(code) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { code });
        }
        Ok(PauliState { n, coeffs })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(PauliState {
            n,
            coeffs: vec![0.0; 1 << (2 * n)],
        })
    }

    /// Builds a state from sparse `(index, coefficient)` terms; repeated
    /// indices accumulate.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliIndex, f64)>,
    {
        let mut s = Self::zeros(n)?;
        for (idx, v) in terms {
            if idx.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: idx.n(),
                });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { code: idx.code() });
            }
            s.coeffs[idx.code()] += v;
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn get(&self, idx: &PauliIndex) -> f64 {
        debug_assert_eq!(idx.n(), self.n);
        self.coeffs[idx.code()]
    }

    pub fn coeff(&self, code: usize) -> f64 {
        self.coeffs[code]
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    /// Nonzero terms in code order.
    pub fn terms(&self) -> impl Iterator<Item = (PauliIndex, f64)> + '_ {
        let n = self.n;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0.0)
            .map(move |(code, &v)| (PauliIndex { n, code }, v))
    }

    /// `Σ r_α²` restricted to codes whose weight satisfies `keep`.
    pub fn squared_norm_where(&self, keep: impl Fn(usize) -> bool) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(code, _)| keep(weight_of(*code)))
            .map(|(_, v)| v * v)
            .sum()
    }

    pub fn max_abs_diff(&self, other: &PauliState) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn checked_sub(&self, other: &PauliState) -> Result<PauliState> {
        same_n(self.n, other.n)?;
        Ok(PauliState {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_add(&self, other: &PauliState) -> Result<PauliState> {
        same_n(self.n, other.n)?;
        Ok(PauliState {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Coefficients of `self ⊗ other`; qubits of `self` come first.
    pub fn tensor(&self, other: &PauliState) -> Result<PauliState> {
        let n = self.n + other.n;
        check_qubit_count(n)?;
        let shift = 2 * self.n;
        let mut coeffs = vec![0.0; 1 << (2 * n)];
        for (cb, &b) in other.coeffs.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            for (ca, &a) in self.coeffs.iter().enumerate() {
                coeffs[ca | (cb << shift)] = a * b;
            }
        }
        Ok(PauliState { n, coeffs })
    }
}

pub(crate) fn same_n(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::DimensionMismatch { left, right });
    }
    Ok(())
}

/// Dense Kronecker product `⊗_j σ_{α_j}`.
pub fn sigma_dense(index: &PauliIndex) -> DenseOperator {
    let n = index.n();
    let dim = 1usize << n;
    let mut m = DMatrix::from_element(dim, dim, ZERO);
    // Every Pauli string is a signed permutation: row r has its single
    // nonzero entry in column r ^ flip.
    let mut flip = 0usize;
    for q in 1..=n {
        if matches!(index.factor(q), Pauli::X | Pauli::Y) {
            flip |= 1 << (n - q);
        }
    }
    for row in 0..dim {
        let mut phase = ONE;
        for q in 1..=n {
            let bit = (row >> (n - q)) & 1;
            phase *= match (index.factor(q), bit) {
                (Pauli::I, _) | (Pauli::X, _) | (Pauli::Z, 0) => ONE,
                (Pauli::Z, _) => -ONE,
                (Pauli::Y, 0) => -I,
                (Pauli::Y, _) => I,
            };
        }
        m[(row, row ^ flip)] = phase;
    }
    DenseOperator { n, matrix: m }
}

/// Per-qubit slot layout used by the fast transforms: within a 2×2 block of
/// one qubit, `(row bit, col bit)` slot `(0,0)` ↔ I, `(0,1)` ↔ X,
/// `(1,0)` ↔ Y, `(1,1)` ↔ Z.
fn slot_to_code(n: usize, row: usize, col: usize) -> usize {
    let mut code = 0;
    for q in 1..=n {
        let b = n - q;
        let d = (((row >> b) & 1) << 1) | ((col >> b) & 1);
        code |= d << (2 * (q - 1));
    }
    code
}

/// `r_α = 2^{-n} Tr{σ_α A}` via one 2×2 basis change per qubit.
/// Fails if any coefficient carries an imaginary part above `tol`.
pub fn dense_to_coeffs_with_tol(op: &DenseOperator, tol: f64) -> Result<PauliState> {
    let n = op.n();
    let dim = op.dim();
    let mut buf: Vec<Complex64> = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            buf.push(op.matrix[(r, c)]);
        }
    }
    for q in 1..=n {
        let bit = 1usize << (n - q);
        for r in 0..dim {
            if r & bit != 0 {
                continue;
            }
            for c in 0..dim {
                if c & bit != 0 {
                    continue;
                }
                let i00 = r * dim + c;
                let i01 = r * dim + (c | bit);
                let i10 = (r | bit) * dim + c;
                let i11 = (r | bit) * dim + (c | bit);
                let (a00, a01, a10, a11) = (buf[i00], buf[i01], buf[i10], buf[i11]);
                buf[i00] = (a00 + a11) * 0.5;
                buf[i01] = (a01 + a10) * 0.5;
                // Tr{σ_y A} = i a01 − i a10
                buf[i10] = (a01 - a10) * I * 0.5;
                buf[i11] = (a00 - a11) * 0.5;
            }
        }
    }
    let mut coeffs = vec![0.0; dim * dim];
    let mut residual = 0.0f64;
    for r in 0..dim {
        for c in 0..dim {
            let v = buf[r * dim + c];
            residual = residual.max(v.im.abs());
            coeffs[slot_to_code(n, r, c)] = v.re;
        }
    }
    if residual > tol {
        return Err(Error::NotHermitian { residual });
    }
    PauliState::new(n, coeffs)
}

/// [`dense_to_coeffs_with_tol`] at the default hermiticity threshold.
pub fn dense_to_coeffs(op: &DenseOperator) -> Result<PauliState> {
    dense_to_coeffs_with_tol(op, HERMITICITY_TOL)
}

/// `A = Σ_α r_α σ_α`.
pub fn coeffs_to_dense(state: &PauliState) -> Result<DenseOperator> {
    let n = state.n();
    if n > MAX_QUBITS {
        return Err(Error::Capacity { n, cap: MAX_QUBITS });
    }
    let dim = 1usize << n;
    let mut buf = vec![ZERO; dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            buf[r * dim + c] = Complex64::new(state.coeffs[slot_to_code(n, r, c)], 0.0);
        }
    }
    for q in 1..=n {
        let bit = 1usize << (n - q);
        for r in 0..dim {
            if r & bit != 0 {
                continue;
            }
            for c in 0..dim {
                if c & bit != 0 {
                    continue;
                }
                let i00 = r * dim + c;
                let i01 = r * dim + (c | bit);
                let i10 = (r | bit) * dim + c;
                let i11 = (r | bit) * dim + (c | bit);
                let (vi, vx, vy, vz) = (buf[i00], buf[i01], buf[i10], buf[i11]);
                buf[i00] = vi + vz;
                buf[i11] = vi - vz;
                buf[i01] = vx - vy * I;
                buf[i10] = vx + vy * I;
            }
        }
    }
    Ok(DenseOperator {
        n,
        matrix: DMatrix::from_row_slice(dim, dim, &buf),
    })
}

/// Hilbert-Schmidt inner product `Tr{AB} = 2^n Σ_α a_α b_α`.
pub fn hs_inner(a: &PauliState, b: &PauliState) -> Result<f64> {
    same_n(a.n, b.n)?;
    let dot: f64 = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum();
    Ok(dot * (1u64 << a.n) as f64)
}
