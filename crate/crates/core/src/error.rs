use thiserror::Error;

use crate::states::ValidationReport;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed Pauli index: {0}")]
    MalformedIndex(String),

    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("qubit {qubit} out of range for a {n}-qubit state")]
    QubitIndex { qubit: usize, n: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("malformed operator: {0}")]
    Shape(String),

    #[error("operator is not Hermitian (imaginary residue {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("dense materialization is capped at {cap} qubits, got {n}")]
    Capacity { n: usize, cap: usize },

    #[error("coefficient {code} is not finite")]
    NonFinite { code: usize },

    #[error("Bloch vector {r:?} has norm {norm} > 1")]
    InvalidBloch { r: [f64; 3], norm: f64 },

    #[error("{0}")]
    Domain(String),

    #[error("state is not a valid density matrix: {0}")]
    InvalidState(Box<ValidationReport>),

    #[error("Bloch vector norm {norm:e} is too small to fix a rotation axis; use the full SU(2) factor")]
    DegenerateAxis { norm: f64 },

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("qubit {qubit}: {expected} parameter(s) expected, got {got}")]
    Arity {
        qubit: usize,
        expected: usize,
        got: usize,
    },

    #[error("local unitary leaves the centralizer on qubit(s) {:?}", .0.iter().map(|d| d.qubit).collect::<Vec<_>>())]
    NotInCentralizer(Vec<crate::centralizer::FactorDiagnostic>),
}

pub type Result<T> = std::result::Result<T, Error>;
