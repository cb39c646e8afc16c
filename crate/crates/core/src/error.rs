use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("expected {expected} matrix entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },

    #[error("matrix dimensions must be nonzero, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("index ({row}, {col}) out of bounds for {rows}x{cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotUnit { trace: f64 },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension {dim} is not a power of two")]
    NotPowerOfTwo { dim: usize },

    #[error("partial trace must keep at least one qubit")]
    EmptyKeep,

    #[error("qubit index {index} out of range for a {qubits}-qubit state")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("no qubit labelled {label:?}")]
    UnknownLabel { label: char },

    #[error("qubit index {index} listed twice")]
    DuplicateQubit { index: usize },

    #[error("expected a {expected}-qubit state, got {actual} qubits")]
    QubitCount { expected: usize, actual: usize },

    #[error("amplitudes are not normalized (norm² = {norm_sq})")]
    NotNormalized { norm_sq: f64 },

    #[error("probabilities {probs:?} are not on the simplex")]
    OffSimplex { probs: [f64; 3] },

    #[error("negative radicand {value:e} in {quantity}")]
    NegativeRadicand { quantity: &'static str, value: f64 },

    #[error("state is not pure (purity {purity})")]
    NotPure { purity: f64 },

    #[error("invalid parameter {field}: {reason}")]
    InvalidParam { field: &'static str, reason: String },
}
