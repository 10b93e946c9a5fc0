use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("unsupported dimension {0}; supported dimensions are 1, 2, 4 and 8")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("channel is not trace preserving (completeness deviation {deviation:.3e})")]
    IncompleteChannel { deviation: f64 },

    #[error("state norm collapsed at step {step}")]
    NormCollapse { step: usize },

    #[error("qubit index {index} out of range for {qubits} qubits")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("malformed Pauli word {0:?}")]
    MalformedPauliWord(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("energy estimate requires the observables IZ, XX and YY; got {0:?}")]
    ObservableSet(Vec<String>),
}

pub type Result<T> = std::result::Result<T, Error>;
