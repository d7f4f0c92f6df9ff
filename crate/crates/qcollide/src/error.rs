//! Error type shared across the crate.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Matrix or state construction with inconsistent dimensions.
    #[error("shape error: {0}")]
    Shape(String),

    /// Two operands whose dimensions must agree do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A qubit index outside the register.
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    InvalidQubit { index: usize, num_qubits: usize },

    /// An operation restricted to single-qubit states got a larger register.
    #[error("{op} requires a single-qubit state, got {num_qubits} qubits{hint}")]
    SingleQubitOnly {
        op: &'static str,
        num_qubits: usize,
        hint: &'static str,
    },

    /// A matrix that must be unitary is not, to within [`crate::tol::UNITARY`].
    #[error("matrix is not unitary: max |UU† - I| = {deviation:.3e}")]
    NonUnitary { deviation: f64 },

    /// A Bloch vector outside the closed unit ball.
    #[error("unphysical Bloch vector: |v|^2 = {norm_sqr} exceeds 1")]
    UnphysicalBloch { norm_sqr: f64 },

    /// A density matrix failing validation (Hermiticity, trace, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A series too short for the requested statistic.
    #[error("series of length {len} is too short (need at least {min})")]
    SeriesTooShort { len: usize, min: usize },

    /// Sliding-window parameters that do not fit the data.
    #[error("window width {width} does not fit series of length {len}")]
    WindowTooWide { width: usize, len: usize },

    /// A model specification that violates its own preconditions.
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),

    /// Configuration file problems; names the offending key where known.
    #[error("config error{}: {message}", match key { Some(k) => format!(" (key `{k}`)"), None => String::new() })]
    Config {
        key: Option<String>,
        message: String,
    },

    /// Unknown scenario identifier.
    #[error("unknown scenario `{0}` (run `list` for the registry)")]
    UnknownScenario(String),

    /// I/O failure, with the path involved.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: Some(key.into()),
            message: message.into(),
        }
    }
}
