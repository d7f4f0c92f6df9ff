//! Collision-model simulator for small qubit registers.
//!
//! A system qubit (or a pair of system qubits) repeatedly collides with a
//! stream of identically prepared environment qubits. Each collision is either
//! a coherent partial-SWAP unitary or an incoherent controlled-SWAP mediated by
//! a fresh control qubit that is traced out immediately after the gate. On top
//! of the step dynamics the crate provides the usual figures of merit
//! (fidelity, entropy, coherence, trace distance, the trace-distance memory
//! measure, windowed Pearson correlation), scenario runners that export
//! trajectories to CSV/JSON, and a parameter-sweep engine.
//!
//! With the default `parallel` feature, sweep cells and grid searches run on
//! rayon; disabling the feature falls back to equivalent sequential loops with
//! bitwise-identical output.

pub mod error;
pub mod experiments;
pub mod gates;
pub mod linalg;
pub mod metrics;
pub mod model;
pub(crate) mod par;
pub mod state;
pub mod tol;

pub use error::Error;
pub use linalg::{kron, ComplexMatrix, C64};
pub use state::{BlochVector, DensityMatrix, PureState};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
