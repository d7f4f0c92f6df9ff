//! Numerical tolerances, centralized.
//!
//! The values are sized for double-precision arithmetic on registers of at
//! most four qubits (16x16 matrices). Structural checks (Hermiticity, trace,
//! norms) are held to 1e-12; anything that goes through an eigensolver gets
//! the looser spectral tolerance.

/// Elementwise tolerance for structural identities: Hermiticity, unit trace,
/// unit norm, gate unitarity checks in tests.
pub const STRUCTURAL: f64 = 1e-12;

/// Tolerance for spectral quantities: eigenvalue floors and anything derived
/// from an eigendecomposition.
pub const SPECTRAL: f64 = 1e-10;

/// Most negative eigenvalue a density matrix may carry and still validate.
pub const MIN_EIGENVALUE: f64 = -1e-10;

/// Unitarity required of a matrix passed to [`crate::DensityMatrix::conjugate`].
pub const UNITARY: f64 = 1e-10;

/// Bloch vectors may exceed the unit ball by at most this much (squared norm).
pub const BLOCH_NORM: f64 = 1e-10;

/// Trace-distance increments at or below this floor are treated as
/// floating-point ripple, not information backflow.
pub const INCREMENT_FLOOR: f64 = 1e-12;
