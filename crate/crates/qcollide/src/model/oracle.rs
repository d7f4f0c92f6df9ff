//! Closed-form single-collision Bloch updates, used as independent checks on
//! the matrix-level dynamics (and vice versa).

use crate::model::{apply_pair_coupling, CouplingKind};
use crate::state::{BlochVector, DensityMatrix};
use crate::Result;

/// Post-collision system Bloch vector for one coherent partial-SWAP collision
/// with an environment qubit:
///
/// `cos^2(g) beta + sin^2(g) alpha + cos(g) sin(g) (beta x alpha)`
///
/// The quadratic terms are standard; the cross-term coefficient
/// `cos(g) sin(g)` is the one the matrix-level simulation actually produces
/// (see [`extract_cross_coefficient`], which measures it numerically).
pub fn pswap_collision_oracle(beta: BlochVector, alpha: BlochVector, gamma: f64) -> BlochVector {
    let c2 = gamma.cos() * gamma.cos();
    let s2 = gamma.sin() * gamma.sin();
    let cs = gamma.cos() * gamma.sin();
    beta.scaled(c2)
        .add(&alpha.scaled(s2))
        .add(&beta.cross(&alpha).scaled(cs))
}

/// Post-collision system Bloch vector for one incoherent controlled-SWAP
/// collision: `cos^2(g) beta + sin^2(g) alpha`. No interference term.
pub fn cswap_collision_oracle(beta: BlochVector, alpha: BlochVector, gamma: f64) -> BlochVector {
    let c2 = gamma.cos() * gamma.cos();
    let s2 = gamma.sin() * gamma.sin();
    beta.scaled(c2).add(&alpha.scaled(s2))
}

/// Run one coherent collision at the matrix level and return the system
/// Bloch vector: the brute-force counterpart of [`pswap_collision_oracle`].
pub fn matrix_collision_bloch(
    kind: CouplingKind,
    beta: BlochVector,
    alpha: BlochVector,
    gamma: f64,
) -> Result<BlochVector> {
    let system = DensityMatrix::from_bloch(beta)?;
    let env = DensityMatrix::from_bloch(alpha)?;
    let joint = system.tensor(&env)?;
    let evolved = apply_pair_coupling(kind, gamma, &joint, 0, 1)?;
    evolved.partial_trace(&[0])?.bloch_vector()
}

/// Numerically extract the coefficient of `(beta x alpha)` in the coherent
/// single-collision update, normalized by `cos(gamma) sin(gamma)`.
///
/// Uses `beta = x`, `alpha = z` so the cross product is `-y`; the quadratic
/// terms contribute nothing along y and the measured ratio isolates the
/// interference term.
pub fn extract_cross_coefficient(gamma: f64) -> Result<f64> {
    let beta = BlochVector::new(1.0, 0.0, 0.0);
    let alpha = BlochVector::new(0.0, 0.0, 1.0);
    let out = matrix_collision_bloch(CouplingKind::Coherent, beta, alpha, gamma)?;
    // (x) x (z) = -y, so the cross coefficient is -out.y.
    Ok(-out.y / (gamma.cos() * gamma.sin()))
}
