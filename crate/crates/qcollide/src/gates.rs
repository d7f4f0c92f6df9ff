//! Constructors for every unitary the collision models use, plus the
//! embedding of a small gate into a larger register.

use num_complex::Complex;

use crate::error::Error;
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::state::PureState;
use crate::Result;

/// Two-qubit SWAP, `|00><00| + |01><10| + |10><01| + |11><11|`.
pub fn swap_operator() -> ComplexMatrix {
    let mut s = ComplexMatrix::zeros(4, 4);
    s[(0, 0)] = ONE;
    s[(1, 2)] = ONE;
    s[(2, 1)] = ONE;
    s[(3, 3)] = ONE;
    s
}

/// Partial SWAP, `cos(gamma) I + i sin(gamma) S`.
///
/// Unitary for every real `gamma`; reduces to the identity at `gamma = 0` and
/// to `iS` at `gamma = pi/2`.
pub fn pswap_unitary(gamma: f64) -> ComplexMatrix {
    debug_assert!(gamma.is_finite());
    let c = Complex::new(gamma.cos(), 0.0);
    let is = Complex::new(0.0, gamma.sin());
    ComplexMatrix::identity(4)
        .scale(c)
        .add(&swap_operator().scale(is))
        .expect("same shape")
}

/// Controlled SWAP (Fredkin) on three qubits: the first qubit controls a SWAP
/// of the second and third. An involution: `U^2 = I`.
pub fn cswap_unitary() -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(8);
    // |101> <-> |110>
    u[(5, 5)] = ZERO;
    u[(6, 6)] = ZERO;
    u[(5, 6)] = ONE;
    u[(6, 5)] = ONE;
    u
}

/// Control qubit for the incoherent coupling,
/// `cos(gamma)|0> + sin(gamma)|1>`.
pub fn control_state(gamma: f64) -> PureState {
    debug_assert!(gamma.is_finite());
    PureState::new(vec![
        Complex::new(gamma.cos(), 0.0),
        Complex::new(gamma.sin(), 0.0),
    ])
    .expect("unit norm by construction")
}

/// Free evolution `exp(-i H dt)` for `H = -(omega/2) sigma_z`:
/// `diag(e^{i omega dt / 2}, e^{-i omega dt / 2})`.
pub fn free_evolution_unitary(omega: f64, dt: f64) -> ComplexMatrix {
    debug_assert!(omega.is_finite() && dt.is_finite());
    let half = 0.5 * omega * dt;
    let mut u = ComplexMatrix::zeros(2, 2);
    u[(0, 0)] = Complex::from_polar(1.0, half);
    u[(1, 1)] = Complex::from_polar(1.0, -half);
    u
}

/// Embed a gate acting on `positions` into an `num_qubits`-register operator.
///
/// `positions[k]` names the register qubit that plays the role of the gate's
/// k-th qubit (gate qubit 0 = most significant bit of the gate index, same
/// convention as the register itself). Positions must be distinct and in
/// range; the gate dimension must be `2^positions.len()`.
pub fn embed(
    gate: &ComplexMatrix,
    positions: &[usize],
    num_qubits: usize,
) -> Result<ComplexMatrix> {
    let k = positions.len();
    if gate.rows() != (1 << k) || !gate.is_square() {
        return Err(Error::Shape(format!(
            "gate of dimension {} does not act on {k} qubits",
            gate.rows()
        )));
    }
    for (i, &p) in positions.iter().enumerate() {
        if p >= num_qubits {
            return Err(Error::InvalidQubit {
                index: p,
                num_qubits,
            });
        }
        if positions[..i].contains(&p) {
            return Err(Error::Shape(format!("duplicate gate position {p}")));
        }
    }

    let dim = 1 << num_qubits;
    let gate_dim = 1 << k;
    // Register bit of qubit q, counting the most significant bit as qubit 0.
    let reg_bit = |q: usize| num_qubits - 1 - q;

    let mut out = ComplexMatrix::zeros(dim, dim);
    for row in 0..dim {
        let mut gate_row = 0usize;
        let mut rest = row;
        for (rank, &q) in positions.iter().enumerate() {
            let bit = (row >> reg_bit(q)) & 1;
            gate_row |= bit << (k - 1 - rank);
            rest &= !(1 << reg_bit(q));
        }
        for gate_col in 0..gate_dim {
            let amp = gate[(gate_row, gate_col)];
            if amp == ZERO {
                continue;
            }
            let mut col = rest;
            for (rank, &q) in positions.iter().enumerate() {
                let bit = (gate_col >> (k - 1 - rank)) & 1;
                col |= bit << reg_bit(q);
            }
            out[(row, col)] = amp;
        }
    }
    Ok(out)
}

/// Identity on a register of `num_qubits` qubits.
pub fn identity(num_qubits: usize) -> ComplexMatrix {
    ComplexMatrix::identity(1 << num_qubits)
}

#[allow(dead_code)]
pub(crate) fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}
