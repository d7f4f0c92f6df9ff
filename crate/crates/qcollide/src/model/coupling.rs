//! Application of a pairwise coupling to two qubits of a register.

use crate::gates::{control_state, cswap_unitary, embed, pswap_unitary};
use crate::model::CouplingKind;
use crate::state::DensityMatrix;
use crate::{Error, Result};

/// Apply the chosen coupling of strength `gamma` to qubits `a` and `b` of
/// `rho`. The output register has the same qubits as the input.
///
/// * `Coherent`: conjugate by the partial-SWAP unitary embedded on `(a, b)`.
/// * `Incoherent`: append a fresh control qubit in `cos(gamma)|0> +
///   sin(gamma)|1>`, conjugate by the controlled-SWAP embedded on
///   `(control, a, b)`, then trace the control back out. Controls are never
///   reused across gate applications.
pub fn apply_pair_coupling(
    kind: CouplingKind,
    gamma: f64,
    rho: &DensityMatrix,
    a: usize,
    b: usize,
) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    for idx in [a, b] {
        if idx >= n {
            return Err(Error::InvalidQubit {
                index: idx,
                num_qubits: n,
            });
        }
    }
    if a == b {
        return Err(Error::InvalidSpec(format!(
            "pair coupling needs two distinct qubits, got ({a}, {b})"
        )));
    }

    let out = match kind {
        CouplingKind::Coherent => {
            let u = embed(&pswap_unitary(gamma), &[a, b], n)?;
            rho.apply_unitary(&u)
        }
        CouplingKind::Incoherent => {
            let control = control_state(gamma).density();
            let extended = rho.tensor(&control)?;
            let u = embed(&cswap_unitary(), &[n, a, b], n + 1)?;
            let evolved = extended.apply_unitary(&u);
            let keep: Vec<usize> = (0..n).collect();
            evolved.partial_trace(&keep)?
        }
    };
    debug_assert!(out.validate().is_ok(), "coupling broke state validity");
    Ok(out)
}
