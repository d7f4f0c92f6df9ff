//! Quantum states: pure state vectors, density matrices, Bloch vectors.
//!
//! Register convention, used consistently by every operation in the crate:
//! qubit 0 is the leftmost tensor factor and therefore the most significant
//! bit of a computational-basis index.

use num_complex::Complex;

use crate::error::Error;
use crate::linalg::{kron, ComplexMatrix, C64, ONE, ZERO};
use crate::{linalg, tol, Result};

/// Largest register the crate simulates.
pub const MAX_QUBITS: usize = 4;

/// Real 3-vector representation of a single-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.x * factor, self.y * factor, self.z * factor)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.x + other.x, self.y + other.y, self.z + other.z)
    }

    pub fn negated(&self) -> Self {
        self.scaled(-1.0)
    }

    /// Unit vector at polar angle `theta` from +z and azimuth `phi` from +x.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self::new(
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        )
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

/// Normalized pure state over 1..=4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let num_qubits = qubit_count(amplitudes.len())?;
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "pure state squared norm {norm_sqr} is not 1"
            )));
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Computational basis state `|index>` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let dim = 1 << num_qubits;
        assert!((1..=MAX_QUBITS).contains(&num_qubits) && index < dim);
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Self {
            num_qubits,
            amplitudes,
        }
    }

    pub fn zero() -> Self {
        Self::basis(1, 0)
    }

    pub fn one() -> Self {
        Self::basis(1, 1)
    }

    /// `(|0> + |1>)/sqrt(2)`.
    pub fn plus() -> Self {
        let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            num_qubits: 1,
            amplitudes: vec![h, h],
        }
    }

    /// `(|0> - |1>)/sqrt(2)`.
    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            num_qubits: 1,
            amplitudes: vec![Complex::new(h, 0.0), Complex::new(-h, 0.0)],
        }
    }

    /// `(|0> + i|1>)/sqrt(2)`, the +y eigenstate.
    pub fn plus_i() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            num_qubits: 1,
            amplitudes: vec![Complex::new(h, 0.0), Complex::new(0.0, h)],
        }
    }

    /// Single-qubit state at Bloch angles `(theta, phi)`:
    /// `cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let a = Complex::new((theta / 2.0).cos(), 0.0);
        let b = Complex::from_polar((theta / 2.0).sin(), phi);
        Self {
            num_qubits: 1,
            amplitudes: vec![a, b],
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// Tensor product `|self> ⊗ |other>`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Shape(format!(
                "tensor product would have {num_qubits} qubits, max is {MAX_QUBITS}"
            )));
        }
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(Self {
            num_qubits,
            amplitudes,
        })
    }

    /// Projector `|self><self|` as a density matrix, rescaled to exactly
    /// compensate the rounding of the squared amplitudes.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let mat =
            ComplexMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix {
            num_qubits: self.num_qubits,
            mat,
        }
        .stabilized()
    }
}

/// Density matrix over 1..=4 qubits.
///
/// Construction checks shape and finiteness only; the numerical invariants
/// (Hermiticity, unit trace, positivity) are verified by [`validate`], which
/// tests call directly and model steps call behind `debug_assert!`.
///
/// [`validate`]: DensityMatrix::validate
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::Shape(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let num_qubits = qubit_count(mat.rows())?;
        if !mat.all_finite() {
            return Err(Error::Shape("density matrix entries must be finite".into()));
        }
        Ok(Self { num_qubits, mat })
    }

    pub fn from_pure(psi: &PureState) -> Self {
        psi.density()
    }

    /// `(I + v·sigma)/2`; rejects vectors outside the unit ball.
    pub fn from_bloch(v: BlochVector) -> Result<Self> {
        let norm_sqr = v.norm_sqr();
        if norm_sqr > 1.0 + tol::BLOCH_NORM {
            return Err(Error::UnphysicalBloch { norm_sqr });
        }
        let mat = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex::new(0.5 * (1.0 + v.z), 0.0),
                Complex::new(0.5 * v.x, -0.5 * v.y),
                Complex::new(0.5 * v.x, 0.5 * v.y),
                Complex::new(0.5 * (1.0 - v.z), 0.0),
            ],
        )?;
        Ok(Self { num_qubits: 1, mat }.stabilized())
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1 << num_qubits;
        let mat = ComplexMatrix::identity(dim).scale(Complex::new(1.0 / dim as f64, 0.0));
        Self { num_qubits, mat }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    /// Eigenvalues of the state, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.mat)
    }

    /// Full validation: Hermiticity and unit trace to 1e-12, minimum
    /// eigenvalue no lower than -1e-10.
    pub fn validate(&self) -> Result<()> {
        let herm = self.mat.hermiticity_deviation();
        if herm > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |rho - rho†| = {herm:.3e}"
            )));
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min_eig = self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < tol::MIN_EIGENVALUE {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(())
    }

    /// Tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let num_qubits = self.num_qubits + other.num_qubits;
        if num_qubits > MAX_QUBITS {
            return Err(Error::Shape(format!(
                "tensor product would have {num_qubits} qubits, max is {MAX_QUBITS}"
            )));
        }
        Ok(Self {
            num_qubits,
            mat: kron(&self.mat, &other.mat),
        })
    }

    /// Reduced state over `keep`, tracing out every other qubit. Kept qubits
    /// retain their relative order; `keep` may be listed in any order but must
    /// be non-empty and free of duplicates.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let n = self.num_qubits;
        if keep.is_empty() {
            return Err(Error::Shape(
                "partial trace must keep at least one qubit".into(),
            ));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        for w in kept.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidQubit {
                    index: w[0],
                    num_qubits: n,
                });
            }
        }
        for &q in &kept {
            if q >= n {
                return Err(Error::InvalidQubit {
                    index: q,
                    num_qubits: n,
                });
            }
        }

        let traced: Vec<usize> = (0..n).filter(|q| !kept.contains(q)).collect();
        let m = kept.len();
        let out_dim = 1 << m;
        let env_dim = 1 << traced.len();

        // Scatter the bits of a reduced index (or a traced index) back into
        // their positions inside the full register index.
        let expand = |bits: usize, positions: &[usize]| -> usize {
            let mut full = 0usize;
            for (rank, &q) in positions.iter().enumerate() {
                let bit = (bits >> (positions.len() - 1 - rank)) & 1;
                full |= bit << (n - 1 - q);
            }
            full
        };

        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for i in 0..out_dim {
            let i_base = expand(i, &kept);
            for j in 0..out_dim {
                let j_base = expand(j, &kept);
                let mut sum = ZERO;
                for t in 0..env_dim {
                    let t_bits = expand(t, &traced);
                    sum += self.mat[(i_base | t_bits, j_base | t_bits)];
                }
                out[(i, j)] = sum;
            }
        }
        Ok(Self {
            num_qubits: m,
            mat: out,
        })
    }

    /// `U rho U†` with a full precondition check on `u`.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if !u.is_square() || u.rows() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: u.rows(),
                right: self.dim(),
            });
        }
        let deviation = u.unitarity_deviation();
        if deviation > tol::UNITARY {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(self.apply_unitary(u))
    }

    /// `U rho U†` for a `u` already known to be unitary (gate constructors and
    /// their embeddings). Checked only under debug assertions.
    pub(crate) fn apply_unitary(&self, u: &ComplexMatrix) -> Self {
        debug_assert!(u.is_unitary(tol::UNITARY), "apply_unitary: non-unitary u");
        let m = u
            .matmul(&self.mat)
            .and_then(|t| t.matmul(&u.adjoint()))
            .expect("dimensions checked by caller");
        Self {
            num_qubits: self.num_qubits,
            mat: m,
        }
    }

    /// `(Tr rho sigma_x, Tr rho sigma_y, Tr rho sigma_z)` for one qubit.
    pub fn bloch_vector(&self) -> Result<BlochVector> {
        if self.num_qubits != 1 {
            return Err(Error::SingleQubitOnly {
                op: "bloch_vector",
                num_qubits: self.num_qubits,
                hint: "",
            });
        }
        // Closed form from the 2x2 entries; real by Hermiticity.
        let x = 2.0 * self.mat[(0, 1)].re;
        let y = -2.0 * self.mat[(0, 1)].im;
        let z = self.mat[(0, 0)].re - self.mat[(1, 1)].re;
        Ok(BlochVector::new(x, y, z))
    }

    /// Expectation value of a Hermitian observable, `Re Tr(rho O)`.
    pub fn expectation(&self, observable: &ComplexMatrix) -> f64 {
        debug_assert_eq!(observable.rows(), self.dim());
        let mut sum = ZERO;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                sum += self.mat[(i, j)] * observable[(j, i)];
            }
        }
        sum.re
    }

    /// `<psi| rho |psi>`.
    pub fn matrix_element(&self, psi: &PureState) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: psi.dim(),
                right: self.dim(),
            });
        }
        let applied = self.mat.matvec(psi.amplitudes())?;
        let val: C64 = psi
            .amplitudes()
            .iter()
            .zip(&applied)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(val.re)
    }

    /// Project back onto the physical manifold: symmetrize exactly and
    /// rescale to unit trace.
    ///
    /// The step maps preserve Hermiticity and trace in exact arithmetic, but
    /// the non-Markovian iteration tensors two evolving factors together, so
    /// both marginals inherit the register's rounding deviation and the
    /// product doubles it on the next step. Re-projecting at step boundaries
    /// keeps 12000-collision runs at working precision; it never moves a
    /// state by more than a few ulps.
    pub(crate) fn stabilized(&self) -> Self {
        let d = self.dim();
        let mut m = ComplexMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = (self.mat[(i, j)] + self.mat[(j, i)].conj()) * 0.5;
            }
        }
        let trace = m.trace().re;
        debug_assert!(trace > 0.5, "stabilize: trace collapsed to {trace}");
        Self {
            num_qubits: self.num_qubits,
            mat: m.scale(Complex::new(1.0 / trace, 0.0)),
        }
    }

    /// Recover the state vector of a pure single-qubit state. Fails when the
    /// state is mixed beyond spectral tolerance.
    pub fn to_pure_qubit(&self) -> Result<PureState> {
        if self.num_qubits != 1 {
            return Err(Error::SingleQubitOnly {
                op: "to_pure_qubit",
                num_qubits: self.num_qubits,
                hint: "",
            });
        }
        let purity = self.mat.matmul(&self.mat).expect("square").trace().re;
        if (purity - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidState(format!(
                "state is mixed (Tr rho^2 = {purity}), no pure vector exists"
            )));
        }
        let v = self.bloch_vector()?;
        let theta = v.z.clamp(-1.0, 1.0).acos();
        let phi = v.y.atan2(v.x);
        Ok(PureState::from_angles(theta, phi))
    }
}

fn qubit_count(dim: usize) -> Result<usize> {
    let mut n = 0usize;
    let mut d = dim;
    while d > 1 && d.is_multiple_of(2) {
        d /= 2;
        n += 1;
    }
    if d != 1 || n == 0 || n > MAX_QUBITS {
        return Err(Error::Shape(format!(
            "dimension {dim} is not a power of two within 1..={MAX_QUBITS} qubits"
        )));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::pswap_unitary;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn bell_phi_plus() -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState::new(vec![Complex::new(h, 0.0), ZERO, ZERO, Complex::new(h, 0.0)])
            .unwrap()
            .density()
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factors() {
        let a = DensityMatrix::from_bloch(BlochVector::new(0.3, -0.2, 0.4)).unwrap();
        let b = PureState::plus_i().density();
        let joint = a.tensor(&b).unwrap();
        let ra = joint.partial_trace(&[0]).unwrap();
        let rb = joint.partial_trace(&[1]).unwrap();
        assert!(ra.matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let bell = bell_phi_plus();
        for keep in [[0usize], [1usize]] {
            let reduced = bell.partial_trace(&keep).unwrap();
            assert!(
                reduced
                    .matrix()
                    .max_abs_diff(DensityMatrix::maximally_mixed(1).matrix())
                    < 1e-15
            );
        }
    }

    #[test]
    fn partial_trace_after_pswap_matches_single_collision_formula() {
        // One coherent collision of |+> (beta along x) with |0> (alpha along
        // z), traced down to the system qubit. Expected Bloch vector:
        // cos^2 beta + sin^2 alpha + cos sin (beta x alpha); values confirmed
        // against an independent full-matrix computation.
        let gamma = 0.05 * FRAC_PI_2;
        let joint = PureState::plus()
            .density()
            .tensor(&PureState::zero().density())
            .unwrap();
        let evolved = joint.conjugate(&pswap_unitary(gamma)).unwrap();
        let system = evolved.partial_trace(&[0]).unwrap();
        let got = system.bloch_vector().unwrap();
        let want = BlochVector::new(
            0.9938441702975689,
            -0.07821723252011543,
            0.006155829702431115,
        );
        assert!(got.max_abs_diff(&want) < 1e-12, "{got:?}");
        // Trace preserved through the partial trace.
        assert!((system.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partial_trace_rejects_bad_keep_sets() {
        let joint = bell_phi_plus();
        assert!(matches!(
            joint.partial_trace(&[2]),
            Err(Error::InvalidQubit { index: 2, .. })
        ));
        assert!(joint.partial_trace(&[]).is_err());
        assert!(joint.partial_trace(&[0, 0]).is_err());
    }

    #[test]
    fn partial_trace_keeps_qubit_order() {
        let a = DensityMatrix::from_bloch(BlochVector::new(0.5, 0.0, 0.1)).unwrap();
        let b = DensityMatrix::from_bloch(BlochVector::new(0.0, -0.7, 0.2)).unwrap();
        let c = PureState::zero().density();
        let joint = a.tensor(&b).unwrap().tensor(&c).unwrap();
        // Keeping {0, 1} in any listed order returns (a ⊗ b), never (b ⊗ a).
        let kept = joint.partial_trace(&[1, 0]).unwrap();
        assert!(kept.matrix().max_abs_diff(a.tensor(&b).unwrap().matrix()) < 1e-14);
    }

    #[test]
    fn bloch_vector_of_named_states() {
        let cases = [
            (PureState::zero(), BlochVector::new(0.0, 0.0, 1.0)),
            (PureState::one(), BlochVector::new(0.0, 0.0, -1.0)),
            (PureState::plus(), BlochVector::new(1.0, 0.0, 0.0)),
            (PureState::plus_i(), BlochVector::new(0.0, 1.0, 0.0)),
        ];
        for (state, want) in cases {
            let got = state.density().bloch_vector().unwrap();
            assert!(got.max_abs_diff(&want) < 1e-15, "{got:?} vs {want:?}");
        }
        let mixed = DensityMatrix::maximally_mixed(1).bloch_vector().unwrap();
        assert!(mixed.max_abs_diff(&BlochVector::new(0.0, 0.0, 0.0)) == 0.0);
    }

    #[test]
    fn density_from_bloch_y_axis_matches_circular_state() {
        // (0, 1, 0) is (|0> + i|1>)/sqrt(2): off-diagonals -+ i/2.
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        let want = PureState::plus_i().density();
        assert!(rho.matrix().max_abs_diff(want.matrix()) < 1e-15);
        assert!((rho.matrix()[(0, 1)] - Complex::new(0.0, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn from_bloch_rejects_unphysical_vectors() {
        let v = BlochVector::new(0.8, 0.8, 0.8);
        assert!(matches!(
            DensityMatrix::from_bloch(v),
            Err(Error::UnphysicalBloch { .. })
        ));
    }

    #[test]
    fn bloch_vector_requires_single_qubit() {
        let joint = bell_phi_plus();
        assert!(matches!(
            joint.bloch_vector(),
            Err(Error::SingleQubitOnly { .. })
        ));
    }

    #[test]
    fn conjugate_by_identity_and_flip() {
        let rho = PureState::zero().density();
        let id = ComplexMatrix::identity(2);
        assert!(
            rho.conjugate(&id)
                .unwrap()
                .matrix()
                .max_abs_diff(rho.matrix())
                == 0.0
        );
        let flipped = rho.conjugate(&linalg::pauli_x()).unwrap();
        assert!(
            flipped
                .matrix()
                .max_abs_diff(PureState::one().density().matrix())
                == 0.0
        );
    }

    #[test]
    fn conjugate_preserves_eigenvalues() {
        let rho = DensityMatrix::from_bloch(BlochVector::new(0.2, 0.5, -0.6)).unwrap();
        let joint = rho.tensor(&PureState::plus().density()).unwrap();
        let u = pswap_unitary(0.93 * FRAC_PI_2);
        let rotated = joint.conjugate(&u).unwrap();
        let before = joint.eigenvalues();
        let after = rotated.eigenvalues();
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!((rotated.trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conjugate_rejects_bad_operators() {
        let rho = PureState::zero().density();
        assert!(matches!(
            rho.conjugate(&ComplexMatrix::identity(4)),
            Err(Error::DimensionMismatch { .. })
        ));
        let not_unitary = ComplexMatrix::identity(2).scale(Complex::new(2.0, 0.0));
        assert!(matches!(
            rho.conjugate(&not_unitary),
            Err(Error::NonUnitary { .. })
        ));
    }

    #[test]
    fn validate_catches_each_violation() {
        // Non-Hermitian.
        let m = ComplexMatrix::new(2, 2, vec![ONE, Complex::new(0.1, 0.0), ZERO, ZERO]).unwrap();
        assert!(DensityMatrix::new(m).unwrap().validate().is_err());
        // Wrong trace.
        let m = ComplexMatrix::identity(2);
        assert!(DensityMatrix::new(m).unwrap().validate().is_err());
        // Negative eigenvalue: diag(1.5, -0.5).
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = Complex::new(1.5, 0.0);
        m[(1, 1)] = Complex::new(-0.5, 0.0);
        assert!(DensityMatrix::new(m).unwrap().validate().is_err());
        // A proper state passes.
        assert!(PureState::plus().density().validate().is_ok());
    }

    #[test]
    fn to_pure_qubit_round_trips_and_rejects_mixed() {
        for state in [
            PureState::zero(),
            PureState::plus(),
            PureState::plus_i(),
            PureState::from_angles(1.1, -2.3),
        ] {
            let rho = state.density();
            let back = rho.to_pure_qubit().unwrap().density();
            assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        }
        assert!(DensityMatrix::maximally_mixed(1).to_pure_qubit().is_err());
    }

    #[test]
    fn pure_state_validation() {
        assert!(PureState::new(vec![ONE, ONE]).is_err());
        assert!(PureState::new(vec![ONE, ZERO, ZERO]).is_err());
        let five_qubits = vec![ZERO; 32];
        assert!(PureState::new(five_qubits).is_err());
        assert!(PureState::plus().tensor(&PureState::basis(4, 3)).is_err());
    }

    #[test]
    fn stabilized_is_exactly_hermitian_and_unit_trace_projection() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = Complex::new(0.7 + 1e-13, 0.0);
        m[(0, 1)] = Complex::new(0.1, 0.2 + 1e-13);
        m[(1, 0)] = Complex::new(0.1, -0.2);
        m[(1, 1)] = Complex::new(0.3, 0.0);
        let fixed = DensityMatrix::new(m).unwrap().stabilized();
        assert!(fixed.matrix().hermiticity_deviation() == 0.0);
        assert!((fixed.trace().re - 1.0).abs() < 1e-15);
    }

    fn arb_bloch_in_ball() -> impl Strategy<Value = BlochVector> {
        (
            0.0..1.0f64,
            0.0..std::f64::consts::PI,
            0.0..std::f64::consts::TAU,
        )
            .prop_map(|(r, theta, phi)| BlochVector::from_angles(theta, phi).scaled(r))
    }

    proptest! {
        #[test]
        fn bloch_round_trip_on_unit_ball(v in arb_bloch_in_ball()) {
            let rho = DensityMatrix::from_bloch(v).unwrap();
            let back = rho.bloch_vector().unwrap();
            prop_assert!(back.max_abs_diff(&v) < 1e-12);
        }

        #[test]
        fn partial_trace_output_is_valid_state(v in arb_bloch_in_ball(), w in arb_bloch_in_ball()) {
            let joint = DensityMatrix::from_bloch(v).unwrap()
                .tensor(&DensityMatrix::from_bloch(w).unwrap()).unwrap();
            let u = pswap_unitary(0.7);
            let entangled = joint.conjugate(&u).unwrap();
            for keep in [[0usize], [1usize]] {
                let reduced = entangled.partial_trace(&keep).unwrap();
                prop_assert!(reduced.validate().is_ok());
                prop_assert!((reduced.trace().re - 1.0).abs() < 1e-12);
            }
        }
    }
}
