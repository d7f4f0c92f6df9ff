//! Scalar figures of merit: fidelity, entropy, coherence, trace distance, the
//! trace-distance memory measure, and Pearson correlation over sliding
//! windows.

use crate::error::Error;
use crate::linalg::hermitian_eigenvalues;
use crate::state::{DensityMatrix, PureState};
use crate::{tol, Result};

/// Qubit fidelity, `Tr(rho1 rho2) + 2 sqrt(det rho1 det rho2)`.
///
/// Symmetric, 1 for identical states, 0 for orthogonal pure states. Only
/// defined for single qubits; use [`fidelity_with_pure`] for larger registers
/// against a pure reference.
pub fn fidelity_qubit(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    for rho in [rho1, rho2] {
        if rho.num_qubits() != 1 {
            return Err(Error::SingleQubitOnly {
                op: "fidelity_qubit",
                num_qubits: rho.num_qubits(),
                hint: " (use fidelity_with_pure for larger registers)",
            });
        }
    }
    let overlap = product_trace(rho1, rho2);
    // det of a Hermitian 2x2 is real; clamp fp-negative dets of
    // nearly pure states to zero before the square root.
    let d1 = qubit_det(rho1).max(0.0);
    let d2 = qubit_det(rho2).max(0.0);
    Ok(overlap + 2.0 * (d1 * d2).sqrt())
}

/// `<psi| rho |psi>`: fidelity of an arbitrary state against a pure
/// reference. Coincides with [`fidelity_qubit`] when `rho` is one qubit,
/// since a pure reference has zero determinant.
pub fn fidelity_with_pure(rho: &DensityMatrix, psi: &PureState) -> Result<f64> {
    rho.matrix_element(psi)
}

/// Von Neumann entropy `-Tr rho ln rho` (natural logarithm).
///
/// Eigenvalues within spectral tolerance of zero (including slightly
/// negative ones) contribute nothing; the stored state is never altered.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(rho.matrix())
        .into_iter()
        .filter(|&lambda| lambda > 0.0)
        .map(|lambda| -lambda * lambda.ln())
        .sum()
}

/// l1 norm of coherence: sum of moduli of all off-diagonal entries in the
/// computational basis.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let d = rho.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                sum += m[(i, j)].norm();
            }
        }
    }
    sum
}

/// Trace distance `0.5 ||rho1 - rho2||_1`, via the eigenvalues of the
/// Hermitian difference.
pub fn trace_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    let diff = rho1.matrix().sub(rho2.matrix())?;
    Ok(0.5
        * hermitian_eigenvalues(&diff)
            .into_iter()
            .map(f64::abs)
            .sum::<f64>())
}

fn product_trace(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    let (a, b) = (rho1.matrix(), rho2.matrix());
    let d = rho1.dim();
    let mut sum = 0.0;
    for i in 0..d {
        for j in 0..d {
            sum += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    sum
}

fn qubit_det(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    m[(0, 0)].re * m[(1, 1)].re - m[(0, 1)].norm_sqr()
}

/// Trace distances indexed by collision number.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceSeries {
    values: Vec<f64>,
}

impl DistanceSeries {
    /// Wrap a series, checking every value lies in `[0, 1]` up to structural
    /// tolerance.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || !(-tol::STRUCTURAL..=1.0 + tol::STRUCTURAL).contains(&v) {
                return Err(Error::InvalidState(format!(
                    "trace distance {v} at index {i} outside [0, 1]"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when no increment exceeds the floating-point floor.
    pub fn is_monotone_non_increasing(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[1] - w[0] <= tol::INCREMENT_FLOOR)
    }

    /// Largest single increment in the series (0 for length < 2).
    pub fn max_increment(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }
}

/// Sum of all positive trace-distance increments, the discretized
/// information-backflow measure for a fixed initial pair.
///
/// Increments at or below [`tol::INCREMENT_FLOOR`] count as zero, so a series
/// that decays monotonically up to floating-point ripple scores exactly 0.
pub fn blp_measure(series: &DistanceSeries) -> Result<f64> {
    if series.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            min: 2,
        });
    }
    let total: f64 = series
        .values()
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|&inc| inc > tol::INCREMENT_FLOOR)
        .sum();
    // An empty sum is -0.0; report a plain zero.
    Ok(total.max(0.0))
}

/// Running cumulative sum of positive increments; same floor as
/// [`blp_measure`]. Entry `i` covers increments up to collision `i`, so the
/// first entry is 0 and the last equals the full measure.
pub fn running_blp(series: &DistanceSeries) -> Vec<f64> {
    let mut out = Vec::with_capacity(series.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in series.values().windows(2) {
        let inc = w[1] - w[0];
        if inc > tol::INCREMENT_FLOOR {
            acc += inc;
        }
        out.push(acc);
    }
    out
}

/// Pearson linear correlation of two equal-length series.
///
/// Returns `Ok(None)` when either series is constant: the coefficient is
/// undefined there, and windowed consumers render such windows as gaps
/// rather than fabricating a value.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::SeriesTooShort {
            len: x.len(),
            min: 2,
        });
    }
    if is_constant(x) || is_constant(y) {
        return Ok(None);
    }
    let n = x.len() as f64;
    let mean_x: f64 = x.iter().sum::<f64>() / n;
    let mean_y: f64 = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some(sxy / (sxx.sqrt() * syy.sqrt())))
}

fn is_constant(values: &[f64]) -> bool {
    values.iter().all(|&v| v == values[0])
}

/// Pearson coefficients over left-aligned sliding windows.
#[derive(Debug, Clone, PartialEq)]
pub struct PearsonSeries {
    window_width: usize,
    stride: usize,
    values: Vec<(usize, Option<f64>)>,
}

impl PearsonSeries {
    pub fn window_width(&self) -> usize {
        self.window_width
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    /// `(window start index, coefficient)` pairs; `None` marks an undefined
    /// (constant-input) window.
    pub fn values(&self) -> &[(usize, Option<f64>)] {
        &self.values
    }

    /// Defined windows only.
    pub fn defined(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.values
            .iter()
            .filter_map(|&(start, c)| c.map(|v| (start, v)))
    }

    /// The last window with a defined coefficient.
    pub fn last_defined(&self) -> Option<(usize, f64)> {
        self.defined().last()
    }

    /// The trailing `count` defined coefficients, oldest first.
    pub fn tail_defined(&self, count: usize) -> Vec<(usize, f64)> {
        let defined: Vec<_> = self.defined().collect();
        let skip = defined.len().saturating_sub(count);
        defined[skip..].to_vec()
    }
}

/// Pearson correlation over windows `[k*stride, k*stride + width)` for every
/// window that fits; trailing partial windows are dropped, never padded.
pub fn windowed_pearson(
    x: &[f64],
    y: &[f64],
    width: usize,
    stride: usize,
) -> Result<PearsonSeries> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if width < 2 || width > x.len() {
        return Err(Error::WindowTooWide {
            width,
            len: x.len(),
        });
    }
    if stride == 0 {
        return Err(Error::Shape("window stride must be at least 1".into()));
    }
    let mut values = Vec::new();
    let mut start = 0usize;
    while start + width <= x.len() {
        let c = pearson(&x[start..start + width], &y[start..start + width])?;
        values.push((start, c));
        start += stride;
    }
    Ok(PearsonSeries {
        window_width: width,
        stride,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::pswap_unitary;
    use crate::state::BlochVector;
    use crate::Error;
    use proptest::prelude::*;
    use std::f64::consts::TAU;

    fn qubit(x: f64, y: f64, z: f64) -> DensityMatrix {
        DensityMatrix::from_bloch(BlochVector::new(x, y, z)).unwrap()
    }

    #[test]
    fn fidelity_of_identical_pure_states_is_one() {
        let rho = PureState::plus_i().density();
        assert!((fidelity_qubit(&rho, &rho).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_of_orthogonal_pure_states_is_zero() {
        let f = fidelity_qubit(&PureState::zero().density(), &PureState::one().density()).unwrap();
        assert!(f.abs() < 1e-14);
    }

    #[test]
    fn fidelity_of_plus_and_zero_is_half() {
        let f = fidelity_qubit(&PureState::plus().density(), &PureState::zero().density()).unwrap();
        assert!((f - 0.5).abs() < 1e-14);
    }

    #[test]
    fn fidelity_rejects_larger_registers_with_pointer() {
        let joint = PureState::zero()
            .tensor(&PureState::zero())
            .unwrap()
            .density();
        let err = fidelity_qubit(&joint, &joint).unwrap_err();
        assert!(err.to_string().contains("fidelity_with_pure"));
    }

    #[test]
    fn fidelity_with_pure_examples() {
        let psi = PureState::plus().tensor(&PureState::plus_i()).unwrap();
        assert!((fidelity_with_pure(&psi.density(), &psi).unwrap() - 1.0).abs() < 1e-14);
        let mixed = DensityMatrix::maximally_mixed(2);
        let basis = PureState::basis(2, 0);
        assert!((fidelity_with_pure(&mixed, &basis).unwrap() - 0.25).abs() < 1e-15);
        assert!(fidelity_with_pure(&mixed, &PureState::zero()).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert!(von_neumann_entropy(&PureState::plus().density()).abs() < 1e-12);
        let half = von_neumann_entropy(&DensityMatrix::maximally_mixed(1));
        assert!((half - std::f64::consts::LN_2).abs() < 1e-14);
        // diag(0.75, 0.25): value computed independently.
        let rho = qubit(0.0, 0.0, 0.5);
        assert!((von_neumann_entropy(&rho) - 0.5623351446188083).abs() < 1e-14);
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(l1_coherence(&PureState::zero().density()), 0.0);
        assert!((l1_coherence(&PureState::plus().density()) - 1.0).abs() < 1e-14);
        // Off-diagonals of the +y state are -+ i/2: moduli still sum to 1.
        assert!((l1_coherence(&PureState::plus_i().density()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = PureState::zero().density();
        let one = PureState::one().density();
        let plus = PureState::plus().density();
        assert_eq!(trace_distance(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-14);
        // Orthogonal Bloch directions: D = 1/sqrt(2).
        assert!(
            (trace_distance(&zero, &plus).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14
        );
        assert!(trace_distance(&zero, &DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn blp_measure_examples() {
        let monotone = DistanceSeries::new(vec![1.0, 0.8, 0.5, 0.5, 0.2]).unwrap();
        assert_eq!(blp_measure(&monotone).unwrap(), 0.0);
        let revivals = DistanceSeries::new(vec![0.5, 0.3, 0.4, 0.2, 0.25]).unwrap();
        assert!((blp_measure(&revivals).unwrap() - 0.15).abs() < 1e-12);
        let single = DistanceSeries::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert!((blp_measure(&single).unwrap() - 1.0).abs() < 1e-15);
        let short = DistanceSeries::new(vec![0.5]).unwrap();
        assert!(matches!(
            blp_measure(&short),
            Err(Error::SeriesTooShort { .. })
        ));
    }

    #[test]
    fn blp_measure_ignores_float_ripple() {
        let series = DistanceSeries::new(vec![0.5, 0.5 + 5e-13, 0.5 - 1e-13]).unwrap();
        assert_eq!(blp_measure(&series).unwrap(), 0.0);
        assert!(series.is_monotone_non_increasing());
    }

    #[test]
    fn blp_measure_invariant_under_monotone_tail() {
        let base = vec![0.5, 0.3, 0.4, 0.2, 0.25];
        let mut extended = base.clone();
        extended.extend([0.25, 0.2, 0.1, 0.05, 0.05]);
        let a = blp_measure(&DistanceSeries::new(base).unwrap()).unwrap();
        let b = blp_measure(&DistanceSeries::new(extended).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn running_blp_accumulates_to_total() {
        let series = DistanceSeries::new(vec![0.5, 0.3, 0.4, 0.2, 0.25]).unwrap();
        let running = running_blp(&series);
        assert_eq!(running.len(), series.len());
        assert_eq!(running[0], 0.0);
        assert_eq!(*running.last().unwrap(), blp_measure(&series).unwrap());
        assert!(running.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn distance_series_rejects_out_of_range() {
        assert!(DistanceSeries::new(vec![0.5, 1.1]).is_err());
        assert!(DistanceSeries::new(vec![-0.1]).is_err());
        assert!(DistanceSeries::new(vec![f64::NAN]).is_err());
    }

    /// Second, independently coded Pearson evaluation: single pass over
    /// products, means subtracted algebraically at the end.
    fn pearson_reference(x: &[f64], y: &[f64]) -> f64 {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let syy: f64 = y.iter().map(|v| v * v).sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0];
        assert!((pearson(&x, &x).unwrap().unwrap() - 1.0).abs() < 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &neg).unwrap().unwrap() + 1.0).abs() < 1e-15);
        let y = [2.0, 4.0, 6.1];
        let got = pearson(&x, &y).unwrap().unwrap();
        assert!((got - 0.9999008674099175).abs() < 1e-12);
        assert!((got - pearson_reference(&x, &y)).abs() < 1e-12);
    }

    #[test]
    fn pearson_undefined_for_constant_series() {
        let flat = [0.1, 0.1, 0.1];
        let varying = [1.0, 2.0, 3.0];
        assert_eq!(pearson(&flat, &varying).unwrap(), None);
        assert_eq!(pearson(&varying, &flat).unwrap(), None);
        assert!(pearson(&[1.0], &[1.0]).is_err());
        assert!(pearson(&[1.0, 2.0], &[1.0]).is_err());
    }

    #[test]
    fn windowed_pearson_of_exact_antiphase_is_minus_one() {
        let x: Vec<f64> = (0..400).map(|n| (TAU * n as f64 / 100.0).sin()).collect();
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        let series = windowed_pearson(&x, &y, 100, 50).unwrap();
        assert_eq!(series.values().len(), 7);
        for (start, c) in series.defined() {
            assert!((c + 1.0).abs() < 1e-9, "window {start}: {c}");
        }
    }

    #[test]
    fn windowed_pearson_degenerate_window_equals_plain_pearson() {
        let x = [0.0, 1.0, 0.5, -0.3, 0.9];
        let y = [0.2, -0.7, 0.4, 0.1, -0.2];
        let series = windowed_pearson(&x, &y, x.len(), 3).unwrap();
        assert_eq!(series.values().len(), 1);
        assert_eq!(series.values()[0].0, 0);
        assert_eq!(series.values()[0].1, pearson(&x, &y).unwrap());
    }

    #[test]
    fn windowed_pearson_of_quarter_phase_shift_vanishes() {
        // x = sin, y = cos over ten full periods per window. Periodic-rule
        // quadrature of the correlation integral sin * cos over whole periods
        // is exact for trigonometric polynomials and gives zero; the sampled
        // coefficient must agree.
        let period = 100usize;
        let len = 1000usize;
        let x: Vec<f64> = (0..len)
            .map(|n| (TAU * n as f64 / period as f64).sin())
            .collect();
        let y: Vec<f64> = (0..len)
            .map(|n| (TAU * n as f64 / period as f64).cos())
            .collect();
        let quadrature: f64 = (0..len)
            .map(|n| {
                let t = TAU * n as f64 / period as f64;
                t.sin() * t.cos()
            })
            .sum::<f64>()
            / len as f64;
        assert!(quadrature.abs() < 1e-9, "{quadrature}");
        let series = windowed_pearson(&x, &y, len, 1).unwrap();
        let c = series.values()[0].1.unwrap();
        // Unit-amplitude sinusoids have variance 1/2, so the coefficient is
        // twice the correlation integral.
        assert!((c - 2.0 * quadrature).abs() < 1e-9, "{c}");
        assert!(c.abs() < 1e-9);
    }

    #[test]
    fn windowed_pearson_window_geometry() {
        let x: Vec<f64> = (0..250).map(|n| (n as f64).sin()).collect();
        let series = windowed_pearson(&x, &x, 100, 50).unwrap();
        let starts: Vec<usize> = series.values().iter().map(|(s, _)| *s).collect();
        assert_eq!(starts, vec![0, 50, 100, 150]);
        assert!(windowed_pearson(&x, &x, 251, 50).is_err());
        assert!(windowed_pearson(&x, &x, 100, 0).is_err());
    }

    #[test]
    fn coherence_invariant_under_diagonal_unitary() {
        let rho = qubit(0.6, -0.3, 0.2);
        let mut phase = crate::linalg::ComplexMatrix::zeros(2, 2);
        phase[(0, 0)] = num_complex::Complex::from_polar(1.0, 0.9);
        phase[(1, 1)] = num_complex::Complex::from_polar(1.0, -1.7);
        let rotated = rho.conjugate(&phase).unwrap();
        assert!((l1_coherence(&rotated) - l1_coherence(&rho)).abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn fidelity_is_symmetric(
            (x1, y1, z1) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
            (x2, y2, z2) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
        ) {
            let a = qubit(x1, y1, z1);
            let b = qubit(x2, y2, z2);
            let f_ab = fidelity_qubit(&a, &b).unwrap();
            let f_ba = fidelity_qubit(&b, &a).unwrap();
            prop_assert!((f_ab - f_ba).abs() < 1e-13);
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f_ab));
        }

        #[test]
        fn trace_distance_triangle_inequality(
            (x1, y1, z1) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
            (x2, y2, z2) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
            (x3, y3, z3) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
        ) {
            let a = qubit(x1, y1, z1);
            let b = qubit(x2, y2, z2);
            let c = qubit(x3, y3, z3);
            let ab = trace_distance(&a, &b).unwrap();
            let bc = trace_distance(&b, &c).unwrap();
            let ac = trace_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-10);
            prop_assert!((trace_distance(&b, &a).unwrap() - ab).abs() < 1e-14);
        }

        #[test]
        fn pearson_affine_invariance(
            data in proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5..40),
            a in 0.1..5.0f64,
            b in -3.0..3.0f64,
        ) {
            let x: Vec<f64> = data.iter().map(|(u, _)| *u).collect();
            let y: Vec<f64> = data.iter().map(|(_, v)| *v).collect();
            if let (Ok(Some(base)), scaled) = (pearson(&x, &y), x.iter().map(|v| a * v + b).collect::<Vec<f64>>()) {
                if let Ok(Some(same)) = pearson(&scaled, &y) {
                    prop_assert!((same - base).abs() < 1e-12);
                }
                let flipped: Vec<f64> = x.iter().map(|v| -a * v + b).collect();
                if let Ok(Some(neg)) = pearson(&flipped, &y) {
                    prop_assert!((neg + base).abs() < 1e-12);
                }
            }
        }

        #[test]
        fn entropy_invariant_under_conjugation(
            (x, y, z) in (-0.57..0.57f64, -0.57..0.57f64, -0.57..0.57f64),
            gamma in 0.0..1.5f64,
        ) {
            let rho = qubit(x, y, z).tensor(&qubit(-x, z, y)).unwrap();
            let rotated = rho.conjugate(&pswap_unitary(gamma)).unwrap();
            prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() < 1e-10);
        }
    }
}
