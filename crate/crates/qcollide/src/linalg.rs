//! Dense complex linear algebra on small Hilbert spaces.
//!
//! Everything here is sized for registers of at most four qubits, so matrices
//! are at most 16x16 and stored dense in row-major order. No attempt is made
//! at sparsity or blocking; clarity and determinism win at these dimensions.

use num_complex::Complex;

use crate::error::Error;
use crate::Result;

/// Double-precision complex scalar used throughout the crate.
pub type C64 = Complex<f64>;

pub(crate) const ZERO: C64 = Complex::new(0.0, 0.0);
pub(crate) const ONE: C64 = Complex::new(1.0, 0.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Build a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Shape("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Build row by row from a closure.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = Self::zeros(n, m);
        for i in 0..n {
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                for j in 0..m {
                    out.data[i * m + j] += a * other.data[l * m + j];
                }
            }
        }
        Ok(out)
    }

    /// Apply to a state vector.
    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect())
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum deviation of `self * self†` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let prod = self.matmul(&self.adjoint()).expect("square");
        prod.max_abs_diff(&Self::identity(self.rows))
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.is_square() && self.unitarity_deviation() <= tolerance
    }

    /// Maximum elementwise modulus of `self - self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut max = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                max = max.max(d);
            }
        }
        max
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                left: self.rows * self.cols,
                right: other.rows * other.cols,
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product. Dimensions multiply; the left factor owns the most
/// significant part of the row/column index.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows() * b.rows();
    let cols = a.cols() * b.cols();
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ia in 0..a.rows() {
        for ja in 0..a.cols() {
            let f = a[(ia, ja)];
            if f == ZERO {
                continue;
            }
            for ib in 0..b.rows() {
                for jb in 0..b.cols() {
                    out[(ia * b.rows() + ib, ja * b.cols() + jb)] = f * b[(ib, jb)];
                }
            }
        }
    }
    out
}

/// Pauli X.
pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap()
}

/// Pauli Y.
pub fn pauli_y() -> ComplexMatrix {
    let i = Complex::new(0.0, 1.0);
    ComplexMatrix::new(2, 2, vec![ZERO, -i, i, ZERO]).unwrap()
}

/// Pauli Z.
pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![ONE, ZERO, ZERO, -ONE]).unwrap()
}

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// 1x1 and 2x2 are closed-form; larger matrices go through a cyclic complex
/// Jacobi iteration. The input is assumed Hermitian (callers check where it
/// matters); only the upper triangle and the real diagonal are trusted.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    debug_assert!(m.is_square());
    let n = m.rows();
    match n {
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)].norm();
            let mid = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
            vec![mid - rad, mid + rad]
        }
        _ => jacobi_eigenvalues(m),
    }
}

fn jacobi_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let mut a: Vec<C64> = m.entries().to_vec();
    let idx = |i: usize, j: usize| i * n + j;

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let target = (1e-15 * scale) * (1e-15 * scale);

    for _sweep in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[idx(p, q)].norm_sqr())
            .sum();
        if off <= target {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let g = a[idx(p, q)];
                let r = g.norm();
                if r <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = g / r;
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                // Real Jacobi rotation on the phase-stripped 2x2 block.
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Combined unitary R = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                // on the (p, q) plane; apply A <- R† A R.
                let s_conj_phase = phase.conj() * s;
                let c_conj_phase = phase.conj() * c;
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = akp * c - akq * s_conj_phase;
                    a[idx(k, q)] = akp * s + akq * c_conj_phase;
                }
                let s_phase = phase * s;
                let c_phase = phase * c;
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = apk * c - aqk * s_phase;
                    a[idx(q, k)] = apk * s + aqk * c_phase;
                }
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[idx(i, i)].re).collect();
    eig.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    eig
}
