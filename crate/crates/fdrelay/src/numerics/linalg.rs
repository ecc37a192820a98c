//! Dense complex vectors and matrices sized for link-level work (a handful of
//! antennas per node), plus a cyclic Jacobi eigensolver for Hermitian
//! matrices. This is deliberately not a general-purpose linear algebra layer;
//! only the operations the precoding and analysis code actually needs exist.

use super::NumericsError;

pub use num::complex::Complex64;

const HERMITIAN_REL_TOL: f64 = 1e-10;

/// Column vector of complex channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<Complex64>,
}

impl ComplexVector {
    /// Builds a vector from raw entries. Panics if any entry is non-finite.
    pub fn from_vec(data: Vec<Complex64>) -> Self {
        assert!(
            data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "vector entries must be finite"
        );
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); dim],
        }
    }

    /// Standard basis vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[i] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.data[i]
    }

    pub fn set(&mut self, i: usize, z: Complex64) {
        self.data[i] = z;
    }

    /// Hermitian inner product `self^H other`.
    pub fn dot(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim(), "vector dimension mismatch");
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Returns `self / ||self||`, or `None` when the norm is numerically zero.
    pub fn normalized(&self) -> Option<Self> {
        let n = self.norm();
        if n <= f64::MIN_POSITIVE * self.dim().max(1) as f64 {
            None
        } else {
            Some(self.scale(Complex64::new(1.0 / n, 0.0)))
        }
    }

    /// Rank-1 outer product `self * other^H`.
    pub fn outer(&self, other: &Self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim(), other.dim());
        for i in 0..self.dim() {
            for j in 0..other.dim() {
                m.set(i, j, self.data[i] * other.data[j].conj());
            }
        }
        m
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Panics on a size mismatch or a
    /// non-finite entry.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must equal rows*cols");
        assert!(
            data.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "matrix entries must be finite"
        );
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::from_vec(rows, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.dim(), "matrix/vector dimension mismatch");
        let mut out = ComplexVector::zeros(self.rows);
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v.get(j);
            }
            out.set(i, acc);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// True when every entry is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec((0..self.rows).map(|i| self.get(i, j)).collect())
    }
}

/// Largest eigenvalue of a Hermitian matrix together with a unit eigenvector.
#[derive(Debug, Clone)]
pub struct EigPair {
    /// Largest eigenvalue. Nonnegative for the Gram-type matrices this crate
    /// builds.
    pub value: f64,
    /// Unit-norm eigenvector, phased so its first nonzero component is
    /// real-positive.
    pub vector: ComplexVector,
}

/// Largest eigenvalue and associated unit eigenvector of a Hermitian matrix.
///
/// The input must be square and Hermitian to within `1e-10` relative
/// asymmetry in Frobenius norm. Internally a cyclic Jacobi sweep diagonalises
/// the matrix; the returned pair satisfies `||A u - lambda u|| <=
/// 1e-9 * max(1, ||A||_F)`.
pub fn hermitian_max_eig(a: &ComplexMatrix) -> Result<EigPair, NumericsError> {
    if a.rows() != a.cols() {
        return Err(NumericsError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.frobenius_norm();
    let asym = a.sub(&a.hermitian()).frobenius_norm();
    let tolerance = HERMITIAN_REL_TOL * norm;
    if asym > tolerance && norm > 0.0 {
        return Err(NumericsError::NotHermitian {
            residual: asym,
            tolerance,
        });
    }

    let n = a.rows();
    if n == 0 {
        return Err(NumericsError::Domain("empty matrix".into()));
    }
    if n == 1 {
        return Ok(EigPair {
            value: a.get(0, 0).re,
            vector: ComplexVector::basis(1, 0),
        });
    }

    // Work on a symmetrised copy so tiny asymmetries cannot bias the sweep.
    let mut m = a.add(&a.hermitian()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    const MAX_SWEEPS: usize = 64;
    let off_tol = 1e-15 * norm.max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= off_tol {
            converged = true;
            break;
        }
        for p in 0..(n - 1) {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let beta = apq.norm();
                if beta <= off_tol / (n * n) as f64 {
                    continue;
                }
                let alpha = m.get(p, p).re;
                let gamma = m.get(q, q).re;
                // Unitary 2x2 rotation zeroing the (p, q) entry:
                //   U = [ c  -s*e^{i phi} ; s*e^{-i phi}  c ],  apq = beta*e^{i phi}
                let phase = apq / Complex64::new(beta, 0.0);
                let theta = 0.5 * (2.0 * beta).atan2(alpha - gamma);
                let c = theta.cos();
                let s = theta.sin();
                let se_pos = phase * s; // s*e^{i phi}
                let se_neg = phase.conj() * s; // s*e^{-i phi}

                // Columns of M and V (right-multiplication by U).
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * c + mkq * se_neg);
                    m.set(k, q, mkq * c - mkp * se_pos);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * se_neg);
                    v.set(k, q, vkq * c - vkp * se_pos);
                }
                // Rows of M (left-multiplication by U^H).
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, mpk * c + mqk * se_pos);
                    m.set(q, k, mqk * c - mpk * se_neg);
                }
                // Keep the diagonal exactly real.
                let mpp = m.get(p, p).re;
                let mqq = m.get(q, q).re;
                m.set(p, p, Complex64::new(mpp, 0.0));
                m.set(q, q, Complex64::new(mqq, 0.0));
            }
        }
    }
    if !converged {
        // One final check: the sweeps above nearly always converge in < 15
        // passes for the matrix sizes used here.
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() > 1e-9 * norm.max(1.0) {
            return Err(NumericsError::EigNoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut best = 0usize;
    for i in 1..n {
        if m.get(i, i).re > m.get(best, best).re {
            best = i;
        }
    }
    let vector = v
        .column(best)
        .normalized()
        .expect("Jacobi rotations preserve unit columns");
    Ok(EigPair {
        value: m.get(best, best).re,
        vector: canonical_phase(&vector),
    })
}

/// Rotates a vector by a unit-modulus phase so that its first component with
/// non-negligible magnitude is real-positive. Keeps regression baselines
/// reproducible; any phase is equally valid mathematically.
pub fn canonical_phase(v: &ComplexVector) -> ComplexVector {
    let max_mag = v.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_mag == 0.0 {
        return v.clone();
    }
    for z in v.entries() {
        if z.norm() > 1e-12 * max_mag {
            return v.scale(z.conj() / Complex64::new(z.norm(), 0.0));
        }
    }
    v.clone()
}
