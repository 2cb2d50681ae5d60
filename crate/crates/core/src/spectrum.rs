//! Dense complex matrices and a cyclic Jacobi eigenvalue solver for Hermitian input.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use num_traits::Float;
use thiserror::Error;

/// Relative off-diagonal norm at which the Jacobi sweep stops.
pub const JACOBI_THRESHOLD: f64 = 1e-12;

/// Upper bound on full Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |M - M*| = {max_asymmetry:e} exceeds {tol:e}")]
    NotHermitian { max_asymmetry: f64, tol: f64 },
    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("shape mismatch: {left:?} against {right:?}")]
    Shape { left: (usize, usize), right: (usize, usize) },
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// From real row-major rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ComplexMatrix::from_fn(rows.len(), cols, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] = z;
    }

    pub(crate) fn add_at(&mut self, i: usize, j: usize, z: Complex64) {
        self.data[i * self.cols + j] += z;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SpectrumError> {
        if self.cols != other.rows {
            return Err(SpectrumError::Shape { left: self.shape(), right: other.shape() });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SpectrumError> {
        if self.shape() != other.shape() {
            return Err(SpectrumError::Shape { left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, SpectrumError> {
        if self.shape() != other.shape() {
            return Err(SpectrumError::Shape { left: self.shape(), right: other.shape() });
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|M[i][j] - conj(M[j][i])|`; square input only.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.rows;
        let mut worst = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = f64::max(worst, (self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// `P M P^T` where row and column `i` move to position `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.get(i, j));
            }
        }
        out
    }

    fn frobenius(&self) -> f64 {
        Float::sqrt(self.data.iter().map(|z| z.norm_sqr()).sum::<f64>())
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(" ")?;
                }
                let z = self.get(i, j);
                write!(f, "{:.6}{:+.6}i", z.re, z.im)?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Eigenvalues of a Hermitian matrix in nondecreasing order.
///
/// The input must satisfy `max |M - M*| <= tol`; only the upper triangle and
/// the real part of the diagonal are read after that check.
pub fn hermitian_spectrum(m: &ComplexMatrix, tol: f64) -> Result<Vec<f64>, SpectrumError> {
    if m.rows != m.cols {
        return Err(SpectrumError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    for (idx, z) in m.data.iter().enumerate() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(SpectrumError::NonFinite { row: idx / n, col: idx % n });
        }
    }
    let max_asymmetry = m.max_asymmetry();
    if max_asymmetry.is_nan() || max_asymmetry > tol {
        return Err(SpectrumError::NotHermitian { max_asymmetry, tol });
    }
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        core::cmp::Ordering::Less => m.get(i, j),
        core::cmp::Ordering::Equal => Complex64::new(m.get(i, i).re, 0.0),
        core::cmp::Ordering::Greater => m.get(j, i).conj(),
    });
    let scale = f64::max(1.0, a.frobenius());
    let target = JACOBI_THRESHOLD * scale;
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > target {
        return Err(SpectrumError::NoConvergence { sweeps: JACOBI_MAX_SWEEPS });
    }
    let mut values: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    Float::sqrt(s)
}

/// One Jacobi step zeroing `a[p][q]` via `A <- U* A U`, with
/// `U_pp = c, U_pq = s e, U_qp = -s conj(e), U_qq = c` and `e = a_pq / |a_pq|`.
fn rotate(a: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let e = apq / r;
    let app = a.get(p, p).re;
    let aqq = a.get(q, q).re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + Float::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + Float::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / Float::sqrt(1.0 + t * t);
    let s = t * c;
    let n = a.rows;
    let se = e * s;
    let sec = e.conj() * s;
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, akp * c - akq * sec);
        a.set(k, q, akp * se + akq * c);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, apk * c - aqk * se);
        a.set(q, k, apk * sec + aqk * c);
    }
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    a.set(p, p, Complex64::new(app - t * r, 0.0));
    a.set(q, q, Complex64::new(aqq + t * r, 0.0));
}

/// Largest per-index gap between two sorted spectra; `None` when lengths differ.
pub fn max_eigen_gap(a: &[f64], b: &[f64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    Some(a.iter().zip(b).map(|(x, y)| Float::abs(x - y)).fold(0.0, f64::max))
}
