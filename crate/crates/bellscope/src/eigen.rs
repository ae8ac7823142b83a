//! Hermitian eigensolver: cyclic Jacobi with complex rotations.
//!
//! Dimensions here never exceed [`crate::matrix::DIM_CAP`], where Jacobi is
//! simple, robust and dependency-free. Sweeps run in a fixed cyclic order, so
//! the decomposition is deterministic for a fixed input.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, HERMITIAN_TOL};

/// Convergence target: off-diagonal Frobenius mass below
/// `1e-13 * max(1, ||M||_F)`. The relative factor keeps the sweep convergent
/// for matrices of norm well above one (f64 rounding floors the absolute
/// off-diagonal mass near `n * eps * ||M||`).
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Hard sweep cap; Jacobi converges quadratically long before this.
const MAX_SWEEPS: usize = 128;

/// Result of diagonalizing a Hermitian matrix.
///
/// `eigenvalues` are ascending; the k-th column of `eigenvectors` is the
/// orthonormal eigenvector for `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors.get(i, k)).collect()
    }

    /// Largest eigenvalue.
    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("dim >= 1")
    }

    /// Reconstruct `V diag(lambda) V'` (test/diagnostic helper).
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvectors.dim();
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::ZERO;
                for k in 0..n {
                    s += self.eigenvectors.get(i, k)
                        * Complex64::new(self.eigenvalues[k], 0.0)
                        * self.eigenvectors.get(j, k).conj();
                }
                out.set(i, j, s);
            }
        }
        out
    }
}

fn require_hermitian(m: &ComplexMatrix) -> Result<()> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: HERMITIAN_TOL,
        });
    }
    Ok(())
}

#[inline]
fn off_diagonal_mass(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// One complex Jacobi rotation zeroing the (p,q) entry of the Hermitian
/// working matrix `a`; accumulates the rotation into `v` when present.
#[inline]
fn rotate(a: &mut [Complex64], v: Option<&mut [Complex64]>, n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let tau = (aqq - app) / (2.0 * r);
    // Smaller-angle root of t^2 + 2 tau t - 1 = 0.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase * s;

    // Right multiplication by G: columns p and q.
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp * c - akq * s_phase.conj();
        a[k * n + q] = akp * s_phase + akq * c;
    }
    // Left multiplication by G-adjoint: rows p and q.
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk * c - aqk * s_phase;
        a[q * n + k] = apk * s_phase.conj() + aqk * c;
    }
    // Pin the algebraic zeros and real diagonal against rounding drift.
    a[p * n + q] = Complex64::ZERO;
    a[q * n + p] = Complex64::ZERO;
    a[p * n + p] = Complex64::new(a[p * n + p].re, 0.0);
    a[q * n + q] = Complex64::new(a[q * n + q].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp * c - vkq * s_phase.conj();
            v[k * n + q] = vkp * s_phase + vkq * c;
        }
    }
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, Option<ComplexMatrix>) {
    let n = m.dim();
    let mut a = m.entries().to_vec();
    let mut v = if want_vectors {
        Some(ComplexMatrix::identity(n))
    } else {
        None
    };
    let tol = OFF_DIAGONAL_TOL * m.frobenius_norm().max(1.0);

    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a, n) < tol {
            break;
        }
        // Skip pivots too small to matter; threshold keeps one sweep from
        // spinning on noise while remaining deterministic.
        let skip = tol / (n as f64 * 8.0);
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p * n + q].norm() > skip {
                    let vs = v.as_mut().map(|m| m.entries_mut());
                    rotate(&mut a, vs, n, p, q);
                }
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    if let Some(vm) = v {
        // Sort ascending, permuting eigenvector columns alongside.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eigenvalues[i].total_cmp(&eigenvalues[j]));
        let sorted: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
        let mut cols = ComplexMatrix::zeros(n);
        for (new_col, &old_col) in order.iter().enumerate() {
            for row in 0..n {
                cols.set(row, new_col, vm.get(row, old_col));
            }
        }
        (sorted, Some(cols))
    } else {
        eigenvalues.sort_by(f64::total_cmp);
        (eigenvalues, None)
    }
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Fails if the input misses the Hermiticity tolerance (inputs are validated,
/// never silently symmetrized).
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    require_hermitian(m)?;
    let (eigenvalues, vectors) = jacobi(m, true);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors: vectors.expect("vectors requested"),
    })
}

/// Eigenvalues only (ascending); cheaper than [`hermitian_eigen`] because no
/// eigenvector accumulation happens. Used in optimizer hot paths.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    require_hermitian(m)?;
    Ok(jacobi(m, false).0)
}

/// Largest singular value.
///
/// For a Hermitian input this is `max |eigenvalue|`; otherwise it is computed
/// as the square root of the top eigenvalue of `M' M`.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    if m.is_hermitian(HERMITIAN_TOL) {
        let vals = jacobi(m, false).0;
        Ok(vals.iter().fold(0.0_f64, |acc, &l| acc.max(l.abs())))
    } else {
        let gram = m.adjoint().matmul(m)?;
        let vals = jacobi(&gram, false).0;
        Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
    }
}
