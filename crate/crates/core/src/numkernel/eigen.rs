use alloc::vec::Vec;

use super::{Matrix, RMatrix, Scalar};
use crate::{Error, Result};

const HERMITIAN_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix<T>,
}

impl<T: Scalar> EigenDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<T> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Matrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = Matrix::zeros(n, n);
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)].scale(w);
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        self.reconstruct_with(|x| x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopEigenpair<T> {
    pub value: f64,
    pub vector: Vec<T>,
    /// Largest minus second-largest eigenvalue; zero in dimension one.
    pub gap: f64,
}

/// Cyclic Jacobi diagonalization of a Hermitian (or real symmetric) matrix.
///
/// Complex entries are handled by a phase rotation that makes the pivot
/// element real before the ordinary plane rotation. Sweeps stop once the
/// off-diagonal Frobenius norm drops below `1e-12 * ||m||_F`.
pub fn hermitian_eig<T: Scalar>(m: &Matrix<T>) -> Result<EigenDecomposition<T>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("eigendecomposition of non-square matrix"));
    }
    let n = m.rows();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let scale = m.max_abs();
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitian(defect));
    }

    // work on the exactly Hermitian part
    let mut a = Matrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()).scale(0.5));
    for i in 0..n {
        a[(i, i)] = T::from_real(a[(i, i)].re());
    }
    let mut v = Matrix::<T>::identity(n);
    let threshold = OFF_DIAGONAL_TOL * a.frobenius();

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re().total_cmp(&a[(j, j)].re()));
    let eigenvalues = order.iter().map(|&k| a[(k, k)].re()).collect();
    let eigenvectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigenDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].abs_sqr();
            }
        }
    }
    libm::sqrt(s)
}

/// One Jacobi step annihilating `a[p][q]`; accumulates the unitary into `v`.
fn rotate<T: Scalar>(a: &mut Matrix<T>, v: &mut Matrix<T>, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let r = apq.abs();
    if r == 0.0 {
        return;
    }

    // D = diag(.., conj(e) at q, ..) turns a[p][q] into the real number r
    let e = apq.phase();
    if e != T::one() {
        let ec = e.conj();
        for i in 0..n {
            a[(i, q)] = a[(i, q)] * ec;
            v[(i, q)] = v[(i, q)] * ec;
        }
        for j in 0..n {
            a[(q, j)] = e * a[(q, j)];
        }
    }

    let app = a[(p, p)].re();
    let aqq = a[(q, q)].re();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + libm::sqrt(theta * theta + 1.0))
    } else {
        -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
    };
    let c = 1.0 / libm::sqrt(t * t + 1.0);
    let s = t * c;

    for i in 0..n {
        let (aip, aiq) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = aip.scale(c) - aiq.scale(s);
        a[(i, q)] = aip.scale(s) + aiq.scale(c);
    }
    for j in 0..n {
        let (apj, aqj) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = apj.scale(c) - aqj.scale(s);
        a[(q, j)] = apj.scale(s) + aqj.scale(c);
    }
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    a[(p, p)] = T::from_real(app - t * r);
    a[(q, q)] = T::from_real(aqq + t * r);

    for i in 0..n {
        let (vip, viq) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = vip.scale(c) - viq.scale(s);
        v[(i, q)] = vip.scale(s) + viq.scale(c);
    }
}

pub fn top_eigenpair<T: Scalar>(m: &Matrix<T>) -> Result<TopEigenpair<T>> {
    let eig = hermitian_eig(m)?;
    let n = eig.dim();
    let value = eig.eigenvalues[n - 1];
    let gap = if n > 1 { value - eig.eigenvalues[n - 2] } else { 0.0 };
    Ok(TopEigenpair { value, vector: eig.vector(n - 1), gap })
}

/// Number of Gram eigenvalues above `rel_tol` times the largest one.
pub fn gram_rank<V: AsRef<[f64]>>(vectors: &[V], rel_tol: f64) -> Result<usize> {
    if vectors.is_empty() {
        return Err(Error::EmptyInput);
    }
    let dim = vectors[0].as_ref().len();
    if vectors.iter().any(|v| v.as_ref().len() != dim) {
        return Err(Error::DimensionMismatch("vectors of different dimension"));
    }
    let n = vectors.len();
    let gram = RMatrix::from_fn(n, n, |i, j| super::inner(vectors[i].as_ref(), vectors[j].as_ref()));
    let eig = hermitian_eig(&gram)?;
    let largest = eig.eigenvalues[n - 1];
    if largest <= 0.0 {
        return Ok(0);
    }
    Ok(eig.eigenvalues.iter().filter(|&&l| l > rel_tol * largest).count())
}

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to zero.
pub fn psd_project(m: &RMatrix) -> Result<RMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("psd projection of non-square matrix"));
    }
    let defect = m.hermitian_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NonSymmetric(defect));
    }
    let eig = hermitian_eig(m)?;
    let p = eig.reconstruct_with(|l| l.max(0.0));
    let n = p.rows();
    Ok(RMatrix::from_fn(n, n, |i, j| 0.5 * (p[(i, j)] + p[(j, i)])))
}
