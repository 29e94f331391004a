//! Small dense linear algebra over `f64` and `Complex64`.
//!
//! Sized for matrices up to `2^6 x 2^6`. Everything here is pure; values can
//! be sent across threads freely.

mod eigen;
mod matrix;

pub use eigen::{gram_rank, hermitian_eig, psd_project, top_eigenpair, EigenDecomposition, TopEigenpair};
pub use matrix::{CMatrix, Matrix, RMatrix};

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;

/// Default relative tolerance for rank decisions.
pub const RANK_TOL: f64 = 1e-9;

/// Scalar field the matrix routines are generic over.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Default
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + Send
    + Sync
    + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn abs_sqr(self) -> f64;
    fn scale(self, k: f64) -> Self;

    fn abs(self) -> f64 {
        libm::sqrt(self.abs_sqr())
    }

    /// `self / |self|`, or one for zero.
    fn phase(self) -> Self {
        let a = self.abs();
        if a == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / a)
        }
    }

    fn div_scalar(self, other: Self) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_real(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn abs_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn abs(self) -> f64 {
        libm::fabs(self)
    }
    fn div_scalar(self, other: Self) -> Self {
        self / other
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn abs_sqr(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, k: f64) -> Self {
        Complex64::new(self.re * k, self.im * k)
    }
    fn div_scalar(self, other: Self) -> Self {
        self / other
    }
}

/// Euclidean inner product `<a, b>` (conjugate-linear in `a`).
pub fn inner<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

pub fn norm<T: Scalar>(v: &[T]) -> f64 {
    libm::sqrt(v.iter().map(|x| x.abs_sqr()).sum())
}
