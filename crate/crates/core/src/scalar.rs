//! Scalar abstraction shared by every numerical module.
//!
//! All of the lattice, special-function and Fock-space code is written
//! against [`Real`]. Dense Hermitian eigenproblems and matrix exponentials are
//! delegated per concrete type to `nalgebra`, so the generic code never has to
//! name `nalgebra`'s own real-number traits.

use std::fmt::{Debug, Display};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar usable by the library (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + Send + Sync + 'static
{
    /// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
    fn hermitian_eigen(matrix: DMatrix<Complex<Self>>) -> HermitianEigen<Self>;

    /// Eigenvalues only, ascending.
    fn hermitian_eigenvalues(matrix: DMatrix<Complex<Self>>) -> Vec<Self>;

    /// Dense matrix exponential (Padé approximant with scaling and squaring).
    fn matrix_exp(matrix: &DMatrix<Complex<Self>>) -> DMatrix<Complex<Self>>;
}

/// Sorted spectrum of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// Unit eigenvectors; column `j` belongs to `values[j]`.
    pub vectors: DMatrix<Complex<T>>,
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            fn hermitian_eigen(matrix: DMatrix<Complex<$t>>) -> HermitianEigen<$t> {
                let eig = nalgebra::SymmetricEigen::new(matrix);
                let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
                order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
                let values = order.iter().map(|&j| eig.eigenvalues[j]).collect();
                let n = eig.eigenvectors.nrows();
                let vectors = DMatrix::from_fn(n, order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
                HermitianEigen { values, vectors }
            }

            fn hermitian_eigenvalues(matrix: DMatrix<Complex<$t>>) -> Vec<$t> {
                let mut values: Vec<$t> = matrix.symmetric_eigenvalues().iter().copied().collect();
                values.sort_by(|a, b| a.total_cmp(b));
                values
            }

            fn matrix_exp(matrix: &DMatrix<Complex<$t>>) -> DMatrix<Complex<$t>> {
                matrix.exp()
            }
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Converts an `f64` literal into the working scalar.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// Converts a count or index into the working scalar.
#[inline]
pub(crate) fn from_i64<T: Real>(x: i64) -> T {
    T::from_i64(x).expect("integer representable in scalar type")
}

/// Lossy view of a scalar as `f64`, for error messages and reports.
#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum<T: Real> {
    sum: Complex<T>,
    carry: Complex<T>,
}

impl<T: Real> CompensatedSum<T> {
    fn step(sum: T, carry: &mut T, x: T) -> T {
        let t = sum + x;
        *carry += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        t
    }

    pub(crate) fn add(&mut self, x: Complex<T>) {
        self.sum.re = Self::step(self.sum.re, &mut self.carry.re, x.re);
        self.sum.im = Self::step(self.sum.im, &mut self.carry.im, x.im);
    }

    pub(crate) fn value(&self) -> Complex<T> {
        self.sum + self.carry
    }
}
