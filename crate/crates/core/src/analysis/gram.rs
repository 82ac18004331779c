//! Gram matrices of coherent states over lattice windows.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fock::{coherent_fock, overlap};
use crate::lattice::{sign_factor, Lattice, LatticeIndex, LatticeWindow};
use crate::scalar::{from_i64, lit, HermitianEigen, Real};

/// `G[i, j] = ⟨α_i|α_j⟩` in window enumeration order.
#[derive(Debug, Clone)]
pub struct GramMatrix<T: Real> {
    entries: DMatrix<Complex<T>>,
    window: LatticeWindow,
    lattice: Lattice<T>,
    indices: Vec<LatticeIndex>,
}

/// Default interior buffer for null-vector tests.
pub const DEFAULT_BUFFER: u32 = 4;

pub fn gram<T: Real>(lattice: &Lattice<T>, window: &LatticeWindow) -> Result<GramMatrix<T>> {
    let indices: Vec<LatticeIndex> = window.indices().collect();
    if indices.is_empty() {
        return Err(Error::InvalidArgument("empty lattice window".into()));
    }
    let points: Vec<Complex<T>> = indices.iter().map(|&i| lattice.point(i)).collect();
    let k = points.len();
    let mut entries = DMatrix::from_fn(k, k, |i, j| if i < j { overlap(points[i], points[j]) } else { Complex::zero() });
    for i in 0..k {
        entries[(i, i)] = Complex::from(T::one());
        for j in 0..i {
            entries[(i, j)] = entries[(j, i)].conj();
        }
    }
    Ok(GramMatrix { entries, window: window.clone(), lattice: *lattice, indices })
}

impl<T: Real> GramMatrix<T> {
    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn indices(&self) -> &[LatticeIndex] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn hermitian_defect(&self) -> T {
        let k = self.len();
        let mut d = T::zero();
        for i in 0..k {
            for j in 0..k {
                d = d.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        d
    }

    pub fn eigen(&self) -> HermitianEigen<T> {
        T::hermitian_eigen(self.entries.clone())
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        T::hermitian_eigenvalues(self.entries.clone())
    }

    pub fn apply(&self, v: &DVector<Complex<T>>) -> DVector<Complex<T>> {
        &self.entries * v
    }

    /// `v†Gv / v†v`.
    pub fn rayleigh_quotient(&self, v: &DVector<Complex<T>>) -> T {
        let gv = self.apply(v);
        let num = v.iter().zip(gv.iter()).fold(Complex::zero(), |acc: Complex<T>, (a, b)| acc + a.conj() * b);
        num.re / v.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `(−1)^{m+n+mn}` over the window.
    pub fn sign_vector(&self) -> DVector<Complex<T>> {
        sign_vector(&self.indices)
    }

    /// Largest `|(Gv)_i|` over rows at least `buffer` steps inside the window.
    pub fn interior_residual(&self, v: &DVector<Complex<T>>, buffer: u32) -> T {
        let gv = self.apply(v);
        self.indices
            .iter()
            .zip(gv.iter())
            .filter(|(idx, _)| self.window.is_interior(**idx, buffer))
            .fold(T::zero(), |acc, (_, x)| acc.max(x.norm()))
    }

    /// Largest difference between closed-form entries and truncated Fock
    /// dot products, over pairs with both points inside radius `radius`.
    pub fn fock_cross_check(&self, dim: usize, radius: T) -> Result<T> {
        let chosen: Vec<usize> =
            (0..self.len()).filter(|&i| self.lattice.point(self.indices[i]).norm() <= radius).collect();
        let states = chosen
            .iter()
            .map(|&i| coherent_fock(self.lattice.point(self.indices[i]), dim))
            .collect::<Result<Vec<_>>>()?;
        let mut worst = T::zero();
        for (a, &i) in chosen.iter().enumerate() {
            for (b, &j) in chosen.iter().enumerate() {
                worst = worst.max((states[a].inner(&states[b]) - self.entries[(i, j)]).norm());
            }
        }
        Ok(worst)
    }
}

pub fn sign_vector<T: Real>(indices: &[LatticeIndex]) -> DVector<Complex<T>> {
    DVector::from_iterator(
        indices.len(),
        indices.iter().map(|&i| Complex::from(from_i64::<T>(i64::from(sign_factor(i))))),
    )
}

/// Interior residual of the sign vector against the Gram matrix of the
/// window `|m|, |n| ≤ M`, with rows restricted to `|k|, |l| ≤ M − B`.
pub fn null_vector_residual<T: Real>(lattice: &Lattice<T>, half_width: u32, buffer: u32) -> Result<T> {
    lattice.require_critical()?;
    if !(buffer >= 2 && half_width > buffer) {
        return Err(Error::InvalidArgument(format!("need M > B >= 2, got M = {half_width}, B = {buffer}")));
    }
    let g = gram(lattice, &LatticeWindow::new(half_width))?;
    Ok(g.interior_residual(&g.sign_vector(), buffer))
}

/// One row of an area sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow<T> {
    pub area: T,
    pub min_eig: T,
    pub max_eig: T,
    pub sign_vector_quotient: T,
}

/// Extreme Gram eigenvalues for the shape of `shape` rescaled to each area.
pub fn gram_spectrum_sweep<T: Real>(shape: &Lattice<T>, areas: &[T], half_width: u32) -> Result<Vec<SpectrumRow<T>>> {
    if areas.is_empty() {
        return Err(Error::InvalidArgument("no areas given".into()));
    }
    let window = LatticeWindow::new(half_width);
    areas
        .iter()
        .map(|&area| {
            let lattice = shape.scale_to_area(area)?;
            let g = gram(&lattice, &window)?;
            let ev = g.eigenvalues();
            Ok(SpectrumRow {
                area,
                min_eig: ev[0],
                max_eig: ev[ev.len() - 1],
                sign_vector_quotient: g.rayleigh_quotient(&g.sign_vector()),
            })
        })
        .collect()
}

/// Gram matrix of the window closed into a torus of period `2M + 1`.
///
/// At cell area π the sign-corrected Gram kernel depends only on index
/// differences, `(−1)^{F(a,b)} e^{−|α_ab|²/2}` with `(a, b) = (m−k, n−l)`.
/// Summing it over periodic images gives a block-circulant matrix, which is
/// then conjugated back by the signs.
pub fn periodized_gram<T: Real>(lattice: &Lattice<T>, half_width: u32) -> Result<GramMatrix<T>> {
    lattice.require_critical()?;
    let window = LatticeWindow::new(half_width);
    let indices: Vec<LatticeIndex> = window.indices().collect();
    let period = 2 * i64::from(half_width) + 1;
    let images = 2i64;
    let half = lit::<T>(0.5);
    let kernel = |a: i64, b: i64| {
        let mut s = T::zero();
        for i in -images..=images {
            for j in -images..=images {
                let idx = LatticeIndex::new(a + i * period, b + j * period);
                let w = (-lattice.point(idx).norm_sqr() * half).exp();
                s += if sign_factor(idx) < 0 { -w } else { w };
            }
        }
        s
    };
    let signs: Vec<T> = indices.iter().map(|&i| from_i64(i64::from(sign_factor(i)))).collect();
    let k = indices.len();
    let entries = DMatrix::from_fn(k, k, |r, c| {
        let d = indices[c] - indices[r];
        Complex::from(signs[r] * signs[c] * kernel(d.m, d.n))
    });
    Ok(GramMatrix { entries, window, lattice: *lattice, indices })
}

/// Spectral summary of a Gram matrix near its null space.
#[derive(Debug, Clone, PartialEq)]
pub struct NullSpaceSummary<T> {
    /// Lowest eigenvalues, ascending.
    pub lowest: Vec<T>,
    /// Eigenvalues below the threshold.
    pub near_null_count: usize,
    /// `|⟨u, s⟩| / (‖u‖‖s‖)` for the lowest eigenvector `u` and sign vector `s`.
    pub sign_overlap: T,
}

pub fn null_space_summary<T: Real>(g: &GramMatrix<T>, threshold: T) -> NullSpaceSummary<T> {
    let eig = g.eigen();
    let s = g.sign_vector();
    let u = eig.vectors.column(0);
    let dot = u.iter().zip(s.iter()).fold(Complex::zero(), |acc: Complex<T>, (a, b)| acc + a.conj() * b);
    let norm = |v: &mut dyn Iterator<Item = Complex<T>>| v.fold(T::zero(), |acc, x| acc + x.norm_sqr()).sqrt();
    let sign_overlap = dot.norm() / (norm(&mut u.iter().copied()) * norm(&mut s.iter().copied()));
    NullSpaceSummary {
        lowest: eig.values.iter().take(4).copied().collect(),
        near_null_count: eig.values.iter().filter(|&&v| v < threshold).count(),
        sign_overlap,
    }
}

/// Uniqueness of the dependence relation at cell area π, on the torus-closed
/// window and on the literal window.
#[derive(Debug, Clone, PartialEq)]
pub struct UniquenessProbe<T> {
    pub periodized: NullSpaceSummary<T>,
    pub window: NullSpaceSummary<T>,
}

pub fn uniqueness_probe<T: Real>(lattice: &Lattice<T>, half_width: u32, threshold: T) -> Result<UniquenessProbe<T>> {
    let periodized = null_space_summary(&periodized_gram(lattice, half_width)?, threshold);
    let window = null_space_summary(&gram(lattice, &LatticeWindow::new(half_width))?, threshold);
    Ok(UniquenessProbe { periodized, window })
}
