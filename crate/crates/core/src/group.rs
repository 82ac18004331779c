//! Displacement operators on a truncated number basis and the discrete
//! subgroup generated by a critical lattice.
//!
//! Residuals are measured as the largest entry modulus on the leading
//! `N/2` block, where truncation of the generator has not yet reached.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::{coherent_fock, FockVector};
use crate::lattice::{cocycle_b, parity_sign, sign_factor, Lattice, LatticeIndex};
use crate::scalar::{from_i64, lit, Real};

/// Extra number states beyond the coherent sizing rule, so that the leading
/// block of `exp` of the truncated generator is unitary to working precision.
pub const UNITARITY_BUFFER: usize = 8;

/// Smallest truncation accepted by [`displacement`].
pub fn displacement_dimension<T: Real>(alpha_abs: T) -> usize {
    let r = alpha_abs + lit(4.0);
    (r * r).ceil().to_usize().unwrap_or(usize::MAX).saturating_add(UNITARITY_BUFFER)
}

/// `D(α)` truncated to the first `N` number states.
#[derive(Debug, Clone, PartialEq)]
pub struct DisplacementMatrix<T: Real> {
    alpha: Complex<T>,
    entries: DMatrix<Complex<T>>,
}

impl<T: Real> DisplacementMatrix<T> {
    pub fn alpha(&self) -> Complex<T> {
        self.alpha
    }

    pub fn entries(&self) -> &DMatrix<Complex<T>> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex<T>> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn apply(&self, state: &FockVector<T>) -> FockVector<T> {
        let mut v = DVector::<Complex<T>>::zeros(self.dim());
        for (i, c) in state.coeffs().iter().take(self.dim()).enumerate() {
            v[i] = *c;
        }
        FockVector::new((&self.entries * v).iter().copied().collect())
    }

    /// `‖D†D − I‖` on the leading block.
    pub fn unitarity_defect(&self) -> T {
        let p = self.entries.transpose().map(|x| x.conj()) * &self.entries;
        let id = DMatrix::<Complex<T>>::identity(self.dim(), self.dim());
        block_max_abs(&(p - id), leading_block(self.dim()))
    }
}

/// Size of the block on which operator residuals are measured.
pub fn leading_block(n: usize) -> usize {
    (n / 2).max(1)
}

pub(crate) fn block_max_abs<T: Real>(m: &DMatrix<Complex<T>>, k: usize) -> T {
    let k = k.min(m.nrows()).min(m.ncols());
    let mut out = T::zero();
    for j in 0..k {
        for i in 0..k {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

fn vector_max_abs<T: Real>(a: &[Complex<T>], b: &[Complex<T>], k: usize) -> T {
    a.iter().zip(b).take(k).fold(T::zero(), |acc, (x, y)| acc.max((x - y).norm()))
}

/// Truncated `αa† − ᾱa` with `a_{n−1,n} = √n`.
pub fn generator<T: Real>(alpha: Complex<T>, n: usize) -> DMatrix<Complex<T>> {
    let mut g = DMatrix::<Complex<T>>::zeros(n, n);
    for k in 1..n {
        let s = from_i64::<T>(k as i64).sqrt();
        g[(k, k - 1)] = alpha * s;
        g[(k - 1, k)] = -alpha.conj() * s;
    }
    g
}

/// `exp(αa† − ᾱa)` on `N` number states.
pub fn displacement<T: Real>(alpha: Complex<T>, n: usize) -> Result<DisplacementMatrix<T>> {
    let required = displacement_dimension(alpha.norm());
    if n < required {
        return Err(Error::TruncationInsufficient { required, got: n });
    }
    Ok(DisplacementMatrix { alpha, entries: T::matrix_exp(&generator(alpha, n)) })
}

/// `e^{i Im(α₂ ᾱ₁)}`, the phase in `D(α₂)D(α₁) = e^{i Im(α₂ᾱ₁)} D(α₂+α₁)`.
pub fn multiplication_phase<T: Real>(alpha2: Complex<T>, alpha1: Complex<T>) -> Complex<T> {
    Complex::new(T::zero(), (alpha2 * alpha1.conj()).im).exp()
}

/// `e^{2i Im(α₂ᾱ₁)}`, relating `D(α₂)D(α₁)` to `D(α₁)D(α₂)`.
pub fn commutation_phase<T: Real>(alpha2: Complex<T>, alpha1: Complex<T>) -> Complex<T> {
    let p = multiplication_phase(alpha2, alpha1);
    p * p
}

/// Residual of the multiplication law on the leading block.
pub fn multiplication_residual<T: Real>(alpha2: Complex<T>, alpha1: Complex<T>, n: usize) -> Result<T> {
    let required = displacement_dimension(alpha1.norm() + alpha2.norm());
    if n < required {
        return Err(Error::TruncationInsufficient { required, got: n });
    }
    let d2 = displacement(alpha2, n)?.into_entries();
    let d1 = displacement(alpha1, n)?.into_entries();
    let sum = displacement(alpha2 + alpha1, n)?.into_entries();
    let lhs = d2 * d1;
    let rhs = sum * multiplication_phase(alpha2, alpha1);
    Ok(block_max_abs(&(lhs - rhs), leading_block(n)))
}

/// `‖D(α₂)D(α₁) − D(α₁)D(α₂)‖` on the leading block.
pub fn commutator_norm<T: Real>(alpha2: Complex<T>, alpha1: Complex<T>, n: usize) -> Result<T> {
    let required = displacement_dimension(alpha1.norm() + alpha2.norm());
    if n < required {
        return Err(Error::TruncationInsufficient { required, got: n });
    }
    let d2 = displacement(alpha2, n)?.into_entries();
    let d1 = displacement(alpha1, n)?.into_entries();
    Ok(block_max_abs(&(&d2 * &d1 - &d1 * &d2), leading_block(n)))
}

/// Heisenberg group element `(t, α)`, with `t` in full turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupElement<T: Real> {
    pub t: T,
    pub alpha: Complex<T>,
}

impl<T: Real> GroupElement<T> {
    pub fn new(t: T, alpha: Complex<T>) -> Self {
        GroupElement { t, alpha }
    }

    pub fn identity() -> Self {
        GroupElement { t: T::zero(), alpha: Complex::zero() }
    }

    /// `self · rhs = (t₂ + t₁ + Im(α₂ᾱ₁)/2π, α₂ + α₁)`.
    pub fn compose(self, rhs: Self) -> Self {
        compose(self, rhs)
    }

    /// `e^{2πit} D(α)` on `N` number states.
    pub fn operator(&self, n: usize) -> Result<DMatrix<Complex<T>>> {
        let phase = Complex::new(T::zero(), T::TAU() * self.t).exp();
        Ok(displacement(self.alpha, n)?.into_entries() * phase)
    }
}

pub fn compose<T: Real>(g2: GroupElement<T>, g1: GroupElement<T>) -> GroupElement<T> {
    let cocycle = (g2.alpha * g1.alpha.conj()).im / T::TAU();
    GroupElement { t: g2.t + g1.t + cocycle, alpha: g2.alpha + g1.alpha }
}

/// `D_{kl} = D(α_kl)`, optionally with the `(−1)^{kl+k+l}` correction.
fn lattice_operator<T: Real>(
    lattice: &Lattice<T>,
    idx: LatticeIndex,
    n: usize,
    barred: bool,
) -> Result<DMatrix<Complex<T>>> {
    let d = displacement(lattice.point(idx), n)?.into_entries();
    Ok(if barred && sign_factor(idx) < 0 { -d } else { d })
}

fn law_residual<T: Real>(
    lattice: &Lattice<T>,
    first: LatticeIndex,
    second: LatticeIndex,
    n: usize,
    barred: bool,
) -> Result<T> {
    lattice.require_critical()?;
    let sum = first + second;
    let required = displacement_dimension(lattice.point(first).norm() + lattice.point(second).norm());
    if n < required {
        return Err(Error::TruncationInsufficient { required, got: n });
    }
    let lhs = lattice_operator(lattice, first, n, barred)? * lattice_operator(lattice, second, n, barred)?;
    let mut rhs = lattice_operator(lattice, sum, n, barred)?;
    if !barred {
        let b = cocycle_b(first.m, first.n, second.m, second.n);
        rhs *= Complex::from(from_i64::<T>(i64::from(parity_sign(b))));
    }
    Ok(block_max_abs(&(lhs - rhs), leading_block(n)))
}

/// Residual of `D_{np} D_{kl} = (−1)^{nl−pk} D_{n+k,p+l}` with
/// `first = (n, p)`, `second = (k, l)`.
pub fn discrete_law_check<T: Real>(
    lattice: &Lattice<T>,
    first: LatticeIndex,
    second: LatticeIndex,
    n: usize,
) -> Result<T> {
    law_residual(lattice, first, second, n, false)
}

/// Residual of `D̄_{np} D̄_{kl} = D̄_{n+k,p+l}`.
pub fn barred_law_check<T: Real>(
    lattice: &Lattice<T>,
    first: LatticeIndex,
    second: LatticeIndex,
    n: usize,
) -> Result<T> {
    law_residual(lattice, first, second, n, true)
}

/// `(−1)^{kl+k+l} |α_kl⟩`.
pub fn barred_state<T: Real>(lattice: &Lattice<T>, idx: LatticeIndex, n: usize) -> Result<FockVector<T>> {
    lattice.require_critical()?;
    let v = coherent_fock(lattice.point(idx), n)?;
    Ok(if sign_factor(idx) < 0 { v.scaled(-Complex::<T>::one()) } else { v })
}

/// Residual of `D̄_{kl}|ᾱ_{np}⟩ = |ᾱ_{k+n,l+p}⟩` on the leading `N/2` amplitudes.
pub fn barred_action_residual<T: Real>(
    lattice: &Lattice<T>,
    op: LatticeIndex,
    state: LatticeIndex,
    n: usize,
) -> Result<T> {
    lattice.require_critical()?;
    let d = lattice_operator(lattice, op, n, true)?;
    let v = barred_state(lattice, state, n)?;
    let target = barred_state(lattice, op + state, n)?;
    let moved = DisplacementMatrix { alpha: lattice.point(op), entries: d }.apply(&v);
    Ok(vector_max_abs(moved.coeffs(), target.coeffs(), leading_block(n)))
}
