//! The biorthogonal system dual to `{|α_mn⟩ : (m, n) ≠ (0, 0)}` at cell area π.
//!
//! In the Bargmann variable `w = ᾱ` the dual state for index `kl` is
//! `ψ̃_kl(w) = e^{|α_kl|²/2} (β_kl/σ̃′(β_kl)) σ̃(w) / (w (w − β_kl))` with
//! `β_kl = conj(α_kl)`.

use num_complex::Complex;
use num_traits::Zero;

use crate::elliptic::{SigmaTilde, ZeroLattice, DEFAULT_TRUNCATION, POLE_TOLERANCE};
use crate::error::{Error, Result};
use crate::fock::{reproduce, BargmannFunction};
use crate::lattice::{Lattice, LatticeIndex};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// How removable singularities at `0` and `β_kl` are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Singularity {
    /// Error within the pole tolerance.
    Reject,
    /// Evaluate the entire quotient by its mean over a small circle.
    Limit,
}

/// Radius and node count of the contour mean used in [`Singularity::Limit`].
const LIMIT_RADIUS: f64 = 1e-2;
const LIMIT_NODES: usize = 32;

#[derive(Debug, Clone)]
pub struct DualSystem<T: Real> {
    lattice: Lattice<T>,
    tilde: SigmaTilde<T>,
}

impl<T: Real> DualSystem<T> {
    pub fn new(lattice: &Lattice<T>) -> Result<Self> {
        Self::with_truncation(lattice, DEFAULT_TRUNCATION)
    }

    pub fn with_truncation(lattice: &Lattice<T>, truncation: u32) -> Result<Self> {
        lattice.require_critical()?;
        Ok(DualSystem { lattice: *lattice, tilde: SigmaTilde::new(ZeroLattice::from(*lattice), truncation)? })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn sigma_tilde(&self) -> &SigmaTilde<T> {
        &self.tilde
    }

    fn zero_of(&self, kl: LatticeIndex) -> Complex<T> {
        self.lattice.point(kl).conj()
    }

    /// `e^{|α_kl|²/2} β_kl / σ̃′(β_kl)`.
    pub fn normalization(&self, kl: LatticeIndex) -> Result<Complex<T>> {
        if kl.is_origin() {
            return Err(Error::InvalidArgument("dual state index must be nonzero".into()));
        }
        let beta = self.zero_of(kl);
        let half = lit::<T>(0.5);
        Ok(beta / self.tilde.derivative(beta) * (self.lattice.point(kl).norm_sqr() * half).exp())
    }

    fn quotient(&self, beta: Complex<T>, w: Complex<T>) -> Complex<T> {
        self.tilde.eval(w) / (w * (w - beta))
    }

    /// `ψ̃_kl(w)`.
    pub fn eval(&self, kl: LatticeIndex, w: Complex<T>, mode: Singularity) -> Result<Complex<T>> {
        let norm = self.normalization(kl)?;
        let beta = self.zero_of(kl);
        let tol = lit::<T>(POLE_TOLERANCE);
        let near = w.norm() <= tol || (w - beta).norm() <= tol;
        if !near {
            return Ok(norm * self.quotient(beta, w));
        }
        match mode {
            Singularity::Reject => Err(Error::Pole { z_re: to_f64(w.re), z_im: to_f64(w.im), tolerance: POLE_TOLERANCE }),
            Singularity::Limit => {
                let r = lit::<T>(LIMIT_RADIUS);
                let step = T::TAU() / from_i64::<T>(LIMIT_NODES as i64);
                let mut acc = Complex::zero();
                for j in 0..LIMIT_NODES {
                    acc += self.quotient(beta, w + Complex::from_polar(r, step * from_i64::<T>(j as i64)));
                }
                Ok(norm * acc / from_i64::<T>(LIMIT_NODES as i64))
            }
        }
    }

    /// The dual state as a Bargmann function, with removable points filled in.
    pub fn bargmann(&self, kl: LatticeIndex) -> BargmannFunction<T> {
        let me = self.clone();
        BargmannFunction::sigma_based(move |w| me.eval(kl, w, Singularity::Limit).unwrap_or_else(|_| Complex::zero()))
    }

    /// `⟨α_mn|α̃_kl⟩ = e^{−|α_mn|²/2} ψ̃_kl(β_mn)`.
    pub fn pairing(&self, mn: LatticeIndex, kl: LatticeIndex) -> Result<Complex<T>> {
        self.normalization(kl)?;
        Ok(reproduce(self.lattice.point(mn), &self.bargmann(kl)))
    }

    /// `c_mn = ⟨α̃_mn|0⟩ = conj(ψ̃_mn(0))`.
    pub fn vacuum_coefficient(&self, mn: LatticeIndex) -> Result<Complex<T>> {
        Ok(self.eval(mn, Complex::zero(), Singularity::Limit)?.conj())
    }

    /// `−conj(σ̃′(0)) / conj(σ̃′(β_mn)) · e^{|α_mn|²/2}`.
    pub fn vacuum_coefficient_closed(&self, mn: LatticeIndex) -> Complex<T> {
        let d0 = self.tilde.derivative(Complex::zero()).conj();
        let d = self.tilde.derivative(self.zero_of(mn)).conj();
        -d0 / d * (self.lattice.point(mn).norm_sqr() * lit(0.5)).exp()
    }
}

pub fn dual_state_eval<T: Real>(
    lattice: &Lattice<T>,
    kl: LatticeIndex,
    at: Complex<T>,
    mode: Singularity,
) -> Result<Complex<T>> {
    DualSystem::new(lattice)?.eval(kl, at, mode)
}
