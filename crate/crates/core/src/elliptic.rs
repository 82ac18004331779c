//! Weierstrass σ and ζ over a conjugated zero lattice, quasi-periods, the
//! minimal-type function σ̃ and the doubly periodic density ρ.
//!
//! The canonical product is truncated to the square window `|m|, |n| ≤ M`.
//! Lattice points `β` and `−β` are always combined, so every factor pair is
//! `(1 − z²/β²)·exp(z²/β²)` and σ is odd to the last bit. The omitted
//! exponent `−Σ_{outside} Σ_k z^k/(k β^k)` is a power series whose
//! coefficients are Eisenstein tails `G_k − Σ_{inside} β^{-k}`; the corrected
//! product adds those tails back, which removes the slow `1/M²` convergence
//! of the bare square-window product. [`SigmaProduct::plain`] keeps the bare
//! product available as a reference.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{sign_factor, Lattice, LatticeIndex};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// Default canonical-product truncation.
pub const DEFAULT_TRUNCATION: u32 = 80;

/// Step of the central difference used for σ̃′.
pub const DERIVATIVE_STEP: f64 = 1e-5;

/// Distance below which ζ reports a pole.
pub const POLE_TOLERANCE: f64 = 1e-8;

/// Highest Eisenstein order considered for the tail correction.
const MAX_TAIL_ORDER: i32 = 20;

/// `|B_k|` for even `k = 4..=20`.
const BERNOULLI_ABS: [(i32, f64); 9] = [
    (4, 1.0 / 30.0),
    (6, 1.0 / 42.0),
    (8, 1.0 / 30.0),
    (10, 5.0 / 66.0),
    (12, 691.0 / 2730.0),
    (14, 7.0 / 6.0),
    (16, 3617.0 / 510.0),
    (18, 43867.0 / 798.0),
    (20, 174611.0 / 330.0),
];

/// Kinds of lattice-built entire functions exposed by the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionKind {
    Sigma,
    SigmaTilde,
    DependenceF,
    DualPsi,
}

/// A truncated lattice series or product, evaluated pointwise.
pub trait LatticeFunction<T: Real> {
    fn kind(&self) -> FunctionKind;
    fn truncation(&self) -> u32;
    fn eval(&self, z: Complex<T>) -> Complex<T>;
}

/// The zero set `β_mn = conj(α_mn)` of the functions built on a lattice.
///
/// Kept separate from [`Lattice`] because conjugation reverses orientation;
/// indices are shared with the source lattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroLattice<T: Real> {
    source: Lattice<T>,
}

impl<T: Real> ZeroLattice<T> {
    pub fn conjugate_of(source: Lattice<T>) -> Self {
        ZeroLattice { source }
    }

    pub fn source(&self) -> &Lattice<T> {
        &self.source
    }

    /// Cell area of the source lattice.
    pub fn area(&self) -> T {
        self.source.area()
    }

    pub fn beta1(&self) -> Complex<T> {
        self.source.omega1().conj()
    }

    pub fn beta2(&self) -> Complex<T> {
        self.source.omega2().conj()
    }

    pub fn point(&self, idx: LatticeIndex) -> Complex<T> {
        self.source.point(idx).conj()
    }

    pub fn point_mn(&self, m: i64, n: i64) -> Complex<T> {
        self.source.point_mn(m, n).conj()
    }
}

impl<T: Real> From<Lattice<T>> for ZeroLattice<T> {
    fn from(source: Lattice<T>) -> Self {
        ZeroLattice::conjugate_of(source)
    }
}

/// Gauss-reduced basis of the lattice spanned by `b1, b2`, oriented so that
/// `Im(b2/b1) > 0`.
fn reduced_basis<T: Real>(mut b1: Complex<T>, mut b2: Complex<T>) -> (Complex<T>, Complex<T>) {
    for _ in 0..64 {
        if b2.norm_sqr() < b1.norm_sqr() {
            std::mem::swap(&mut b1, &mut b2);
        }
        let shift = ((b2 * b1.conj()).re / b1.norm_sqr()).round();
        if shift.is_zero() {
            break;
        }
        b2 -= b1 * shift;
    }
    if (b2 / b1).im < T::zero() {
        b2 = -b2;
    }
    (b1, b2)
}

/// Eisenstein lattice sum `G_k = Σ' β^{-k}` for even `k ≥ 4`, from the
/// q-expansion on a reduced basis.
pub fn eisenstein_sum<T: Real>(k: i32, b1: Complex<T>, b2: Complex<T>) -> Complex<T> {
    assert!(k >= 4 && k % 2 == 0 && k <= MAX_TAIL_ORDER, "unsupported Eisenstein order {k}");
    let (b1, b2) = reduced_basis(b1, b2);
    let tau = b2 / b1;
    let two_pi = T::PI() + T::PI();
    let q = (Complex::new(T::zero(), two_pi) * tau).exp();
    let mut lambert = Complex::<T>::zero();
    let mut qn = Complex::<T>::one();
    for n in 1..400 {
        qn *= q;
        let term = qn / (Complex::<T>::one() - qn) * from_i64::<T>(n).powi(k - 1);
        lambert += term;
        if term.norm() < T::epsilon() * lit(1e-4) * (lambert.norm() + T::one()) {
            break;
        }
    }
    let bern = BERNOULLI_ABS.iter().find(|(o, _)| *o == k).map(|(_, b)| *b).unwrap();
    let mut k_fact = T::one();
    for j in 2..=k {
        k_fact *= from_i64::<T>(i64::from(j));
    }
    let km1_fact = k_fact / from_i64::<T>(i64::from(k));
    let sign = if (k / 2) % 2 == 0 { T::one() } else { -T::one() };
    let constant = lit::<T>(bern) / k_fact;
    let q_coeff = (sign + sign) / km1_fact;
    (lambert * q_coeff + constant) * two_pi.powi(k) / b1.powi(k)
}

/// Truncated Weierstrass canonical product `σ(z) = z Π' (1 − z/β) e^{z/β + z²/2β²}`.
#[derive(Debug, Clone)]
pub struct SigmaProduct<T: Real> {
    zeros: ZeroLattice<T>,
    truncation: u32,
    /// One representative of every `±β` pair in the window.
    half_points: Vec<Complex<T>>,
    inv_sq: Vec<Complex<T>>,
    /// `(k, Σ_{outside} β^{-k})` for the orders kept in the correction.
    tail: Vec<(i32, Complex<T>)>,
    outer_radius: T,
}

impl<T: Real> SigmaProduct<T> {
    /// Product over `|m|, |n| ≤ M` with the Eisenstein tail correction.
    pub fn new(zeros: ZeroLattice<T>, truncation: u32) -> Self {
        let mut s = Self::plain(zeros, truncation);
        s.tail = s.tail_terms();
        s
    }

    /// Bare truncated product without any tail correction.
    pub fn plain(zeros: ZeroLattice<T>, truncation: u32) -> Self {
        assert!(truncation >= 1, "truncation must be at least 1");
        let w = i64::from(truncation);
        let mut half_points = Vec::with_capacity(((2 * w + 1) * (2 * w + 1) / 2) as usize);
        for m in -w..=w {
            for n in -w..=w {
                if LatticeIndex::new(m, n) > LatticeIndex::ORIGIN {
                    half_points.push(zeros.point_mn(m, n));
                }
            }
        }
        let inv_sq = half_points.iter().map(|b| Complex::<T>::one() / (b * b)).collect();
        let ring = w + 1;
        let mut outer = T::infinity();
        for j in -ring..=ring {
            for p in [zeros.point_mn(ring, j), zeros.point_mn(j, ring)] {
                outer = outer.min(p.norm());
            }
        }
        SigmaProduct { zeros, truncation, half_points, inv_sq, tail: Vec::new(), outer_radius: outer }
    }

    /// Tail sums worth keeping: an order is used while its estimated
    /// magnitude `(2π/S) R^{2-k}/(k-2)` clearly exceeds the rounding noise of
    /// the difference `G_k − Σ_{inside}`.
    fn tail_terms(&self) -> Vec<(i32, Complex<T>)> {
        let two_pi = T::PI() + T::PI();
        let mut out = Vec::new();
        let mut k = 4;
        while k <= MAX_TAIL_ORDER {
            let mut inside = Complex::<T>::zero();
            let mut inside_abs = T::zero();
            let half = k / 2;
            for u in &self.inv_sq {
                let t = u.powi(half);
                inside += t + t;
                inside_abs += t.norm() + t.norm();
            }
            let estimate =
                two_pi / self.zeros.area() * self.outer_radius.powi(2 - k) / from_i64::<T>(i64::from(k - 2));
            if estimate <= lit::<T>(64.0) * T::epsilon() * inside_abs {
                break;
            }
            let full = eisenstein_sum(k, self.zeros.beta1(), self.zeros.beta2());
            out.push((k, full - inside));
            k += 2;
        }
        out
    }

    pub fn zeros(&self) -> &ZeroLattice<T> {
        &self.zeros
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    /// Eisenstein orders included in the tail correction.
    pub fn tail_orders(&self) -> Vec<i32> {
        self.tail.iter().map(|(k, _)| *k).collect()
    }

    /// Smallest modulus of a lattice point outside the window; the tail
    /// correction is a power series valid for `|z|` below it.
    pub fn outer_radius(&self) -> T {
        self.outer_radius
    }

    fn tail_exponent(&self, z: Complex<T>) -> Complex<T> {
        if self.tail.is_empty() || z.norm() >= self.outer_radius {
            return Complex::zero();
        }
        self.tail
            .iter()
            .fold(Complex::zero(), |acc, (k, t)| acc + z.powi(*k) * *t / from_i64::<T>(i64::from(*k)))
    }

    /// `log(σ(z)/z)`; `None` when `z` sits on a nonzero lattice point.
    fn log_ratio(&self, z: Complex<T>) -> Option<Complex<T>> {
        let z2 = z * z;
        let small = lit::<T>(0.1);
        let mut acc = Complex::<T>::zero();
        for (beta, inv) in self.half_points.iter().zip(&self.inv_sq) {
            let u = z2 * inv;
            if u.norm() < small {
                // log(1 − u) + u = −Σ_{j≥2} u^j / j
                let mut p = u * u;
                let mut j = 2;
                loop {
                    let term = p / from_i64::<T>(j);
                    acc -= term;
                    if term.norm() <= T::epsilon() * lit(1e-3) * acc.norm().max(T::min_positive_value()) || j > 60 {
                        break;
                    }
                    p *= u;
                    j += 1;
                }
            } else {
                let one_minus_u = (beta - z) * (beta + z) * inv;
                if one_minus_u.norm() <= lit::<T>(4.0) * T::epsilon() {
                    return None;
                }
                acc += one_minus_u.ln() + u;
            }
        }
        Some(acc - self.tail_exponent(z))
    }

    /// `log σ(z)`, `None` at zeros.
    pub fn log_sigma(&self, z: Complex<T>) -> Option<Complex<T>> {
        if z.is_zero() {
            return None;
        }
        self.log_ratio(z).map(|r| z.ln() + r)
    }

    pub fn sigma(&self, z: Complex<T>) -> Complex<T> {
        if z.is_zero() {
            return Complex::zero();
        }
        match self.log_ratio(z) {
            Some(r) => z * r.exp(),
            None => Complex::zero(),
        }
    }

    /// `ζ = σ′/σ`; errors within [`POLE_TOLERANCE`] of an in-window zero.
    pub fn zeta(&self, z: Complex<T>) -> Result<Complex<T>> {
        let tol = lit::<T>(POLE_TOLERANCE);
        let pole = || Error::Pole { z_re: to_f64(z.re), z_im: to_f64(z.im), tolerance: POLE_TOLERANCE };
        if z.norm() < tol {
            return Err(pole());
        }
        let z2 = z * z;
        let z3 = z2 * z;
        let mut acc = Complex::<T>::zero();
        for (beta, inv) in self.half_points.iter().zip(&self.inv_sq) {
            if (z - beta).norm() < tol || (z + beta).norm() < tol {
                return Err(pole());
            }
            // 1/(z−β) + 1/(z+β) + 2z/β² = 2z³ / ((z² − β²) β²)
            acc += z3 * inv * lit::<T>(2.0) / ((z - beta) * (z + beta));
        }
        let tail = if self.tail.is_empty() || z.norm() >= self.outer_radius {
            Complex::zero()
        } else {
            self.tail.iter().fold(Complex::zero(), |a, (k, t)| a + z.powi(*k - 1) * *t)
        };
        Ok(Complex::<T>::one() / z + acc - tail)
    }

    /// Relative residual of `σ(z+β_kl) = (−1)^{kl+k+l} e^{η_kl(z+β_kl/2)} σ(z)`.
    pub fn quasi_periodicity_residual(&self, qp: &QuasiPeriodData<T>, z: Complex<T>, idx: LatticeIndex) -> T {
        let beta = self.zeros.point(idx);
        let lhs = self.sigma(z + beta);
        let sign = from_i64::<T>(i64::from(sign_factor(idx)));
        let rhs = (qp.eta(idx) * (z + beta * lit::<T>(0.5))).exp() * self.sigma(z) * sign;
        relative_difference(lhs, rhs)
    }
}

impl<T: Real> LatticeFunction<T> for SigmaProduct<T> {
    fn kind(&self) -> FunctionKind {
        FunctionKind::Sigma
    }
    fn truncation(&self) -> u32 {
        self.truncation
    }
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.sigma(z)
    }
}

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub(crate) fn relative_difference<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    let scale = a.norm().max(b.norm());
    if scale.is_zero() {
        T::zero()
    } else {
        (a - b).norm() / scale
    }
}

/// σ(z) truncated at `M` (with the tail correction).
pub fn sigma<T: Real>(z: Complex<T>, zeros: ZeroLattice<T>, truncation: u32) -> Complex<T> {
    SigmaProduct::new(zeros, truncation).sigma(z)
}

/// ζ(z) truncated at `M` (with the tail correction).
pub fn zeta<T: Real>(z: Complex<T>, zeros: ZeroLattice<T>, truncation: u32) -> Result<Complex<T>> {
    SigmaProduct::new(zeros, truncation).zeta(z)
}

/// Quasi-periods and the Gaussian exponent coefficients of a zero lattice.
///
/// `eta1 = 2ζ(β₁/2)` and `eta2 = 2ζ(β₂/2)` use the full-period convention, so
/// `σ(z+β) = ± e^{η(z+β/2)} σ(z)`. `mu = π/(2S)` and `nu` is chosen so that
/// `ν·conj(ω_i) + μ·ω_i = η_i/2` holds for both generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiPeriodData<T: Real> {
    pub eta1: Complex<T>,
    pub eta2: Complex<T>,
    pub nu: Complex<T>,
    pub mu: T,
    pub zero_lattice: ZeroLattice<T>,
}

impl<T: Real> QuasiPeriodData<T> {
    fn from_etas(zeros: ZeroLattice<T>, eta1: Complex<T>, eta2: Complex<T>) -> Self {
        let lat = zeros.source();
        let s = lat.area();
        let four_i_s = Complex::new(T::zero(), lit::<T>(4.0) * s);
        let nu = (eta1 * lat.omega2() - eta2 * lat.omega1()) / four_i_s;
        let mu = T::PI() / (s + s);
        QuasiPeriodData { eta1, eta2, nu, mu, zero_lattice: zeros }
    }

    /// `η_kl = k·η₁ + l·η₂`.
    pub fn eta(&self, idx: LatticeIndex) -> Complex<T> {
        self.eta1 * from_i64::<T>(idx.m) + self.eta2 * from_i64::<T>(idx.n)
    }

    /// Largest residual of `ν·conj(ω_i) + μ·ω_i − η_i/2` over both generators.
    pub fn system_residual(&self) -> T {
        let lat = self.zero_lattice.source();
        let half = lit::<T>(0.5);
        let r1 = self.nu * lat.omega1().conj() + lat.omega1() * self.mu - self.eta1 * half;
        let r2 = self.nu * lat.omega2().conj() + lat.omega2() * self.mu - self.eta2 * half;
        r1.norm().max(r2.norm())
    }

    /// Residual of `ν ᾱ² + ν̄ α² + 2μ|α|² = ½(η ᾱ + η̄ α)` at `α = α_idx`.
    pub fn consistency_residual(&self, idx: LatticeIndex) -> T {
        let a = self.zero_lattice.source().point(idx);
        let ac = a.conj();
        let eta = self.eta(idx);
        let lhs = self.nu * ac * ac + self.nu.conj() * a * a + Complex::from(lit::<T>(2.0) * self.mu * a.norm_sqr());
        let rhs = (eta * ac + eta.conj() * a) * lit::<T>(0.5);
        (lhs - rhs).norm()
    }

    /// μ recovered from the linear system alone (Legendre relation check).
    pub fn mu_from_system(&self) -> Complex<T> {
        let lat = self.zero_lattice.source();
        let w1 = lat.omega1();
        let w2 = lat.omega2();
        let half = lit::<T>(0.5);
        // Eliminate ν: multiply by conj(ω₂), conj(ω₁) and subtract.
        (self.eta1 * w2.conj() - self.eta2 * w1.conj()) * half / (w1 * w2.conj() - w2 * w1.conj())
    }
}

/// Quasi-periods at truncation `M`, checked against truncation `2M`.
pub fn quasi_periods<T: Real>(zeros: ZeroLattice<T>, truncation: u32) -> Result<QuasiPeriodData<T>> {
    let at = |m: u32| -> Result<(Complex<T>, Complex<T>)> {
        let sp = SigmaProduct::new(zeros, m);
        let half = lit::<T>(0.5);
        let two = lit::<T>(2.0);
        Ok((sp.zeta(zeros.beta1() * half)? * two, sp.zeta(zeros.beta2() * half)? * two))
    };
    let (e1, e2) = at(truncation)?;
    let (d1, d2) = at(truncation * 2)?;
    let tol = lit::<T>(1e-10) * (T::one() + e1.norm().max(e2.norm()));
    let change = (e1 - d1).norm().max((e2 - d2).norm());
    if !(change <= tol) {
        return Err(Error::ConvergenceFailure(format!(
            "quasi-periods changed by {} when doubling truncation {truncation}",
            to_f64(change)
        )));
    }
    Ok(QuasiPeriodData::from_etas(zeros, e1, e2))
}

/// `σ̃(z) = σ(z)·exp(−ν z²)`: the entire function of minimal type `μ` with
/// simple zeros on the zero lattice.
#[derive(Debug, Clone)]
pub struct SigmaTilde<T: Real> {
    product: SigmaProduct<T>,
    qp: QuasiPeriodData<T>,
}

impl<T: Real> SigmaTilde<T> {
    pub fn new(zeros: ZeroLattice<T>, truncation: u32) -> Result<Self> {
        let qp = quasi_periods(zeros, truncation)?;
        Ok(SigmaTilde { product: SigmaProduct::new(zeros, truncation), qp })
    }

    /// Reuses quasi-periods computed elsewhere (possibly at another truncation).
    pub fn with_quasi_periods(product: SigmaProduct<T>, qp: QuasiPeriodData<T>) -> Self {
        SigmaTilde { product, qp }
    }

    pub fn quasi_periods(&self) -> &QuasiPeriodData<T> {
        &self.qp
    }

    pub fn product(&self) -> &SigmaProduct<T> {
        &self.product
    }

    pub fn zeros(&self) -> &ZeroLattice<T> {
        self.product.zeros()
    }

    pub fn log_eval(&self, z: Complex<T>) -> Option<Complex<T>> {
        self.product.log_sigma(z).map(|l| l - self.qp.nu * z * z)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.product.sigma(z) * (-self.qp.nu * z * z).exp()
    }

    /// Central difference with step [`DERIVATIVE_STEP`].
    pub fn derivative(&self, z: Complex<T>) -> Complex<T> {
        let h = lit::<T>(DERIVATIVE_STEP);
        (self.eval(z + h) - self.eval(z - h)) / (h + h)
    }

    /// `ρ(z) = |σ̃(z)|² e^{−2μ|z|²}`.
    pub fn rho(&self, z: Complex<T>) -> T {
        match self.log_eval(z) {
            Some(l) => ((l.re - self.qp.mu * z.norm_sqr()) * lit::<T>(2.0)).exp(),
            None => T::zero(),
        }
    }

    /// Relative residual of
    /// `σ̃(z+β_kl) = (−1)^{kl+k+l} e^{μ|α_kl|²} e^{2μ α_kl z} σ̃(z)`.
    pub fn functional_residual(&self, z: Complex<T>, idx: LatticeIndex) -> T {
        let alpha = self.zeros().source().point(idx);
        let beta = alpha.conj();
        let mu = self.qp.mu;
        let lhs = self.eval(z + beta);
        let sign = from_i64::<T>(i64::from(sign_factor(idx)));
        let rhs = (alpha * z * (mu + mu) + Complex::from(mu * alpha.norm_sqr())).exp() * self.eval(z) * sign;
        relative_difference(lhs, rhs)
    }
}

impl<T: Real> LatticeFunction<T> for SigmaTilde<T> {
    fn kind(&self) -> FunctionKind {
        FunctionKind::SigmaTilde
    }
    fn truncation(&self) -> u32 {
        self.product.truncation()
    }
    fn eval(&self, z: Complex<T>) -> Complex<T> {
        SigmaTilde::eval(self, z)
    }
}

/// σ̃(z) at truncation `M`.
pub fn sigma_tilde<T: Real>(z: Complex<T>, zeros: ZeroLattice<T>, truncation: u32) -> Result<Complex<T>> {
    Ok(SigmaTilde::new(zeros, truncation)?.eval(z))
}

/// ρ(z) at truncation `M`.
pub fn rho<T: Real>(z: Complex<T>, zeros: ZeroLattice<T>, truncation: u32) -> Result<T> {
    Ok(SigmaTilde::new(zeros, truncation)?.rho(z))
}

/// ρ as a function of the phase-space point `α`, i.e. `ρ(conj α)` on the zero
/// lattice, evaluated after reducing `α` into the centred fundamental cell.
///
/// Periodicity makes this exact while keeping every product evaluation near
/// the origin, where a small truncation already reaches full precision.
#[derive(Debug, Clone)]
pub struct PeriodicDensity<T: Real> {
    tilde: SigmaTilde<T>,
}

/// Truncation used by [`PeriodicDensity`] for reduced arguments.
pub const DENSITY_TRUNCATION: u32 = 12;

impl<T: Real> PeriodicDensity<T> {
    pub fn new(lattice: Lattice<T>) -> Result<Self> {
        Ok(PeriodicDensity { tilde: SigmaTilde::new(ZeroLattice::from(lattice), DENSITY_TRUNCATION)? })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        self.tilde.zeros().source()
    }

    pub fn at(&self, alpha: Complex<T>) -> T {
        let (_, rest) = self.lattice().reduce(alpha);
        self.tilde.rho(rest.conj())
    }
}
