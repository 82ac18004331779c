//! Truncated Fock space, coherent states and the Bargmann representation.
//!
//! A state `Σ c_n |n⟩` corresponds to the entire function
//! `ψ(z) = Σ c_n zⁿ/√n!`, and `⟨α|ψ⟩ = e^{−|α|²/2} ψ(ᾱ)`.

use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// Largest `n` whose factorial is accumulated as a plain running product.
pub const FACTORIAL_PRODUCT_LIMIT: usize = 170;

/// `n!`, infinite once it overflows the scalar type.
pub fn factorial<T: Real>(n: usize) -> T {
    if n <= FACTORIAL_PRODUCT_LIMIT {
        (2..=n).fold(T::one(), |acc, k| acc * from_i64::<T>(k as i64))
    } else {
        ln_factorial::<T>(n).exp()
    }
}

/// `ln n!`, exact summation of logarithms beyond the product range.
pub fn ln_factorial<T: Real>(n: usize) -> T {
    if n <= FACTORIAL_PRODUCT_LIMIT {
        lit(factorial_f64(n).ln())
    } else {
        let head = factorial_f64(FACTORIAL_PRODUCT_LIMIT).ln();
        let tail: f64 = (FACTORIAL_PRODUCT_LIMIT + 1..=n).map(|k| (k as f64).ln()).sum();
        lit(head + tail)
    }
}

fn factorial_f64(n: usize) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Amplitudes `⟨n|ψ⟩` for `n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T: Real> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Self {
        FockVector { coeffs }
    }

    pub fn number_state(n: usize, dim: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); dim.max(n + 1)];
        coeffs[n] = Complex::one();
        FockVector { coeffs }
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::number_state(0, dim)
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// `⟨self|other⟩`, antilinear in `self`; the shorter vector is zero-padded.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Complex::zero(), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn scaled(&self, factor: Complex<T>) -> Self {
        FockVector { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }
}

/// Number-basis dimension guaranteeing a coherent-state tail below `1e−12`.
pub fn required_dimension<T: Real>(alpha_abs: T) -> usize {
    let r = alpha_abs + lit(4.0);
    (r * r).ceil().to_usize().unwrap_or(usize::MAX)
}

/// Coherent amplitudes `e^{−|α|²/2} αⁿ/√n!` without the size check.
pub(crate) fn coherent_coeffs<T: Real>(alpha: Complex<T>, dim: usize) -> Vec<Complex<T>> {
    let mut out = Vec::with_capacity(dim);
    let mut c = Complex::from(((-alpha.norm_sqr()) * lit(0.5)).exp());
    for n in 0..dim {
        if n > 0 {
            c = c * alpha / from_i64::<T>(n as i64).sqrt();
        }
        out.push(c);
    }
    out
}

/// `|α⟩` truncated to `dim` number states.
pub fn coherent_fock<T: Real>(alpha: Complex<T>, dim: usize) -> Result<FockVector<T>> {
    let required = required_dimension(alpha.norm());
    if dim < required {
        return Err(Error::TruncationInsufficient { required, got: dim });
    }
    Ok(FockVector { coeffs: coherent_coeffs(alpha, dim) })
}

/// `⟨α|β⟩ = exp(−½(|α|² + |β|² − 2ᾱβ))`.
pub fn overlap<T: Real>(alpha: Complex<T>, beta: Complex<T>) -> Complex<T> {
    let half = lit::<T>(0.5);
    ((alpha.conj() * beta) - Complex::from((alpha.norm_sqr() + beta.norm_sqr()) * half)).exp()
}

/// Origin of a Bargmann function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BargmannTag<T: Real> {
    /// `z ↦ e^{−|β|²/2} e^{βz}`.
    Coherent(Complex<T>),
    /// Polynomial image of a truncated Fock vector.
    FromFock,
    /// `z ↦ zᵏ`.
    Monomial(u32),
    /// Built from σ or σ̃ evaluations.
    SigmaBased,
}

type Analytic<T> = Arc<dyn Fn(Complex<T>) -> Complex<T> + Send + Sync>;

#[derive(Clone)]
enum Repr<T: Real> {
    Coherent { beta: Complex<T>, prefactor: T },
    /// Taylor coefficients `c_n/√n!`.
    Polynomial(Vec<Complex<T>>),
    Monomial(u32),
    Analytic(Analytic<T>),
}

/// An entire function in the Bargmann space.
#[derive(Clone)]
pub struct BargmannFunction<T: Real> {
    tag: BargmannTag<T>,
    repr: Repr<T>,
}

impl<T: Real> fmt::Debug for BargmannFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BargmannFunction").field("tag", &self.tag).finish()
    }
}

impl<T: Real> BargmannFunction<T> {
    pub fn coherent(beta: Complex<T>) -> Self {
        let prefactor = (-beta.norm_sqr() * lit(0.5)).exp();
        BargmannFunction { tag: BargmannTag::Coherent(beta), repr: Repr::Coherent { beta, prefactor } }
    }

    pub fn monomial(k: u32) -> Self {
        BargmannFunction { tag: BargmannTag::Monomial(k), repr: Repr::Monomial(k) }
    }

    pub fn constant_one() -> Self {
        Self::monomial(0)
    }

    pub fn from_fock(state: &FockVector<T>) -> Self {
        let mut inv_sqrt_fact = T::one();
        let taylor = state
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| {
                if n > 0 {
                    inv_sqrt_fact /= from_i64::<T>(n as i64).sqrt();
                }
                c * inv_sqrt_fact
            })
            .collect();
        BargmannFunction { tag: BargmannTag::FromFock, repr: Repr::Polynomial(taylor) }
    }

    /// Wraps an entire function built from σ-type evaluations.
    pub fn sigma_based(f: impl Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static) -> Self {
        BargmannFunction { tag: BargmannTag::SigmaBased, repr: Repr::Analytic(Arc::new(f)) }
    }

    pub fn tag(&self) -> BargmannTag<T> {
        self.tag
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        match &self.repr {
            Repr::Coherent { beta, prefactor } => (beta * z).exp() * *prefactor,
            Repr::Polynomial(a) => a.iter().rev().fold(Complex::zero(), |acc, c| acc * z + c),
            Repr::Monomial(k) => z.powu(*k),
            Repr::Analytic(f) => f(z),
        }
    }
}

pub fn bargmann_of_fock<T: Real>(state: &FockVector<T>) -> BargmannFunction<T> {
    BargmannFunction::from_fock(state)
}

/// `⟨α|ψ⟩ = e^{−|α|²/2} ψ(ᾱ)`.
pub fn reproduce<T: Real>(alpha: Complex<T>, psi: &BargmannFunction<T>) -> Complex<T> {
    psi.eval(alpha.conj()) * (-alpha.norm_sqr() * lit(0.5)).exp()
}

/// True iff `|ψ(z)| ≤ e^{|z|²/2}` at every sample, with relative slack `1e−12`.
pub fn growth_bound_check<T: Real>(state: &FockVector<T>, samples: &[Complex<T>]) -> bool {
    let psi = bargmann_of_fock(state);
    let slack = T::one() + lit(1e-12);
    samples.iter().all(|&z| psi.eval(z).norm() <= (z.norm_sqr() * lit(0.5)).exp() * slack)
}

/// Polar product rule for `(1/π)∫ d²z f(z)` over `|z| ≤ R`.
///
/// Gauss–Legendre in `s = r²` on `[0, R²]`, midpoint trapezoid in angle.
#[derive(Debug, Clone)]
pub struct QuadratureGrid<T: Real> {
    radius: T,
    radii: Vec<T>,
    /// Weights already include the angular factor and `1/π`.
    weights: Vec<T>,
    angular: usize,
}

impl<T: Real> QuadratureGrid<T> {
    pub const DEFAULT_RADIUS: f64 = 8.0;
    pub const DEFAULT_RADIAL: usize = 64;
    pub const DEFAULT_ANGULAR: usize = 128;

    pub fn new(radius: T, radial: usize, angular: usize) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("quadrature radius {}", to_f64(radius))));
        }
        let (Some(nr), true) = (NonZeroUsize::new(radial).filter(|n| n.get() >= 2), angular >= 1) else {
            return Err(Error::InvalidArgument(format!("node counts {radial}x{angular}")));
        };
        let rule = GaussLegendre::new(nr);
        let smax = to_f64(radius * radius);
        let half = smax / 2.0;
        let mut pairs: Vec<(f64, f64)> = rule.iter().map(|(x, w)| (half * (x + 1.0), half * w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        // (1/π) r dr dθ = ds dθ / 2π, and the angular rule sums to 2π.
        let radii = pairs.iter().map(|&(s, _)| lit::<T>(s.sqrt())).collect();
        let weights = pairs.iter().map(|&(_, w)| lit::<T>(w / angular as f64)).collect();
        Ok(QuadratureGrid { radius, radii, weights, angular })
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn radial_count(&self) -> usize {
        self.radii.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angular
    }

    /// `(z, weight, r)` for every node, radially ascending.
    pub fn nodes(&self) -> impl Iterator<Item = (Complex<T>, T, T)> + '_ {
        let step = T::TAU() / from_i64::<T>(self.angular as i64);
        self.radii.iter().zip(&self.weights).flat_map(move |(&r, &w)| {
            (0..self.angular).map(move |j| {
                let theta = step * (from_i64::<T>(j as i64) + lit(0.5));
                (Complex::from_polar(r, theta), w, r)
            })
        })
    }

    /// `(1/π)∫ f` over the disk, with the share carried by the outer unit annulus.
    pub fn integrate(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> InnerProduct<T> {
        let edge = self.radius - T::one();
        let (mut value, mut outer, mut total_abs) = (Complex::zero(), T::zero(), T::zero());
        for (z, w, r) in self.nodes() {
            let term = f(z) * w;
            value += term;
            total_abs += term.norm();
            if r > edge {
                outer += term.norm();
            }
        }
        let tail_fraction = if total_abs > T::zero() { outer / total_abs } else { T::zero() };
        InnerProduct { value, tail_fraction }
    }
}

impl<T: Real> Default for QuadratureGrid<T> {
    fn default() -> Self {
        Self::new(lit(Self::DEFAULT_RADIUS), Self::DEFAULT_RADIAL, Self::DEFAULT_ANGULAR)
            .expect("default grid parameters are valid")
    }
}

/// Quadrature value with its outer-shell diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerProduct<T: Real> {
    pub value: Complex<T>,
    /// Share of `Σ|terms|` coming from `R − 1 < |z| ≤ R`.
    pub tail_fraction: T,
}

impl<T: Real> InnerProduct<T> {
    pub const WARN_FRACTION: f64 = 1e-8;

    /// The integrand has not decayed by the grid edge.
    pub fn non_decaying(&self) -> bool {
        self.tail_fraction > lit(Self::WARN_FRACTION)
    }
}

/// `(1/π)∫ e^{−|z|²} conj(ψ(z)) φ(z) d²z`.
pub fn bargmann_inner<T: Real>(
    psi: &BargmannFunction<T>,
    phi: &BargmannFunction<T>,
    grid: &QuadratureGrid<T>,
) -> InnerProduct<T> {
    grid.integrate(|z| psi.eval(z).conj() * phi.eval(z) * (-z.norm_sqr()).exp())
}

/// Quadrature of `(1/π)∫|α⟩⟨α| d²α` restricted to the first `dim` number states.
pub fn resolution_operator<T: Real>(dim: usize, grid: &QuadratureGrid<T>) -> DMatrix<Complex<T>> {
    let mut out = DMatrix::<Complex<T>>::zeros(dim, dim);
    for (z, w, _) in grid.nodes() {
        let c = coherent_coeffs(z, dim);
        for j in 0..dim {
            let cj = c[j].conj() * w;
            for i in 0..dim {
                out[(i, j)] += c[i] * cj;
            }
        }
    }
    out
}

/// Per-row max deviation of the quadrature-assembled resolution from the identity.
pub fn resolution_profile<T: Real>(dim: usize, grid: &QuadratureGrid<T>) -> Vec<T> {
    let op = resolution_operator(dim, grid);
    (0..dim)
        .map(|i| {
            (0..dim).fold(T::zero(), |acc, j| {
                let target = if i == j { Complex::one() } else { Complex::zero() };
                acc.max((op[(i, j)] - target).norm())
            })
        })
        .collect()
}

/// Number of leading basis states resolved by a disk of radius `R`: `⌊R² − 4R⌋`, at least one.
pub fn resolved_states<T: Real>(radius: T) -> usize {
    (radius * radius - lit::<T>(4.0) * radius).floor().to_usize().unwrap_or(0).max(1)
}

/// Max deviation from the identity over the first [`resolved_states`] rows.
pub fn resolution_check<T: Real>(dim: usize, grid: &QuadratureGrid<T>) -> T {
    let k = resolved_states(grid.radius()).min(dim);
    resolution_profile(dim, grid).into_iter().take(k).fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    /// Regularized lower incomplete gamma `P(n+1, x) = 1 − e^{−x} Σ_{k≤n} x^k/k!`.
    fn disk_mass(n: usize, x: f64) -> f64 {
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..=n {
            term *= x / k as f64;
            sum += term;
        }
        1.0 - (-x).exp() * sum
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial::<f64>(0), 1.0);
        assert_eq!(factorial::<f64>(10), 3_628_800.0);
        assert!((ln_factorial::<f64>(200) - 863.231_987_192_004_6).abs() < 1e-9);
        assert!(factorial::<f64>(200).is_infinite());
        assert!((ln_factorial::<f64>(171) - factorial_f64(170).ln() - 171f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn coherent_examples() {
        let v = coherent_fock(c(0.0, 0.0), 16).unwrap();
        assert_eq!(v.coeffs()[0], c(1.0, 0.0));
        assert!(v.coeffs()[1..].iter().all(|x| *x == c(0.0, 0.0)));

        let v = coherent_fock(c(1.0, 0.0), 32).unwrap();
        let e = (-0.5f64).exp();
        assert!((v.coeffs()[0].re - e).abs() < 1e-15);
        assert!((v.coeffs()[1].re - e).abs() < 1e-15);
        assert!((e - 0.606_530_7).abs() < 1e-7);

        let v = coherent_fock(c(2.0, 1.0), 64).unwrap();
        assert!((v.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coherent_matches_closed_form() {
        let alpha = c(0.7, -1.3);
        let v = coherent_fock(alpha, 40).unwrap();
        for (n, cn) in v.coeffs().iter().enumerate() {
            let direct = (-alpha.norm_sqr() / 2.0).exp() * alpha.powu(n as u32) / factorial::<f64>(n).sqrt();
            assert!((cn - direct).norm() < 1e-15);
        }
    }

    #[test]
    fn truncation_is_enforced() {
        assert_eq!(required_dimension(2.0f64), 36);
        assert!(matches!(
            coherent_fock(c(2.0, 0.0), 35),
            Err(Error::TruncationInsufficient { required: 36, got: 35 })
        ));
        let v = coherent_fock(c(2.0, 0.0), 36).unwrap();
        assert!(1.0 - v.norm_sqr() < 1e-12);
    }

    #[test]
    fn overlap_examples() {
        let a = c(0.3, -0.8);
        assert!((overlap(a, a) - 1.0).norm() < 1e-15);
        let o = overlap(c(0.0, 0.0), c(1.0, 0.0));
        assert!((o.re - (-0.5f64).exp()).abs() < 1e-15);
        assert!((o.norm_sqr() - 0.367_879_4).abs() < 1e-7);
        assert!((overlap(c(1.0, 0.0), c(0.0, 1.0)) - c(-1.0, 1.0).exp()).norm() < 1e-15);
    }

    #[test]
    fn overlap_matches_fock_inner_product() {
        let (a, b) = (c(1.2, 0.4), c(-0.5, 1.1));
        let (va, vb) = (coherent_fock(a, 64).unwrap(), coherent_fock(b, 64).unwrap());
        assert!((va.inner(&vb) - overlap(a, b)).norm() < 1e-13);
    }

    #[test]
    fn bargmann_examples() {
        let z = c(0.4, -1.7);
        let vac = bargmann_of_fock(&FockVector::<f64>::vacuum(8));
        assert!((vac.eval(z) - 1.0).norm() < 1e-15);
        let one = bargmann_of_fock(&FockVector::<f64>::number_state(1, 8));
        assert!((one.eval(z) - z).norm() < 1e-15);
        assert_eq!(one.tag(), BargmannTag::FromFock);
    }

    #[test]
    fn coherent_bargmann_is_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let beta = C::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..6.3));
            let z = C::from_polar(rng.random_range(0.0..2.0), rng.random_range(0.0..6.3));
            let poly = bargmann_of_fock(&coherent_fock(beta, 64).unwrap());
            let exact = BargmannFunction::coherent(beta);
            assert!((poly.eval(z) - exact.eval(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn reproducing_relation() {
        let alpha = c(0.9, 0.6);
        assert!((reproduce(alpha, &BargmannFunction::constant_one()) - overlap(alpha, c(0.0, 0.0))).norm() < 1e-15);
        let beta = c(-0.4, 1.2);
        let psi = bargmann_of_fock(&coherent_fock(beta, 64).unwrap());
        assert!((reproduce(alpha, &psi) - overlap(alpha, beta)).norm() < 1e-10);
        let f = BargmannFunction::sigma_based(|z: C| z * z + 3.0);
        assert!((reproduce(c(0.0, 0.0), &f) - 3.0).norm() < 1e-15);

        let s = FockVector::new((0..30).map(|n| c(1.0 / (n + 1) as f64, 0.1 * n as f64)).collect());
        let direct = coherent_fock(alpha, 30).unwrap().inner(&s);
        assert!((reproduce(alpha, &bargmann_of_fock(&s)) - direct).norm() < 1e-12);
    }

    #[test]
    fn growth_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let samples: Vec<C> =
            (0..200).map(|_| C::from_polar(4.0 * rng.random::<f64>().sqrt(), rng.random_range(0.0..6.3))).collect();
        assert!(growth_bound_check(&FockVector::vacuum(4), &samples));
        assert!(growth_bound_check(&coherent_fock(c(1.0, 0.0), 64).unwrap(), &samples));
        let doubled = FockVector::vacuum(4).scaled(c(2.0, 0.0));
        assert!(!growth_bound_check(&doubled, &[c(0.0, 0.0)]));
    }

    #[test]
    fn grid_basics() {
        let g = QuadratureGrid::<f64>::default();
        assert_eq!((g.radial_count(), g.angular_count()), (64, 128));
        let mass: f64 = g.nodes().map(|(_, w, _)| w).sum();
        assert!((mass - 64.0).abs() < 1e-10, "{mass}"); // R² = area/π
        assert!(QuadratureGrid::<f64>::new(-1.0, 8, 8).is_err());
        assert!(QuadratureGrid::<f64>::new(1.0, 1, 8).is_err());
    }

    #[test]
    fn inner_product_examples() {
        let g = QuadratureGrid::<f64>::default();
        let one = BargmannFunction::constant_one();
        let r = bargmann_inner(&one, &one, &g);
        assert!((r.value - 1.0).norm() < 1e-12);
        assert!(!r.non_decaying());

        for (b, gm) in [(c(1.5, 0.0), c(0.0, 1.5)), (c(-1.0, 0.7), c(0.3, -1.1)), (c(0.0, 0.0), c(1.2, 0.9))] {
            let v = bargmann_inner(&BargmannFunction::coherent(b), &BargmannFunction::coherent(gm), &g).value;
            assert!((v - overlap(b, gm)).norm() < 1e-8);
        }

        for m in 0..=6u32 {
            for n in 0..=6u32 {
                let v = bargmann_inner(&BargmannFunction::monomial(m), &BargmannFunction::monomial(n), &g).value;
                let expect = if m == n { factorial::<f64>(m as usize) } else { 0.0 };
                assert!((v - expect).norm() < 1e-8, "{m} {n} {v}");
            }
        }
    }

    #[test]
    fn non_decaying_integrand_flagged() {
        let g = QuadratureGrid::<f64>::new(3.0, 32, 64).unwrap();
        let f = BargmannFunction::sigma_based(|z: C| (z * z * 0.5).exp());
        assert!(bargmann_inner(&f, &f, &g).non_decaying());
    }

    #[test]
    fn parseval_across_correspondence() {
        let g = QuadratureGrid::<f64>::default();
        let s = FockVector::new((0..12).map(|n| c((n as f64).sin(), 0.3 / (1 + n) as f64)).collect());
        let psi = bargmann_of_fock(&s);
        let v = bargmann_inner(&psi, &psi, &g).value;
        assert!(v.re >= 0.0 && v.im.abs() < 1e-10);
        assert!((v.re - s.norm_sqr()).abs() < 1e-8);
    }

    #[test]
    fn resolution_of_identity() {
        // Oracle: the disk-truncated diagonal is the incomplete gamma ratio and
        // the angular rule annihilates off-diagonal entries.
        let g = QuadratureGrid::<f64>::new(5.0, 64, 128).unwrap();
        let op = resolution_operator(36, &g);
        for n in 0..36 {
            assert!((op[(n, n)].re - disk_mass(n, 25.0)).abs() < 1e-12, "{n}");
        }
        assert_eq!(resolved_states(5.0f64), 5);
        assert!(resolution_check(36, &g) < 1e-6);
        let profile = resolution_profile(36, &g);
        assert!(profile[..5].iter().all(|&d| d < 1e-6));
        assert!(profile[5] > 1e-6);
        for w in profile[..30].windows(2) {
            assert!(w[1] >= w[0]);
        }

        let g3 = QuadratureGrid::<f64>::new(3.0, 64, 128).unwrap();
        let op3 = resolution_operator(16, &g3);
        assert!((op3[(0, 0)].re - (1.0 - (-9.0f64).exp())).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn overlap_hermitian_and_gaussian(ar in -3.0..3.0f64, ai in -3.0..3.0f64, br in -3.0..3.0f64, bi in -3.0..3.0f64) {
            let (a, b) = (c(ar, ai), c(br, bi));
            prop_assert!((overlap(a, b) - overlap(b, a).conj()).norm() < 1e-15);
            prop_assert!((overlap(a, b).norm_sqr() - (-(a - b).norm_sqr()).exp()).abs() < 1e-14);
        }

        #[test]
        fn reproduce_matches_fock(ar in -2.0..2.0f64, ai in -2.0..2.0f64, seed in 0u64..1000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = FockVector::new((0..20).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
            let alpha = c(ar, ai);
            let direct = coherent_fock(alpha, 48).unwrap().inner(&s);
            prop_assert!((reproduce(alpha, &bargmann_of_fock(&s)) - direct).norm() < 1e-11);
        }
    }
}
