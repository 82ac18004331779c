//! The linear relation `Σ (−1)^{m+n+mn} |α_mn⟩ ∼ 0` at cell area π and the
//! moment identities it implies.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::{sign_factor, Lattice, LatticeIndex, LatticeWindow};
use crate::scalar::{from_i64, lit, CompensatedSum, Real};

/// Terms of a symmetric window, with `(m, n)` and `(−m, −n)` merged.
#[derive(Debug, Clone)]
struct PairedTerms<T: Real> {
    /// `(α, (−1)^{F} e^{−|α|²/2})` for indices in the positive half-window.
    half: Vec<(LatticeIndex, Complex<T>, T)>,
}

impl<T: Real> PairedTerms<T> {
    fn new(lattice: &Lattice<T>, half_width: u32) -> Self {
        let half_w = lit::<T>(0.5);
        let half = LatticeWindow::new(half_width)
            .indices()
            .filter(|&idx| idx > LatticeIndex::ORIGIN)
            .map(|idx| {
                let a = lattice.point(idx);
                let w = (-a.norm_sqr() * half_w).exp();
                (idx, a, if sign_factor(idx) < 0 { -w } else { w })
            })
            .collect();
        PairedTerms { half }
    }
}

/// `f(z) = Σ (−1)^{m+n+mn} exp(−|α_mn|²/2 + α_mn z)` over `|m|, |n| ≤ M`.
#[derive(Debug, Clone)]
pub struct DependenceFunction<T: Real> {
    lattice: Lattice<T>,
    half_width: u32,
    terms: PairedTerms<T>,
}

impl<T: Real> DependenceFunction<T> {
    pub fn new(lattice: &Lattice<T>, half_width: u32) -> Result<Self> {
        lattice.require_critical()?;
        Ok(DependenceFunction { lattice: *lattice, half_width, terms: PairedTerms::new(lattice, half_width) })
    }

    pub fn lattice(&self) -> &Lattice<T> {
        &self.lattice
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    /// Value together with the largest single summand modulus.
    pub fn eval_with_scale(&self, z: Complex<T>) -> (Complex<T>, T) {
        let mut sum = CompensatedSum::default();
        sum.add(Complex::one());
        let mut scale = T::one();
        for &(_, a, w) in &self.terms.half {
            let (p, q) = ((a * z).exp() * w, (-a * z).exp() * w);
            scale = scale.max(p.norm()).max(q.norm());
            sum.add(p + q);
        }
        (sum.value(), scale)
    }

    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.eval_with_scale(z).0
    }

    /// `|f(z)|` divided by the largest summand.
    pub fn relative_magnitude(&self, z: Complex<T>) -> T {
        let (v, s) = self.eval_with_scale(z);
        v.norm() / s
    }

    /// Residual of `f(z + ᾱ_kl) = (−1)^{kl+k+l} e^{|α_kl|²/2} e^{α_kl z} f(z)`,
    /// relative to the largest summand on either side.
    pub fn functional_residual(&self, z: Complex<T>, idx: LatticeIndex) -> T {
        let alpha = self.lattice.point(idx);
        let (lhs, s_lhs) = self.eval_with_scale(z + alpha.conj());
        let (f, s_f) = self.eval_with_scale(z);
        let factor = (alpha * z + Complex::from(alpha.norm_sqr() * lit(0.5))).exp()
            * from_i64::<T>(i64::from(sign_factor(idx)));
        let rhs = factor * f;
        (lhs - rhs).norm() / s_lhs.max(factor.norm() * s_f)
    }
}

pub fn dependence_f<T: Real>(z: Complex<T>, lattice: &Lattice<T>, half_width: u32) -> Result<Complex<T>> {
    Ok(DependenceFunction::new(lattice, half_width)?.eval(z))
}

/// `Σ (−1)^{m+n+mn} α_mn^k e^{−|α_mn|²/2}` over `|m|, |n| ≤ M`.
///
/// Powers are taken of `m + nτ` with `τ = ω₂/ω₁` and rescaled by `ω₁^k`
/// afterwards, which keeps them exact for Gaussian-integer shapes. Odd `k`
/// cancels pairwise to exactly zero.
pub fn identity_sum<T: Real>(k: u32, lattice: &Lattice<T>, half_width: u32) -> Result<Complex<T>> {
    lattice.require_critical()?;
    let tau = lattice.ratio();
    let w1 = lattice.omega1();
    let half = lit::<T>(0.5);
    let mut sum = CompensatedSum::default();
    if k == 0 {
        sum.add(Complex::one());
    }
    for idx in LatticeWindow::new(half_width).indices().filter(|&i| i > LatticeIndex::ORIGIN) {
        let base = tau * from_i64::<T>(idx.n) + from_i64::<T>(idx.m);
        let w = (-lattice.point(idx).norm_sqr() * half).exp();
        let w = if sign_factor(idx) < 0 { -w } else { w };
        let p = base.powu(k);
        sum.add((p + (-base).powu(k)) * w);
    }
    Ok(sum.value() * w1.powu(k))
}

/// `|α_mn|² = π(a m² + 2b mn + c n²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm<T> {
    pub a: T,
    pub b: T,
    pub c: T,
}

impl<T: Real> QuadraticForm<T> {
    pub fn determinant(&self) -> T {
        self.a * self.c - self.b * self.b
    }

    pub fn eval(&self, m: i64, n: i64) -> T {
        let (x, y) = (from_i64::<T>(m), from_i64::<T>(n));
        T::PI() * (self.a * x * x + lit::<T>(2.0) * self.b * x * y + self.c * y * y)
    }
}

pub fn quadratic_form_of<T: Real>(lattice: &Lattice<T>) -> Result<QuadraticForm<T>> {
    lattice.require_critical()?;
    let (w1, w2) = (lattice.omega1(), lattice.omega2());
    Ok(QuadraticForm {
        a: w1.norm_sqr() / T::PI(),
        b: (w1 * w2.conj()).re / T::PI(),
        c: w2.norm_sqr() / T::PI(),
    })
}

/// Dependence diagnostics for one window.
#[derive(Debug, Clone, PartialEq)]
pub struct DependenceReport<T: Real> {
    pub half_width: u32,
    pub samples: Vec<Complex<T>>,
    /// Largest `|f(z)|` relative to its largest summand.
    pub max_relative_f: T,
    /// Largest functional-equation residual over samples and shifts `(1,0)`, `(0,1)`.
    pub functional_residual: T,
    /// `(k, |identity_sum(k)|)`.
    pub identity_residuals: Vec<(u32, T)>,
}

pub fn dependence_report<T: Real>(
    lattice: &Lattice<T>,
    half_width: u32,
    k_max: u32,
    samples: &[Complex<T>],
) -> Result<DependenceReport<T>> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no sample points".into()));
    }
    let f = DependenceFunction::new(lattice, half_width)?;
    let shifts = [LatticeIndex::new(1, 0), LatticeIndex::new(0, 1)];
    let mut max_relative_f = T::zero();
    let mut functional_residual = T::zero();
    for &z in samples {
        max_relative_f = max_relative_f.max(f.relative_magnitude(z));
        for idx in shifts {
            functional_residual = functional_residual.max(f.functional_residual(z, idx));
        }
    }
    let identity_residuals =
        (0..=k_max).map(|k| Ok((k, identity_sum(k, lattice, half_width)?.norm()))).collect::<Result<_>>()?;
    Ok(DependenceReport {
        half_width,
        samples: samples.to_vec(),
        max_relative_f,
        functional_residual,
        identity_residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::rectangular_double_sum;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn vn() -> Lattice<f64> {
        Lattice::von_neumann()
    }

    /// Unpaired direct sum in enumeration order.
    fn f_direct(z: C, lattice: &Lattice<f64>, m: i64) -> C {
        let mut s = C::new(0.0, 0.0);
        for i in -m..=m {
            for j in -m..=m {
                let idx = LatticeIndex::new(i, j);
                let a = lattice.point(idx);
                s += (-a.norm_sqr() / 2.0 + a * z).exp() * f64::from(sign_factor(idx));
            }
        }
        s
    }

    #[test]
    fn vanishes_at_origin() {
        let v = dependence_f(C::new(0.0, 0.0), &vn(), 8).unwrap();
        assert!(v.norm() < 1e-10);
    }

    #[test]
    fn matches_unpaired_sum() {
        let z = C::new(0.7, -1.1);
        let f = DependenceFunction::new(&vn(), 3).unwrap();
        assert!((f.eval(z) - f_direct(z, &vn(), 3)).norm() < 1e-13);
    }

    #[test]
    fn even_exactly() {
        let f = DependenceFunction::new(&vn(), 5).unwrap();
        for z in [C::new(0.3, 0.9), C::new(-1.7, 0.2), C::new(2.5, -2.5)] {
            assert_eq!(f.eval(z) - f.eval(-z), C::new(0.0, 0.0));
        }
    }

    #[test]
    fn truncations_shrink_toward_zero() {
        let z = C::new(1.2, 0.8);
        let mags: Vec<f64> =
            (2..=6).map(|m| DependenceFunction::new(&vn(), m).unwrap().relative_magnitude(z)).collect();
        for w in mags.windows(2) {
            assert!(w[1] < w[0] || w[1] < 1e-14, "{mags:?}");
        }
    }

    #[test]
    fn functional_equation() {
        let f = DependenceFunction::new(&vn(), 10).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let z = C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            assert!(f.functional_residual(z, LatticeIndex::new(1, 0)) < 1e-12);
        }
    }

    #[test]
    fn identity_examples() {
        let s0 = identity_sum(0, &vn(), 8).unwrap();
        assert!(s0.norm() < 1e-12);
        assert!((s0.re - rectangular_double_sum(1.0)).abs() < 1e-13);
        assert_eq!(identity_sum(1, &vn(), 5).unwrap(), C::new(0.0, 0.0));
        assert!(identity_sum(2, &vn(), 8).unwrap().norm() < 1e-12);
        for k in 0..=12 {
            let v = identity_sum(k, &vn(), 10).unwrap().norm();
            assert!(v < 1e-10, "{k}: {v}");
        }
    }

    #[test]
    fn identity_on_oblique_lattice() {
        let s = PI.sqrt();
        let l = Lattice::new(C::new(s, 0.0), C::new(0.5 * s, s)).unwrap();
        for k in [0, 2, 4] {
            assert!(identity_sum(k, &l, 12).unwrap().norm() < 1e-10);
        }
    }

    #[test]
    fn quadratic_forms() {
        let q = quadratic_form_of(&vn()).unwrap();
        assert!((q.a - 1.0).abs() < 1e-15 && q.b.abs() < 1e-15 && (q.c - 1.0).abs() < 1e-15);

        let l = Lattice::new(C::new((2.0 * PI).sqrt(), 0.0), C::new(0.0, (PI / 2.0).sqrt())).unwrap();
        let q = quadratic_form_of(&l).unwrap();
        assert!((q.a - 2.0).abs() < 1e-14 && q.b.abs() < 1e-15 && (q.c - 0.5).abs() < 1e-14);

        let s = PI.sqrt();
        let l = Lattice::new(C::new(s, 0.0), C::new(0.5 * s, s)).unwrap();
        let q = quadratic_form_of(&l).unwrap();
        assert!((q.a - 1.0).abs() < 1e-14 && (q.b - 0.5).abs() < 1e-14 && (q.c - 1.25).abs() < 1e-14);
        assert!((q.determinant() - 1.0).abs() < 1e-12);
        assert!((q.eval(2, -3) - l.point_mn(2, -3).norm_sqr()).abs() < 1e-12);

        assert!(matches!(quadratic_form_of(&Lattice::square(2.0).unwrap()), Err(Error::AreaMismatch { .. })));
    }

    #[test]
    fn report() {
        let samples = [C::new(0.5, 0.5), C::new(-1.0, 1.5)];
        let r = dependence_report(&vn(), 8, 12, &samples).unwrap();
        assert_eq!(r.identity_residuals.len(), 13);
        assert!(r.max_relative_f < 1e-8);
        assert!(r.functional_residual < 1e-10);
    }

    proptest! {
        #[test]
        fn determinant_is_one_for_critical_shapes(x in -1.0..1.0f64, y in 0.3..3.0f64) {
            // ω₂/ω₁ = x + iy, normalised to area π.
            let l = Lattice::new(C::new(1.0, 0.0), C::new(x, y)).unwrap().scale_to_area(PI).unwrap();
            let q = quadratic_form_of(&l).unwrap();
            prop_assert!((q.determinant() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn f_is_even(re in -2.0..2.0f64, im in -2.0..2.0f64) {
            let f = DependenceFunction::new(&vn(), 6).unwrap();
            let z = C::new(re, im);
            prop_assert_eq!(f.eval(z), f.eval(-z));
        }
    }
}
