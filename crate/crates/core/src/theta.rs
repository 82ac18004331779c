//! Jacobi theta constants θ₂, θ₃, θ₄ at zero argument and the chain of
//! identities linking the `k = 0` lattice relation to `θ₃⁴ = θ₂⁴ + θ₄⁴`.
//!
//! Transformation checks are restricted to `τ = i·c`, where every theta
//! constant is a positive real and square-root branches are unambiguous.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{sign_factor, LatticeIndex};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// Modular parameter in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint<T: Real> {
    tau: Complex<T>,
}

impl<T: Real> ThetaPoint<T> {
    pub fn new(tau: Complex<T>) -> Result<Self> {
        if tau.im > T::zero() && tau.re.is_finite() && tau.im.is_finite() {
            Ok(ThetaPoint { tau })
        } else {
            Err(Error::ThetaDomain(to_f64(tau.im)))
        }
    }

    /// `τ = i·c` for `c > 0`.
    pub fn imaginary(c: T) -> Result<Self> {
        Self::new(Complex::new(T::zero(), c))
    }

    pub fn tau(&self) -> Complex<T> {
        self.tau
    }

    pub fn theta2(&self) -> Complex<T> {
        series(self.tau, Shift::Half, false)
    }

    pub fn theta3(&self) -> Complex<T> {
        series(self.tau, Shift::Integer, false)
    }

    pub fn theta4(&self) -> Complex<T> {
        series(self.tau, Shift::Integer, true)
    }
}

#[derive(Clone, Copy)]
enum Shift {
    Integer,
    Half,
}

/// `Σ_m (±1)^m exp(iπτ (m + s)²)` summed symmetrically outward from the
/// dominant terms until the next pair falls below `1e-17` of the total.
fn series<T: Real>(tau: Complex<T>, shift: Shift, alternate: bool) -> Complex<T> {
    let i_pi_tau = Complex::new(T::zero(), T::PI()) * tau;
    let term = |x: T| (i_pi_tau * (x * x)).exp();
    let cutoff = lit::<T>(1e-17);
    match shift {
        Shift::Integer => {
            let mut sum = Complex::<T>::one();
            for m in 1i64.. {
                let t = term(from_i64(m)) * lit::<T>(2.0);
                let t = if alternate && m % 2 == 1 { -t } else { t };
                sum += t;
                if t.norm() < cutoff * sum.norm() || m > 100_000 {
                    break;
                }
            }
            sum
        }
        Shift::Half => {
            // Terms m and −1−m coincide.
            let mut sum = Complex::<T>::zero();
            for m in 0i64.. {
                let x = from_i64::<T>(m) + lit(0.5);
                let t = term(x) * lit::<T>(2.0);
                sum += t;
                if t.norm() < cutoff * sum.norm() || m > 100_000 {
                    break;
                }
            }
            sum
        }
    }
}

pub fn theta2<T: Real>(tau: Complex<T>) -> Result<Complex<T>> {
    Ok(ThetaPoint::new(tau)?.theta2())
}

pub fn theta3<T: Real>(tau: Complex<T>) -> Result<Complex<T>> {
    Ok(ThetaPoint::new(tau)?.theta3())
}

pub fn theta4<T: Real>(tau: Complex<T>) -> Result<Complex<T>> {
    Ok(ThetaPoint::new(tau)?.theta4())
}

/// Residuals of `θ₃(τ) = √(i/τ) θ₃(−1/τ)` and `θ₄(τ) = √(i/τ) θ₂(−1/τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPair<T> {
    pub first: T,
    pub second: T,
}

impl<T: Real> ResidualPair<T> {
    pub fn max(&self) -> T {
        self.first.max(self.second)
    }
}

/// Modular transformation residuals at `τ = i·c`.
pub fn modular_check<T: Real>(c: T) -> Result<ResidualPair<T>> {
    let p = ThetaPoint::imaginary(c)?;
    let tau = p.tau();
    let inv = ThetaPoint::new(-Complex::<T>::one() / tau)?;
    let factor = (Complex::<T>::i() / tau).sqrt();
    Ok(ResidualPair {
        first: (p.theta3() - factor * inv.theta3()).norm(),
        second: (p.theta4() - factor * inv.theta2()).norm(),
    })
}

fn require_positive<T: Real>(name: &str, v: Complex<T>) -> Result<()> {
    if v.re > T::zero() {
        Ok(())
    } else {
        Err(Error::BranchAmbiguity(format!("{name} has real part {}", to_f64(v.re))))
    }
}

/// Residuals of the doubling formulas
/// `θ₂(2τ) = √((θ₃² − θ₄²)/2)` and `θ₃(2τ) = √((θ₃² + θ₄²)/2)`.
pub fn doubling_check<T: Real>(tau: Complex<T>) -> Result<ResidualPair<T>> {
    let p = ThetaPoint::new(tau)?;
    let d = ThetaPoint::new(tau + tau)?;
    let (t3, t4) = (p.theta3(), p.theta4());
    let (d2, d3) = (d.theta2(), d.theta3());
    for (name, v) in [("theta3", t3), ("theta4", t4), ("theta2(2tau)", d2), ("theta3(2tau)", d3)] {
        require_positive(name, v)?;
    }
    let half = lit::<T>(0.5);
    Ok(ResidualPair {
        first: (d2 - ((t3 * t3 - t4 * t4) * half).sqrt()).norm(),
        second: (d3 - ((t3 * t3 + t4 * t4) * half).sqrt()).norm(),
    })
}

/// Residual of `θ₃⁴ − θ₂⁴ − θ₄⁴` at `τ`.
pub fn jacobi_residual<T: Real>(tau: Complex<T>) -> Result<T> {
    let p = ThetaPoint::new(tau)?;
    Ok((p.theta3().powi(4) - p.theta2().powi(4) - p.theta4().powi(4)).norm())
}

/// The double sum `Σ (−1)^{m+n+mn} exp(−π/2 (m²/c + c n²))`, evaluated two
/// independent ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSumIdentity<T> {
    /// Direct summation over `(m, n)`.
    pub direct: T,
    /// Through `θ₃(τ₁/2)θ₃(τ₂/2) − θ₃θ₄ − θ₄θ₃ − θ₄θ₄` with `τ₁ = ic`,
    /// `τ₂ = i/c`; the double sum equals `−½` of this combination.
    pub factorized: T,
    /// The four-term theta combination itself.
    pub combination: T,
}

impl<T: Real> LatticeSumIdentity<T> {
    pub fn max_abs(&self) -> T {
        self.direct.abs().max(self.factorized.abs())
    }
}

/// Direct double sum of the `k = 0` relation for a rectangular lattice.
pub fn rectangular_double_sum<T: Real>(c: T) -> T {
    let half_pi = T::PI() * lit(0.5);
    let inv_c = T::one() / c;
    // Terms below e^{-40} of the leading one are dropped.
    let bound = |scale: T| (lit::<T>(80.0) / (T::PI() * scale)).sqrt().ceil().to_i64().unwrap_or(0) + 1;
    let (mm, nn) = (bound(inv_c), bound(c));
    let mut sum = T::zero();
    for m in -mm..=mm {
        let a = from_i64::<T>(m);
        for n in -nn..=nn {
            let b = from_i64::<T>(n);
            let s = from_i64::<T>(i64::from(sign_factor(LatticeIndex::new(m, n))));
            sum += s * (-half_pi * (a * a * inv_c + c * b * b)).exp();
        }
    }
    sum
}

/// The `k = 0` identity for the rectangular critical lattice, by direct
/// summation and through theta constants.
pub fn lattice_sum_identity<T: Real>(c: T) -> Result<LatticeSumIdentity<T>> {
    let half = lit::<T>(0.5);
    let tau1 = Complex::new(T::zero(), c);
    let tau2 = Complex::new(T::zero(), T::one() / c);
    let a = ThetaPoint::new(tau1 * half)?;
    let b = ThetaPoint::new(tau2 * half)?;
    let (a3, a4, b3, b4) = (a.theta3().re, a.theta4().re, b.theta3().re, b.theta4().re);
    let combination = a3 * b3 - a3 * b4 - a4 * b3 - a4 * b4;
    Ok(LatticeSumIdentity { direct: rectangular_double_sum(c), factorized: -half * combination, combination })
}

/// Left side of the modular-transformed four-term identity,
/// `θ₃(2τ₁)θ₃(2τ₂) − θ₃(2τ₁)θ₂(2τ₂) − θ₂(2τ₁)θ₃(2τ₂) − θ₂(2τ₁)θ₂(2τ₂)`.
pub fn doubled_combination<T: Real>(c: T) -> Result<T> {
    let two = lit::<T>(2.0);
    let p1 = ThetaPoint::imaginary(two * c)?;
    let p2 = ThetaPoint::imaginary(two / c)?;
    let (x3, x2, y3, y2) = (p1.theta3().re, p1.theta2().re, p2.theta3().re, p2.theta2().re);
    Ok(x3 * y3 - x3 * y2 - x2 * y3 - x2 * y2)
}

/// The radical form of the identity, in thetas at `τ₁ = ic` only:
/// `√((θ₃²+θ₄²)(θ₃²+θ₂²)) − √((θ₃²−θ₄²)(θ₃²−θ₂²)) − √((θ₃²−θ₄²)(θ₃²+θ₂²)) − √((θ₃²+θ₄²)(θ₃²−θ₂²))`.
pub fn radical_combination<T: Real>(c: T) -> Result<T> {
    let p = ThetaPoint::imaginary(c)?;
    let (t2, t3, t4) = (p.theta2().re, p.theta3().re, p.theta4().re);
    let (s2, s3, s4) = (t2 * t2, t3 * t3, t4 * t4);
    Ok(((s3 + s4) * (s3 + s2)).sqrt()
        - ((s3 - s4) * (s3 - s2)).sqrt()
        - ((s3 - s4) * (s3 + s2)).sqrt()
        - ((s3 + s4) * (s3 - s2)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn ic(c: f64) -> C {
        C::new(0.0, c)
    }

    const GRID: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

    #[test]
    fn dominant_term() {
        let t = theta3(ic(10.0)).unwrap();
        assert!((t.re - 1.0).abs() < 1e-7);
        assert!((t.re - (1.0 + 2.0 * (-10.0 * std::f64::consts::PI).exp())).abs() < 1e-16);
    }

    #[test]
    fn theta4_is_shifted_theta3() {
        for c in [0.5, 1.0, 2.0] {
            let a = theta4(ic(c)).unwrap();
            let b = theta3(ic(c) + 1.0).unwrap();
            assert!((a - b).norm() < 1e-14, "{a} {b}");
        }
    }

    #[test]
    fn known_value_at_i() {
        // θ₃(i) = π^{1/4} / Γ(3/4)
        let expected = std::f64::consts::PI.powf(0.25) / 1.225_416_702_465_177_6;
        assert!((theta3(ic(1.0)).unwrap().re - expected).abs() < 1e-14);
    }

    #[test]
    fn domain_error() {
        assert!(matches!(theta3(C::new(0.3, 0.0)), Err(Error::ThetaDomain(_))));
        assert!(matches!(theta2(C::new(0.3, -1.0)), Err(Error::ThetaDomain(_))));
        assert!(matches!(modular_check(-1.0), Err(Error::ThetaDomain(_))));
    }

    #[test]
    fn jacobi_identity() {
        for c in GRID {
            assert!(jacobi_residual(ic(c)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn modular_transformation() {
        for c in [1.0, 2.0, 0.5] {
            assert!(modular_check(c).unwrap().max() < 1e-13);
        }
        for c in GRID {
            assert!(modular_check(c).unwrap().max() < 1e-12);
        }
    }

    #[test]
    fn doubling_formulas() {
        for c in [1.0, 2.0] {
            assert!(doubling_check(ic(c)).unwrap().max() < 1e-13);
        }
        let p = ThetaPoint::imaginary(1.0).unwrap();
        let d = ThetaPoint::imaginary(2.0).unwrap();
        let r = d.theta2().powi(2) + d.theta3().powi(2) - p.theta3().powi(2);
        assert!(r.norm() < 1e-13);
        // Off the imaginary axis θ₄ can have nonpositive real part.
        assert!(matches!(doubling_check(C::new(0.2, 0.1)), Err(Error::BranchAmbiguity(_))));
    }

    #[test]
    fn lattice_sum_vanishes_both_ways() {
        for c in [0.5, 1.0, 2.0] {
            let id = lattice_sum_identity::<f64>(c).unwrap();
            assert!(id.direct.abs() < 1e-12, "{c}: {}", id.direct);
            assert!(id.factorized.abs() < 1e-12);
            assert!((id.direct - id.factorized).abs() < 1e-13);
        }
        for c in GRID {
            assert!(lattice_sum_identity(c).unwrap().combination.abs() < 1e-12);
        }
    }

    #[test]
    fn transformed_identities_vanish() {
        for c in GRID {
            assert!(doubled_combination(c).unwrap().abs() < 1e-12);
            assert!(radical_combination(c).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn positivity_and_ordering() {
        for c in GRID {
            let p = ThetaPoint::imaginary(c).unwrap();
            let (t2, t3, t4) = (p.theta2(), p.theta3(), p.theta4());
            for t in [t2, t3, t4] {
                assert!(t.re > 0.0 && t.im.abs() < 1e-15);
            }
            assert!(t4.re < t3.re && t2.re < t3.re);
        }
    }

    #[test]
    fn f32_instantiation() {
        let r = jacobi_residual(Complex::new(0.0f32, 1.0)).unwrap();
        assert!(r < 1e-5);
    }
}
