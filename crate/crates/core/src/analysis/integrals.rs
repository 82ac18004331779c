//! Shell-by-shell quadrature of the integrals whose divergence decides
//! completeness of a lattice system and of its punctured subsystems.

use gauss_quad::GaussLegendre;
use num_complex::Complex;
use std::num::NonZeroUsize;

use crate::elliptic::PeriodicDensity;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, LatticeIndex};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// Radius of the disk around each puncture that no node may enter.
pub const EXCLUSION_RADIUS: f64 = 1e-3;

/// Number of trailing shells inspected by the verdict.
pub const VERDICT_SHELLS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegralKind {
    /// `∫ ρ(α) e^{((π−S)/S)|α|²} d²α`, no punctures.
    Weighted,
    /// `∫ ρ(α) / |α − α_p|² d²α`, one puncture.
    SinglePuncture,
    /// `∫ ρ(α) / (|α − α_p|² |α − α_q|²) d²α`, two punctures.
    DoublePuncture,
}

impl IntegralKind {
    pub fn punctures(self) -> usize {
        match self {
            IntegralKind::Weighted => 0,
            IntegralKind::SinglePuncture => 1,
            IntegralKind::DoublePuncture => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntegralKind::Weighted => "I",
            IntegralKind::SinglePuncture => "I00",
            IntegralKind::DoublePuncture => "I_tilde",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Diverges,
    Converges,
    Inconclusive,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Diverges => "diverges",
            Verdict::Converges => "converges",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Node density of the polar rule on each annulus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellRule {
    /// Gauss–Legendre nodes per unit of radius.
    pub radial_per_unit: usize,
    /// Angular nodes per unit of arc length at the outer edge of a shell.
    pub angular_per_unit: usize,
    pub min_angular: usize,
}

impl Default for ShellRule {
    fn default() -> Self {
        ShellRule { radial_per_unit: 12, angular_per_unit: 16, min_angular: 64 }
    }
}

/// Partial integrals over disks of increasing radius.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralTrace<T: Real> {
    pub kind: IntegralKind,
    pub radii: Vec<T>,
    /// Integral over `R_{j−1} < |α| ≤ R_j`, with `R_{−1} = 0`.
    pub shells: Vec<T>,
    /// Integral over `|α| ≤ R_j`.
    pub partial: Vec<T>,
    pub verdict: Verdict,
    /// `ΔP / Δ ln R` over the trailing shells.
    pub log_slope: T,
}

pub fn default_radii<T: Real>() -> Vec<T> {
    (1..=12).map(|r| from_i64(r)).collect()
}

fn integrand<T: Real>(
    density: &PeriodicDensity<T>,
    kind: IntegralKind,
    poles: &[(LatticeIndex, Complex<T>)],
    exponent: T,
    alpha: Complex<T>,
) -> Result<T> {
    let rho = density.at(alpha);
    let mut denom = T::one();
    for &(idx, p) in poles {
        let d = (alpha - p).norm();
        if d < lit(EXCLUSION_RADIUS) {
            return Err(Error::NearPole { m: idx.m, n: idx.n, distance: to_f64(d) });
        }
        denom *= d * d;
    }
    Ok(match kind {
        IntegralKind::Weighted => rho * (exponent * alpha.norm_sqr()).exp(),
        _ => rho / denom,
    })
}

/// Polar quadrature of one target integral over growing disks.
pub fn completeness_integral_trace<T: Real>(
    lattice: &Lattice<T>,
    radii: &[T],
    kind: IntegralKind,
    punctures: &[LatticeIndex],
) -> Result<IntegralTrace<T>> {
    completeness_integral_trace_with(lattice, radii, kind, punctures, ShellRule::default())
}

pub fn completeness_integral_trace_with<T: Real>(
    lattice: &Lattice<T>,
    radii: &[T],
    kind: IntegralKind,
    punctures: &[LatticeIndex],
    rule: ShellRule,
) -> Result<IntegralTrace<T>> {
    if radii.is_empty() || !(radii[0] > T::zero()) || radii.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("radii must be positive and strictly increasing".into()));
    }
    if punctures.len() != kind.punctures() {
        return Err(Error::InvalidArgument(format!(
            "{} takes {} puncture(s), got {}",
            kind.name(),
            kind.punctures(),
            punctures.len()
        )));
    }
    if punctures.len() == 2 && punctures[0] == punctures[1] {
        return Err(Error::InvalidArgument("punctures must be distinct".into()));
    }
    let density = PeriodicDensity::new(*lattice)?;
    let poles: Vec<(LatticeIndex, Complex<T>)> = punctures.iter().map(|&i| (i, lattice.point(i))).collect();
    let exponent = (T::PI() - lattice.area()) / lattice.area();

    let mut shells = Vec::with_capacity(radii.len());
    let mut inner = T::zero();
    for &outer in radii {
        let width = to_f64(outer - inner);
        let nr = ((width * rule.radial_per_unit as f64).ceil() as usize).max(2);
        let arc = to_f64(outer) * std::f64::consts::TAU;
        let na = ((arc * rule.angular_per_unit as f64).ceil() as usize).max(rule.min_angular);
        let gl = GaussLegendre::new(NonZeroUsize::new(nr).expect("at least two nodes"));
        let (a, b) = (to_f64(inner), to_f64(outer));
        let dtheta = std::f64::consts::TAU / na as f64;
        let mut shell = T::zero();
        for (x, w) in gl.iter() {
            let r = 0.5 * (b - a) * (x + 1.0) + a;
            let wr = 0.5 * (b - a) * w * r * dtheta;
            let mut ring = T::zero();
            for j in 0..na {
                let theta = dtheta * (j as f64 + 0.5);
                let alpha = Complex::from_polar(lit::<T>(r), lit::<T>(theta));
                ring += integrand(&density, kind, &poles, exponent, alpha)?;
            }
            shell += ring * lit::<T>(wr);
        }
        shells.push(shell);
        inner = outer;
    }
    let partial: Vec<T> = shells
        .iter()
        .scan(T::zero(), |acc, &s| {
            *acc += s;
            Some(*acc)
        })
        .collect();
    let verdict = classify(radii, &shells, &partial);
    let k = radii.len().saturating_sub(VERDICT_SHELLS);
    let last = radii.len() - 1;
    let log_slope = if last > k {
        (partial[last] - partial[k]) / (radii[last].ln() - radii[k].ln())
    } else {
        T::nan()
    };
    Ok(IntegralTrace { kind, radii: radii.to_vec(), shells, partial, verdict, log_slope })
}

/// Shell-ratio verdict over the trailing [`VERDICT_SHELLS`] shells.
///
/// Diverges when the contributions do not decrease, or decay no faster than
/// `1/R²`. Converges when every ratio stays below `0.9` and the geometric tail
/// estimate is under 5% of the partial sum.
pub fn classify<T: Real>(radii: &[T], shells: &[T], partial: &[T]) -> Verdict {
    let n = shells.len();
    if n < VERDICT_SHELLS {
        return Verdict::Inconclusive;
    }
    let tail = &shells[n - VERDICT_SHELLS..];
    let r = &radii[n - VERDICT_SHELLS..];
    let non_decreasing = |v: &[T]| v.windows(2).all(|w| w[1] >= w[0]);
    let scaled: Vec<T> = tail.iter().zip(r).map(|(&c, &rr)| c * rr * rr).collect();
    if non_decreasing(tail) || non_decreasing(&scaled) {
        return Verdict::Diverges;
    }
    let ratios: Vec<T> = tail.windows(2).map(|w| w[1] / w[0]).collect();
    let q = ratios.iter().copied().fold(T::zero(), T::max);
    let threshold = lit::<T>(0.9);
    if ratios.iter().all(|&x| x >= T::zero() && x < threshold) {
        let estimate = tail[VERDICT_SHELLS - 1] * q / (T::one() - q);
        if estimate < lit::<T>(0.05) * partial[n - 1] {
            return Verdict::Converges;
        }
    }
    Verdict::Inconclusive
}

/// Mean of `ρ` over one cell, by the periodic trapezoid rule in cell coordinates.
pub fn cell_average<T: Real>(lattice: &Lattice<T>, nodes: usize) -> Result<T> {
    let density = PeriodicDensity::new(*lattice)?;
    let n = nodes.max(1);
    let h = T::one() / from_i64::<T>(n as i64);
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            let x = h * from_i64::<T>(i as i64);
            let y = h * from_i64::<T>(j as i64);
            s += density.at(lattice.omega1() * x + lattice.omega2() * y);
        }
    }
    Ok(s / from_i64::<T>((n * n) as i64))
}
