//! Complex lattices `m·ω₁ + n·ω₂`, index windows, point-counting diagnostics
//! and the integer sign cocycle of the discrete displacement group.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{from_i64, lit, to_f64, Real};

/// Integer coordinates `(m, n)` of the lattice point `m·ω₁ + n·ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticeIndex {
    pub m: i64,
    pub n: i64,
}

impl LatticeIndex {
    pub const ORIGIN: LatticeIndex = LatticeIndex { m: 0, n: 0 };

    pub const fn new(m: i64, n: i64) -> Self {
        LatticeIndex { m, n }
    }

    pub fn is_origin(self) -> bool {
        self.m == 0 && self.n == 0
    }
}

impl std::ops::Add for LatticeIndex {
    type Output = LatticeIndex;
    fn add(self, rhs: LatticeIndex) -> LatticeIndex {
        LatticeIndex::new(self.m + rhs.m, self.n + rhs.n)
    }
}

impl std::ops::Sub for LatticeIndex {
    type Output = LatticeIndex;
    fn sub(self, rhs: LatticeIndex) -> LatticeIndex {
        LatticeIndex::new(self.m - rhs.m, self.n - rhs.n)
    }
}

impl std::ops::Neg for LatticeIndex {
    type Output = LatticeIndex;
    fn neg(self) -> LatticeIndex {
        LatticeIndex::new(-self.m, -self.n)
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl From<(i64, i64)> for LatticeIndex {
    fn from((m, n): (i64, i64)) -> Self {
        LatticeIndex::new(m, n)
    }
}

/// A two-dimensional lattice in the complex plane with positively oriented
/// generators, so `area = Im(ω₂·conj(ω₁)) > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice<T: Real> {
    omega1: Complex<T>,
    omega2: Complex<T>,
    area: T,
}

impl<T: Real> Lattice<T> {
    /// Builds a lattice from two generators. Negatively oriented pairs are
    /// swapped so that the stored cell area is positive.
    pub fn new(omega1: Complex<T>, omega2: Complex<T>) -> Result<Self> {
        let finite = [omega1.re, omega1.im, omega2.re, omega2.im].iter().all(|x| x.is_finite());
        let signed_area = (omega2 * omega1.conj()).im;
        let scale = omega1.norm() * omega2.norm();
        if !finite || scale.is_zero() || signed_area.abs() <= lit::<T>(16.0) * T::epsilon() * scale {
            return Err(Error::DegenerateGenerators);
        }
        let (omega1, omega2) = if signed_area < T::zero() { (omega2, omega1) } else { (omega1, omega2) };
        Ok(Lattice { omega1, omega2, area: signed_area.abs() })
    }

    /// Square lattice `(s, i·s)` with the given cell area.
    pub fn square(area: T) -> Result<Self> {
        if !(area > T::zero()) {
            return Err(Error::InvalidArgument(format!("cell area must be positive, got {}", to_f64(area))));
        }
        let s = area.sqrt();
        Lattice::new(Complex::new(s, T::zero()), Complex::new(T::zero(), s))
    }

    /// The square lattice of cell area π, generated by `√π` and `i√π`.
    pub fn von_neumann() -> Self {
        Lattice::square(T::PI()).expect("positive area")
    }

    pub fn omega1(&self) -> Complex<T> {
        self.omega1
    }

    pub fn omega2(&self) -> Complex<T> {
        self.omega2
    }

    /// Cell area `S = Im(ω₂·conj(ω₁))`.
    pub fn area(&self) -> T {
        self.area
    }

    /// Shape parameter `ω₂/ω₁`, always in the upper half plane.
    pub fn ratio(&self) -> Complex<T> {
        self.omega2 / self.omega1
    }

    pub fn point(&self, idx: LatticeIndex) -> Complex<T> {
        self.point_mn(idx.m, idx.n)
    }

    pub fn point_mn(&self, m: i64, n: i64) -> Complex<T> {
        self.omega1 * from_i64::<T>(m) + self.omega2 * from_i64::<T>(n)
    }

    /// Rescales both generators uniformly, keeping the shape `ω₂/ω₁`.
    pub fn scale_to_area(&self, target_area: T) -> Result<Self> {
        if !(target_area > T::zero()) || !target_area.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "target area must be positive, got {}",
                to_f64(target_area)
            )));
        }
        let factor = (target_area / self.area).sqrt();
        Lattice::new(self.omega1 * factor, self.omega2 * factor)
    }

    /// Same lattice with generators `(ω₁, ω₂ + ω₁)`.
    pub fn sheared(&self) -> Self {
        Lattice { omega1: self.omega1, omega2: self.omega2 + self.omega1, area: self.area }
    }

    /// Whether `|S − target| ≤ tol`.
    pub fn has_area(&self, target: T, tol: T) -> bool {
        (self.area - target).abs() <= tol
    }

    /// Errors unless the cell area equals π within `1e-10`.
    pub fn require_critical(&self) -> Result<()> {
        if self.has_area(T::PI(), lit(1e-10)) {
            Ok(())
        } else {
            Err(Error::AreaMismatch { expected: std::f64::consts::PI, found: to_f64(self.area) })
        }
    }

    /// Real coordinates `(x, y)` with `z = x·ω₁ + y·ω₂`.
    pub fn coordinates(&self, z: Complex<T>) -> (T, T) {
        let x = -(z * self.omega2.conj()).im / self.area;
        let y = (z * self.omega1.conj()).im / self.area;
        (x, y)
    }

    /// Splits `z` into the nearest lattice point (in cell coordinates) and a
    /// remainder in the centred fundamental cell `|x|, |y| ≤ 1/2`.
    pub fn reduce(&self, z: Complex<T>) -> (LatticeIndex, Complex<T>) {
        let (x, y) = self.coordinates(z);
        let m = x.round().to_i64().unwrap_or(0);
        let n = y.round().to_i64().unwrap_or(0);
        (LatticeIndex::new(m, n), z - self.point_mn(m, n))
    }

    /// Index bounds `(|m|max, |n|max)` covering every point with `|α| < r`.
    fn index_bounds(&self, r: T) -> (i64, i64) {
        let mm = (r * self.omega2.norm() / self.area).floor().to_i64().unwrap_or(0) + 1;
        let nn = (r * self.omega1.norm() / self.area).floor().to_i64().unwrap_or(0) + 1;
        (mm, nn)
    }

    /// Calls `f` for every lattice point strictly inside radius `r`.
    fn for_each_in_disk(&self, r: T, mut f: impl FnMut(LatticeIndex, Complex<T>)) {
        let (mm, nn) = self.index_bounds(r);
        let r2 = r * r;
        for m in -mm..=mm {
            for n in -nn..=nn {
                let p = self.point_mn(m, n);
                if p.norm_sqr() < r2 {
                    f(LatticeIndex::new(m, n), p);
                }
            }
        }
    }

    /// Number of lattice points with `|α| < r`, origin included.
    pub fn count_in_disk(&self, r: T) -> u64 {
        let mut count = 0;
        self.for_each_in_disk(r, |_, _| count += 1);
        count
    }

    /// Density estimates `N(r)/r²`; these tend to `π/S`.
    pub fn upper_density(&self, radii: &[T]) -> Vec<T> {
        radii
            .iter()
            .map(|&r| T::from_u64(self.count_in_disk(r)).unwrap_or(T::nan()) / (r * r))
            .collect()
    }

    /// Regularity sum `Σ 1/α²` over nonzero lattice points with `|α| < r`.
    ///
    /// Points `α` and `−α` are added as a pair.
    pub fn delta_partial(&self, r: T) -> Complex<T> {
        let mut sum = Complex::zero();
        self.for_each_in_disk(r, |idx, p| {
            if idx > LatticeIndex::ORIGIN {
                let inv = Complex::<T>::one() / (p * p);
                sum += inv + inv;
            }
        });
        sum
    }
}

/// Square index window `|m|, |n| ≤ M` with optional exclusions, enumerated
/// row-major with `m` as the outer index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeWindow {
    half_width: u32,
    excluded: BTreeSet<LatticeIndex>,
}

impl LatticeWindow {
    pub fn new(half_width: u32) -> Self {
        LatticeWindow { half_width, excluded: BTreeSet::new() }
    }

    pub fn excluding(mut self, indices: impl IntoIterator<Item = LatticeIndex>) -> Self {
        self.excluded.extend(indices);
        self
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    pub fn excluded(&self) -> &BTreeSet<LatticeIndex> {
        &self.excluded
    }

    pub fn contains(&self, idx: LatticeIndex) -> bool {
        let w = i64::from(self.half_width);
        idx.m.abs() <= w && idx.n.abs() <= w && !self.excluded.contains(&idx)
    }

    /// Whether `idx` lies at least `buffer` steps inside the window edge.
    pub fn is_interior(&self, idx: LatticeIndex, buffer: u32) -> bool {
        let w = i64::from(self.half_width) - i64::from(buffer);
        idx.m.abs() <= w && idx.n.abs() <= w
    }

    pub fn indices(&self) -> impl Iterator<Item = LatticeIndex> + '_ {
        let w = i64::from(self.half_width);
        (-w..=w)
            .flat_map(move |m| (-w..=w).map(move |n| LatticeIndex::new(m, n)))
            .filter(move |idx| !self.excluded.contains(idx))
    }

    pub fn len(&self) -> usize {
        self.indices().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Exponent `F(k, l) = kl + k + l` that absorbs the discrete group's signs.
pub fn sign_exponent(idx: LatticeIndex) -> i64 {
    idx.m * idx.n + idx.m + idx.n
}

/// `(−1)^(m+n+mn)`: `+1` exactly when both indices are even.
pub fn sign_factor(idx: LatticeIndex) -> i32 {
    let odd = |x: i64| x.rem_euclid(2) == 1;
    if odd(idx.m) || odd(idx.n) {
        -1
    } else {
        1
    }
}

/// Antisymmetric cocycle `B(n, p; k, l) = n·l − p·k`.
pub fn cocycle_b(n: i64, p: i64, k: i64, l: i64) -> i64 {
    n * l - p * k
}

/// `(−1)^e` for an integer exponent.
pub fn parity_sign(e: i64) -> i32 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
