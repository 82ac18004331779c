//! Check suites behind `verify`, `theta-check`, `group-check` and `dual-check`.
//!
//! Every row is `(name, residual, tolerance)`; a row passes when
//! `residual <= tolerance`. Enumeration order is fixed so output is
//! reproducible for a given seed.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vnlattice::analysis::{identity_sum, DependenceFunction, DualSystem};
use vnlattice::group::{barred_action_residual, commutation_phase, commutator_norm, multiplication_residual};
use vnlattice::lattice::{cocycle_b, sign_exponent, sign_factor};
use vnlattice::theta::{doubling_check, jacobi_residual, lattice_sum_identity, modular_check};
use vnlattice::{Complex64, Lattice64, LatticeIndex};

use crate::output::Table;
use crate::CliError;

pub struct CheckRow {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
}

impl CheckRow {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckRow { name: name.into(), residual, tolerance }
    }

    /// NaN residuals fail.
    pub fn pass(&self) -> bool {
        self.residual <= self.tolerance
    }
}

pub fn table(rows: &[CheckRow]) -> Table {
    let mut t = Table::new(&["name", "residual", "tolerance", "pass"]);
    for r in rows {
        t.push(vec![r.name.as_str().into(), r.residual.into(), r.tolerance.into(), r.pass().into()]);
    }
    t
}

const DEPENDENCE_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-10;
const THETA_TOL: f64 = 1e-12;
const DUAL_TOL: f64 = 1e-6;
const DUAL_RANGE: i64 = 3;
/// Product truncation for the dual states; 40 keeps pairings near 1e-9.
const DUAL_TRUNCATION: u32 = 40;
const MULTIPLICATION_TOL: f64 = 1e-6;
const COMMUTATOR_TOL: f64 = 1e-5;
const PHASE_TOL: f64 = 1e-12;
const COCYCLE_RANGE: i64 = 8;
const BARRED_TOL: f64 = 1e-5;

const DEPENDENCE_SAMPLES: usize = 100;
const DEPENDENCE_RADIUS: f64 = 2.0;
const MULTIPLICATION_SAMPLES: usize = 6;

fn disk_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    Complex64::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(0.0..TAU))
}

/// Relation residual over seeded samples, then the identity family `k = 0..=k_max`.
pub fn dependence(lattice: &Lattice64, window: u32, k_max: u32, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let f = DependenceFunction::new(lattice, window)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let worst = (0..DEPENDENCE_SAMPLES)
        .map(|_| f.relative_magnitude(disk_point(&mut rng, DEPENDENCE_RADIUS)))
        .fold(0.0, f64::max);
    let mut rows = vec![CheckRow::new("dependence_relation", worst, DEPENDENCE_TOL)];
    for k in 0..=k_max {
        let v = identity_sum(k, lattice, window)?;
        // Odd orders cancel pairwise and must vanish exactly.
        let tol = if k % 2 == 1 { 0.0 } else { IDENTITY_TOL };
        rows.push(CheckRow::new(format!("identity_k{k}"), v.norm(), tol));
    }
    Ok(rows)
}

pub fn theta() -> Result<Vec<CheckRow>, CliError> {
    let mut rows = Vec::new();
    for c in [0.5, 1.0, 2.0] {
        let id = lattice_sum_identity::<f64>(c)?;
        let r = id.direct.abs().max(id.factorized.abs()).max((id.direct - id.factorized).abs());
        rows.push(CheckRow::new(format!("theta_lattice_sum_c{c}"), r, THETA_TOL));
    }
    let cs = [0.25, 0.5, 1.0, 2.0, 4.0];
    for c in cs {
        rows.push(CheckRow::new(format!("theta_modular_c{c}"), modular_check::<f64>(c)?.max(), THETA_TOL));
    }
    for c in cs {
        let r = doubling_check(Complex64::new(0.0, c))?.max();
        rows.push(CheckRow::new(format!("theta_doubling_c{c}"), r, THETA_TOL));
    }
    for c in cs {
        let r = jacobi_residual(Complex64::new(0.0, c))?;
        rows.push(CheckRow::new(format!("theta_jacobi_c{c}"), r, THETA_TOL));
    }
    Ok(rows)
}

fn nonzero_indices(range: i64) -> Vec<LatticeIndex> {
    (-range..=range)
        .flat_map(|m| (-range..=range).map(move |n| LatticeIndex::new(m, n)))
        .filter(|i| !i.is_origin())
        .collect()
}

pub fn dual(lattice: &Lattice64) -> Result<Vec<CheckRow>, CliError> {
    let d = DualSystem::with_truncation(lattice, DUAL_TRUNCATION)?;
    let range = nonzero_indices(DUAL_RANGE);
    let (mut pairing, mut limit, mut closed): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for &kl in &range {
        for &mn in &range {
            let expect = if mn == kl { 1.0 } else { 0.0 };
            pairing = pairing.max((d.pairing(mn, kl)? - expect).norm());
        }
        let target = -f64::from(sign_factor(kl));
        limit = limit.max((d.vacuum_coefficient(kl)? - target).norm());
        closed = closed.max((d.vacuum_coefficient_closed(kl) - target).norm());
    }
    Ok(vec![
        CheckRow::new("dual_pairing", pairing, DUAL_TOL),
        CheckRow::new("dual_vacuum_limit", limit, DUAL_TOL),
        CheckRow::new("dual_vacuum_closed", closed, DUAL_TOL),
    ])
}

/// Group-law rows. `lattice` must have cell area π.
pub fn group(lattice: &Lattice64, fock: usize, seed: u64) -> Result<Vec<CheckRow>, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mult: f64 = 0.0;
    for _ in 0..MULTIPLICATION_SAMPLES {
        let a2 = disk_point(&mut rng, 1.0);
        let a1 = disk_point(&mut rng, 1.0);
        mult = mult.max(multiplication_residual(a2, a1, fock)?);
    }
    let (w1, w2) = (lattice.omega1(), lattice.omega2());
    let comm = commutator_norm(w2, w1, fock)?;
    let phase = (commutation_phase(w2, w1) - 1.0).norm();
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let anti = (commutation_phase(w2 * half, w1 * half) + 1.0).norm();

    let mut failures = 0u32;
    let r = COCYCLE_RANGE;
    for n in -r..=r {
        for p in -r..=r {
            for k in -r..=r {
                for l in -r..=r {
                    let total = sign_exponent(LatticeIndex::new(n + k, p + l))
                        + sign_exponent(LatticeIndex::new(n, p))
                        + sign_exponent(LatticeIndex::new(k, l));
                    failures += u32::from(cocycle_b(n, p, k, l).rem_euclid(2) != total.rem_euclid(2));
                }
            }
        }
    }

    let mut barred: f64 = 0.0;
    for op in nonzero_indices(1).into_iter().chain([LatticeIndex::ORIGIN]) {
        for state in nonzero_indices(1).into_iter().chain([LatticeIndex::ORIGIN]) {
            barred = barred.max(barred_action_residual(lattice, op, state, fock)?);
        }
    }
    debug_assert!((lattice.area() - PI).abs() < 1e-10);
    Ok(vec![
        CheckRow::new("group_multiplication", mult, MULTIPLICATION_TOL),
        CheckRow::new("group_commutator", comm, COMMUTATOR_TOL),
        CheckRow::new("group_commutation_phase", phase, PHASE_TOL),
        CheckRow::new("group_half_area_phase", anti, PHASE_TOL),
        CheckRow::new("group_cocycle_failures", f64::from(failures), 0.0),
        CheckRow::new("group_barred_action", barred, BARRED_TOL),
    ])
}
