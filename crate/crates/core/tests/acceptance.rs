//! Acceptance gate: one line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p vnlattice --test acceptance`.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vnlattice::analysis::{
    cell_average, completeness_integral_trace, default_radii, gram, gram_spectrum_sweep, identity_sum, null_vector_residual,
    uniqueness_probe, DependenceFunction, DualSystem, IntegralKind, Verdict,
};
use vnlattice::elliptic::{quasi_periods, SigmaProduct, SigmaTilde, ZeroLattice, DEFAULT_TRUNCATION};
use vnlattice::fock::{bargmann_inner, factorial, overlap, BargmannFunction, QuadratureGrid};
use vnlattice::group::{
    barred_action_residual, commutation_phase, commutator_norm, multiplication_residual,
};
use vnlattice::lattice::{cocycle_b, sign_exponent, sign_factor};
use vnlattice::theta::{doubling_check, jacobi_residual, lattice_sum_identity, modular_check};
use vnlattice::{Complex64 as C, Lattice, LatticeIndex, LatticeWindow};

const SEED: u64 = 20_240_601;

/// Outcome of one criterion.
struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

fn vn() -> Lattice<f64> {
    Lattice::von_neumann()
}

fn disk_samples(rng: &mut ChaCha8Rng, count: usize, radius: f64) -> Vec<C> {
    (0..count)
        .map(|_| C::from_polar(radius * rng.random::<f64>().sqrt(), rng.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

fn within(elapsed: Duration, budget: Duration) -> bool {
    elapsed <= budget
}

fn dependence_relation() -> Outcome {
    const TOL: f64 = 1e-8;
    let budget = Duration::from_secs(1);
    let start = Instant::now();
    let f = DependenceFunction::new(&vn(), 8).expect("critical lattice");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let worst = disk_samples(&mut rng, 100, 2.0).into_iter().map(|z| f.relative_magnitude(z)).fold(0.0, f64::max);
    let t = start.elapsed();
    Outcome::new(worst < TOL && within(t, budget), format!("max |f|/max term = {worst:.3e} (< {TOL:.0e}), {t:.2?}"))
}

fn identity_family() -> Outcome {
    const TOL: f64 = 1e-10;
    let l = vn();
    let mut worst: f64 = 0.0;
    let mut odd_exact = true;
    for k in 0..=12u32 {
        let v = identity_sum(k, &l, 10).expect("critical lattice");
        worst = worst.max(v.norm());
        if k % 2 == 1 && v != C::new(0.0, 0.0) {
            odd_exact = false;
        }
    }
    Outcome::new(worst < TOL && odd_exact, format!("max_k |sum| = {worst:.3e} (< {TOL:.0e}), odd k exactly zero: {odd_exact}"))
}

fn theta_chain() -> Outcome {
    const TOL: f64 = 1e-12;
    let budget = Duration::from_millis(100);
    let start = Instant::now();
    let mut lattice_sum: f64 = 0.0;
    let mut orders: f64 = 0.0;
    for c in [0.5, 1.0, 2.0] {
        let id = lattice_sum_identity::<f64>(c).expect("c > 0");
        lattice_sum = lattice_sum.max(id.direct.abs()).max(id.factorized.abs());
        orders = orders.max((id.direct - id.factorized).abs());
    }
    let mut transforms: f64 = 0.0;
    for c in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let tau = C::new(0.0, c);
        transforms = transforms
            .max(modular_check(c).expect("c > 0").max())
            .max(doubling_check(tau).expect("imaginary axis").max())
            .max(jacobi_residual(tau).expect("upper half plane"));
    }
    let t = start.elapsed();
    let pass = lattice_sum < TOL && orders < TOL && transforms < TOL && within(t, budget);
    Outcome::new(
        pass,
        format!("double sum {lattice_sum:.3e}, order gap {orders:.3e}, transforms {transforms:.3e} (< {TOL:.0e}), {t:.2?}"),
    )
}

fn elliptic_layer() -> Outcome {
    const TOL: f64 = 1e-6;
    let l = vn();
    let zeros = ZeroLattice::from(l);
    let product = SigmaProduct::new(zeros, DEFAULT_TRUNCATION);
    let qp = quasi_periods(zeros, DEFAULT_TRUNCATION).expect("converged quasi-periods");
    let tilde = SigmaTilde::with_quasi_periods(product.clone(), qp);
    let shifts = [LatticeIndex::new(1, 0), LatticeIndex::new(0, 1), LatticeIndex::new(1, 1), LatticeIndex::new(-1, 1)];
    let (mut quasi, mut functional, mut periodic): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..6 {
        for j in 0..6 {
            let (x, y) = (-0.5 + (i as f64 + 0.5) / 6.0, -0.5 + (j as f64 + 0.5) / 6.0);
            let z = zeros.beta1() * x + zeros.beta2() * y;
            for idx in shifts {
                quasi = quasi.max(product.quasi_periodicity_residual(&qp, z, idx));
                functional = functional.max(tilde.functional_residual(z, idx));
                let (a, b) = (tilde.rho(z + zeros.point(idx)), tilde.rho(z));
                periodic = periodic.max((a - b).abs() / a.max(b));
            }
        }
    }
    let mu_err = (qp.mu - 0.5).abs();
    let nu = qp.nu.norm();
    let pass = quasi < TOL && functional < TOL && periodic < TOL && mu_err <= 4.0 * f64::EPSILON && nu < 1e-8;
    Outcome::new(
        pass,
        format!(
            "quasi-period {quasi:.3e}, functional {functional:.3e}, rho period {periodic:.3e} (< {TOL:.0e}); |mu-1/2| = {mu_err:.1e}, |nu| = {nu:.1e}"
        ),
    )
}

fn biorthogonality() -> Outcome {
    const TOL: f64 = 1e-6;
    let d = DualSystem::new(&vn()).expect("critical lattice");
    let range: Vec<LatticeIndex> = (-3..=3)
        .flat_map(|m| (-3..=3).map(move |n| LatticeIndex::new(m, n)))
        .filter(|i| !i.is_origin())
        .collect();
    let mut pair_err: f64 = 0.0;
    let mut vac_err: f64 = 0.0;
    for &kl in &range {
        for &mn in &range {
            let v = d.pairing(mn, kl).expect("nonzero index");
            let expect = if mn == kl { 1.0 } else { 0.0 };
            pair_err = pair_err.max((v - expect).norm());
        }
        let target = -f64::from(sign_factor(kl));
        vac_err = vac_err.max((d.vacuum_coefficient(kl).expect("nonzero index") - target).norm());
        vac_err = vac_err.max((d.vacuum_coefficient_closed(kl) - target).norm());
    }
    Outcome::new(
        pair_err < TOL && vac_err < TOL,
        format!("pairing {pair_err:.3e}, vacuum coefficients {vac_err:.3e} (< {TOL:.0e}) over |indices| <= 3"),
    )
}

fn gram_diagnostics() -> Outcome {
    const NULL_TOL: f64 = 1e-8;
    const NEAR_NULL: f64 = 1e-6;
    const OVERLAP: f64 = 0.999;
    const EIG_NOISE: f64 = 1e-12;
    let budget = Duration::from_secs(30);
    let start = Instant::now();
    let l = vn();
    let residual = null_vector_residual(&l, 8, 4).expect("critical lattice");
    let probe = uniqueness_probe(&l, 8, NEAR_NULL).expect("critical lattice");
    let areas: Vec<f64> = [0.8, 0.9, 1.0, 1.1, 1.2].iter().map(|a| a * PI).collect();
    let rows = gram_spectrum_sweep(&l, &areas, 8).expect("areas given");
    // Below critical area the smallest eigenvalue sits at rounding level.
    let monotone = rows.windows(2).all(|w| w[1].min_eig >= w[0].min_eig - EIG_NOISE);
    let t = start.elapsed();
    let unique = probe.periodized.near_null_count == 1 && probe.periodized.sign_overlap > OVERLAP;
    let pass = residual < NULL_TOL && unique && monotone && within(t, budget);
    let mins: Vec<String> = rows.iter().map(|r| format!("{:.2e}", r.min_eig)).collect();
    Outcome::new(
        pass,
        format!(
            "interior residual {residual:.3e} (< {NULL_TOL:.0e}); torus window: {} eigenvalue(s) < {NEAR_NULL:.0e}, next {:.3e}, sign overlap {:.6}; \
             open window: lambda_min {:.3e}, overlap {:.3}; min_eig by area [{}]; {t:.2?}",
            probe.periodized.near_null_count,
            probe.periodized.lowest[1],
            probe.periodized.sign_overlap,
            probe.window.lowest[0],
            probe.window.sign_overlap,
            mins.join(", ")
        ),
    )
}

fn integral_verdicts() -> Outcome {
    const LOG_SLOPE_TOL: f64 = 0.05;
    let budget = Duration::from_secs(10);
    let radii = default_radii::<f64>();
    let cases: [(f64, IntegralKind, Vec<LatticeIndex>, Verdict); 5] = [
        (1.25, IntegralKind::Weighted, vec![], Verdict::Converges),
        (0.8, IntegralKind::Weighted, vec![], Verdict::Diverges),
        (1.0, IntegralKind::Weighted, vec![], Verdict::Diverges),
        (1.0, IntegralKind::SinglePuncture, vec![LatticeIndex::ORIGIN], Verdict::Diverges),
        (1.0, IntegralKind::DoublePuncture, vec![LatticeIndex::ORIGIN, LatticeIndex::new(1, 0)], Verdict::Converges),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (scale, kind, punctures, expected) in cases {
        let l = Lattice::square(scale * PI).expect("positive area");
        let start = Instant::now();
        let trace = completeness_integral_trace(&l, &radii, kind, &punctures).expect("valid trace");
        let t = start.elapsed();
        let mut ok = trace.verdict == expected && within(t, budget);
        if kind == IntegralKind::SinglePuncture {
            // Log-like growth: P(R) ~ 2π⟨ρ⟩ ln R. Single shells oscillate by ~8% with
            // the cell structure, so only the trailing average slope is compared.
            let target = 2.0 * PI * cell_average(&l, 48).expect("critical lattice");
            let gap = (trace.log_slope / target - 1.0).abs();
            ok &= gap < LOG_SLOPE_TOL;
            parts.push(format!("{}@{scale}pi {} (log slope {:.4} vs 2pi<rho> {target:.4}, gap {gap:.3} < {LOG_SLOPE_TOL}, {t:.2?})", kind.name(), trace.verdict.name(), trace.log_slope));
        } else {
            parts.push(format!("{}@{scale}pi {} ({t:.2?})", kind.name(), trace.verdict.name()));
        }
        pass &= ok;
    }
    Outcome::new(pass, parts.join("; "))
}

fn group_layer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut mult: f64 = 0.0;
    for _ in 0..6 {
        let a2 = disk_samples(&mut rng, 1, 1.0)[0];
        let a1 = disk_samples(&mut rng, 1, 1.0)[0];
        mult = mult.max(multiplication_residual(a2, a1, 64).expect("sized truncation"));
    }
    let s = PI.sqrt();
    let comm = commutator_norm(C::new(s, 0.0), C::new(0.0, s), 96).expect("sized truncation");
    let h = (PI / 2.0).sqrt();
    let anti = commutation_phase(C::new(0.0, h), C::new(h, 0.0));
    let anti_ok = (anti + 1.0).norm() < 1e-14;
    let mut failures = 0u32;
    for n in -8i64..=8 {
        for p in -8i64..=8 {
            for k in -8i64..=8 {
                for l in -8i64..=8 {
                    let lhs = cocycle_b(n, p, k, l).rem_euclid(2);
                    let rhs = (sign_exponent(LatticeIndex::new(n + k, p + l))
                        + sign_exponent(LatticeIndex::new(n, p))
                        + sign_exponent(LatticeIndex::new(k, l)))
                    .rem_euclid(2);
                    failures += u32::from(lhs != rhs);
                }
            }
        }
    }
    let l = vn();
    let mut barred: f64 = 0.0;
    for k in -1..=1 {
        for ll in -1..=1 {
            for n in -1..=1 {
                for p in -1..=1 {
                    let r = barred_action_residual(&l, LatticeIndex::new(k, ll), LatticeIndex::new(n, p), 96)
                        .expect("sized truncation");
                    barred = barred.max(r);
                }
            }
        }
    }
    let pass = mult < 1e-6 && comm < 1e-5 && anti_ok && failures == 0 && barred < 1e-5;
    Outcome::new(
        pass,
        format!(
            "multiplication {mult:.3e} (< 1e-6), commutator {comm:.3e} (< 1e-5), half-area phase {anti:.3}, cocycle failures {failures}, barred action {barred:.3e} (< 1e-5)"
        ),
    )
}

fn cross_module() -> Outcome {
    const TOL_Q: f64 = 1e-8;
    const TOL_G: f64 = 1e-10;
    let grid = QuadratureGrid::<f64>::default();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut coh: f64 = 0.0;
    for _ in 0..10 {
        let (b, g) = (disk_samples(&mut rng, 1, 1.5)[0], disk_samples(&mut rng, 1, 1.5)[0]);
        let v = bargmann_inner(&BargmannFunction::coherent(b), &BargmannFunction::coherent(g), &grid).value;
        coh = coh.max((v - overlap(b, g)).norm());
    }
    let mut mono: f64 = 0.0;
    for m in 0..=6u32 {
        for n in 0..=6u32 {
            let v = bargmann_inner(&BargmannFunction::monomial(m), &BargmannFunction::monomial(n), &grid).value;
            let expect = if m == n { factorial::<f64>(m as usize) } else { 0.0 };
            mono = mono.max((v - expect).norm());
        }
    }
    let g = gram(&vn(), &LatticeWindow::new(2)).expect("nonempty window");
    let fock = g.fock_cross_check(64, 3.0).expect("sized truncation");
    Outcome::new(
        coh < TOL_Q && mono < TOL_Q && fock < TOL_G,
        format!("coherent overlaps {coh:.3e}, monomials {mono:.3e} (< {TOL_Q:.0e}); Gram vs Fock {fock:.3e} (< {TOL_G:.0e})"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("dependence relation", dependence_relation),
        ("identity family", identity_family),
        ("theta chain", theta_chain),
        ("elliptic layer", elliptic_layer),
        ("biorthogonality", biorthogonality),
        ("gram diagnostics", gram_diagnostics),
        ("integral verdicts", integral_verdicts),
        ("group layer", group_layer),
        ("cross-module oracles", cross_module),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
