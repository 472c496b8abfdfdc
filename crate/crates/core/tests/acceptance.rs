//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails if an attainable check fails, or if a criterion fails that is
//! not listed in `KNOWN_UNATTAINABLE` together with its analysis.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use klab_core::analytic_family::{assemble_tz, assemble_tz_windowed_kernel, kz_scaling_exponent, psi};
use klab_core::eigenbasis::{
    apply_laguerre_operator_rank1, eigenvalue, gram_matrix, rank1_function, synthesize,
    SpectralField, SpectralIndex,
};
use klab_core::geometry::{make_config, GeometryConfig, Sector, SpatialGrid, WeightedPoint};
use klab_core::harness::{
    generate_orthonormal_system, haar_unitary, orthonormal_sweep,
    propagated_mixed_norm, random_field, random_weights, rhls_check, sweep_exponent_pairs, dunkl_transfer, dunkl_transfer_orthonormal,
    endpoint_check, Mixing, NormGrids, Resolution,
};
use klab_core::schatten::{
    conjugate_exponent, duality_check, sandwich_ratios, singular_values, smooth_weight, CoefficientSystem,
    DualityExponents,
};
use klab_core::semigroup::{
    apply_semigroup, half_period_reflection, kernel_bound, kernel_closed_form, kernel_spectral, propagate,
    truncated_hs_norm, truncated_operator_norm,
};
use klab_core::transform::{
    extend, extension_matrix, fourier_coefficients, restrict, space_time_inner, SpaceTimeGrid,
    TimeGrid,
};
use klab_core::C64;
use nalgebra::DMatrix;

const GRAM_TOL: f64 = 1e-9;
const GRAM_SECONDS: f64 = 10.0;
const EIGEN_TOL: f64 = 1e-5;
const UNITARY_TOL: f64 = 1e-13;
const DECAY_TOL: f64 = 1e-10;
const HS_CAUCHY_TOL: f64 = 1e-8;
const KERNEL_TOL: f64 = 1e-6;
const BOUND_SLACK: f64 = -1e-8;
const ABEL_TOL: f64 = 1e-7;
const PLANCHEREL_TOL: f64 = 1e-8;
const EXTENSION_TOL: f64 = 1e-9;
const SCALING_TOL: f64 = 0.1;
const TIS_TOL: f64 = 1e-8;
const T_MINUS_ONE_TOL: f64 = 1e-7;
const HERMITIAN_TOL: f64 = 1e-10;
const DRIFT_TOL: f64 = 0.10;
const DUALITY_SLACK: f64 = -1e-8;
const ENDPOINT_SLACK: f64 = -1e-9;
const SINGLE_PATH_TOL: f64 = 1e-9;
const SWEEP_SECONDS: f64 = 300.0;
const RHLS_STABILITY: f64 = 0.01;
const RHLS_IDENTITY_TOL: f64 = 1e-8;
const DUNKL_TOL: f64 = 1e-6;

/// Criteria that fail for reasons analysed in the README; their attainable
/// parts are still asserted.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[
    (1, "(a,n,k) = (1,1,0) gives a+2γ+n−2 = 0, outside the admissible geometries"),
    (7, "for Re z < −1 the constant term ζ(−z) of the singular series dominates, so |K_z| ~ |t|^{−β}; for −1 ≤ Re z < −1/2 the fit window is pre-asymptotic"),
];

struct Outcome {
    pass: bool,
    /// every check that can hold did hold
    attainable_ok: bool,
    detail: String,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Self { pass, attainable_ok: pass, detail }
    }
}

fn rank1(k: f64, a: u32) -> GeometryConfig {
    make_config(a, 1, Sector::Rank1 { k }).unwrap()
}

fn radial(a: u32, n: usize, gamma: f64) -> GeometryConfig {
    make_config(a, n, Sector::Radial { gamma }).unwrap()
}

/// The valid configurations of the orthonormality list.
fn main_configs() -> Vec<GeometryConfig> {
    vec![rank1(0.0, 2), rank1(0.5, 1), rank1(0.5, 2), radial(2, 3, 0.0), radial(1, 3, 0.7)]
}

fn point(cfg: &GeometryConfig, v: f64) -> WeightedPoint {
    if cfg.is_rank1() {
        WeightedPoint::rank1(v).unwrap()
    } else {
        WeightedPoint::radial(v.abs()).unwrap()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn c1_orthonormality() -> Outcome {
    let refused = make_config(1, 1, Sector::Rank1 { k: 0.0 });
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for cfg in main_configs() {
        let start = Instant::now();
        let grid = SpatialGrid::exact(&cfg, 24).unwrap();
        let g = gram_matrix(&grid, 15);
        let d = (&g - DMatrix::<f64>::identity(g.nrows(), g.ncols())).abs().max();
        worst = worst.max(d);
        slowest = slowest.max(start.elapsed());
    }
    let ok = worst <= GRAM_TOL && slowest.as_secs_f64() <= GRAM_SECONDS && refused.is_err();
    Outcome {
        pass: false,
        attainable_ok: ok,
        detail: format!(
            "5 valid configs: max defect {worst:.2e}, slowest {:.2}s; (1,1,0) refused: {}",
            slowest.as_secs_f64(),
            refused.err().map_or("no".into(), |e| e.to_string())
        ),
    }
}

fn c2_eigenrelation() -> Outcome {
    let mut worst = 0.0f64;
    for cfg in [rank1(0.0, 2), rank1(0.5, 2), rank1(0.3, 2), rank1(0.5, 1), rank1(1.0, 1)] {
        let af = cfg.a_f64();
        // sample u = (2/a)|x|^a on [0.2, 16]
        let xs: Vec<f64> = (0..80)
            .flat_map(|i| {
                let u = 0.2 + 15.8 * i as f64 / 79.0;
                let r = (af * u / 2.0).powf(1.0 / af);
                [r, -r]
            })
            .collect();
        for l in 0..=10 {
            for &m in cfg.sectors() {
                let idx = SpectralIndex::new(l, m);
                let f = rank1_function(&cfg, idx);
                let e = eigenvalue(&cfg, idx);
                let mut res = 0.0f64;
                let mut size = 0.0f64;
                for &x in &xs {
                    let lf = apply_laguerre_operator_rank1(&cfg, &f, x).unwrap();
                    res = res.max((lf - e * f(x)).abs());
                    size = size.max((e * f(x)).abs());
                }
                worst = worst.max(res / size);
            }
        }
    }
    Outcome::plain(worst <= EIGEN_TOL, format!("max relative sup residual {worst:.2e} over ℓ ≤ 10"))
}

fn c3_semigroup() -> Outcome {
    let mut unitary = 0.0f64;
    let mut decay = 0.0f64;
    let mut hs = 0.0f64;
    for (i, cfg) in main_configs().iter().enumerate() {
        let f = random_field(cfg, 20, 42, 100 + i as u64);
        for t in [0.3, -1.7, 2.9, 11.0] {
            unitary = unitary.max(rel(propagate(&f, t).norm(), f.norm()));
        }
        let ground = SpectralField::single(cfg, 20, SpectralIndex::new(0, 0)).unwrap();
        for z in [C64::new(0.1, 0.0), C64::new(0.5, 2.0), C64::new(1.0, -0.4)] {
            let expected = (-cfg.beta() * z.re).exp();
            decay = decay.max((truncated_operator_norm(cfg, z, 20) - expected).abs());
            decay = decay.max((apply_semigroup(&ground, z).unwrap().norm() - expected).abs());
        }
        let z = C64::new(0.5, 0.7);
        hs = hs.max((truncated_hs_norm(cfg, z, 24) - truncated_hs_norm(cfg, z, 48)).abs());
    }
    Outcome::plain(
        unitary <= UNITARY_TOL && decay <= DECAY_TOL && hs <= HS_CAUCHY_TOL,
        format!("unitarity {unitary:.1e}, norm decay {decay:.1e}, HS Cauchy (L=24→48) {hs:.1e}"),
    )
}

fn kernel_configs() -> Vec<GeometryConfig> {
    vec![
        rank1(0.0, 2),
        rank1(0.5, 2),
        rank1(0.5, 1),
        radial(2, 2, 0.0),
        radial(2, 3, 0.0),
        radial(1, 3, 0.0),
    ]
}

fn c4_kernel() -> Outcome {
    let grid: Vec<f64> = (0..20).map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / 20.0).collect();
    let mut worst = 0.0f64;
    let mut slack = f64::INFINITY;
    for cfg in kernel_configs() {
        for &xv in &grid {
            for &yv in &grid {
                let (x, y) = (point(&cfg, xv), point(&cfg, yv));
                for z in [C64::new(0.5, 0.0), C64::new(0.5, 0.9)] {
                    let s = kernel_spectral(&cfg, &x, &y, z, 60, false).unwrap().value;
                    let c = kernel_closed_form(&cfg, &x, &y, z).unwrap().value;
                    worst = worst.max((s - c).norm() / c.norm());
                }
            }
        }
        for &xv in grid.iter().step_by(2) {
            for &yv in grid.iter().step_by(2) {
                let (x, y) = (point(&cfg, xv), point(&cfg, yv));
                for eps in [1e-3, 0.05, 0.5] {
                    for mu in [0.3, 1.1, 2.0, 2.8] {
                        let v = kernel_closed_form(&cfg, &x, &y, C64::new(eps, mu)).unwrap().value;
                        slack = slack.min(kernel_bound(&cfg, mu) - v.norm());
                    }
                }
            }
        }
    }
    Outcome::plain(
        worst <= KERNEL_TOL && slack >= BOUND_SLACK,
        format!("spectral vs closed form {worst:.2e} on 20×20 grids; boundary bound min slack {slack:.2e}"),
    )
}

fn c5_periodicity() -> Outcome {
    let vals = [-1.6, -0.7, -0.2, 0.4, 1.1, 1.9];
    let mut worst = 0.0f64;
    for cfg in [rank1(0.0, 2), rank1(0.5, 2), rank1(0.5, 1), radial(2, 3, 0.0)] {
        let phase = C64::new(0.0, -PI * cfg.beta()).exp();
        for &xv in &vals {
            for &yv in &vals {
                let (x, y) = (point(&cfg, xv), point(&cfg, yv));
                let sx = half_period_reflection(&cfg, &x);
                for mu in [0.4, 1.1, 2.3] {
                    let k = |p: &WeightedPoint, m: f64| kernel_spectral(&cfg, p, &y, C64::new(0.0, m), 0, true).unwrap().value;
                    let base = k(&x, mu);
                    let shifted = k(&x, mu + PI);
                    let reflected = k(&sx, mu);
                    let conj = k(&x, -mu);
                    let scale = base.norm().max(1e-3);
                    worst = worst.max((shifted - phase * reflected).norm() / scale);
                    worst = worst.max((conj - base.conj()).norm() / scale);
                }
            }
        }
    }
    Outcome::plain(worst <= ABEL_TOL, format!("half-period and conjugation identities, max relative defect {worst:.2e}"))
}

fn c6_plancherel() -> Outcome {
    let l_max = 12;
    let mut planch = 0.0f64;
    let mut roundtrip = 0.0f64;
    let mut modulus = 0.0f64;
    for (i, cfg) in main_configs().iter().enumerate() {
        let c = random_field(cfg, l_max, usize::MAX, 200 + i as u64);
        let space = SpatialGrid::exact(cfg, l_max + 6).unwrap();
        let torus = TimeGrid::torus(64).unwrap();
        let f = extend(&c, &torus.nodes, &space);
        let e2 = space_time_inner(&f, &f, &torus.weights, &space).re;
        planch = planch.max((e2.sqrt() / ((2.0 * PI).sqrt() * c.norm()) - 1.0).abs());
        let table = fourier_coefficients(&f, &torus, &space, (0, 2 * l_max as i64 + 2), l_max).unwrap();
        let back = restrict(&table);
        let d: f64 = back.coeffs.iter().zip(&c.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        roundtrip = roundtrip.max(d / c.norm());
        let half = TimeGrid::half_period(1).unwrap();
        let ext = extend(&c, &half.nodes, &space);
        for (it, t) in half.nodes.iter().enumerate().step_by(7) {
            let u = synthesize(&propagate(&c, *t), &space.points);
            for (ix, v) in u.iter().enumerate() {
                modulus = modulus.max((ext.samples[(it, ix)].norm() - v.norm()).abs());
            }
        }
    }
    Outcome::plain(
        planch <= PLANCHEREL_TOL && roundtrip <= PLANCHEREL_TOL && modulus <= EXTENSION_TOL,
        format!("√(2π)-Plancherel {planch:.1e}, transform round trip {roundtrip:.1e}, |E_S f̂| vs |e^{{−itΔ}}f| {modulus:.1e}"),
    )
}

fn c7_analytic_family() -> Outcome {
    // asserted: Re z ≥ −1/2, where the window [1e-3, 0.3] is asymptotic
    let mut fit_hard = 0.0f64;
    // reported: the same fit closer to Re z = −1 and below it
    let mut reported: Vec<String> = Vec::new();
    let mut all_ok = true;
    for cfg in [rank1(0.0, 2), rank1(0.5, 2), rank1(0.5, 1), radial(2, 3, 0.0)] {
        for z in [C64::new(0.0, 0.0), C64::new(-0.5, 0.0), C64::new(-0.25, 0.5)] {
            fit_hard = fit_hard.max((kz_scaling_exponent(&cfg, z, 0.6, 1e-3, 0.3).unwrap() - (z.re + 1.0 + cfg.beta())).abs());
        }
        let mut zs = vec![C64::new(-0.9, 0.0), C64::new(-1.0, 0.3), C64::new(-cfg.lambda0, 0.5)];
        if cfg.lambda0 > 1.5 + 1e-9 {
            zs.push(C64::new(-1.5, 0.0));
        }
        for z in zs {
            let predicted = z.re + 1.0 + cfg.beta();
            let window = kz_scaling_exponent(&cfg, z, 0.6, 1e-3, 0.3).unwrap();
            let near_zero = kz_scaling_exponent(&cfg, z, 0.6, 1e-8, 1e-6).unwrap();
            all_ok &= (window - predicted).abs() <= SCALING_TOL;
            reported.push(format!("{} z={z}: {window:.2}/{near_zero:.2} vs {predicted:.2}", cfg.label()));
        }
    }
    // T_{is} on a torus grid where the discrete columns are orthonormal
    let mut tis = f64::NEG_INFINITY;
    let mut sigma_ts = 0.0f64;
    for cfg in [rank1(0.5, 2), rank1(0.5, 1), radial(2, 3, 0.0)] {
        let l_max = 6;
        let grid = SpaceTimeGrid::new(TimeGrid::torus(40).unwrap(), SpatialGrid::exact(&cfg, l_max + 4).unwrap());
        for s in [0.0, 0.5, 1.0, 2.5, -4.0] {
            let z = C64::new(0.0, s);
            let top = singular_values(&assemble_tz(&cfg, z, &grid, l_max).unwrap()).unwrap().largest();
            tis = tis.max(top - psi(z).norm());
        }
        let top = singular_values(&assemble_tz(&cfg, C64::new(-1.0, 0.0), &grid, l_max).unwrap()).unwrap().largest();
        sigma_ts = sigma_ts.max((top - 1.0).abs());
    }
    // T_{−1} from the windowed kernel against E_S E_S*/2π
    let mut tm1 = 0.0f64;
    let mut herm = 0.0f64;
    for cfg in [rank1(0.5, 2), radial(1, 3, 0.7)] {
        let l_max = 5;
        let grid = SpaceTimeGrid::new(TimeGrid::half_period(1).unwrap(), SpatialGrid::exact(&cfg, 5).unwrap());
        let e = extension_matrix(&cfg, l_max, &grid);
        let ee = (&e * e.adjoint()).map(|v| v / (2.0 * PI));
        let t = assemble_tz_windowed_kernel(&cfg, C64::new(-1.0, 0.0), &grid, l_max).unwrap();
        let scale = ee.iter().map(|v| v.norm()).fold(0.0, f64::max);
        tm1 = tm1.max((&t - &ee).iter().map(|v| v.norm()).fold(0.0, f64::max) / scale);
        herm = herm.max((&t - t.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max) / scale);
    }
    let hard = fit_hard <= SCALING_TOL && tis <= TIS_TOL && sigma_ts <= TIS_TOL && tm1 <= T_MINUS_ONE_TOL && herm <= HERMITIAN_TOL;
    Outcome {
        pass: hard && all_ok,
        attainable_ok: hard,
        detail: format!(
            "scaling fit for Re z ≥ −1/2 max error {fit_hard:.3}; fitted exponents on [1e-3, 0.3] / [1e-8, 1e-6] vs predicted: [{}]; σ₁(T_is) − |1/Γ(1+is)| ≤ {tis:.1e}; |σ₁(T_−1) − 1| {sigma_ts:.1e}; T_−1 vs E_S E_S*/2π {tm1:.1e}, Hermitian {herm:.1e}",
            reported.join("; ")
        ),
    }
}

fn lemma_ratios(cfg: &GeometryConfig, l_max: usize, refine: usize, panels: usize, pairs: u64) -> Vec<f64> {
    let space = SpatialGrid::composite(cfg, panels, 8, 4.0 * l_max as f64 + 80.0).unwrap();
    let grid = SpaceTimeGrid::new(TimeGrid::half_period(refine).unwrap(), space);
    sandwich_ratios(cfg, l_max, &grid, 2.0 * cfg.lambda0, 0..pairs).unwrap()
}

fn c8_schatten() -> Outcome {
    let mut drift = 0.0f64;
    let mut sups = Vec::new();
    for cfg in [rank1(0.5, 2), radial(2, 3, 0.0)] {
        let base = lemma_ratios(&cfg, 12, 1, 8, 50);
        let fine = lemma_ratios(&cfg, 24, 2, 16, 50);
        let (b, f) = (base.iter().copied().fold(0.0, f64::max), fine.iter().copied().fold(0.0, f64::max));
        drift = drift.max(rel(b, f));
        sups.push(format!("{}: {b:.4}→{f:.4}", cfg.label()));
        assert!(base.iter().chain(&fine).all(|v| v.is_finite()));
    }
    // pairing form of the duality principle
    let mut slack = f64::INFINITY;
    for cfg in [rank1(0.5, 2), radial(1, 3, 0.7)] {
        let l_max = 10;
        let grid = SpaceTimeGrid::new(
            TimeGrid::half_period(1).unwrap(),
            SpatialGrid::composite(&cfg, 8, 8, 4.0 * l_max as f64 + 80.0).unwrap(),
        );
        let a = extension_matrix(&cfg, l_max, &grid);
        let lambda = 2.0 * cfg.lambda0;
        let rho = conjugate_exponent(cfg.lambda0);
        let ex = DualityExponents { lambda, w_p: lambda, w_q: lambda, rho_p: rho, rho_q: rho };
        for seed in 0..4u64 {
            let w = smooth_weight(&grid, 900 + seed);
            let nb = a.ncols();
            let u = haar_unitary(nb, 50 + seed);
            let systems: Vec<CoefficientSystem> = [1usize, 2, 4, 8, 16]
                .iter()
                .filter(|&&n| n <= nb)
                .map(|&n| CoefficientSystem {
                    vectors: u.columns(0, n).into_owned(),
                    n: random_weights(n, seed).into_iter().map(|v| C64::new(v, 0.0)).collect(),
                })
                .collect();
            let rep = duality_check(&a, &grid, &w, &systems, ex).unwrap();
            slack = slack.min(rep.min_slack());
        }
    }
    Outcome::plain(
        drift <= DRIFT_TOL && slack >= DUALITY_SLACK,
        format!("50 pairs, max ratio under doubling [{}], drift {drift:.3}; duality min slack {slack:.2e}", sups.join(", ")),
    )
}

/// Haar band of the orthonormal runs. It exceeds the largest system size so
/// that `N = 64` does not span the whole band.
const BAND: usize = 96;

/// Configurations for the orthonormal runs, with a truncation holding `BAND`
/// basis functions.
fn sweep_configs() -> Vec<(GeometryConfig, usize)> {
    vec![(rank1(0.5, 2), 47), (rank1(0.5, 1), 47), (rank1(0.0, 2), 47), (radial(2, 3, 0.0), 95)]
}

fn c9_endpoint() -> Outcome {
    let mut slack = f64::INFINITY;
    let mut count = 0;
    for (cfg, l_max) in sweep_configs() {
        let grids = NormGrids {
            time: TimeGrid::half_period(1).unwrap(),
            space: SpatialGrid::exact(&cfg, l_max + 4).unwrap(),
            resolution: Resolution::for_degree(&cfg, l_max),
        };
        for n in [1usize, 2, 4, 8, 16, 32, 64] {
            for seed in 0..8u64 {
                let sys = generate_orthonormal_system(&cfg, l_max, n, seed, Mixing::Haar { band: BAND })
                    .unwrap()
                    .with_weights(random_weights(n, seed + 77))
                    .unwrap();
                let (lhs, rhs) = endpoint_check(&cfg, &sys, &grids).unwrap();
                slack = slack.min(rhs - lhs);
                count += 1;
            }
        }
    }
    Outcome::plain(slack >= ENDPOINT_SLACK, format!("{count} systems up to N = 64, min slack {slack:.2e}"))
}

fn c10_sweeps() -> Outcome {
    let sizes = [1usize, 2, 4, 8, 16, 32, 64];
    let seeds16: Vec<u64> = (0..16).collect();
    let mut seed_drift = 0.0f64;
    let mut grid_drift = 0.0f64;
    let mut single = 0.0f64;
    let mut slowest = 0.0f64;
    let mut sups = Vec::new();
    for (cfg, l_max) in sweep_configs() {
        let start = Instant::now();
        let pairs = sweep_exponent_pairs(&cfg);
        let res = Resolution::for_degree(&cfg, l_max);
        let grids = NormGrids::new(&cfg, res).unwrap();
        let fine = NormGrids::new(&cfg, res.doubled()).unwrap();
        let rows = orthonormal_sweep(&cfg, l_max, &pairs, &sizes, &seeds16, BAND, &grids).unwrap();
        let rows_fine = orthonormal_sweep(&cfg, l_max, &pairs, &sizes, &seeds16[..8], BAND, &fine).unwrap();
        for &(p, q) in &pairs {
            let sup = |rs: &[klab_core::harness::SweepRow], nseeds: u64| {
                rs.iter().filter(|r| r.p == p && r.q == q && r.seed < nseeds).map(|r| r.ratio).fold(0.0, f64::max)
            };
            let (s8, s16, f8) = (sup(&rows, 8), sup(&rows, 16), sup(&rows_fine, 8));
            assert!(s16.is_finite());
            seed_drift = seed_drift.max(rel(s8, s16));
            grid_drift = grid_drift.max(rel(s8, f8));
            sups.push(format!("{:.3}", s16));
        }
        for r in rows.iter().filter(|r| r.size == 1 && r.seed < 4) {
            let sys = generate_orthonormal_system(&cfg, l_max, 1, r.seed, Mixing::Haar { band: BAND }).unwrap();
            let direct = propagated_mixed_norm(&sys.fields[0], 2.0 * r.p, 2.0 * r.q, &grids).powi(2);
            single = single.max(rel(r.lhs, direct));
        }
        slowest = slowest.max(start.elapsed().as_secs_f64());
    }
    Outcome::plain(
        seed_drift <= DRIFT_TOL && grid_drift <= DRIFT_TOL && single <= SINGLE_PATH_TOL && slowest <= SWEEP_SECONDS,
        format!(
            "sup ratios [{}]; drift 8→16 seeds {seed_drift:.3}, grid doubling {grid_drift:.3}; N=1 vs single path {single:.1e}; slowest config {slowest:.0}s",
            sups.join(" ")
        ),
    )
}

fn c11_rhls() -> Outcome {
    let g = |t: f64| 1.0 + 0.5 * (3.0 * t).cos();
    let h = |t: f64| (-t * t).exp() * (1.0 + 0.3 * t.sin());
    let mut hoelder_ok = true;
    for (p, q) in [(2.0, 2.0), (1.0, f64::INFINITY), (3.0, 1.5), (f64::INFINITY, 1.0)] {
        let r = rhls_check(0.0, p, q, &g, &h, 24).unwrap();
        hoelder_ok &= r.integral <= r.hoelder_bound.unwrap() * (1.0 + 1e-12);
    }
    let mut stability = 0.0f64;
    let mut identity = 0.0f64;
    let mut bracket = true;
    let mut ratios = Vec::new();
    for lambda in [0.25, 0.5, 0.75] {
        let p = 2.0 / (2.0 - lambda);
        let r24 = rhls_check(lambda, p, p, &g, &h, 24).unwrap();
        let r48 = rhls_check(lambda, p, p, &g, &h, 48).unwrap();
        let swapped = rhls_check(lambda, p, p, &h, &g, 48).unwrap();
        stability = stability.max(rel(r24.ratio, r48.ratio));
        identity = identity.max(r48.b2_defect).max(rel(swapped.regions[1], r48.regions[2]));
        bracket &= r48.b1_bracket_ok;
        ratios.push(format!("{:.4}", r48.ratio));
        assert!(r48.ratio.is_finite());
    }
    Outcome::plain(
        hoelder_ok && stability <= RHLS_STABILITY && identity <= RHLS_IDENTITY_TOL && bracket,
        format!(
            "Hölder case {}; ratios [{}], order 24→48 change {stability:.1e}; B₂/B₃ identities {identity:.1e}",
            if hoelder_ok { "holds" } else { "violated" },
            ratios.join(" ")
        ),
    )
}

fn c12_dunkl() -> Outcome {
    let cfg = rank1(0.3, 2);
    let l_max = 12;
    // |u|^p with non-even p has kinks near zeros of u; the unscaled-grid
    // cross-check needs the finer spatial panels
    let res = Resolution { space_panels: 64, ..Resolution::for_degree(&cfg, l_max) };
    let grids = NormGrids::new(&cfg, res).unwrap();
    let mut defect = 0.0f64;
    let mut fixed = 0.0f64;
    // β = 0.8: (1/2 − 1/p)β = 1/q
    for (p, q) in [(4.0, 5.0), (6.0, 3.75), (2.5, 12.5)] {
        for seed in 0..3u64 {
            let f = random_field(&cfg, l_max, 10, 300 + seed);
            let r = dunkl_transfer(&cfg, &f, p, q, &grids).unwrap();
            defect = defect.max(r.defect);
            fixed = fixed.max(r.fixed_grid_defect);
        }
    }
    let mut ortho = 0.0f64;
    let l_max = 15;
    let grids = NormGrids::new(&cfg, Resolution::for_degree(&cfg, l_max)).unwrap();
    // β(1 − 1/p) = 1/q
    for (p, q) in [(2.0, 2.5), (1.6, 10.0 / 3.0)] {
        for n in [1usize, 2, 4, 8, 16] {
            for seed in 0..2u64 {
                let sys = generate_orthonormal_system(&cfg, l_max, n, seed, Mixing::Haar { band: 24 }).unwrap();
                let (rep, dr, lr) = dunkl_transfer_orthonormal(&cfg, &sys, p, q, &grids).unwrap();
                ortho = ortho.max(rep.defect).max(rel(dr, lr));
            }
        }
    }
    Outcome::plain(
        defect <= DUNKL_TOL && fixed <= DUNKL_TOL && ortho <= DUNKL_TOL,
        format!("10-mode data defect {defect:.1e} (unscaled-grid cross-check {fixed:.1e}); orthonormal N ≤ 16 defect {ortho:.1e}"),
    )
}

type Criterion = (u32, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "basis orthonormality", c1_orthonormality),
        (2, "eigenrelation", c2_eigenrelation),
        (3, "semigroup properties", c3_semigroup),
        (4, "kernel cross-validation", c4_kernel),
        (5, "kernel periodicity and conjugation", c5_periodicity),
        (6, "Plancherel and extension identity", c6_plancherel),
        (7, "analytic family", c7_analytic_family),
        (8, "Schatten suite", c8_schatten),
        (9, "endpoint L^∞L¹", c9_endpoint),
        (10, "orthonormal Strichartz sweeps", c10_sweeps),
        (11, "r-HLS", c11_rhls),
        (12, "Dunkl transfer", c12_dunkl),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut broken = Vec::new();
    for (id, name, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let out = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {status} {name} ({secs:.1}s): {}", out.detail);
        let known = KNOWN_UNATTAINABLE.iter().find(|(k, _)| *k == id);
        if !out.pass {
            if let Some((_, why)) = known {
                println!("             known: {why}");
            }
        }
        if !out.attainable_ok || (!out.pass && known.is_none()) {
            broken.push(id);
        }
    }
    if !broken.is_empty() {
        eprintln!("acceptance: unexpected failures in criteria {broken:?}");
        std::process::exit(1);
    }
}
