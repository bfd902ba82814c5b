//! End-to-end acceptance suite.
//!
//! Each test checks one shipping criterion of the library against pinned
//! tolerances and prints a single summary line (visible under
//! `--nocapture`). The datasets are fixed: grids, seeds, and system sizes
//! are part of the contract, chosen so the whole suite stays within a few
//! minutes on one core.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;
use xychain::analysis::{
    bulk_slope_sampler, d_dh, factorization_scaling, fss_collapse, grid_derivative, linear_fit,
    near_factorization_fit, thermal_collapse_residual, thermal_scaling, ScalingDataset,
};
use xychain::density::{rho_pair, rho_single, C64, DensityMatrix, SymmetryTag};
use xychain::ed::{adaptive_hx, correlators_ed, ground_state, thermal_state, EdConfig};
use xychain::fermion;
use xychain::info::{classical_corr, classical_corr_brute, discord, entropy};
use xychain::ModelParams;

const GAMMA: f64 = 0.7;
/// √(1 − γ²) for γ = 0.7.
const H_FACTOR: f64 = 0.714_142_842_854_285;

const BACKEND_TOL: f64 = 1e-9;
const OPTIMIZER_SLACK: f64 = 1e-7;
const BROKEN_FLOOR: f64 = 1e-6;
const CROSSING_SPREAD: f64 = 1e-4;
const POWER_WINDOW: (f64, f64) = (1.8, 2.2);
const RATIO_TARGET: f64 = 3.0 / 17.0;
const RATIO_REL: f64 = 0.30;
const ALPHA_WINDOW: (f64, f64) = (0.5, 2.0);
const LARGE_L_GAP: f64 = 1e-6;
const LOG_FIT_R2: f64 = 0.99;
const ISING_SLOPE_BOUND: f64 = 10.0;
const X_WINDOW_A: (f64, f64) = (0.045, 0.085);
const X_WINDOW_B: (f64, f64) = (-0.0089, -0.0029);
const COLLAPSE_FACTOR: f64 = 5.0;
const DRIFT_WINDOW: (f64, f64) = (0.9, 1.7);
const FIDELITY_D2_FACTOR: f64 = 10.0;

fn q1_of(set: &xychain::CorrelatorSet) -> f64 {
    discord(&rho_pair(set, 1).unwrap()).unwrap().discord
}

fn q1_bulk(gamma: f64, h: f64) -> f64 {
    q1_of(&fermion::correlators(&ModelParams::bulk(gamma, h, 0.0), 1).unwrap())
}

fn q1_finite(gamma: f64, h: f64, l: usize) -> f64 {
    q1_of(&fermion::correlators(&ModelParams::finite(gamma, h, 0.0, l), 1).unwrap())
}

fn q1_ed_symmetric(gamma: f64, h: f64, l: usize) -> f64 {
    let cfg = EdConfig::new(l, gamma, h);
    q1_of(&correlators_ed(&ground_state(&cfg).unwrap(), 1).unwrap())
}

fn q_ed_broken(gamma: f64, h: f64, l: usize, r_max: usize) -> Vec<f64> {
    let cfg = EdConfig::new(l, gamma, h).with_hx(adaptive_hx(gamma, h, l));
    let set = correlators_ed(&ground_state(&cfg).unwrap(), r_max).unwrap();
    (1..=r_max).map(|r| discord(&rho_pair(&set, r).unwrap()).unwrap().discord).collect()
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            10f64.powf(lo.log10() + (hi.log10() - lo.log10()) * t)
        })
        .collect()
}

fn max_set_deviation(a: &xychain::CorrelatorSet, b: &xychain::CorrelatorSet, r_max: usize) -> f64 {
    let mut d: f64 = (a.g_z - b.g_z).abs();
    for r in 0..r_max {
        d = d.max((a.g_xx[r] - b.g_xx[r]).abs());
        d = d.max((a.g_yy[r] - b.g_yy[r]).abs());
        d = d.max((a.g_zz[r] - b.g_zz[r]).abs());
    }
    d
}

#[test]
fn criterion_01_fermion_and_ed_backends_agree() {
    let start = Instant::now();
    let r_max = 3;
    let mut worst: f64 = 0.0;
    for l in [8usize, 10, 12] {
        for gamma in [0.7, 1.0] {
            for h in [0.3, 0.714143, 0.9, 1.0, 1.5] {
                let f =
                    fermion::correlators(&ModelParams::finite(gamma, h, 0.0, l), r_max).unwrap();
                let e = correlators_ed(&ground_state(&EdConfig::new(l, gamma, h)).unwrap(), r_max)
                    .unwrap();
                let d = max_set_deviation(&f, &e, r_max);
                assert!(d < BACKEND_TOL, "T=0 L={l} gamma={gamma} h={h}: deviation {d:.3e}");
                worst = worst.max(d);
            }
        }
    }
    for l in [8usize, 10] {
        for gamma in [0.7, 1.0] {
            for h in [0.3, 0.714143, 0.9, 1.0, 1.5] {
                let f =
                    fermion::correlators(&ModelParams::finite(gamma, h, 0.5, l), r_max).unwrap();
                let e = thermal_state(&EdConfig::new(l, gamma, h), 0.5)
                    .unwrap()
                    .correlators(r_max)
                    .unwrap();
                let d = max_set_deviation(&f, &e, r_max);
                assert!(d < BACKEND_TOL, "T=0.5 L={l} gamma={gamma} h={h}: deviation {d:.3e}");
                worst = worst.max(d);
            }
        }
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 120.0, "backend comparison took {dt:.0} s");
    println!("criterion 01 PASS: backends agree, worst deviation {worst:.3e} ({dt:.1} s)");
}

fn random_density(rng: &mut ChaCha8Rng, x_state: bool) -> DensityMatrix {
    let a = DMatrix::from_fn(4, 4, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let mut m = &a * a.adjoint();
    if x_state {
        // Zeroing the off-pattern entries keeps the matrix a direct sum of
        // two Hermitian 2x2 blocks, so positivity survives the projection.
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 3), (2, 3)] {
            m[(i, j)] = C64::new(0.0, 0.0);
            m[(j, i)] = C64::new(0.0, 0.0);
        }
    }
    let tr: f64 = (0..4).map(|i| m[(i, i)].re).sum();
    m /= C64::new(tr, 0.0);
    DensityMatrix {
        mat: m,
        symmetry: if x_state { SymmetryTag::XState } else { SymmetryTag::GeneralReal },
        provenance: None,
    }
}

#[test]
fn criterion_02_optimizer_reaches_brute_force() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    for idx in 0..200 {
        let rho = random_density(&mut rng, idx < 100);
        rho.validate().unwrap();
        let (c, _, _) = classical_corr(&rho).unwrap();
        let brute = classical_corr_brute(&rho, 512, 1024).unwrap();
        assert!(
            c >= brute - OPTIMIZER_SLACK,
            "state {idx}: optimizer {c:.9} below brute-force {brute:.9}"
        );
        worst = worst.min(c - brute);
    }
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 300.0, "optimizer comparison took {dt:.0} s");
    println!("criterion 02 PASS: worst margin {worst:.3e} over 200 states ({dt:.1} s)");
}

#[test]
fn criterion_03_factorization_kills_broken_discord() {
    let q1 = q_ed_broken(GAMMA, H_FACTOR, 14, 1)[0];
    assert!(q1 < BROKEN_FLOOR, "broken-state Q1 at the factorizing field: {q1:.3e}");

    let set = fermion::correlators(&ModelParams::bulk(GAMMA, H_FACTOR, 0.0), 5).unwrap();
    let qr: Vec<f64> =
        (1..=5).map(|r| discord(&rho_pair(&set, r).unwrap()).unwrap().discord).collect();
    let lo = qr.iter().cloned().fold(f64::MAX, f64::min);
    let hi = qr.iter().cloned().fold(f64::MIN, f64::max);
    assert!(
        hi - lo < CROSSING_SPREAD,
        "bulk Q_r curves do not cross within {CROSSING_SPREAD:.0e}: spread {:.3e}",
        hi - lo
    );
    println!(
        "criterion 03 PASS: broken Q1 = {q1:.2e}, bulk Q_r spread {:.2e} over r = 1..5",
        hi - lo
    );
}

#[test]
fn criterion_04_near_factorization_power_law() {
    let start = Instant::now();
    let mut pts = Vec::new();
    for delta in [0.0158, 0.0251, 0.0398] {
        for side in [-1.0, 1.0] {
            let h = H_FACTOR + side * delta;
            let qs = q_ed_broken(GAMMA, h, 16, 3);
            for r in [2usize, 3] {
                pts.push((h, r, qs[r - 1]));
            }
        }
    }
    let law = near_factorization_fit(&pts, H_FACTOR).unwrap();
    assert!(
        law.power > POWER_WINDOW.0 && law.power < POWER_WINDOW.1,
        "fitted power {:.4} outside [{}, {}]",
        law.power,
        POWER_WINDOW.0,
        POWER_WINDOW.1
    );
    let rel = (law.ratio - RATIO_TARGET).abs() / RATIO_TARGET;
    assert!(
        rel < RATIO_REL,
        "decay ratio {:.5} deviates {rel:.2} from {RATIO_TARGET:.5}",
        law.ratio
    );
    println!(
        "criterion 04 PASS: power {:.4}, decay ratio {:.5} ({:.1} s)",
        law.power,
        law.ratio,
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_05_exponential_size_scaling() {
    let fields: Vec<f64> =
        [-4i32, -3, -2, -1, 1, 2, 3, 4].iter().map(|&i| H_FACTOR + 0.003 * i as f64).collect();
    let mut ds = ScalingDataset::new("q1", GAMMA);
    for l in [8usize, 10, 12, 14] {
        for &h in &fields {
            ds.push(l as f64, h, q1_ed_symmetric(GAMMA, h, l));
        }
    }
    for &h in &fields {
        ds.push(18.0, h, q1_finite(GAMMA, h, 18));
    }
    let res = factorization_scaling(&ds, None).unwrap();
    let alpha = res.exponent("alpha").unwrap();
    assert!(
        alpha > ALPHA_WINDOW.0 && alpha < ALPHA_WINDOW.1,
        "decay constant {alpha:.4} outside [{}, {}]",
        ALPHA_WINDOW.0,
        ALPHA_WINDOW.1
    );

    let mut worst: f64 = 0.0;
    for dh in [-0.002, 0.002] {
        let h = H_FACTOR + dh;
        worst = worst.max((q1_finite(GAMMA, h, 20) - q1_bulk(GAMMA, h)).abs());
    }
    assert!(worst < LARGE_L_GAP, "L=20 vs bulk gap {worst:.3e}");
    println!(
        "criterion 05 PASS: alpha = {alpha:.3} (collapse residual {:.3}), L=20 vs bulk {worst:.1e}",
        res.residual
    );
}

#[test]
fn criterion_06_critical_derivative_log_divergence() {
    let deltas = log_spaced(1e-4, 1e-2, 9);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &d in &deltas {
        let (der, _) = d_dh(|x| Ok(q1_bulk(GAMMA, x)), 1.0 - d, d / 20.0).unwrap();
        xs.push(d.ln());
        ys.push(der);
    }
    let fit = linear_fit(&xs, &ys).unwrap();
    assert!(
        fit.r_squared > LOG_FIT_R2,
        "log-linear fit R² = {:.5} below {LOG_FIT_R2}",
        fit.r_squared
    );

    let mut max_ising: f64 = 0.0;
    for &d in &deltas {
        for side in [-1.0, 1.0] {
            let (der, _) = d_dh(|x| Ok(q1_bulk(1.0, x)), 1.0 + side * d, d / 20.0).unwrap();
            max_ising = max_ising.max(der.abs());
        }
    }
    assert!(max_ising < ISING_SLOPE_BOUND, "gamma=1 slope {max_ising:.3} not bounded");
    println!(
        "criterion 06 PASS: R² = {:.5} (slope {:.4}); gamma=1 slope bounded at {max_ising:.3}",
        fit.r_squared, fit.slope
    );
}

#[test]
fn criterion_07_thermal_scaling_of_critical_slope() {
    let start = Instant::now();
    let t_grid = log_spaced(1e-3, 1e-1, 9);

    let xa = thermal_scaling(0.7, 1, &t_grid, &[]).unwrap().exponent("x").unwrap();
    assert!(
        xa > X_WINDOW_A.0 && xa < X_WINDOW_A.1,
        "gamma=0.7 slope {xa:.5} outside [{}, {}]",
        X_WINDOW_A.0,
        X_WINDOW_A.1
    );
    let xb = thermal_scaling(1.0, 1, &t_grid, &[]).unwrap().exponent("x").unwrap();
    assert!(
        xb > X_WINDOW_B.0 && xb < X_WINDOW_B.1,
        "gamma=1 slope {xb:.5} outside [{}, {}]",
        X_WINDOW_B.0,
        X_WINDOW_B.1
    );

    // Collapse of the gamma=0.7 quantum-critical fan: the exponent is fitted
    // on the collapse score itself, then must beat the placebo x = 0.2 by
    // the pinned factor.
    let h_grid = [1.005, 1.01, 1.02];
    let sampler = bulk_slope_sampler(0.7, 1);
    let mut best = (0.0f64, f64::INFINITY);
    for i in 0..41 {
        let x = -0.5 + i as f64 / 40.0;
        let r = thermal_collapse_residual(&sampler, x, &t_grid, &h_grid).unwrap();
        if r < best.1 {
            best = (x, r);
        }
    }
    let placebo = thermal_collapse_residual(&sampler, 0.2, &t_grid, &h_grid).unwrap();
    assert!(
        best.1 * COLLAPSE_FACTOR <= placebo,
        "collapse at fitted x = {:.3} (residual {:.4}) not {COLLAPSE_FACTOR}x below x = 0.2 ({:.4})",
        best.0,
        best.1,
        placebo
    );
    let dt = start.elapsed().as_secs_f64();
    assert!(dt < 600.0, "thermal scaling took {dt:.0} s");
    println!(
        "criterion 07 PASS: slopes {xa:.4} / {xb:.5}; collapse x = {:.3} beats placebo {:.0}x ({dt:.1} s)",
        best.0,
        placebo / best.1
    );
}

#[test]
fn criterion_08_finite_size_collapse_at_criticality() {
    let start = Instant::now();

    // Comparative clause on exact-diagonalization slices: the literature
    // exponent pair must outscore both placebo exponents.
    let lo = 0.86;
    let hi = 1.30;
    let n = 23usize;
    let hs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut ds = ScalingDataset::new("neg_dq1_dh", GAMMA);
    for l in [8usize, 10, 12, 14, 16] {
        let ys: Vec<f64> = hs
            .iter()
            .map(|&h| {
                let cfg = EdConfig::new(l, GAMMA, h).with_hx(1e-6);
                q1_of(&correlators_ed(&ground_state(&cfg).unwrap(), 1).unwrap())
            })
            .collect();
        let d = grid_derivative(&hs, &ys);
        for i in 0..n {
            ds.push(l as f64, hs[i], -d[i]);
        }
    }
    let scored = fss_collapse(&ds, 0.472, 1.0).unwrap().residual;
    let flat = fss_collapse(&ds, 0.0, 1.0).unwrap().residual;
    let linear = fss_collapse(&ds, 1.0, 1.0).unwrap().residual;
    assert!(
        scored < flat && scored < linear,
        "residual({scored:.4}) not below placebos ({flat:.4}, {linear:.4})"
    );

    // Drift clause: the derivative peak approaches the critical field from
    // below only beyond L ≈ 20 (at ED sizes it crosses h_c and |h_c − h_m|
    // is non-monotone), so the drift is measured on the equivalent
    // free-fermion slices at sizes where the one-sided regime exists.
    let lo = 0.90;
    let hi = 1.04;
    let n = 71usize;
    let hs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut large = ScalingDataset::new("neg_dq1_dh", GAMMA);
    for l in [32usize, 40, 48, 64, 96] {
        let ys: Vec<f64> = hs.iter().map(|&h| q1_finite(GAMMA, h, l)).collect();
        let d = grid_derivative(&hs, &ys);
        for i in 0..n {
            large.push(l as f64, hs[i], -d[i]);
        }
    }
    let drift = fss_collapse(&large, 0.472, 1.0).unwrap().exponent("drift").unwrap();
    assert!(
        drift > DRIFT_WINDOW.0 && drift < DRIFT_WINDOW.1,
        "peak drift exponent {drift:.4} outside [{}, {}]",
        DRIFT_WINDOW.0,
        DRIFT_WINDOW.1
    );
    println!(
        "criterion 08 PASS: residuals {scored:.3} < {flat:.3} / {linear:.3}; drift {drift:.3} ({:.1} s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_09_fidelity_smooth_at_factorization_dipped_at_criticality() {
    let dh = 1e-3;
    let l = 100usize;
    let lo = 0.66;
    let hi = 0.78;
    let n = 121usize;
    let step = (hi - lo) / (n - 1) as f64;
    let fs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let h = lo + step * i as f64;
            (h, fermion::fidelity(&ModelParams::finite(GAMMA, h, 0.0, l), dh).unwrap())
        })
        .collect();
    let d2: Vec<(f64, f64)> = (1..n - 1)
        .map(|i| (fs[i].0, (fs[i + 1].1 - 2.0 * fs[i].1 + fs[i - 1].1).abs()))
        .collect();
    let at_hf = d2
        .iter()
        .min_by(|a, b| {
            (a.0 - H_FACTOR).abs().partial_cmp(&(b.0 - H_FACTOR).abs()).unwrap()
        })
        .unwrap()
        .1;
    let mut off: Vec<f64> =
        d2.iter().filter(|(h, _)| (h - H_FACTOR).abs() > 0.01).map(|&(_, v)| v).collect();
    off.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = off[off.len() / 2];
    assert!(
        at_hf <= FIDELITY_D2_FACTOR * median,
        "second difference at the factorizing field {at_hf:.3e} exceeds {FIDELITY_D2_FACTOR}x median {median:.3e}"
    );

    let mut dips = Vec::new();
    for l in [50usize, 100, 200, 400] {
        let mut min_f = f64::MAX;
        for i in 0..201 {
            let h = 0.9 + 0.2 * i as f64 / 200.0;
            min_f = min_f.min(fermion::fidelity(&ModelParams::finite(GAMMA, h, 0.0, l), dh).unwrap());
        }
        dips.push(1.0 - min_f);
    }
    for w in dips.windows(2) {
        assert!(w[1] > w[0], "critical dip not monotone in size: {dips:?}");
    }
    println!(
        "criterion 09 PASS: smooth at h_f ({:.1e} vs median {:.1e}); dips {dips:?}",
        at_hf, median
    );
}

#[test]
fn criterion_10_information_measure_properties() {
    let h_grid: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
    for gamma in [0.3, 0.7, 1.0] {
        for &h in &h_grid {
            for t in [0.0, 0.1, 1.0] {
                let set = fermion::correlators(&ModelParams::bulk(gamma, h, t), 2).unwrap();
                for r in [1usize, 2] {
                    let rho = rho_pair(&set, r).unwrap();
                    rho.validate().unwrap_or_else(|e| {
                        panic!("invalid pair state at gamma={gamma} h={h} T={t} r={r}: {e}")
                    });
                    let single = rho_single(set.g_z, set.g_x).unwrap();
                    for side in [0, 1] {
                        let marginal = rho.partial_trace(side);
                        for i in 0..2 {
                            for j in 0..2 {
                                let d = (marginal.mat[(i, j)] - single.mat[(i, j)]).norm();
                                assert!(
                                    d < 1e-10,
                                    "marginal mismatch {d:.2e} at gamma={gamma} h={h} T={t} r={r}"
                                );
                            }
                        }
                    }
                    let triple = discord(&rho).unwrap();
                    assert!(
                        triple.discord >= 0.0,
                        "negative discord {} at gamma={gamma} h={h} T={t} r={r}",
                        triple.discord
                    );
                    assert!(
                        triple.classical >= 0.0 && triple.classical <= triple.mutual_info + 1e-9,
                        "C outside [0, I] at gamma={gamma} h={h} T={t} r={r}"
                    );
                }
            }
        }
    }

    // Pure states: discord reduces to the entanglement entropy.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let amps: Vec<C64> = (0..4)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let m = DMatrix::from_fn(4, 4, |i, j| amps[i] * amps[j].conj() / norm);
        let rho = DensityMatrix { mat: m, symmetry: SymmetryTag::GeneralReal, provenance: None };
        let t = discord(&rho).unwrap();
        let s_a = entropy(&rho.partial_trace(0)).unwrap();
        assert!(
            (t.discord - s_a).abs() < 1e-6,
            "pure-state discord {} vs entanglement entropy {s_a}",
            t.discord
        );
    }

    // Local unitaries change nothing: conjugate chain states by random
    // single-qubit rotations on each side.
    let base = rho_pair(
        &fermion::correlators(&ModelParams::bulk(0.7, 0.5, 0.0), 1).unwrap(),
        1,
    )
    .unwrap();
    let reference = discord(&base).unwrap();
    for _ in 0..5 {
        let u = local_unitary(&mut rng);
        let m = &u * &base.mat * u.adjoint();
        let rotated = DensityMatrix { mat: m, symmetry: SymmetryTag::GeneralReal, provenance: None };
        let t = discord(&rotated).unwrap();
        assert!(
            (t.mutual_info - reference.mutual_info).abs() < 1e-9,
            "mutual information moved under a local unitary"
        );
        assert!(
            (t.classical - reference.classical).abs() < 1e-6,
            "classical correlations moved under a local unitary: {} vs {}",
            t.classical,
            reference.classical
        );
        assert!(
            (t.discord - reference.discord).abs() < 1e-6,
            "discord moved under a local unitary: {} vs {}",
            t.discord,
            reference.discord
        );
    }
    println!("criterion 10 PASS: validity, marginals, positivity, purity, and invariance hold");
}

/// Haar-ish random U_A ⊗ U_B from axis-angle rotations of each qubit.
fn local_unitary(rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    let one = |rng: &mut ChaCha8Rng| {
        let theta = rng.random::<f64>() * std::f64::consts::PI;
        let phi = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
        let alpha = rng.random::<f64>() * 2.0 * std::f64::consts::PI;
        let (nx, ny, nz) = (theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
        let (c, s) = ((alpha / 2.0).cos(), (alpha / 2.0).sin());
        DMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(c, -s * nz),
                C64::new(-s * ny, -s * nx),
                C64::new(s * ny, -s * nx),
                C64::new(c, s * nz),
            ],
        )
    };
    let ua = one(rng);
    let ub = one(rng);
    ua.kronecker(&ub)
}
