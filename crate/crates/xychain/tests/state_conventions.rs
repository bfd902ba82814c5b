//! Cross-module behavior of the three state conventions (symmetric sector,
//! symmetry-broken, thermal) that no single module can see on its own.

use xychain::analysis::{displacement_curve, qc_ratio_map};
use xychain::density::rho_pair;
use xychain::ed::{adaptive_hx, correlators_ed, ground_state, EdConfig};
use xychain::fermion;
use xychain::info::discord;
use xychain::ModelParams;

fn q1_bulk(gamma: f64, h: f64, t: f64) -> f64 {
    let set = fermion::correlators(&ModelParams::bulk(gamma, h, t), 1).unwrap();
    discord(&rho_pair(&set, 1).unwrap()).unwrap().discord
}

/// Switching on any temperature selects the symmetric ensemble, so the
/// thermal curve continues the symmetric-sector value while the broken
/// ground state sits a finite distance away.
#[test]
fn thermal_limit_continues_the_symmetric_convention() {
    let (gamma, h) = (0.7, 0.5);
    let symmetric = q1_bulk(gamma, h, 0.0);
    let warm = q1_bulk(gamma, h, 1e-3);
    assert!(
        (warm - symmetric).abs() < 1e-3,
        "symmetric convention must be continuous at T -> 0: {symmetric} vs {warm}"
    );

    let l = 12;
    let cfg = EdConfig::new(l, gamma, h).with_hx(adaptive_hx(gamma, h, l));
    let set = correlators_ed(&ground_state(&cfg).unwrap(), 1).unwrap();
    let broken = discord(&rho_pair(&set, 1).unwrap()).unwrap().discord;
    assert!(
        (broken - warm).abs() > 1e-2,
        "broken-state discord {broken} should sit a finite gap from the thermal value {warm}"
    );
}

/// The ratio Q/C changes fastest with temperature along the crossover band
/// T ~ |h - 1|, not deep in either the thermal or the quantum regime.
#[test]
fn crossover_band_hosts_the_fastest_ratio_change() {
    let h_grid = [1.1, 1.2, 1.3, 1.4];
    let t_grid: Vec<f64> = (1..=10).map(|i| 0.05 * i as f64).collect();
    let map = qc_ratio_map(0.7, &h_grid, &t_grid).unwrap();
    let (h_star, t_star) = map.argmax_abs_dt();
    let ratio = t_star / (h_star - 1.0);
    assert!(
        (0.25..=4.0).contains(&ratio),
        "fastest change at (h={h_star}, T={t_star}), T/|h-1| = {ratio:.2} is off the band"
    );
}

/// At the factorizing field every distance carries the same discord, so the
/// mean pairwise displacement of Q_r vanishes with T and grows away from it.
#[test]
fn discord_displacement_vanishes_at_factorization() {
    let gamma = 0.7;
    let hf = (1.0f64 - gamma * gamma).sqrt();
    let t_grid = [0.01, 0.05, 0.1, 0.2];
    let curve = displacement_curve(gamma, hf, &t_grid, &[1, 2, 3, 4, 5]).unwrap();
    assert!(
        curve[0].1 < 1e-4,
        "displacement {:.3e} at T = {} should vanish toward T = 0",
        curve[0].1,
        curve[0].0
    );
    assert!(
        curve.last().unwrap().1 > 10.0 * curve[0].1,
        "displacement should grow with temperature: {curve:?}"
    );
}
