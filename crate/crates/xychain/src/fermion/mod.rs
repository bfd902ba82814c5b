//! Free-fermion solution of the chain.
//!
//! The Jordan-Wigner + Bogoliubov diagonalization reduces every
//! symmetric-sector observable to the raw correlator G(n): ⟨σz⟩ = −G(0),
//! ⟨σx_0 σx_r⟩ and ⟨σy_0 σy_r⟩ are r×r Toeplitz determinants with entries
//! G(i−j−1) and G(i−j+1), and ⟨σz_0 σz_r⟩ = ⟨σz⟩² − G(r)G(−r). This module
//! evaluates G by bulk quadrature, by parity-sector momentum sums at finite
//! length, and by the four-ensemble Gaussian decomposition at finite length
//! and temperature, then assembles [`CorrelatorSet`]s from it.

pub mod fidelity;
pub mod gfun;
pub mod quad;
pub mod sector;

pub use fidelity::fidelity;
pub use gfun::{g_bulk, ThermalMix, QUAD_ABS_TOL, QUAD_MAX_DEPTH};
pub use sector::{
    factorization_field_finite, ground_sector, sector_crossings, sector_energies, Sector,
    SectorReport, DEGENERACY_TOL,
};

use nalgebra::DMatrix;

use crate::correlators::{CorrelatorSet, Provenance};
use crate::error::{XyError, XyResult};
use crate::model::{ChainLength, ModelParams};

/// Single-momentum data of the Bogoliubov diagonalization.
///
/// `lam` is the single-mode energy scale Λ_k = √(a²+b²); the full mode
/// energy is 2Λ_k. The angle θ_k = atan2(b, a) lies in [0, π] on k ∈ [0, π]
/// because b_k = γ sin k ≥ 0 there, so it is continuous in k away from the
/// endpoints and the gap closing at (h = 1, k = 0).
#[derive(Debug, Clone, Copy)]
pub struct ModeData {
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub lam: f64,
    pub theta: f64,
}

pub fn mode_data(params: &ModelParams, k: f64) -> ModeData {
    let a = params.h - k.cos();
    let b = params.gamma * k.sin();
    ModeData { k, a, b, lam: a.hypot(b), theta: b.atan2(a) }
}

/// det of the r×r Toeplitz matrix with entries `table[i − j + shift]`,
/// where `table` holds G(n) for n = −r_max..r_max at index n + r_max.
fn toeplitz_det(table: &[f64], r_max: usize, r: usize, shift: i64) -> f64 {
    let m = DMatrix::from_fn(r, r, |i, j| {
        let n = i as i64 - j as i64 + shift;
        table[(n + r_max as i64) as usize]
    });
    m.lu().determinant()
}

struct WickParts {
    g_z: f64,
    g_xx: Vec<f64>,
    g_yy: Vec<f64>,
    g_zz: Vec<f64>,
}

/// Wick-evaluate one Gaussian state from its G table.
fn wick_parts(table: &[f64], r_max: usize) -> WickParts {
    let g_z = -table[r_max];
    let mut g_xx = Vec::with_capacity(r_max);
    let mut g_yy = Vec::with_capacity(r_max);
    let mut g_zz = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        g_xx.push(toeplitz_det(table, r_max, r, -1));
        g_yy.push(toeplitz_det(table, r_max, r, 1));
        g_zz.push(g_z * g_z - table[r_max + r] * table[r_max - r]);
    }
    WickParts { g_z, g_xx, g_yy, g_zz }
}

fn set_from_parts(
    params: &ModelParams,
    r_max: usize,
    parts: WickParts,
    g_raw: Vec<f64>,
    provenance: Provenance,
) -> CorrelatorSet {
    CorrelatorSet {
        gamma: params.gamma,
        h: params.h,
        temperature: params.temperature,
        r_max,
        g_z: parts.g_z,
        g_x: 0.0,
        g_xx: parts.g_xx,
        g_yy: parts.g_yy,
        g_zz: parts.g_zz,
        g_xz: vec![0.0; r_max],
        g_zx: vec![0.0; r_max],
        g_raw,
        provenance,
    }
}

/// Full symmetric-sector correlator set up to distance `r_max`.
///
/// Dispatch: bulk parameters go through adaptive quadrature (any T ≥ 0);
/// finite length at T = 0 sums over the occupied parity sector's momenta
/// (even sector at a degenerate crossing); finite length at T > 0 mixes the
/// four parity-projected Gaussian ensembles, Wick-evaluating each before the
/// weighted average. Only the weighted observables are physical there, so
/// the g_zz product identity holds per ensemble, not for the stored mixture.
pub fn correlators(params: &ModelParams, r_max: usize) -> XyResult<CorrelatorSet> {
    params.validate()?;
    if !(1..=64).contains(&r_max) {
        return Err(XyError::InvalidParams(format!(
            "r_max must lie in 1..=64, got {r_max}"
        )));
    }
    let (gamma, h, t) = (params.gamma, params.h, params.temperature);
    match params.length {
        ChainLength::Bulk => {
            let mut table = Vec::with_capacity(2 * r_max + 1);
            for n in -(r_max as i64)..=r_max as i64 {
                table.push(g_bulk(gamma, h, t, n, QUAD_ABS_TOL, QUAD_MAX_DEPTH)?);
            }
            let parts = wick_parts(&table, r_max);
            Ok(set_from_parts(params, r_max, parts, table, Provenance::BulkQuadrature))
        }
        ChainLength::Finite(l) if t == 0.0 => {
            let sec = ground_sector(gamma, h, l).occupied;
            let table: Vec<f64> = (-(r_max as i64)..=r_max as i64)
                .map(|n| gfun::g_finite_t0(gamma, h, l, sec, n))
                .collect();
            let parts = wick_parts(&table, r_max);
            Ok(set_from_parts(params, r_max, parts, table, Provenance::FiniteLSum))
        }
        ChainLength::Finite(l) => {
            let mix = ThermalMix::new(gamma, h, l, t);
            let mut g_z = 0.0;
            let mut g_xx = vec![0.0; r_max];
            let mut g_yy = vec![0.0; r_max];
            let mut g_zz = vec![0.0; r_max];
            let mut g_raw = vec![0.0; 2 * r_max + 1];
            for e in 0..mix.ensemble_count() {
                let w = mix.weight(e);
                let table: Vec<f64> = (-(r_max as i64)..=r_max as i64)
                    .map(|n| mix.g(e, n))
                    .collect();
                if let Some(scale) = mix.zero_mode_scale(e) {
                    // w·⟨O⟩ of the gapless parity ensemble survives only
                    // through the σ-derivative of each Wick value along an
                    // all-ones table shift. Every Wick expression here is
                    // exactly linear in that rank-one shift, so a symmetric
                    // difference at σ = ±1 evaluates the derivative exactly.
                    let plus: Vec<f64> = table.iter().map(|v| v + 1.0).collect();
                    let minus: Vec<f64> = table.iter().map(|v| v - 1.0).collect();
                    let pp = wick_parts(&plus, r_max);
                    let pm = wick_parts(&minus, r_max);
                    let ws = w * scale;
                    g_z += ws * 0.5 * (pp.g_z - pm.g_z);
                    for r in 0..r_max {
                        g_xx[r] += ws * 0.5 * (pp.g_xx[r] - pm.g_xx[r]);
                        g_yy[r] += ws * 0.5 * (pp.g_yy[r] - pm.g_yy[r]);
                        g_zz[r] += ws * 0.5 * (pp.g_zz[r] - pm.g_zz[r]);
                    }
                    for acc in g_raw.iter_mut() {
                        *acc += ws;
                    }
                    continue;
                }
                let parts = wick_parts(&table, r_max);
                g_z += w * parts.g_z;
                for r in 0..r_max {
                    g_xx[r] += w * parts.g_xx[r];
                    g_yy[r] += w * parts.g_yy[r];
                    g_zz[r] += w * parts.g_zz[r];
                }
                for (acc, v) in g_raw.iter_mut().zip(&table) {
                    *acc += w * v;
                }
            }
            let parts = WickParts { g_z, g_xx, g_yy, g_zz };
            Ok(set_from_parts(params, r_max, parts, g_raw, Provenance::FiniteLSum))
        }
    }
}
