//! The raw fermionic correlator G(n).
//!
//! Everything two-point in the symmetric sector reduces to
//!
//! ```text
//! G(n) = −(1/π) ∫_0^π [cos(kn)·a_k + sin(kn)·b_k] · tanh(βΛ_k)/Λ_k dk
//! ```
//!
//! in the bulk (tanh → 1 at T = 0), and to the analogous discrete sum over
//! the momenta of a fermion-parity sector at finite length. The overall sign
//! is the convention fixed against the ED oracle: at γ = 1, h = 0, T = 0 it
//! gives G(−1) = +1, i.e. a ferromagnetic ⟨σx σx⟩ = +1.
//!
//! At finite length and T > 0 the trace splits into four Gaussian ensembles
//! (two momentum sets × identity / parity insertion); see [`ThermalMix`].
//! Identity insertions carry tanh(βΛ) occupation factors, parity insertions
//! coth(βΛ), and the ensemble weights combine as
//! ½[Tr(e^{−βH₊}·) + Tr(Pe^{−βH₊}·) + Tr(e^{−βH₋}·) − Tr(Pe^{−βH₋}·)].

use std::f64::consts::PI;

use super::quad;
use super::sector::{momenta, Sector};
use crate::error::XyResult;

/// Default absolute tolerance of the correlator quadrature.
pub const QUAD_ABS_TOL: f64 = 1e-10;
/// Default bisection depth limit of the correlator quadrature.
pub const QUAD_MAX_DEPTH: u32 = 40;

/// Detection threshold for the unpaired k = 0 zero mode at h = 1. Modes this
/// close to gapless are given their exact limit treatment instead of a nudge:
/// the parity-projected weight vanishes linearly in Λ while the coth factor
/// diverges as 1/Λ, and only the product is physical.
const ZERO_MODE_FLOOR: f64 = 1e-12;

/// Bulk G(n) by adaptive quadrature. The integrand has a derivative
/// discontinuity at k = 0 when h = 1, T = 0; a narrow leading panel isolates
/// it whenever h is within 1e-2 of critical.
pub fn g_bulk(
    gamma: f64,
    h: f64,
    temperature: f64,
    n: i64,
    abs_tol: f64,
    max_depth: u32,
) -> XyResult<f64> {
    let nf = n as f64;
    let integrand = move |k: f64| {
        let a = h - k.cos();
        let b = gamma * k.sin();
        let lam = a.hypot(b);
        if lam < 1e-300 {
            return 0.0;
        }
        let fac = if temperature == 0.0 { 1.0 } else { (lam / temperature).tanh() };
        ((k * nf).cos() * a + (k * nf).sin() * b) * fac / lam
    };
    let split_near_critical = temperature == 0.0 && (h - 1.0).abs() < 1e-2;
    let integral = if split_near_critical {
        quad::integrate_split(&integrand, &[0.0, 1e-3, PI], abs_tol, max_depth)?
    } else {
        quad::integrate(&integrand, 0.0, PI, abs_tol, max_depth)?
    };
    Ok(-integral / PI)
}

#[derive(Debug, Clone, Copy)]
struct ModeEntry {
    k: f64,
    a: f64,
    b: f64,
    lam: f64,
}

fn is_zero_mode(m: &ModeEntry) -> bool {
    m.b.abs() < 1e-14 && m.a.abs() < ZERO_MODE_FLOOR
}

/// Full momentum table of a sector, k ∈ (−π, π].
fn mode_table(gamma: f64, h: f64, l: usize, sector: Sector) -> Vec<ModeEntry> {
    momenta(l, sector)
        .into_iter()
        .map(|k| {
            let a = h - k.cos();
            let b = gamma * k.sin();
            ModeEntry { k, a, b, lam: a.hypot(b) }
        })
        .collect()
}

/// Ground-state (T = 0) G(n) from the momenta of one parity sector.
///
/// The unpaired k = 0 mode of the periodic set enters through a_k/Λ_k = ±1,
/// which encodes its vacuum occupation on either side of h = 1; exactly at
/// the zero mode that ratio is taken on the h → 1⁺ branch.
pub fn g_finite_t0(gamma: f64, h: f64, l: usize, sector: Sector, n: i64) -> f64 {
    let nf = n as f64;
    let mut tot = 0.0;
    for m in mode_table(gamma, h, l, sector) {
        if is_zero_mode(&m) {
            tot += (m.k * nf).cos() * if h >= 1.0 { 1.0 } else { -1.0 };
        } else {
            tot += ((m.k * nf).cos() * m.a + (m.k * nf).sin() * m.b) / m.lam;
        }
    }
    -tot / l as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Insertion {
    Identity,
    Parity,
}

struct Ensemble {
    table: Vec<ModeEntry>,
    insertion: Insertion,
    /// Signed, normalized weight of this ensemble in the parity-projected
    /// thermal average.
    weight: f64,
    /// Present when the table contains the h = 1 zero mode under a parity
    /// insertion. The ensemble's partition weight is then exactly zero, but
    /// w·⟨O⟩ has the finite limit  weight · scale · d/dσ O[G + σ],  the
    /// derivative taken along an all-ones shift of the G table.
    zero_scale: Option<f64>,
}

/// The four-ensemble decomposition of the finite-L thermal state.
///
/// Correlator sets are Wick-evaluated per ensemble and then averaged with the
/// signed weights; the weights already include the ½(1 ± P) projection signs
/// and the vacuum parities (+1 for the antiperiodic set; −1 for the periodic
/// set below h = 1, +1 above).
pub struct ThermalMix {
    ensembles: Vec<Ensemble>,
    l: usize,
    beta: f64,
}

impl ThermalMix {
    pub fn new(gamma: f64, h: f64, l: usize, temperature: f64) -> Self {
        assert!(temperature > 0.0, "thermal mix needs T > 0");
        let beta = 1.0 / temperature;
        // (sector, insertion, projection sign)
        let layout = [
            (Sector::Even, Insertion::Identity, 1.0),
            (Sector::Even, Insertion::Parity, 1.0),
            (Sector::Odd, Insertion::Identity, 1.0),
            (Sector::Odd, Insertion::Parity, -1.0),
        ];
        // The zero-mode sign pairs with the vacuum-parity branch on each side
        // of h = 1, which keeps the mixture continuous across the crossing.
        let sign_a = if h >= 1.0 { 1.0 } else { -1.0 };
        let mut raw = Vec::with_capacity(4);
        for (sector, insertion, proj_sign) in layout {
            let table = mode_table(gamma, h, l, sector);
            let mut e0 = 0.0;
            let mut log_w = 0.0;
            let mut zero_scale = None;
            for m in &table {
                let unpaired = m.b.abs() < 1e-14;
                if unpaired {
                    e0 += -m.a.abs();
                    if is_zero_mode(m) && insertion == Insertion::Parity {
                        // (1 − e^{−2βΛ}) → 0 and coth(βΛ) → ∞ cancel; skip
                        // the factor and take the product limit in the Wick
                        // stage instead.
                        zero_scale = Some(-sign_a * 2.0 / l as f64);
                        continue;
                    }
                    let x = (-beta * 2.0 * m.a.abs()).exp();
                    log_w += match insertion {
                        Insertion::Identity => x.ln_1p(),
                        Insertion::Parity => (-x).ln_1p(),
                    };
                } else if m.k > 0.0 {
                    e0 += -2.0 * m.lam;
                    let x = (-beta * 2.0 * m.lam).exp();
                    log_w += 2.0
                        * match insertion {
                            Insertion::Identity => x.ln_1p(),
                            Insertion::Parity => (-x).ln_1p(),
                        };
                }
            }
            let vacuum_parity =
                if sector == Sector::Odd && h < 1.0 { -1.0 } else { 1.0 };
            let sign = match insertion {
                Insertion::Identity => proj_sign,
                Insertion::Parity => proj_sign * vacuum_parity,
            };
            raw.push((table, insertion, e0, log_w, sign, zero_scale));
        }
        let e0_min = raw.iter().map(|t| t.2).fold(f64::INFINITY, f64::min);
        let mut ensembles: Vec<Ensemble> = raw
            .into_iter()
            .map(|(table, insertion, e0, log_w, sign, zero_scale)| Ensemble {
                table,
                insertion,
                weight: sign * (-beta * (e0 - e0_min) + log_w).exp(),
                zero_scale,
            })
            .collect();
        // A zero-mode ensemble contributes exactly nothing to Z.
        let z: f64 = ensembles
            .iter()
            .filter(|e| e.zero_scale.is_none())
            .map(|e| e.weight)
            .sum();
        for e in &mut ensembles {
            e.weight /= z;
        }
        Self { ensembles, l, beta }
    }

    pub fn ensemble_count(&self) -> usize {
        self.ensembles.len()
    }

    pub fn weight(&self, ens: usize) -> f64 {
        self.ensembles[ens].weight
    }

    /// The Wick-derivative scale of a zero-mode ensemble, when present.
    /// Observables of that ensemble enter the mixture as
    /// weight · scale · ½(O[G + 1] − O[G − 1]).
    pub fn zero_mode_scale(&self, ens: usize) -> Option<f64> {
        self.ensembles[ens].zero_scale
    }

    /// Per-ensemble G(n). Not a physical correlator on its own (the parity
    /// insertions carry coth factors that may exceed 1); only the weighted
    /// combination of Wick-evaluated observables is. For a zero-mode ensemble
    /// this is the table with the gapless mode removed.
    pub fn g(&self, ens: usize, n: i64) -> f64 {
        let e = &self.ensembles[ens];
        let nf = n as f64;
        let mut tot = 0.0;
        for m in &e.table {
            if is_zero_mode(m) {
                continue;
            }
            let occ = self.beta * m.lam;
            let fac = match e.insertion {
                Insertion::Identity => occ.tanh(),
                Insertion::Parity => 1.0 / occ.tanh(),
            };
            tot += ((m.k * nf).cos() * m.a + (m.k * nf).sin() * m.b) * fac / m.lam;
        }
        -tot / self.l as f64
    }

    /// The physical (weighted) thermal G(n). The derivative of G + σ along
    /// the all-ones shift is 1, so a zero-mode ensemble contributes the
    /// n-independent amount weight · scale.
    pub fn g_mixed(&self, n: i64) -> f64 {
        (0..self.ensembles.len())
            .map(|e| match self.zero_mode_scale(e) {
                Some(scale) => self.weight(e) * scale,
                None => self.weight(e) * self.g(e, n),
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ising_zero_field_ground_state() {
        // γ=1, h=0: integrand reduces to −cos(k(n+1)); only n = −1 survives.
        for (n, want) in [(-1, 1.0), (0, 0.0), (1, 0.0), (2, 0.0)] {
            let g = g_bulk(1.0, 0.0, 0.0, n, 1e-12, 40).unwrap();
            assert!((g - want).abs() < 1e-11, "G({n}) = {g}, want {want}");
        }
    }

    #[test]
    fn infinite_temperature_kills_correlations() {
        let g = g_bulk(0.7, 0.8, 1e9, 0, 1e-12, 40).unwrap();
        assert!(g.abs() < 1e-8, "G(0) at T→∞ should vanish, got {g}");
    }

    #[test]
    fn finite_sum_approaches_bulk() {
        for (gamma, h, n) in [(0.7, 0.5, 0), (0.7, 0.5, 2), (1.0, 1.5, 1), (0.3, 0.9, -3)] {
            let bulk = g_bulk(gamma, h, 0.0, n, 1e-12, 40).unwrap();
            let fin = g_finite_t0(gamma, h, 2048, Sector::Even, n);
            assert!(
                (bulk - fin).abs() < 1e-6,
                "γ={gamma} h={h} n={n}: bulk {bulk} vs L=2048 {fin}"
            );
        }
    }

    #[test]
    fn thermal_mix_weights_sum_to_one() {
        let mix = ThermalMix::new(0.7, 0.9, 8, 0.5);
        let s: f64 = (0..mix.ensemble_count()).map(|e| mix.weight(e)).sum();
        assert!((s - 1.0).abs() < 1e-14);
    }

    #[test]
    fn thermal_mix_tends_to_ground_state_at_low_t() {
        // At T → 0 the mixed G reduces to the occupied-sector sum. The
        // parity gap at this point is ~7e-4, so T must sit well below it.
        let mix = ThermalMix::new(0.7, 0.5, 8, 1e-5);
        for n in -2..=2 {
            let cold = mix.g_mixed(n);
            let gs = g_finite_t0(0.7, 0.5, 8, Sector::Even, n);
            assert!((cold - gs).abs() < 1e-10, "n={n}: {cold} vs {gs}");
        }
    }

    #[test]
    fn thermal_mix_survives_critical_field() {
        // The h = 1 zero mode takes its exact product limit; the result must
        // sit between the values just off criticality on either side.
        let at = ThermalMix::new(0.7, 1.0, 8, 0.5).g_mixed(1);
        let above = ThermalMix::new(0.7, 1.0 + 1e-9, 8, 0.5).g_mixed(1);
        let below = ThermalMix::new(0.7, 1.0 - 1e-9, 8, 0.5).g_mixed(1);
        assert!(at.is_finite());
        assert!((at - above).abs() < 1e-8, "{at} vs {above}");
        assert!((at - below).abs() < 1e-8, "{at} vs {below}");
    }
}
