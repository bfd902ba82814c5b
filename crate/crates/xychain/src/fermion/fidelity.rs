//! Ground-state fidelity F(h) = |⟨gs(h)|gs(h + δh)⟩| at finite length.
//!
//! Within one parity sector the overlap factorizes over momentum pairs into
//! cos[(θ_k(h) − θ_k(h + δh))/2] with the Bogoliubov angle θ_k = atan2(b_k,
//! a_k). For k ∈ (0, π) the angle is continuous in h (b_k > 0 keeps it off
//! the branch cut); the odd sector's unpaired k = 0 level contributes 1 or 0
//! according to whether its vacuum occupation agrees on both sides of h = 1.

use super::sector::{ground_sector, momenta, Sector};
use crate::error::{XyError, XyResult};
use crate::model::ModelParams;

fn theta(gamma: f64, h: f64, k: f64) -> f64 {
    (gamma * k.sin()).atan2(h - k.cos())
}

/// Overlap of the ground states at fields h and h + δh on the finite chain
/// described by `params`.
///
/// Raises [`XyError::SectorMismatch`] when the two fields have their ground
/// states in different, resolvably non-degenerate parity sectors. At a
/// degenerate point (a parity crossing) the sector of the non-degenerate end
/// is used, so fidelity stays defined and smooth across the factorization
/// field.
pub fn fidelity(params: &ModelParams, delta_h: f64) -> XyResult<f64> {
    params.validate()?;
    let l = params.length.finite().ok_or_else(|| {
        XyError::InvalidParams("fidelity needs a finite chain length".into())
    })?;
    let (gamma, h) = (params.gamma, params.h);
    let h2 = h + delta_h;
    let ra = ground_sector(gamma, h, l);
    let rb = ground_sector(gamma, h2, l);
    let sector = match (ra.degenerate, rb.degenerate) {
        (true, true) => Sector::Even,
        (true, false) => rb.occupied,
        (false, true) => ra.occupied,
        (false, false) => {
            if ra.occupied != rb.occupied {
                return Err(XyError::SectorMismatch(format!(
                    "h={h} is {:?} but h+δh={h2} is {:?} (L={l})",
                    ra.occupied, rb.occupied
                )));
            }
            ra.occupied
        }
    };
    let mut f = 1.0;
    for k in momenta(l, sector) {
        if k <= 0.0 {
            continue;
        }
        if (k - std::f64::consts::PI).abs() < 1e-14 {
            // Unpaired k = π level: a_k = h + 1 > 0 on both sides, overlap 1.
            continue;
        }
        let dtheta = theta(gamma, h2, k) - theta(gamma, h, k);
        f *= (0.5 * dtheta).cos();
    }
    if sector == Sector::Odd {
        // Unpaired k = 0 level: occupied in the vacuum only below h = 1.
        let occ_a = h < 1.0;
        let occ_b = h2 < 1.0;
        if occ_a != occ_b {
            f = 0.0;
        }
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_shift_gives_unity() {
        for h in [0.2, 0.9, 1.0, 1.7] {
            let p = ModelParams::finite(0.7, h, 0.0, 64);
            assert_eq!(fidelity(&p, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn stays_in_unit_interval() {
        for l in [8, 50, 200] {
            for h in [0.3, 0.8, 0.99, 1.2] {
                let p = ModelParams::finite(0.7, h, 0.0, l);
                if let Ok(f) = fidelity(&p, 1e-3) {
                    assert!((0.0..=1.0).contains(&f), "F={f} at h={h} L={l}");
                }
            }
        }
    }

    #[test]
    fn mismatched_sectors_raise() {
        // γ=0.7, L=8: crossings inside (0, h_f); straddling the largest one
        // with a wide step lands the two ends in different sectors.
        let crossings = crate::fermion::sector_crossings(0.7, 8);
        let c = *crossings.last().unwrap();
        let p = ModelParams::finite(0.7, c - 0.02, 0.0, 8);
        let res = fidelity(&p, 0.04);
        assert!(matches!(res, Err(XyError::SectorMismatch(_))));
    }

    #[test]
    fn dip_at_criticality_deepens_with_size() {
        let dip = |l: usize| {
            let p = ModelParams::finite(0.7, 1.0 - 5e-4, 0.0, l);
            fidelity(&p, 1e-3).unwrap()
        };
        let (f50, f100, f200, f400) = (dip(50), dip(100), dip(200), dip(400));
        assert!(f50 > f100 && f100 > f200 && f200 > f400, "{f50} {f100} {f200} {f400}");
        // Far from criticality the same step barely moves the state.
        let p = ModelParams::finite(0.7, 1.6, 0.0, 400);
        assert!(fidelity(&p, 1e-3).unwrap() > f400);
    }

    #[test]
    fn smooth_across_the_factorization_field() {
        // Second finite difference of F(h) stays ordinary through h_f.
        let l = 200;
        let hf = 0.51f64.sqrt();
        let dh = 1e-3;
        let f = |h: f64| fidelity(&ModelParams::finite(0.7, h, 0.0, l), dh).unwrap();
        let second = |h: f64| (f(h + dh) - 2.0 * f(h) + f(h - dh)) / (dh * dh);
        let at_hf = second(hf).abs();
        let nearby = second(hf + 0.05).abs().max(second(hf - 0.05).abs());
        assert!(at_hf < 10.0 * nearby.max(1e-3), "cusp at h_f: {at_hf} vs {nearby}");
    }
}
