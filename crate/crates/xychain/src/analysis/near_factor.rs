//! Power law and range decay of discord near the factorizing field.
//!
//! Close to h_f the symmetry-broken discord follows
//! Q_r ≈ c · (h − h_f)² · ((1−γ)/(1+γ))^r, so a log-log fit in |h − h_f|
//! gives the power and consecutive-distance ratios give the decay constant.

use crate::analysis::fit::{linear_fit, FitReport};
use crate::error::{XyError, XyResult};

/// Values below this floor are treated as numerically zero and excluded.
const VALUE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct NearFactorizationLaw {
    /// Fitted power of |h − h_f|, averaged over the distances present.
    pub power: f64,
    /// Mean ratio Q_{r+1}/Q_r over fields and consecutive distances.
    pub ratio: f64,
    /// Per-distance log-log fit diagnostics.
    pub power_fits: Vec<(usize, FitReport)>,
    pub n_points: usize,
}

/// Fit the near-factorization law to `(h, r, Q_r)` samples.
///
/// Requires data on both sides of `h_f` and at least one distance with three
/// or more usable fields; returns `InsufficientRange` otherwise.
pub fn near_factorization_fit(
    points: &[(f64, usize, f64)],
    h_f: f64,
) -> XyResult<NearFactorizationLaw> {
    let usable: Vec<(f64, usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(h, _, q)| q > VALUE_FLOOR && (h - h_f).abs() > 1e-10)
        .collect();
    if usable.is_empty() {
        return Err(XyError::InsufficientRange("no usable points above the floor".into()));
    }
    let below = usable.iter().any(|&(h, _, _)| h < h_f);
    let above = usable.iter().any(|&(h, _, _)| h > h_f);
    if !(below && above) {
        return Err(XyError::InsufficientRange(
            "need fields on both sides of the factorizing point".into(),
        ));
    }

    let mut distances: Vec<usize> = usable.iter().map(|&(_, r, _)| r).collect();
    distances.sort_unstable();
    distances.dedup();

    let mut power_fits = Vec::new();
    for &r in &distances {
        let xs: Vec<f64> = usable
            .iter()
            .filter(|&&(_, rr, _)| rr == r)
            .map(|&(h, _, _)| (h - h_f).abs().ln())
            .collect();
        let ys: Vec<f64> = usable
            .iter()
            .filter(|&&(_, rr, _)| rr == r)
            .map(|&(_, _, q)| q.ln())
            .collect();
        if xs.len() >= 3 {
            power_fits.push((r, linear_fit(&xs, &ys)?));
        }
    }
    if power_fits.is_empty() {
        return Err(XyError::InsufficientRange(
            "no distance has three or more usable fields".into(),
        ));
    }
    let power = power_fits.iter().map(|(_, f)| f.slope).sum::<f64>() / power_fits.len() as f64;

    let mut fields: Vec<f64> = usable.iter().map(|&(h, _, _)| h).collect();
    fields.sort_by(|a, b| a.partial_cmp(b).unwrap());
    fields.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let q_at = |h: f64, r: usize| -> Option<f64> {
        usable
            .iter()
            .find(|&&(hh, rr, _)| rr == r && (hh - h).abs() < 1e-12)
            .map(|&(_, _, q)| q)
    };
    let mut ratios = Vec::new();
    for &h in &fields {
        for w in distances.windows(2) {
            if w[1] != w[0] + 1 {
                continue;
            }
            if let (Some(qa), Some(qb)) = (q_at(h, w[0]), q_at(h, w[1])) {
                if qa > VALUE_FLOOR {
                    ratios.push(qb / qa);
                }
            }
        }
    }
    if ratios.len() < 2 {
        return Err(XyError::InsufficientRange(
            "too few consecutive-distance pairs for a decay ratio".into(),
        ));
    }
    let ratio = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(NearFactorizationLaw { power, ratio, power_fits, n_points: usable.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(decay: f64, power: f64) -> Vec<(f64, usize, f64)> {
        let h_f = 0.71414;
        let mut pts = Vec::new();
        for j in 0..14 {
            let dh = -0.05 + 0.008 * j as f64;
            if dh.abs() < 1e-6 {
                continue;
            }
            for r in 1..=4usize {
                pts.push((h_f + dh, r, 3.0 * dh.abs().powf(power) * decay.powi(r as i32)));
            }
        }
        pts
    }

    #[test]
    fn exact_law_is_recovered() {
        let law = near_factorization_fit(&synthetic(3.0 / 17.0, 2.0), 0.71414).unwrap();
        assert!((law.power - 2.0).abs() < 1e-9, "power {}", law.power);
        assert!((law.ratio - 3.0 / 17.0).abs() < 1e-12, "ratio {}", law.ratio);
        assert_eq!(law.power_fits.len(), 4);
        for (_, f) in &law.power_fits {
            assert!(f.r_squared > 1.0 - 1e-12);
        }
    }

    #[test]
    fn one_sided_data_is_rejected() {
        let pts: Vec<_> =
            synthetic(0.2, 2.0).into_iter().filter(|&(h, _, _)| h < 0.71414).collect();
        assert!(matches!(
            near_factorization_fit(&pts, 0.71414),
            Err(XyError::InsufficientRange(_))
        ));
    }

    #[test]
    fn all_zero_data_is_rejected() {
        let pts = vec![(0.7, 1, 0.0), (0.73, 1, 1e-16)];
        assert!(near_factorization_fit(&pts, 0.71414).is_err());
    }
}
