//! Master-curve collapse scoring, finite-size scaling at the critical field,
//! and the exponential size-scaling law at the factorizing field.

use crate::analysis::fit::{linear_fit, parabolic_vertex};
use crate::analysis::interp::Pchip;
use crate::analysis::{CollapseResult, ScalingDataset};
use crate::error::{XyError, XyResult};
use crate::optimize::golden_section;

/// Critical field of the model in units of the exchange coupling.
const H_CRITICAL: f64 = 1.0;

/// Normalized leave-one-slice-out collapse score.
///
/// Each slice is scored against a monotone piecewise-cubic through the
/// pooled points of the other slices; points outside the pooled domain are
/// skipped. The summed squared deviations are divided by the variance of
/// every scored value, so the score is invariant under common rescalings of
/// y and equals 0 exactly when all slices lie on one curve.
pub fn master_curve_residual(slices: &[Vec<(f64, f64)>]) -> f64 {
    let mut sq_dev = 0.0;
    let mut scored: Vec<f64> = Vec::new();
    for (held, pts) in slices.iter().enumerate() {
        let mut pool: Vec<(f64, f64)> = slices
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != held)
            .flat_map(|(_, s)| s.iter().copied())
            .collect();
        if pool.len() < 2 {
            continue;
        }
        pool.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut xs: Vec<f64> = Vec::with_capacity(pool.len());
        let mut ys: Vec<f64> = Vec::with_capacity(pool.len());
        for (x, y) in pool {
            match xs.last() {
                // Coincident abscissas are merged by averaging.
                Some(&last) if (x - last).abs() <= 1e-12 * last.abs().max(1.0) => {
                    let yl = ys.last_mut().unwrap();
                    *yl = 0.5 * (*yl + y);
                }
                _ => {
                    xs.push(x);
                    ys.push(y);
                }
            }
        }
        let master = match Pchip::new(xs, ys) {
            Ok(m) => m,
            Err(_) => continue,
        };
        for &(x, y) in pts {
            if master.contains(x) {
                let dev = y - master.eval(x);
                sq_dev += dev * dev;
                scored.push(y);
            }
        }
    }
    if scored.len() < 2 {
        return 0.0;
    }
    let mean = scored.iter().sum::<f64>() / scored.len() as f64;
    let var: f64 = scored.iter().map(|y| (y - mean) * (y - mean)).sum();
    if var < 1e-30 {
        if sq_dev < 1e-24 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        sq_dev / var
    }
}

/// Peak location of one slice: discrete argmax refined by the parabola
/// through its neighbors. The argmax must be interior.
fn slice_peak(label: f64, pts: &[(f64, f64)]) -> XyResult<f64> {
    let i = pts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    if i == 0 || i == pts.len() - 1 {
        return Err(XyError::NoPeak(format!(
            "slice {label}: maximum sits on the grid boundary at h={}",
            pts[i].0
        )));
    }
    Ok(parabolic_vertex(pts[i - 1], pts[i], pts[i + 1]))
}

/// Finite-size scaling collapse y = L^ω F[(h − h_m(L))·L^ν].
///
/// Per-slice peak fields h_m(L) come from parabolic refinement of the grid
/// argmax; the drift of h_m toward the critical field is reported as a
/// power-law fit of ln(h_c − h_m) against ln L whenever at least three
/// slices sit below h_c.
pub fn fss_collapse(ds: &ScalingDataset, omega: f64, nu: f64) -> XyResult<CollapseResult> {
    ds.validate()?;
    let sizes = ds.slices();
    if sizes.len() < 3 {
        return Err(XyError::InvalidParams(format!(
            "finite-size collapse needs >= 3 sizes, got {}",
            sizes.len()
        )));
    }
    let mut shifts = Vec::new();
    let mut rescaled = Vec::new();
    for &l in &sizes {
        let pts = ds.slice_points(l);
        if pts.len() < 7 {
            return Err(XyError::InvalidParams(format!(
                "slice {l} has {} fields; need >= 7 to bracket the maximum",
                pts.len()
            )));
        }
        let h_m = slice_peak(l, &pts)?;
        shifts.push((l, h_m));
        rescaled.push(
            pts.iter()
                .map(|&(h, y)| ((h - h_m) * l.powf(nu), y * l.powf(-omega)))
                .collect::<Vec<_>>(),
        );
    }
    let residual = master_curve_residual(&rescaled);
    let mut exponents = vec![("omega".to_string(), omega), ("nu".to_string(), nu)];
    let mut fits = Vec::new();
    let below: Vec<(f64, f64)> =
        shifts.iter().copied().filter(|&(_, hm)| hm < H_CRITICAL).collect();
    if below.len() >= 3 {
        let xs: Vec<f64> = below.iter().map(|&(l, _)| l.ln()).collect();
        let ys: Vec<f64> = below.iter().map(|&(_, hm)| (H_CRITICAL - hm).ln()).collect();
        let report = linear_fit(&xs, &ys)?;
        exponents.push(("drift".to_string(), -report.slope));
        fits.push(("drift".to_string(), report));
    }
    Ok(CollapseResult { exponents, shifts, residual, fits })
}

/// Exponential convergence toward the largest-size slice near the
/// factorizing field: deviations δ(h) from the reference slice are plotted
/// against u = e^{−αL}(h − h_f(L)) and scored for collapse. With `alpha`
/// absent the best exponent is found by golden-section search on the score.
pub fn factorization_scaling(
    ds: &ScalingDataset,
    alpha: Option<f64>,
) -> XyResult<CollapseResult> {
    ds.validate()?;
    let sizes = ds.slices();
    if sizes.len() < 2 {
        return Err(XyError::ReferenceMissing(format!(
            "need a reference slice plus at least one smaller size, got {} slice(s)",
            sizes.len()
        )));
    }
    let reference = *sizes.last().unwrap();
    let ref_pts = ds.slice_points(reference);
    let (rx, ry): (Vec<f64>, Vec<f64>) = ref_pts.iter().copied().unzip();
    let ref_curve = Pchip::new(rx, ry)?;
    let mut shifts = Vec::new();
    let mut deltas: Vec<(f64, f64, Vec<(f64, f64)>)> = Vec::new();
    for &l in &sizes[..sizes.len() - 1] {
        if (l - l.round()).abs() > 1e-9 || l < 2.0 {
            return Err(XyError::InvalidParams(format!("slice label {l} is not a chain length")));
        }
        let h_f = crate::fermion::factorization_field_finite(ds.gamma, l.round() as usize)?;
        shifts.push((l, h_f));
        let pts: Vec<(f64, f64)> = ds
            .slice_points(l)
            .into_iter()
            .filter(|&(h, _)| ref_curve.contains(h))
            .map(|(h, y)| (h, y - ref_curve.eval(h)))
            .collect();
        deltas.push((l, h_f, pts));
    }
    let residual_at = |a: f64| -> f64 {
        let rescaled: Vec<Vec<(f64, f64)>> = deltas
            .iter()
            .map(|(l, h_f, pts)| {
                let scale = (-a * l).exp();
                pts.iter().map(|&(h, d)| ((h - h_f) * scale, d)).collect()
            })
            .collect();
        master_curve_residual(&rescaled)
    };
    let best = match alpha {
        Some(a) => a,
        None => golden_section(residual_at, 0.05, 3.0, 1e-6).0,
    };
    Ok(CollapseResult {
        exponents: vec![("alpha".to_string(), best)],
        shifts,
        residual: residual_at(best),
        fits: Vec::new(),
    })
}
