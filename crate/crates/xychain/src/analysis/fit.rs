//! Straight-line fits with explicit quality diagnostics.
//!
//! Every fit carries R² and bootstrap confidence half-widths (100 seeded
//! resamples, percentile method) so that no exponent is reported silently.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{XyError, XyResult};

const BOOTSTRAP_RESAMPLES: usize = 100;
const BOOTSTRAP_SEED: u64 = 0x5ca1ab1e;

#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Half-width of the central 90% bootstrap interval for the slope.
    pub slope_halfwidth: f64,
    pub intercept_halfwidth: f64,
}

fn ols(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Ordinary least squares of `ys` on `xs` with bootstrap half-widths.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> XyResult<FitReport> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(XyError::InvalidParams(format!(
            "linear fit needs >= 3 matched points, got {}/{}",
            xs.len(),
            ys.len()
        )));
    }
    if xs.iter().any(|x| !x.is_finite()) || ys.iter().any(|y| !y.is_finite()) {
        return Err(XyError::InvalidParams("non-finite value in fit input".into()));
    }
    let (slope, intercept) =
        ols(xs, ys).ok_or_else(|| XyError::InvalidParams("zero variance in x".into()))?;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum();
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    let mut rng = ChaCha8Rng::seed_from_u64(BOOTSTRAP_SEED);
    let mut slopes = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    let mut intercepts = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        let mut bx = Vec::with_capacity(xs.len());
        let mut by = Vec::with_capacity(xs.len());
        for _ in 0..xs.len() {
            let j = rng.random_range(0..xs.len());
            bx.push(xs[j]);
            by.push(ys[j]);
        }
        if let Some((s, c)) = ols(&bx, &by) {
            slopes.push(s);
            intercepts.push(c);
        }
    }
    Ok(FitReport {
        slope,
        intercept,
        r_squared,
        slope_halfwidth: percentile_halfwidth(&mut slopes),
        intercept_halfwidth: percentile_halfwidth(&mut intercepts),
    })
}

/// Half of the central 90% spread; 0 when resampling degenerated.
fn percentile_halfwidth(samples: &mut Vec<f64>) -> f64 {
    if samples.len() < 10 {
        return 0.0;
    }
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = samples[(samples.len() as f64 * 0.05) as usize];
    let hi = samples[((samples.len() as f64 * 0.95) as usize).min(samples.len() - 1)];
    0.5 * (hi - lo)
}

/// Vertex abscissa of the parabola through three points with `y1` extremal.
/// Grid spacing need not be uniform.
pub fn parabolic_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> f64 {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den.abs() < 1e-300 {
        x1
    } else {
        x1 - 0.5 * num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..12).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.3 * x + 0.4).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope + 1.3).abs() < 1e-12);
        assert!((f.intercept - 0.4).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
        assert!(f.slope_halfwidth < 1e-10);
    }

    #[test]
    fn bootstrap_halfwidth_brackets_mild_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..40).map(|i| i as f64 / 4.0).collect();
        let ys: Vec<f64> =
            xs.iter().map(|x| 2.0 * x + 1.0 + 0.05 * (rng.random::<f64>() - 0.5)).collect();
        let f = linear_fit(&xs, &ys).unwrap();
        assert!((f.slope - 2.0).abs() < 3.0 * f.slope_halfwidth.max(1e-3));
        assert!(f.r_squared > 0.999);
        assert!(f.slope_halfwidth > 0.0);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        assert!(linear_fit(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(linear_fit(&[1.0, 2.0, f64::NAN], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn parabola_vertex_on_uneven_grid() {
        // y = (x − 0.37)² sampled unevenly.
        let f = |x: f64| (x - 0.37) * (x - 0.37);
        let v = parabolic_vertex((0.0, f(0.0)), (0.3, f(0.3)), (0.9, f(0.9)));
        assert!((v - 0.37).abs() < 1e-12, "vertex {v}");
    }
}
