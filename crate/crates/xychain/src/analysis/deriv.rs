//! Numerical differentiation of observable samplers.

use crate::error::XyResult;

/// Derivative of `f` at `h` by central differences at `step` and `step/2`
/// with one Richardson extrapolation level.
///
/// Returns `(derivative, error_estimate)`. The estimate adds the spread
/// between extrapolation levels to a two-scale curvature comparison: second
/// differences at `step` and `step/2` agree to O(step²) when `f` is smooth
/// at `h`, but differ by O(1/step) across a kink, so the combined estimate
/// stays O(step²)-small on smooth samplers and grows without bound as the
/// step shrinks onto a non-smooth point. Sampler errors propagate unchanged.
pub fn d_dh<F>(f: F, h: f64, step: f64) -> XyResult<(f64, f64)>
where
    F: Fn(f64) -> XyResult<f64>,
{
    assert!(step > 0.0, "step must be positive");
    let fp = f(h + step)?;
    let fm = f(h - step)?;
    let fp2 = f(h + 0.5 * step)?;
    let fm2 = f(h - 0.5 * step)?;
    let f0 = f(h)?;
    let d1 = (fp - fm) / (2.0 * step);
    let d2 = (fp2 - fm2) / step;
    let richardson = (4.0 * d2 - d1) / 3.0;
    let c1 = (fp - 2.0 * f0 + fm) / (step * step);
    let c2 = (fp2 - 2.0 * f0 + fm2) / (0.25 * step * step);
    let err = (richardson - d2).abs() + step * (c2 - c1).abs();
    Ok((richardson, err))
}
