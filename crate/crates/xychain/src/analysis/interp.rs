//! Monotone piecewise-cubic interpolation (Fritsch–Carlson slopes).
//!
//! Used as the master curve in collapse scoring: it never overshoots pooled
//! data, so a bad collapse is penalized by genuine scatter rather than by
//! spline ringing.

use crate::error::{XyError, XyResult};

#[derive(Debug, Clone)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Endpoint-adjusted Fritsch–Carlson tangents, one per knot.
    ds: Vec<f64>,
}

impl Pchip {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> XyResult<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(XyError::InvalidParams(format!(
                "need matching x/y with >= 2 knots, got {}/{}",
                xs.len(),
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(XyError::InvalidParams("knots must be strictly increasing".into()));
        }
        let n = xs.len();
        let hspan: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / hspan[i]).collect();
        let mut ds = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                ds[i] = 0.0;
            } else {
                let w1 = 2.0 * hspan[i] + hspan[i - 1];
                let w2 = hspan[i] + 2.0 * hspan[i - 1];
                ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        ds[0] = edge_tangent(hspan[0], hspan.get(1).copied(), delta[0], delta.get(1).copied());
        ds[n - 1] = edge_tangent(
            hspan[n - 2],
            (n >= 3).then(|| hspan[n - 3]),
            delta[n - 2],
            (n >= 3).then(|| delta[n - 3]),
        );
        Ok(Self { xs, ys, ds })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.xs[0] && x <= *self.xs.last().unwrap()
    }

    /// Cubic Hermite evaluation; clamps outside the domain to the edge value.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            p => p - 1,
        };
        let hspan = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / hspan;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[i] + h10 * hspan * self.ds[i] + h01 * self.ys[i + 1] + h11 * hspan * self.ds[i + 1]
    }
}

/// Three-point one-sided tangent, clamped so the end interval stays monotone.
fn edge_tangent(h0: f64, h1: Option<f64>, d0: f64, d1: Option<f64>) -> f64 {
    let (h1, d1) = match (h1, d1) {
        (Some(h), Some(d)) => (h, d),
        _ => return d0,
    };
    let t = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if t * d0 <= 0.0 {
        0.0
    } else if d0 * d1 <= 0.0 && t.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_linear_data_exactly() {
        let xs: Vec<f64> = (0..10).map(|i| 0.3 * i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x - 1.0).collect();
        let p = Pchip::new(xs, ys).unwrap();
        for i in 0..200 {
            let x = 0.27 * i as f64 / 20.0;
            assert!((p.eval(x) - (2.0 * x - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn monotone_data_never_overshoots() {
        let xs = vec![0.0, 1.0, 1.1, 2.5, 3.0, 4.0];
        let ys = vec![0.0, 0.1, 2.0, 2.1, 2.1001, 3.0];
        let p = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for w in 0..xs.len() - 1 {
            for j in 0..=50 {
                let x = xs[w] + (xs[w + 1] - xs[w]) * j as f64 / 50.0;
                let v = p.eval(x);
                assert!(
                    v >= ys[w] - 1e-12 && v <= ys[w + 1] + 1e-12,
                    "overshoot at x={x}: {v} outside [{}, {}]",
                    ys[w],
                    ys[w + 1]
                );
            }
        }
    }

    #[test]
    fn clamps_outside_the_domain() {
        let p = Pchip::new(vec![0.0, 1.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(p.eval(-5.0), 1.0);
        assert_eq!(p.eval(9.0), 3.0);
        assert!(p.contains(0.5) && !p.contains(1.5));
    }

    #[test]
    fn rejects_unordered_knots() {
        assert!(Pchip::new(vec![0.0, 0.0, 1.0], vec![1.0, 2.0, 3.0]).is_err());
        assert!(Pchip::new(vec![0.0], vec![1.0]).is_err());
    }
}
