//! Adaptive Gauss-Legendre quadrature.
//!
//! Each panel is scored with a nested 7/15-point Gauss-Legendre pair; the
//! difference between the two rules is the local error estimate. Panels that
//! miss their error budget are bisected, with the budget split between the
//! halves, down to a hard depth limit. Nodes and weights are computed once by
//! Newton iteration on the Legendre polynomials, so there are no transcribed
//! constants to get wrong.

use std::sync::LazyLock;

use crate::error::{XyError, XyResult};

/// Nodes and weights of an n-point Gauss-Legendre rule on [−1, 1].
struct GaussRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 1..n {
        let p_next = ((2 * j + 1) as f64 * x * p - j as f64 * p_prev) / (j + 1) as f64;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

fn gauss_rule(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi's estimate for the i-th root, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    GaussRule { nodes, weights }
}

static G7: LazyLock<GaussRule> = LazyLock::new(|| gauss_rule(7));
static G15: LazyLock<GaussRule> = LazyLock::new(|| gauss_rule(15));

fn panel<F: Fn(f64) -> f64>(rule: &GaussRule, f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Absolute-tolerance adaptive integration of `f` over [a, b].
///
/// `max_depth` bounds the bisection depth (spec of the correlator integrals:
/// 40); exceeding it raises [`XyError::QuadratureNoConvergence`], which for
/// the correlator integrands signals a parameter point too close to the
/// critical field at zero temperature.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_depth: u32,
) -> XyResult<f64> {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        tol: f64,
        depth: u32,
        max_depth: u32,
    ) -> XyResult<f64> {
        let coarse = panel(&G7, f, a, b);
        let fine = panel(&G15, f, a, b);
        if (fine - coarse).abs() <= tol {
            return Ok(fine);
        }
        if depth >= max_depth {
            return Err(XyError::QuadratureNoConvergence(format!(
                "depth {max_depth} exhausted on [{a:.6e}, {b:.6e}], err {:.3e} > {:.3e}",
                (fine - coarse).abs(),
                tol
            )));
        }
        let mid = 0.5 * (a + b);
        let left = recurse(f, a, mid, 0.5 * tol, depth + 1, max_depth)?;
        let right = recurse(f, mid, b, 0.5 * tol, depth + 1, max_depth)?;
        Ok(left + right)
    }
    recurse(f, a, b, abs_tol, 0, max_depth)
}

/// Integrate over consecutive panels [x_0, x_1], [x_1, x_2], ... sharing the
/// tolerance equally; used to pre-split integrands with a known awkward point.
pub fn integrate_split<F: Fn(f64) -> f64>(
    f: &F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_depth: u32,
) -> XyResult<f64> {
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let tol = abs_tol / (breakpoints.len() - 1) as f64;
    let mut total = 0.0;
    for w in breakpoints.windows(2) {
        total += integrate(f, w[0], w[1], tol, max_depth)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn rules_integrate_polynomials_exactly() {
        // 15-point Gauss is exact through degree 29.
        let f = |x: f64| x.powi(12) - 3.0 * x.powi(5) + 2.0;
        let exact = 2.0 / 13.0 + 4.0; // odd power cancels on [-1, 1]
        assert!((panel(&G15, &f, -1.0, 1.0) - exact).abs() < 1e-14);
        assert!((panel(&G7, &f, -1.0, 1.0) - exact).abs() < 1e-13);
    }

    #[test]
    fn sine_over_half_period() {
        let v = integrate(&|x: f64| x.sin(), 0.0, PI, 1e-12, 40).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn handles_mild_endpoint_kink() {
        // |x − 1/3| has a kink; adaptive bisection must still converge.
        let v = integrate(&|x: f64| (x - 1.0 / 3.0).abs(), 0.0, 1.0, 1e-11, 40).unwrap();
        let exact = (1.0f64 / 3.0).powi(2) / 2.0 + (2.0f64 / 3.0).powi(2) / 2.0;
        assert!((v - exact).abs() < 1e-10);
    }

    #[test]
    fn depth_limit_raises() {
        // An integrable singularity starves the fixed depth budget at a tight
        // tolerance once the depth cap is small.
        let f = |x: f64| 1.0 / x.abs().sqrt().max(1e-300);
        let res = integrate(&f, 0.0, 1.0, 1e-13, 8);
        assert!(matches!(res, Err(XyError::QuadratureNoConvergence(_))));
    }

    #[test]
    fn split_matches_plain() {
        let f = |x: f64| (3.0 * x).cos() * (-x).exp();
        let a = integrate(&f, 0.0, 2.0, 1e-12, 40).unwrap();
        let b = integrate_split(&f, &[0.0, 0.7, 2.0], 1e-12, 40).unwrap();
        assert!((a - b).abs() < 1e-11);
    }
}
