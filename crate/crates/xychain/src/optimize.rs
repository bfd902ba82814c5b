//! Derivative-free minimizers used by the measurement optimization and the
//! scaling fits: Nelder-Mead in low dimension and golden-section on a line.

/// Nelder-Mead simplex minimization.
///
/// Returns (argmin, min, iterations). Convergence when the spread of simplex
/// values drops below `tol`; the simplex is seeded at `x0` plus one vertex
/// per coordinate displaced by `step`.
pub fn nelder_mead<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64, usize) {
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for d in 0..n {
        let mut v = x0.to_vec();
        v[d] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    let (alpha, gamma, rho, sig) = (1.0, 2.0, 0.5, 0.5);
    let mut iter = 0;
    while iter < max_iter {
        iter += 1;
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        if simplex[n].1 - simplex[0].1 < tol {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|d| simplex[..n].iter().map(|(v, _)| v[d]).sum::<f64>() / n as f64)
            .collect();
        let at = |coef: f64| -> Vec<f64> {
            (0..n).map(|d| centroid[d] + coef * (centroid[d] - simplex[n].0[d])).collect()
        };
        let xr = at(alpha);
        let fr = f(&xr);
        if fr < simplex[0].1 {
            let xe = at(gamma);
            let fe = f(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = at(-rho);
            let fc = f(&xc);
            if fc < simplex[n].1 {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    for d in 0..n {
                        v.0[d] = best[d] + sig * (v.0[d] - best[d]);
                    }
                    v.1 = f(&v.0);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let (x, fx) = simplex.swap_remove(0);
    (x, fx, iter)
}

/// Golden-section minimization of a unimodal function on [a, b].
///
/// Near a quadratic minimum the function is flat to machine precision over a
/// width of order √ε·|x|, so the returned argument cannot be localized better
/// than about 1e-8 regardless of `tol`; the minimum value itself converges.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (a, b);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &[f64]| (x[0] - 1.3).powi(2) + (x[1] + 0.4).powi(2) + 2.0;
        let (x, fx, _) = nelder_mead(f, &[0.0, 0.0], 0.5, 1e-14, 500);
        assert!((x[0] - 1.3).abs() < 1e-6 && (x[1] + 0.4).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-10);
    }

    #[test]
    fn rosenbrock_valley() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, fx, _) = nelder_mead(f, &[-1.2, 1.0], 0.5, 1e-16, 5000);
        assert!((x[0] - 1.0).abs() < 1e-4 && (x[1] - 1.0).abs() < 1e-4, "{x:?} {fx}");
    }

    #[test]
    fn golden_section_finds_cos_minimum() {
        let (x, _) = golden_section(|x| x.cos(), 2.0, 4.0, 1e-10);
        // √ε argument resolution at a quadratic minimum.
        assert!((x - std::f64::consts::PI).abs() < 1e-7);
    }
}
