//! Thick-restart Lanczos for the lowest eigenpair of a large symmetric
//! operator.
//!
//! Full reorthogonalization (two modified-Gram-Schmidt passes against the
//! whole retained basis) keeps the basis orthonormal to machine precision,
//! which the near-degenerate parity doublets of the ordered phase require.
//! On restart the lowest Ritz vectors are kept, so convergence accumulates
//! across cycles instead of starting over.

use nalgebra::DMatrix;

use crate::error::{XyError, XyResult};

pub struct LanczosOptions {
    /// Bound on ‖Hy − θy‖ / max(1, |θ|) for acceptance.
    pub tol: f64,
    /// Basis size at which a restart happens.
    pub max_basis: usize,
    /// Ritz vectors carried across a restart.
    pub keep: usize,
    pub max_restarts: usize,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tol: 1e-12, max_basis: 64, keep: 8, max_restarts: 400 }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn ritz_lowest(b: &DMatrix<f64>, cur: usize) -> (f64, Vec<f64>) {
    let eig = b.view((0, 0), (cur, cur)).into_owned().symmetric_eigen();
    let mut idx = 0;
    for i in 1..cur {
        if eig.eigenvalues[i] < eig.eigenvalues[idx] {
            idx = i;
        }
    }
    let v: Vec<f64> = (0..cur).map(|i| eig.eigenvectors[(i, idx)]).collect();
    (eig.eigenvalues[idx], v)
}

fn assemble(basis: &[Vec<f64>], coeffs: &[f64]) -> Vec<f64> {
    let dim = basis[0].len();
    let mut y = vec![0.0; dim];
    for (c, v) in coeffs.iter().zip(basis) {
        for (yi, vi) in y.iter_mut().zip(v) {
            *yi += c * vi;
        }
    }
    y
}

/// Lowest eigenpair of the operator given by `apply`.
///
/// `start` seeds the first basis vector (normalized internally; must be
/// nonzero). The operator must map any invariant subspace of `start` into
/// itself for sector-projected use.
pub fn lowest_eigenpair<F: Fn(&[f64], &mut [f64])>(
    apply: F,
    dim: usize,
    start: &[f64],
    opts: &LanczosOptions,
) -> XyResult<(f64, Vec<f64>)> {
    let m = opts.max_basis.min(dim);
    let keep = opts.keep.min(m.saturating_sub(2)).max(1);
    let sn = norm(start);
    if sn == 0.0 {
        return Err(XyError::NoConvergence("zero start vector".into()));
    }
    let mut basis: Vec<Vec<f64>> = vec![start.iter().map(|x| x / sn).collect()];
    let mut b = DMatrix::<f64>::zeros(m, m);
    let mut w = vec![0.0; dim];
    let mut restarts = 0;

    loop {
        // Expand until the basis is full, checking the Ritz residual bound
        // as soon as the projected problem has a new column.
        while basis.len() <= m {
            let cur = basis.len();
            let j = cur - 1;
            apply(&basis[j], &mut w);
            for i in 0..cur {
                let c = dot(&basis[i], &w);
                b[(i, j)] = c;
                b[(j, i)] = c;
                for (wv, bv) in w.iter_mut().zip(&basis[i]) {
                    *wv -= c * bv;
                }
            }
            for i in 0..cur {
                let c = dot(&basis[i], &w);
                for (wv, bv) in w.iter_mut().zip(&basis[i]) {
                    *wv -= c * bv;
                }
            }
            let beta = norm(&w);
            let (theta, s) = ritz_lowest(&b, cur);
            let scale = theta.abs().max(1.0);
            let bound = beta * s[cur - 1].abs();
            if bound < opts.tol * scale || beta < 1e-13 * scale || cur == dim {
                let y = assemble(&basis, &s);
                let mut hy = vec![0.0; dim];
                apply(&y, &mut hy);
                let res: f64 = hy
                    .iter()
                    .zip(&y)
                    .map(|(a, c)| (a - theta * c).powi(2))
                    .sum::<f64>()
                    .sqrt();
                if res < opts.tol * scale || cur == dim {
                    return Ok((theta, y));
                }
                if beta < 1e-13 * scale {
                    // Invariant subspace exhausted without meeting the
                    // tolerance; continue in a fresh direction orthogonal to
                    // everything kept.
                    let mut fresh: Vec<f64> =
                        (0..dim).map(|i| ((i * 2654435761 + 1) % 1000003) as f64 / 1e6 - 0.5).collect();
                    for v in &basis {
                        let c = dot(v, &fresh);
                        for (fv, bv) in fresh.iter_mut().zip(v) {
                            *fv -= c * bv;
                        }
                    }
                    let n = norm(&fresh);
                    if n < 1e-12 {
                        return Ok((theta, y));
                    }
                    w = fresh.iter().map(|x| x / n).collect();
                    if basis.len() == m {
                        break;
                    }
                    basis.push(std::mem::replace(&mut w, vec![0.0; dim]));
                    continue;
                }
            }
            if basis.len() == m {
                break;
            }
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        restarts += 1;
        if restarts > opts.max_restarts {
            return Err(XyError::NoConvergence(format!(
                "Lanczos: {restarts} restarts without reaching {}",
                opts.tol
            )));
        }
        // Thick restart: keep the lowest `keep` Ritz vectors plus the last
        // residual direction; the projected matrix restarts as diag(θ) and
        // its remaining entries are recomputed exactly by the next
        // expansions (⟨y_i|H|y_j⟩ = θ_i δ_ij within the old span).
        let cur = basis.len();
        let eig = b.view((0, 0), (cur, cur)).into_owned().symmetric_eigen();
        let mut order: Vec<usize> = (0..cur).collect();
        order.sort_by(|&x, &y| eig.eigenvalues[x].partial_cmp(&eig.eigenvalues[y]).unwrap());
        let mut carried: Vec<(f64, Vec<f64>)> = Vec::with_capacity(keep + 1);
        for &oi in order.iter().take(keep) {
            let coeffs: Vec<f64> = (0..cur).map(|i| eig.eigenvectors[(i, oi)]).collect();
            carried.push((eig.eigenvalues[oi], assemble(&basis, &coeffs)));
        }
        // Defensive re-orthonormalization; corrections are roundoff-sized,
        // so the θ diagonal stays exact for every survivor.
        basis.clear();
        b.fill(0.0);
        for (theta, mut v) in carried {
            for u in &basis {
                let c = dot(u, &v);
                for (vv, uv) in v.iter_mut().zip(u) {
                    *vv -= c * uv;
                }
            }
            let n = norm(&v);
            if n > 1e-8 {
                for vv in v.iter_mut() {
                    *vv /= n;
                }
                b[(basis.len(), basis.len())] = theta;
                basis.push(v);
            }
        }
        let beta = norm(&w);
        if beta > 1e-300 {
            let mut v: Vec<f64> = w.iter().map(|x| x / beta).collect();
            for u in &basis {
                let c = dot(u, &v);
                for (vv, uv) in v.iter_mut().zip(u) {
                    *vv -= c * uv;
                }
            }
            let n = norm(&v);
            if n > 1e-8 {
                for vv in v.iter_mut() {
                    *vv /= n;
                }
                basis.push(v);
            }
        }
    }
}
