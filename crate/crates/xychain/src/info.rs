//! Entropy, mutual information, classical correlations, quantum discord.
//!
//! Classical correlations maximize S(ρ_A) − S(ρ_AB|{B_k}) over projective
//! measurements on spin B. For a rank-1 projector along the Bloch direction
//! n̂ the conditioned entropy has a closed form in the pair state's Bloch
//! data (a, b, T):
//!
//! ```text
//! p_± = (1 ± b·n̂)/2,   r_± = (a ± T n̂)/(2 p_±),
//! S(ρ_AB|{B_±}) = Σ_± p_± H₂((1 + |r_±|)/2)
//! ```
//!
//! valid for every two-qubit state, which makes the measurement optimization
//! a cheap two-angle problem: coarse grid, then simplex refinement, with a
//! canonical-bases fast path for X states. All entropies are in bits.

use nalgebra::{Matrix3, Vector3};

use crate::density::{DensityMatrix, SymmetryTag, C64};
use crate::error::XyResult;
use crate::optimize::nelder_mead;

/// Eigenvalues below this are exact zeros inside entropies.
const EIGEN_FLOOR: f64 = 1e-14;
/// Measurement branches rarer than this contribute nothing.
const BRANCH_FLOOR: f64 = 1e-14;
/// Negative discord larger than this is reported as-is, not clipped.
const DISCORD_CLIP: f64 = 1e-9;

/// Projective measurement of one qubit along the Bloch direction
/// (sinθ cosφ, sinθ sinφ, cosθ).
#[derive(Debug, Clone, Copy)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    pub fn direction(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Canonical form: direction folded into the upper hemisphere (the
    /// projector pair is invariant under n̂ → −n̂), angles in [0,π]×[0,2π).
    pub fn canonical(&self) -> Self {
        let mut n = self.direction();
        if n[2] < 0.0 || (n[2] == 0.0 && n[1] < 0.0) {
            n = -n;
        }
        let theta = n[2].clamp(-1.0, 1.0).acos();
        let mut phi = n[1].atan2(n[0]);
        if phi < 0.0 {
            phi += 2.0 * std::f64::consts::PI;
        }
        Self { theta, phi }
    }
}

/// How the measurement optimizer reached its answer.
#[derive(Debug, Clone, Copy)]
pub struct OptimizerDiagnostics {
    /// Best value on the coarse grid (or among canonical bases).
    pub grid_best: f64,
    /// Value after simplex refinement.
    pub refined_best: f64,
    pub iterations: usize,
    pub grid_doublings: u8,
    /// The X-state canonical-bases shortcut was taken.
    pub fast_path: bool,
    /// An X state's optimum beat every canonical basis; the full search ran.
    pub interior_optimum: bool,
}

/// Mutual information, classical correlations, discord, and the maximizing
/// measurement.
#[derive(Debug, Clone)]
pub struct CorrelationTriple {
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub argmax: MeasurementBasis,
    pub diagnostics: OptimizerDiagnostics,
}

fn h2_bits(x: f64) -> f64 {
    let term = |p: f64| if p < EIGEN_FLOOR { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Von Neumann entropy in bits.
pub fn entropy(rho: &DensityMatrix) -> XyResult<f64> {
    let spec = rho.spectrum()?;
    Ok(spec
        .iter()
        .map(|&p| if p < EIGEN_FLOOR { 0.0 } else { -p * p.log2() })
        .sum())
}

/// I = S(ρ_A) + S(ρ_B) − S(ρ_AB), in bits.
pub fn mutual_info(rho_ab: &DensityMatrix) -> XyResult<f64> {
    let sa = entropy(&rho_ab.partial_trace(0))?;
    let sb = entropy(&rho_ab.partial_trace(1))?;
    let sab = entropy(rho_ab)?;
    Ok(sa + sb - sab)
}

fn conditional_from_bloch(
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    t: &Matrix3<f64>,
    theta: f64,
    phi: f64,
) -> f64 {
    let n = MeasurementBasis { theta, phi }.direction();
    let bn = b.dot(&n);
    let tn = t * n;
    let mut s = 0.0;
    for sign in [1.0, -1.0] {
        let p = 0.5 * (1.0 + sign * bn);
        if p < BRANCH_FLOOR {
            continue;
        }
        let r = (a + tn * sign) / (2.0 * p);
        s += p * h2_bits(0.5 * (1.0 + r.norm().min(1.0)));
    }
    s
}

/// S(ρ_AB | {B_k}) = Σ_k p_k S(ρ^{(k)}) for the projective measurement of B
/// along `basis`.
pub fn conditional_entropy(rho_ab: &DensityMatrix, basis: &MeasurementBasis) -> f64 {
    let (a, b, t) = rho_ab.bloch_pair();
    conditional_from_bloch(&a, &b, &t, basis.theta, basis.phi)
}

/// Post-measurement joint states (p_k, ρ_AB^{(k)}). Branches with p_k below
/// the floor are omitted.
pub fn measurement_branches(
    rho_ab: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Vec<(f64, DensityMatrix)> {
    let n = basis.direction();
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        // P = ½(I + s n̂·σ) on B, embedded as I⊗P.
        let mut p = crate::density::DensityMatrix {
            mat: rho_ab.mat.clone_owned(),
            symmetry: SymmetryTag::GeneralReal,
            provenance: rho_ab.provenance,
        };
        let proj2 = {
            let z = C64::new(0.0, 0.0);
            let mut m = nalgebra::DMatrix::from_element(2, 2, z);
            m[(0, 0)] = C64::new(0.5 * (1.0 + sign * n[2]), 0.0);
            m[(1, 1)] = C64::new(0.5 * (1.0 - sign * n[2]), 0.0);
            m[(0, 1)] = C64::new(0.5 * sign * n[0], -0.5 * sign * n[1]);
            m[(1, 0)] = C64::new(0.5 * sign * n[0], 0.5 * sign * n[1]);
            m
        };
        let eye = nalgebra::DMatrix::<C64>::identity(2, 2);
        let big = eye.kronecker(&proj2);
        let sandwich = &big * &p.mat * &big;
        let tr: C64 = (0..4).map(|i| sandwich[(i, i)]).sum();
        if tr.re < BRANCH_FLOOR {
            continue;
        }
        p.mat = sandwich / tr;
        out.push((tr.re, p));
    }
    out
}

fn refine(
    a: &Vector3<f64>,
    b: &Vector3<f64>,
    t: &Matrix3<f64>,
    start: (f64, f64),
) -> ((f64, f64), f64, usize) {
    let f = |x: &[f64]| conditional_from_bloch(a, b, t, x[0], x[1]);
    let (x, fx, iters) = nelder_mead(f, &[start.0, start.1], 0.05, 1e-12, 400);
    ((x[0], x[1]), fx, iters)
}

/// C = max over projective measurements on B of S(ρ_A) − S(ρ_AB|{B_k}).
pub fn classical_corr(
    rho_ab: &DensityMatrix,
) -> XyResult<(f64, MeasurementBasis, OptimizerDiagnostics)> {
    let (a, b, t) = rho_ab.bloch_pair();
    let s_a = entropy(&rho_ab.partial_trace(0))?;
    let cond = |th: f64, ph: f64| conditional_from_bloch(&a, &b, &t, th, ph);

    let mut diag = OptimizerDiagnostics {
        grid_best: f64::INFINITY,
        refined_best: f64::INFINITY,
        iterations: 0,
        grid_doublings: 0,
        fast_path: false,
        interior_optimum: false,
    };

    // The canonical-basis shortcut is sound only when both coherences are
    // real: then the conditional entropy is symmetric in φ and its minimum
    // lies on one of the three canonical axes or is reachable by a single
    // descent from the best of them. Complex coherences rotate the optimum
    // out of that plane.
    let real_x = rho_ab.symmetry == SymmetryTag::XState
        && rho_ab.mat[(0, 3)].im.abs() < 1e-12
        && rho_ab.mat[(1, 2)].im.abs() < 1e-12;
    if real_x {
        let half_pi = std::f64::consts::FRAC_PI_2;
        let canonical = [(half_pi, 0.0), (half_pi, half_pi), (0.0, 0.0)];
        let (mut best, mut best_v) = (canonical[0], f64::INFINITY);
        for c in canonical {
            let v = cond(c.0, c.1);
            if v < best_v {
                best_v = v;
                best = c;
            }
        }
        let (angles, refined, iters) = refine(&a, &b, &t, best);
        diag.grid_best = best_v;
        diag.iterations = iters;
        if best_v - refined <= 1e-9 {
            diag.fast_path = true;
            let v = refined.min(best_v);
            diag.refined_best = v;
            let basis = MeasurementBasis { theta: angles.0, phi: angles.1 }.canonical();
            return Ok(((s_a - v).max(0.0), basis, diag));
        }
        diag.interior_optimum = true;
    }

    let (mut nt, mut np) = (64usize, 128usize);
    loop {
        let mut cells: Vec<(f64, usize, usize)> = Vec::with_capacity((nt + 1) * np);
        for i in 0..=nt {
            let th = std::f64::consts::PI * i as f64 / nt as f64;
            for j in 0..np {
                let ph = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
                cells.push((cond(th, ph), i, j));
            }
        }
        cells.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        diag.grid_best = cells[0].0;

        // Descend from the lowest grid cells that belong to distinct basins:
        // candidates closer than four cells (φ cyclic) to an already-chosen
        // start are the same basin and are skipped.
        let mut starts: Vec<(usize, usize)> = Vec::new();
        for &(_, i, j) in &cells {
            let separated = starts.iter().all(|&(si, sj)| {
                let di = si.abs_diff(i);
                let dj = sj.abs_diff(j).min(np - sj.abs_diff(j));
                di >= 4 || dj >= 4
            });
            if separated {
                starts.push((i, j));
            }
            if starts.len() == 6 {
                break;
            }
        }

        let grid_arg = (
            std::f64::consts::PI * cells[0].1 as f64 / nt as f64,
            2.0 * std::f64::consts::PI * cells[0].2 as f64 / np as f64,
        );
        let mut best_angles = grid_arg;
        let mut best_refined = f64::INFINITY;
        for (i, j) in starts {
            let start = (
                std::f64::consts::PI * i as f64 / nt as f64,
                2.0 * std::f64::consts::PI * j as f64 / np as f64,
            );
            let (angles, refined, iters) = refine(&a, &b, &t, start);
            diag.iterations += iters;
            if refined < best_refined {
                best_refined = refined;
                best_angles = angles;
            }
        }
        diag.refined_best = best_refined;

        let cell_t = std::f64::consts::PI / nt as f64;
        let cell_p = 2.0 * std::f64::consts::PI / np as f64;
        let dt = (best_angles.0 - grid_arg.0).abs();
        let mut dp = (best_angles.1 - grid_arg.1).abs() % (2.0 * std::f64::consts::PI);
        if dp > std::f64::consts::PI {
            dp = 2.0 * std::f64::consts::PI - dp;
        }
        if (dt > 2.0 * cell_t || dp > 2.0 * cell_p) && diag.grid_doublings < 3 {
            diag.grid_doublings += 1;
            nt *= 2;
            np *= 2;
            continue;
        }
        let basis = MeasurementBasis { theta: best_angles.0, phi: best_angles.1 }.canonical();
        return Ok(((s_a - best_refined.min(diag.grid_best)).max(0.0), basis, diag));
    }
}

/// Exhaustive dense-grid lower bound on C, for cross-checks of the optimizer.
pub fn classical_corr_brute(rho_ab: &DensityMatrix, nt: usize, np: usize) -> XyResult<f64> {
    let (a, b, t) = rho_ab.bloch_pair();
    let s_a = entropy(&rho_ab.partial_trace(0))?;
    let mut best = f64::INFINITY;
    for i in 0..=nt {
        let th = std::f64::consts::PI * i as f64 / nt as f64;
        for j in 0..np {
            let ph = 2.0 * std::f64::consts::PI * j as f64 / np as f64;
            let v = conditional_from_bloch(&a, &b, &t, th, ph);
            if v < best {
                best = v;
            }
        }
    }
    Ok((s_a - best).max(0.0))
}

/// Full correlation triple: I, C, and Q = I − C (clipped of −1e-9 dust).
pub fn discord(rho_ab: &DensityMatrix) -> XyResult<CorrelationTriple> {
    let i = mutual_info(rho_ab)?;
    let (c, argmax, diagnostics) = classical_corr(rho_ab)?;
    let mut q = i - c;
    if (-DISCORD_CLIP..0.0).contains(&q) {
        q = 0.0;
    }
    Ok(CorrelationTriple { mutual_info: i, classical: c, discord: q, argmax, diagnostics })
}

/// Exchange the two spins of a pair state; measuring B on the swapped state
/// probes the A-side measurement of the original.
pub fn swap_pair(rho_ab: &DensityMatrix) -> DensityMatrix {
    let perm = [0usize, 2, 1, 3];
    let mut m = rho_ab.mat.clone_owned();
    for i in 0..4 {
        for j in 0..4 {
            m[(i, j)] = rho_ab.mat[(perm[i], perm[j])];
        }
    }
    DensityMatrix { mat: m, symmetry: rho_ab.symmetry, provenance: rho_ab.provenance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlators::{CorrelatorSet, Provenance};
    use crate::density::rho_pair;

    fn set_with(f: impl FnOnce(&mut CorrelatorSet)) -> CorrelatorSet {
        let mut cs = CorrelatorSet {
            gamma: 0.7,
            h: 0.5,
            temperature: 0.0,
            r_max: 1,
            g_z: 0.0,
            g_x: 0.0,
            g_xx: vec![0.0],
            g_yy: vec![0.0],
            g_zz: vec![0.0],
            g_xz: vec![0.0],
            g_zx: vec![0.0],
            g_raw: vec![0.0; 3],
            provenance: Provenance::Ed,
        };
        f(&mut cs);
        cs
    }

    fn bell() -> DensityMatrix {
        rho_pair(
            &set_with(|cs| {
                cs.g_xx[0] = 1.0;
                cs.g_yy[0] = -1.0;
                cs.g_zz[0] = 1.0;
            }),
            1,
        )
        .unwrap()
    }

    fn classical_mixture() -> DensityMatrix {
        rho_pair(&set_with(|cs| cs.g_zz[0] = 1.0), 1).unwrap()
    }

    #[test]
    fn entropy_anchors() {
        let mixed = rho_pair(&set_with(|_| ()), 1).unwrap();
        assert!((entropy(&mixed).unwrap() - 2.0).abs() < 1e-12);
        assert!(entropy(&bell()).unwrap().abs() < 1e-12);
        let single = crate::density::rho_single(0.5, 0.0).unwrap();
        assert!((entropy(&single).unwrap() - 0.8112781244591328).abs() < 1e-12);
    }

    #[test]
    fn mutual_info_anchors() {
        // g_zz = g_z² makes the pair a product of identical single sites.
        let product = rho_pair(
            &set_with(|cs| {
                cs.g_z = 0.6;
                cs.g_zz[0] = 0.36;
            }),
            1,
        )
        .unwrap();
        assert!(mutual_info(&product).unwrap().abs() < 1e-12);
        assert!((mutual_info(&bell()).unwrap() - 2.0).abs() < 1e-12);
        assert!((mutual_info(&classical_mixture()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_entropy_anchors() {
        let mixed = rho_pair(&set_with(|_| ()), 1).unwrap();
        for (th, ph) in [(0.0, 0.0), (1.0, 2.0), (std::f64::consts::FRAC_PI_2, 0.3)] {
            let s = conditional_entropy(&mixed, &MeasurementBasis { theta: th, phi: ph });
            assert!((s - 1.0).abs() < 1e-12, "I/4 basis ({th},{ph}) gave {s}");
        }
        let z = MeasurementBasis { theta: 0.0, phi: 0.0 };
        let x = MeasurementBasis { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 };
        assert!(conditional_entropy(&bell(), &z).abs() < 1e-12);
        assert!(conditional_entropy(&classical_mixture(), &z).abs() < 1e-12);
        assert!((conditional_entropy(&classical_mixture(), &x) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn branch_sum_matches_closed_form() {
        let set = crate::fermion::correlators(&crate::model::ModelParams::bulk(0.7, 0.9, 0.0), 2)
            .unwrap();
        let rho = rho_pair(&set, 1).unwrap();
        for (th, ph) in [(0.3, 1.1), (std::f64::consts::FRAC_PI_2, 0.0), (2.2, 4.0)] {
            let basis = MeasurementBasis { theta: th, phi: ph };
            let closed = conditional_entropy(&rho, &basis);
            let explicit: f64 = measurement_branches(&rho, &basis)
                .iter()
                .map(|(p, branch)| p * entropy(branch).unwrap())
                .sum();
            assert!((closed - explicit).abs() < 1e-10, "({th},{ph}): {closed} vs {explicit}");
        }
    }

    #[test]
    fn discord_anchors() {
        let t = discord(&bell()).unwrap();
        assert!((t.mutual_info - 2.0).abs() < 1e-9);
        assert!((t.classical - 1.0).abs() < 1e-9);
        assert!((t.discord - 1.0).abs() < 1e-9);
        let t = discord(&classical_mixture()).unwrap();
        assert!(t.discord.abs() < 1e-9, "classical state has Q = {}", t.discord);
        assert!((t.classical - 1.0).abs() < 1e-9);
    }

    /// Equal mixture of two product projectors, index order 2a + b.
    fn projector_mixture(states: [[f64; 4]; 2]) -> DensityMatrix {
        let mut m = nalgebra::DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
        for amps in states {
            let norm: f64 = amps.iter().map(|x| x * x).sum();
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] += C64::new(0.5 * amps[i] * amps[j] / norm, 0.0);
                }
            }
        }
        DensityMatrix { mat: m, symmetry: SymmetryTag::GeneralReal, provenance: None }
    }

    #[test]
    fn separable_mixture_has_positive_discord() {
        // ½(|00⟩⟨00| + |++⟩⟨++|) is unentangled yet genuinely discordant
        // because neither marginal ensemble is orthogonal. Reference values
        // from a brute-force measurement sweep of this state.
        let rho = projector_mixture([[1.0, 0.0, 0.0, 0.0], [0.5, 0.5, 0.5, 0.5]]);
        rho.validate().unwrap();
        let t = discord(&rho).unwrap();
        assert!((t.mutual_info - 0.390473948926579).abs() < 1e-9);
        assert!((t.classical - 0.246297134027586).abs() < 1e-7);
        assert!((t.discord - 0.144176814898993).abs() < 1e-7);
    }

    #[test]
    fn orthogonal_ensembles_have_no_discord() {
        // ½(|0+⟩⟨0+| + |1−⟩⟨1−|): both marginal ensembles are orthogonal,
        // which makes the state classical on each side, so Q = 0 exactly
        // even though the two product states are correlated.
        let rho = projector_mixture([[0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, -0.5]]);
        rho.validate().unwrap();
        let t = discord(&rho).unwrap();
        assert!((t.mutual_info - 1.0).abs() < 1e-9);
        assert!((t.classical - 1.0).abs() < 1e-7);
        assert!(t.discord.abs() < 1e-7, "classical-classical state, got Q = {}", t.discord);
    }

    #[test]
    fn optimizer_matches_brute_force_on_chain_state() {
        let set = crate::fermion::correlators(&crate::model::ModelParams::bulk(0.7, 0.5, 0.0), 1)
            .unwrap();
        let rho = rho_pair(&set, 1).unwrap();
        let (c, _, diag) = classical_corr(&rho).unwrap();
        let brute = classical_corr_brute(&rho, 128, 256).unwrap();
        assert!(c >= brute - 1e-7, "optimizer {c} below brute-force {brute}");
        assert!(diag.fast_path, "chain X state should take the fast path");
    }

    #[test]
    fn pure_state_discord_is_entanglement_entropy() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let amps: Vec<C64> = (0..4)
                .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
            let mut m = nalgebra::DMatrix::from_element(4, 4, C64::new(0.0, 0.0));
            for i in 0..4 {
                for j in 0..4 {
                    m[(i, j)] = amps[i] * amps[j].conj() / norm;
                }
            }
            let rho = DensityMatrix {
                mat: m,
                symmetry: SymmetryTag::GeneralReal,
                provenance: None,
            };
            let t = discord(&rho).unwrap();
            let s_a = entropy(&rho.partial_trace(0)).unwrap();
            assert!(
                (t.discord - s_a).abs() < 1e-7,
                "pure state: Q = {} vs entanglement {s_a}",
                t.discord
            );
        }
    }

    #[test]
    fn swap_probes_the_other_side() {
        let rho = bell();
        let swapped = swap_pair(&rho);
        let (c1, _, _) = classical_corr(&rho).unwrap();
        let (c2, _, _) = classical_corr(&swapped).unwrap();
        assert!((c1 - c2).abs() < 1e-9);
    }
}
