//! Exact diagonalization on up to 20 sites.
//!
//! Serves two roles: brute-force oracle for every other backend, and the
//! only source of symmetry-broken correlators (g_x, g_xz, g_zx), obtained
//! under a small longitudinal field h_x. With h_x = 0 the Hamiltonian
//! preserves fermion parity bit-exactly, so sector-resolved ground states
//! come from parity-projected start vectors alone.

pub mod hamiltonian;
pub mod lanczos;
pub mod thermal;

pub use hamiltonian::{parity_of, Boundary, HApply};
pub use lanczos::{lowest_eigenpair, LanczosOptions};
pub use thermal::{thermal_state, ThermalState};

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::correlators::{CorrelatorSet, Provenance};
use crate::density::{DensityMatrix, SymmetryTag, C64};
use crate::error::{XyError, XyResult};
use crate::fermion::{sector_energies, Sector};
use crate::model::factorized_magnetizations;

/// Relative sector-energy difference below which the two parities count as
/// one degenerate ground space.
const SECTOR_DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct EdConfig {
    pub l: usize,
    pub boundary: Boundary,
    pub gamma: f64,
    pub h: f64,
    /// Longitudinal symmetry-breaking field; 0 keeps parity exact.
    pub h_x: f64,
    pub lanczos_tol: f64,
    pub seed: u64,
}

impl EdConfig {
    pub fn new(l: usize, gamma: f64, h: f64) -> Self {
        Self {
            l,
            boundary: Boundary::Periodic,
            gamma,
            h,
            h_x: 0.0,
            lanczos_tol: 1e-12,
            seed: 7,
        }
    }

    pub fn with_hx(mut self, h_x: f64) -> Self {
        self.h_x = h_x;
        self
    }

    pub fn open(mut self) -> Self {
        self.boundary = Boundary::Open;
        self
    }

    pub fn validate(&self) -> XyResult<()> {
        if self.l > 20 {
            return Err(XyError::DimensionTooLarge(format!(
                "ED supports L <= 20, got {}",
                self.l
            )));
        }
        if self.l < 2 {
            return Err(XyError::InvalidParams("ED needs L >= 2".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(XyError::InvalidParams(format!("gamma {} outside (0,1]", self.gamma)));
        }
        if self.h_x < 0.0 {
            return Err(XyError::InvalidParams(format!("h_x must be >= 0, got {}", self.h_x)));
        }
        if !(self.lanczos_tol > 0.0) {
            return Err(XyError::InvalidParams("lanczos_tol must be positive".into()));
        }
        Ok(())
    }

    fn operator(&self) -> HApply {
        HApply::new(self.l, self.boundary, self.gamma, self.h, self.h_x)
    }
}

/// Converged eigenpair plus sector metadata.
#[derive(Debug, Clone)]
pub struct EdState {
    pub cfg: EdConfig,
    pub energy: f64,
    pub psi: Vec<f64>,
    /// Parity sector of the state; `None` when h_x > 0 mixes the sectors.
    pub sector: Option<Sector>,
    /// Both sector minima coincide within tolerance (h_x = 0 only).
    pub degenerate: bool,
}

/// Longitudinal field strong enough to hold the broken state against the
/// parity tunneling splitting: h_x·L·g_x = 10³ × (sector gap), floored at
/// 1e-6. Meaningful in the near-degenerate ordered regime around the
/// factorization field; away from degeneracy pass an explicit h_x instead.
pub fn adaptive_hx(gamma: f64, h: f64, l: usize) -> f64 {
    let (e, o) = sector_energies(gamma, h, l);
    let gap = (e - o).abs();
    let gx = factorized_magnetizations(gamma).0;
    (1e3 * gap / (l as f64 * gx)).max(1e-6)
}

/// Site-wise product trial state tilted into +x, with a dash of seeded noise
/// so that every parity sector is populated.
fn product_start(cfg: &EdConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let dim = 1usize << cfg.l;
    let chi = if cfg.h < 1.0 {
        factorized_magnetizations(cfg.gamma).1.clamp(-1.0, 1.0).acos()
    } else {
        0.3 / cfg.h
    };
    let (c, s) = ((0.5 * chi).cos(), (0.5 * chi).sin());
    let mut v = Vec::with_capacity(dim);
    for i in 0..dim {
        let pop = (i as u64).count_ones() as i32;
        v.push(c.powi(cfg.l as i32 - pop) * s.powi(pop));
    }
    let eta = 1e-2;
    for x in v.iter_mut() {
        *x += eta * (rng.random::<f64>() - 0.5);
    }
    v
}

fn keep_parity(v: &mut [f64], sector: Sector) {
    let want = match sector {
        Sector::Even => 1.0,
        Sector::Odd => -1.0,
    };
    for (i, x) in v.iter_mut().enumerate() {
        if parity_of(i) != want {
            *x = 0.0;
        }
    }
}

fn run_lanczos(cfg: &EdConfig, start: &[f64]) -> XyResult<(f64, Vec<f64>)> {
    let op = cfg.operator();
    let opts = LanczosOptions {
        tol: cfg.lanczos_tol,
        max_basis: 64.min(op.dim),
        keep: 8,
        max_restarts: 400,
    };
    lowest_eigenpair(|x, out| op.apply(x, out), op.dim, start, &opts)
}

/// Ground state of the configured chain.
///
/// With h_x > 0 a single run over the full space; the −h_x Σσx term selects
/// ⟨σx⟩ ≥ 0. With h_x = 0 both parity sectors are solved from projected
/// start vectors and the lower one returned; ties go to the even sector with
/// the degeneracy flagged.
pub fn ground_state(cfg: &EdConfig) -> XyResult<EdState> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    if cfg.h_x > 0.0 {
        let start = product_start(cfg, &mut rng);
        let (energy, psi) = run_lanczos(cfg, &start)?;
        return Ok(EdState { cfg: *cfg, energy, psi, sector: None, degenerate: false });
    }
    let mut even = product_start(cfg, &mut rng);
    keep_parity(&mut even, Sector::Even);
    let mut odd = product_start(cfg, &mut rng);
    keep_parity(&mut odd, Sector::Odd);
    let (ee, pe) = run_lanczos(cfg, &even)?;
    let (eo, po) = run_lanczos(cfg, &odd)?;
    let scale = ee.abs().max(eo.abs()).max(1.0);
    let degenerate = (ee - eo).abs() < SECTOR_DEGENERACY_TOL * scale;
    let (energy, psi, sector) = if degenerate || ee <= eo {
        (ee, pe, Sector::Even)
    } else {
        (eo, po, Sector::Odd)
    };
    Ok(EdState { cfg: *cfg, energy, psi, sector: Some(sector), degenerate })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

/// ⟨ψ| P_a(site_a) P_b(site_b) |ψ⟩ for a real statevector, bitwise.
///
/// Convention: bit 0 means spin up, Y|0⟩ = i|1⟩. Single-site expectations
/// use `Pauli::I` on the other slot (sites may coincide then).
pub fn expect_pair(
    psi: &[f64],
    site_a: usize,
    op_a: Pauli,
    site_b: usize,
    op_b: Pauli,
) -> f64 {
    let mut total = Complex::new(0.0, 0.0);
    for (i, &amp) in psi.iter().enumerate() {
        if amp == 0.0 {
            continue;
        }
        let mut tgt = i;
        let mut phase = Complex::new(1.0, 0.0);
        for (site, op) in [(site_a, op_a), (site_b, op_b)] {
            let s = 1.0 - 2.0 * ((i >> site) & 1) as f64;
            match op {
                Pauli::I => {}
                Pauli::Z => phase *= s,
                Pauli::X => tgt ^= 1 << site,
                Pauli::Y => {
                    tgt ^= 1 << site;
                    phase *= Complex::new(0.0, s);
                }
            }
        }
        total += psi[tgt] * phase * amp;
    }
    total.re
}

/// Full correlator set from an ED eigenstate.
///
/// Periodic chains are site-averaged (translation invariance); open chains
/// use the centered pair (⌊(L−r)/2⌋, +r) and the mean of that pair's
/// single-site magnetizations, so edge effects cancel to leading order.
pub fn correlators_ed(state: &EdState, r_max: usize) -> XyResult<CorrelatorSet> {
    let l = state.cfg.l;
    let periodic = state.cfg.boundary == Boundary::Periodic;
    let limit = if periodic { l / 2 } else { l - 1 };
    if r_max == 0 || r_max > limit {
        return Err(XyError::InvalidParams(format!(
            "r_max {r_max} outside 1..={limit} for L={l} ({:?})",
            state.cfg.boundary
        )));
    }
    let psi = &state.psi;
    let pair_sites = |r: usize| -> Vec<(usize, usize)> {
        if periodic {
            (0..l).map(|j| (j, (j + r) % l)).collect()
        } else {
            let j = (l - r) / 2;
            vec![(j, j + r)]
        }
    };
    let avg_pair = |r: usize, a: Pauli, b: Pauli| -> f64 {
        let sites = pair_sites(r);
        sites.iter().map(|&(j, k)| expect_pair(psi, j, a, k, b)).sum::<f64>() / sites.len() as f64
    };
    let single_sites: Vec<usize> = if periodic {
        (0..l).collect()
    } else {
        let j = (l - 1) / 2;
        vec![j, j + 1]
    };
    let avg_single = |op: Pauli| -> f64 {
        single_sites.iter().map(|&j| expect_pair(psi, j, op, j, Pauli::I)).sum::<f64>()
            / single_sites.len() as f64
    };
    let g_x = avg_single(Pauli::X);
    let g_z = avg_single(Pauli::Z);
    let mut g_xx = Vec::with_capacity(r_max);
    let mut g_yy = Vec::with_capacity(r_max);
    let mut g_zz = Vec::with_capacity(r_max);
    let mut g_xz = Vec::with_capacity(r_max);
    let mut g_zx = Vec::with_capacity(r_max);
    for r in 1..=r_max {
        g_xx.push(avg_pair(r, Pauli::X, Pauli::X));
        g_yy.push(avg_pair(r, Pauli::Y, Pauli::Y));
        g_zz.push(avg_pair(r, Pauli::Z, Pauli::Z));
        g_xz.push(avg_pair(r, Pauli::X, Pauli::Z));
        g_zx.push(avg_pair(r, Pauli::Z, Pauli::X));
    }
    Ok(CorrelatorSet {
        gamma: state.cfg.gamma,
        h: state.cfg.h,
        temperature: 0.0,
        r_max,
        g_z,
        g_x,
        g_xx,
        g_yy,
        g_zz,
        g_xz,
        g_zx,
        g_raw: Vec::new(),
        provenance: Provenance::Ed,
    })
}

pub(crate) fn tag_from_entries(m: &nalgebra::DMatrix<C64>) -> SymmetryTag {
    if m.nrows() == 4 {
        let x_pattern = [(0usize, 1usize), (0, 2), (1, 3), (2, 3)]
            .iter()
            .all(|&(i, j)| m[(i, j)].norm() < 1e-12);
        if x_pattern {
            return SymmetryTag::XState;
        }
    } else if m[(0, 1)].norm() < 1e-12 {
        return SymmetryTag::XState;
    }
    SymmetryTag::GeneralReal
}

pub(crate) fn reduce_statevector(
    psi: &[f64],
    weight: f64,
    sites: &[usize],
    acc: &mut nalgebra::DMatrix<C64>,
) {
    match sites {
        [j] => {
            for (i, &amp) in psi.iter().enumerate() {
                let a = (i >> j) & 1;
                for ap in 0..2usize {
                    let i2 = (i & !(1 << j)) | (ap << j);
                    acc[(a, ap)] += C64::new(weight * amp * psi[i2], 0.0);
                }
            }
        }
        [j, k] => {
            for (i, &amp) in psi.iter().enumerate() {
                let a = (i >> j) & 1;
                let b = (i >> k) & 1;
                let base = i & !(1 << j) & !(1 << k);
                for ap in 0..2usize {
                    for bp in 0..2usize {
                        let i2 = base | (ap << j) | (bp << k);
                        acc[(2 * a + b, 2 * ap + bp)] += C64::new(weight * amp * psi[i2], 0.0);
                    }
                }
            }
        }
        _ => unreachable!("validated to one or two sites"),
    }
}

/// Reduced density matrix of one or two sites, traced directly from the
/// statevector. Site order fixes the tensor slots: `sites[0]` is spin A.
pub fn reduced_density(state: &EdState, sites: &[usize]) -> XyResult<DensityMatrix> {
    if sites.is_empty() || sites.len() > 2 {
        return Err(XyError::InvalidParams("reduce to one or two sites".into()));
    }
    if sites.iter().any(|&s| s >= state.cfg.l) || (sites.len() == 2 && sites[0] == sites[1]) {
        return Err(XyError::InvalidParams(format!("bad site list {sites:?}")));
    }
    let d = 1 << sites.len();
    let mut m = nalgebra::DMatrix::from_element(d, d, C64::new(0.0, 0.0));
    reduce_statevector(&state.psi, 1.0, sites, &mut m);
    Ok(DensityMatrix { symmetry: tag_from_entries(&m), mat: m, provenance: Some(Provenance::Ed) })
}
