//! Dense finite-temperature diagonalization for short chains.
//!
//! The full spectrum is affordable up to L = 10 (1024×1024); beyond that the
//! free-fermion thermal backend takes over. Boltzmann weights are formed
//! relative to the ground energy so that β up to ~1e6 stays finite.

use nalgebra::DMatrix;

use crate::correlators::{CorrelatorSet, Provenance};
use crate::density::{DensityMatrix, C64};
use crate::ed::{expect_pair, reduce_statevector, EdConfig, Pauli};
use crate::error::{XyError, XyResult};

/// Weights below this fraction of the total are dropped from traces.
const WEIGHT_FLOOR: f64 = 1e-15;

pub struct ThermalState {
    pub cfg: EdConfig,
    pub temperature: f64,
    evals: Vec<f64>,
    evecs: DMatrix<f64>,
    /// Normalized Boltzmann weights aligned with `evals`.
    weights: Vec<f64>,
}

pub fn thermal_state(cfg: &EdConfig, temperature: f64) -> XyResult<ThermalState> {
    cfg.validate()?;
    if cfg.l > 10 {
        return Err(XyError::DimensionTooLarge(format!(
            "dense thermal ED supports L <= 10, got {}",
            cfg.l
        )));
    }
    if !(temperature > 0.0) {
        return Err(XyError::InvalidParams(format!(
            "thermal state needs T > 0, got {temperature}"
        )));
    }
    let op = cfg.operator();
    let dense = op.dense();
    let eig = dense.symmetric_eigen();
    let evals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let e0 = evals.iter().cloned().fold(f64::INFINITY, f64::min);
    let beta = 1.0 / temperature;
    let mut weights: Vec<f64> = evals.iter().map(|&e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= z;
    }
    Ok(ThermalState { cfg: *cfg, temperature, evals, evecs: eig.eigenvectors, weights })
}

impl ThermalState {
    pub fn free_energy(&self) -> f64 {
        let e0 = self.evals.iter().cloned().fold(f64::INFINITY, f64::min);
        let beta = 1.0 / self.temperature;
        let z: f64 = self.evals.iter().map(|&e| (-beta * (e - e0)).exp()).sum();
        e0 - self.temperature * z.ln()
    }

    fn significant(&self) -> impl Iterator<Item = (f64, Vec<f64>)> + '_ {
        self.weights.iter().enumerate().filter_map(move |(n, &w)| {
            if w < WEIGHT_FLOOR {
                None
            } else {
                Some((w, self.evecs.column(n).iter().copied().collect()))
            }
        })
    }

    /// Thermal reduced density matrix of one or two sites.
    pub fn reduced_density(&self, sites: &[usize]) -> XyResult<DensityMatrix> {
        if sites.is_empty() || sites.len() > 2 {
            return Err(XyError::InvalidParams("reduce to one or two sites".into()));
        }
        if sites.iter().any(|&s| s >= self.cfg.l) || (sites.len() == 2 && sites[0] == sites[1]) {
            return Err(XyError::InvalidParams(format!("bad site list {sites:?}")));
        }
        let d = 1 << sites.len();
        let mut m = DMatrix::from_element(d, d, C64::new(0.0, 0.0));
        for (w, psi) in self.significant() {
            reduce_statevector(&psi, w, sites, &mut m);
        }
        Ok(DensityMatrix {
            symmetry: super::tag_from_entries(&m),
            mat: m,
            provenance: Some(Provenance::Ed),
        })
    }

    /// Site-averaged thermal correlator set (periodic chains).
    pub fn correlators(&self, r_max: usize) -> XyResult<CorrelatorSet> {
        let l = self.cfg.l;
        if r_max == 0 || r_max > l / 2 {
            return Err(XyError::InvalidParams(format!(
                "r_max {r_max} outside 1..={} for L={l}",
                l / 2
            )));
        }
        let mut g_x = 0.0;
        let mut g_z = 0.0;
        let mut g_xx = vec![0.0; r_max];
        let mut g_yy = vec![0.0; r_max];
        let mut g_zz = vec![0.0; r_max];
        let mut g_xz = vec![0.0; r_max];
        let mut g_zx = vec![0.0; r_max];
        for (w, psi) in self.significant() {
            let avg_pair = |r: usize, a: Pauli, b: Pauli| -> f64 {
                (0..l).map(|j| expect_pair(&psi, j, a, (j + r) % l, b)).sum::<f64>() / l as f64
            };
            let avg_single = |op: Pauli| -> f64 {
                (0..l).map(|j| expect_pair(&psi, j, op, j, Pauli::I)).sum::<f64>() / l as f64
            };
            g_x += w * avg_single(Pauli::X);
            g_z += w * avg_single(Pauli::Z);
            for r in 1..=r_max {
                g_xx[r - 1] += w * avg_pair(r, Pauli::X, Pauli::X);
                g_yy[r - 1] += w * avg_pair(r, Pauli::Y, Pauli::Y);
                g_zz[r - 1] += w * avg_pair(r, Pauli::Z, Pauli::Z);
                g_xz[r - 1] += w * avg_pair(r, Pauli::X, Pauli::Z);
                g_zx[r - 1] += w * avg_pair(r, Pauli::Z, Pauli::X);
            }
        }
        Ok(CorrelatorSet {
            gamma: self.cfg.gamma,
            h: self.cfg.h,
            temperature: self.temperature,
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
}
