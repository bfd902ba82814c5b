//! Single-site and two-site density matrices from correlators.
//!
//! The pair state at distance r is
//!
//! ```text
//! ρ = ¼[ I⊗I + g_x(σx⊗I + I⊗σx) + g_z(σz⊗I + I⊗σz)
//!        + Σ_α g_αα(r) σα⊗σα + g_xz(r) σx⊗σz + g_zx(r) σz⊗σx ]
//! ```
//!
//! in the σz product basis |ab⟩ with index 2a + b and bit 0 meaning spin up.
//! Symmetric-sector input (g_x = g_xz = g_zx = 0) yields the X zero pattern;
//! the symmetry-broken sector fills the remaining real entries. ⟨σy⟩ and the
//! mixed y terms vanish by reality of the states this model produces.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex;

use crate::correlators::{CorrelatorSet, Provenance};
use crate::error::{XyError, XyResult};

pub type C64 = Complex<f64>;

/// Entries smaller than this count as an exact symmetry zero.
const SYMMETRY_TOL: f64 = 1e-12;
/// Eigenvalues in (−CLIP_TOL, 0) are floating-point noise: clipped to zero
/// and the trace renormalized. Anything at or below −CLIP_TOL is treated as
/// inconsistent input, not repaired.
const CLIP_TOL: f64 = 1e-8;

/// Structural tag of a density matrix in the σz product basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryTag {
    /// Only the two diagonals are populated (Z2-symmetric states).
    XState,
    /// Any real matrix; produced by symmetry-broken input.
    GeneralReal,
}

/// Hermitian, unit-trace, positive-semidefinite state of one or two spins.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    pub mat: DMatrix<C64>,
    pub symmetry: SymmetryTag,
    pub provenance: Option<Provenance>,
}

fn sigma(axis: usize) -> DMatrix<C64> {
    let z = C64::new(0.0, 0.0);
    let o = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match axis {
        0 => DMatrix::from_row_slice(2, 2, &[o, z, z, o]),
        1 => DMatrix::from_row_slice(2, 2, &[z, o, o, z]),
        2 => DMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        3 => DMatrix::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => unreachable!("pauli axis 0..=3"),
    }
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Real eigenvalues sorted ascending, with negative floating-point dust
    /// clipped to zero and the spectrum renormalized to unit sum.
    pub fn spectrum(&self) -> XyResult<Vec<f64>> {
        let eig = self.mat.clone().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if vals[0] <= -CLIP_TOL {
            return Err(XyError::NotPositive(format!(
                "eigenvalue {} below -{CLIP_TOL}",
                vals[0]
            )));
        }
        for v in &mut vals {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let s: f64 = vals.iter().sum();
        for v in &mut vals {
            *v /= s;
        }
        Ok(vals)
    }

    /// Hermiticity, unit trace, positivity, and tag/zero-pattern agreement.
    pub fn validate(&self) -> XyResult<()> {
        let n = self.dim();
        let tr: C64 = (0..n).map(|i| self.mat[(i, i)]).sum();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(XyError::InvalidParams(format!("trace {} != 1", tr)));
        }
        for i in 0..n {
            for j in 0..n {
                let d = self.mat[(i, j)] - self.mat[(j, i)].conj();
                if d.norm() > 1e-12 {
                    return Err(XyError::InvalidParams(format!(
                        "not Hermitian at ({i},{j}): {d}"
                    )));
                }
            }
        }
        if self.symmetry == SymmetryTag::XState && n == 4 {
            for (i, j) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
                if self.mat[(i, j)].norm() > SYMMETRY_TOL {
                    return Err(XyError::InvalidParams(format!(
                        "X-state tag but entry ({i},{j}) = {}",
                        self.mat[(i, j)]
                    )));
                }
            }
        }
        self.spectrum().map(|_| ())
    }

    /// Trace out one spin of a pair; `keep` = 0 keeps the first (A), 1 the
    /// second (B).
    pub fn partial_trace(&self, keep: usize) -> DensityMatrix {
        assert_eq!(self.dim(), 4, "partial trace needs a two-spin state");
        let mut m = DMatrix::from_element(2, 2, C64::new(0.0, 0.0));
        for a in 0..2 {
            for b in 0..2 {
                for s in 0..2 {
                    let (i, j) = if keep == 0 {
                        (2 * a + s, 2 * b + s)
                    } else {
                        (2 * s + a, 2 * s + b)
                    };
                    m[(a, b)] += self.mat[(i, j)];
                }
            }
        }
        DensityMatrix { mat: m, symmetry: self.symmetry, provenance: self.provenance }
    }

    /// Bloch decomposition (a, b, T) of a pair state: a_i = ⟨σi⊗I⟩,
    /// b_i = ⟨I⊗σi⟩, T_ij = ⟨σi⊗σj⟩.
    pub fn bloch_pair(&self) -> (Vector3<f64>, Vector3<f64>, Matrix3<f64>) {
        assert_eq!(self.dim(), 4);
        let tr = |op: &DMatrix<C64>| -> f64 {
            let mut t = C64::new(0.0, 0.0);
            for i in 0..4 {
                for j in 0..4 {
                    t += self.mat[(i, j)] * op[(j, i)];
                }
            }
            t.re
        };
        let mut a = Vector3::zeros();
        let mut b = Vector3::zeros();
        let mut t = Matrix3::zeros();
        for i in 0..3 {
            a[i] = tr(&sigma(i + 1).kronecker(&sigma(0)));
            b[i] = tr(&sigma(0).kronecker(&sigma(i + 1)));
            for j in 0..3 {
                t[(i, j)] = tr(&sigma(i + 1).kronecker(&sigma(j + 1)));
            }
        }
        (a, b, t)
    }
}

/// ½(I + g_x σx + g_z σz). Bloch vectors marginally outside the unit ball
/// (within 1e-8) are rescaled onto it; larger violations are an error.
pub fn rho_single(g_z: f64, g_x: f64) -> XyResult<DensityMatrix> {
    let n2 = g_z * g_z + g_x * g_x;
    if n2 > 1.0 + CLIP_TOL {
        return Err(XyError::BlochViolation(format!(
            "|r|^2 = {n2} for (g_z, g_x) = ({g_z}, {g_x})"
        )));
    }
    let scale = if n2 > 1.0 { 1.0 / n2.sqrt() } else { 1.0 };
    let (gz, gx) = (g_z * scale, g_x * scale);
    let mut m = sigma(0);
    m += sigma(1) * C64::new(gx, 0.0);
    m += sigma(3) * C64::new(gz, 0.0);
    m *= C64::new(0.5, 0.0);
    let symmetry = if gx.abs() < SYMMETRY_TOL { SymmetryTag::XState } else { SymmetryTag::GeneralReal };
    Ok(DensityMatrix { mat: m, symmetry, provenance: None })
}

/// Two-spin state at distance `r` (1-based) from a correlator set.
pub fn rho_pair(cs: &CorrelatorSet, r: usize) -> XyResult<DensityMatrix> {
    if r == 0 || r > cs.r_max {
        return Err(XyError::InvalidParams(format!(
            "r = {r} outside 1..={}",
            cs.r_max
        )));
    }
    let i = r - 1;
    let mut m = sigma(0).kronecker(&sigma(0));
    let mut add = |op1: usize, op2: usize, c: f64| {
        if c != 0.0 {
            m += sigma(op1).kronecker(&sigma(op2)) * C64::new(c, 0.0);
        }
    };
    add(1, 0, cs.g_x);
    add(0, 1, cs.g_x);
    add(3, 0, cs.g_z);
    add(0, 3, cs.g_z);
    add(1, 1, cs.g_xx[i]);
    add(2, 2, cs.g_yy[i]);
    add(3, 3, cs.g_zz[i]);
    add(1, 3, cs.g_xz[i]);
    add(3, 1, cs.g_zx[i]);
    m *= C64::new(0.25, 0.0);
    let symmetric = cs.g_x.abs() < SYMMETRY_TOL
        && cs.g_xz[i].abs() < SYMMETRY_TOL
        && cs.g_zx[i].abs() < SYMMETRY_TOL;
    let rho = DensityMatrix {
        mat: m,
        symmetry: if symmetric { SymmetryTag::XState } else { SymmetryTag::GeneralReal },
        provenance: Some(cs.provenance),
    };
    rho.spectrum()?;
    Ok(rho)
}
