//! One- and two-point spin correlators at a parameter point.

/// Which backend produced a [`CorrelatorSet`] (or a density matrix built
/// from one).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    BulkQuadrature,
    FiniteLSum,
    Ed,
}

/// All one- and two-point functions needed to assemble one- and two-spin
/// density matrices.
///
/// Distances are 1-based: `g_xx[r - 1]` holds ⟨σx_i σx_{i+r}⟩ and so on.
/// `g_raw` stores the fermionic correlator G(n) for n = −r_max..r_max on the
/// analytic paths (index n + r_max); the ED backend leaves it empty.
/// Symmetric-sector sets have `g_x = g_xz = g_zx = 0` identically; the
/// symmetry-broken ED path fills them in.
#[derive(Debug, Clone)]
pub struct CorrelatorSet {
    pub gamma: f64,
    pub h: f64,
    pub temperature: f64,
    pub r_max: usize,
    pub g_z: f64,
    pub g_x: f64,
    pub g_xx: Vec<f64>,
    pub g_yy: Vec<f64>,
    pub g_zz: Vec<f64>,
    pub g_xz: Vec<f64>,
    pub g_zx: Vec<f64>,
    pub g_raw: Vec<f64>,
    pub provenance: Provenance,
}

impl CorrelatorSet {
    /// Raw fermionic correlator G(n), n ∈ [−r_max, r_max]. Analytic paths only.
    pub fn g(&self, n: i64) -> f64 {
        let idx = n + self.r_max as i64;
        assert!(
            (0..self.g_raw.len() as i64).contains(&idx),
            "G({n}) outside stored range ±{}",
            self.r_max
        );
        self.g_raw[idx as usize]
    }

    /// True when the set carries no symmetry-breaking terms, i.e. the pair
    /// state is an X state in the σz product basis.
    pub fn is_symmetric(&self) -> bool {
        let tol = 1e-12;
        self.g_x.abs() < tol
            && self.g_xz.iter().all(|v| v.abs() < tol)
            && self.g_zx.iter().all(|v| v.abs() < tol)
    }

    /// Largest magnitude over every stored entry; the model constrains all
    /// correlators to [−1, 1] up to roundoff.
    pub fn max_abs_entry(&self) -> f64 {
        let mut m = self.g_z.abs().max(self.g_x.abs());
        for v in [&self.g_xx, &self.g_yy, &self.g_zz, &self.g_xz, &self.g_zx, &self.g_raw] {
            for x in v {
                m = m.max(x.abs());
            }
        }
        m
    }
}
