//! Model parameters of the transverse-field XY chain.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = − Σ_j [ (1+γ)/2 σx_j σx_{j+1} + (1−γ)/2 σy_j σy_{j+1} ]
//!     − h Σ_j σz_j  − h_x Σ_j σx_j
//! ```
//!
//! with anisotropy γ ∈ (0, 1], transverse field h, and an optional
//! symmetry-breaking longitudinal field h_x that only the ED backend supports.
//! Energies and temperatures are measured in units of the exchange coupling.

use crate::error::{XyError, XyResult};

/// System size: an explicit even chain length, or the thermodynamic limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainLength {
    Bulk,
    Finite(usize),
}

impl ChainLength {
    pub fn is_bulk(self) -> bool {
        matches!(self, ChainLength::Bulk)
    }

    /// The finite length, if any.
    pub fn finite(self) -> Option<usize> {
        match self {
            ChainLength::Bulk => None,
            ChainLength::Finite(l) => Some(l),
        }
    }
}

/// Parameter point at which correlators are evaluated.
///
/// `temperature = 0` selects the ground state; at finite length the ground
/// state lives in the fermion-parity sector found by
/// [`crate::fermion::ground_sector`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub h: f64,
    pub temperature: f64,
    pub length: ChainLength,
}

impl ModelParams {
    /// Bulk (thermodynamic-limit) parameter point.
    pub fn bulk(gamma: f64, h: f64, temperature: f64) -> Self {
        Self { gamma, h, temperature, length: ChainLength::Bulk }
    }

    /// Finite periodic chain of `l` sites.
    pub fn finite(gamma: f64, h: f64, temperature: f64, l: usize) -> Self {
        Self { gamma, h, temperature, length: ChainLength::Finite(l) }
    }

    pub fn beta(&self) -> f64 {
        1.0 / self.temperature
    }

    pub fn validate(&self) -> XyResult<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(XyError::InvalidParams(format!(
                "gamma must be in (0, 1], got {}",
                self.gamma
            )));
        }
        if !self.h.is_finite() {
            return Err(XyError::InvalidParams(format!("h must be finite, got {}", self.h)));
        }
        if !(self.temperature >= 0.0) {
            return Err(XyError::InvalidParams(format!(
                "temperature must be >= 0, got {}",
                self.temperature
            )));
        }
        if let ChainLength::Finite(l) = self.length {
            if l < 4 || l % 2 != 0 {
                return Err(XyError::InvalidParams(format!(
                    "finite length must be even and >= 4, got {l}"
                )));
            }
        }
        Ok(())
    }
}

/// Field on the factorization line h² + γ² = 1, where the symmetry-broken
/// ground state is an exact site-wise product.
pub fn factorizing_field(gamma: f64) -> f64 {
    (1.0 - gamma * gamma).max(0.0).sqrt()
}

/// Single-site magnetizations of the factorized product state,
/// `(g_x, g_z) = (√(2γ/(1+γ)), √((1−γ)/(1+γ)))`, with the +x branch selected.
pub fn factorized_magnetizations(gamma: f64) -> (f64, f64) {
    let gx = (2.0 * gamma / (1.0 + gamma)).sqrt();
    let gz = ((1.0 - gamma) / (1.0 + gamma)).sqrt();
    (gx, gz)
}
