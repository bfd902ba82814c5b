//! Matrix-free application of the spin Hamiltonian to z-basis statevectors.
//!
//! Basis index bit j holds site j's spin with 0 = up (σz = +1), so σz is
//! diagonal, the XY bond term couples index pairs differing in two bits, and
//! the longitudinal field couples single-bit flips:
//!
//! ```text
//! ⟨i⊕(1<<j)⊕(1<<l)| H_bond |i⟩ = −(J₊ − J₋ s_j s_l),  J_± = (1±γ)/2
//! ```
//!
//! with s = ±1 the σz values in |i⟩. All couplings are real.

use nalgebra::DMatrix;

/// One side of the chain's boundary conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

/// Matrix-free H for `apply`; owns only scalars, so it is cheap to build.
pub struct HApply {
    pub l: usize,
    pub dim: usize,
    pub boundary: Boundary,
    jp: f64,
    jm: f64,
    h: f64,
    hx: f64,
}

#[inline]
fn zbit(i: usize, j: usize) -> f64 {
    1.0 - 2.0 * ((i >> j) & 1) as f64
}

impl HApply {
    pub fn new(l: usize, boundary: Boundary, gamma: f64, h: f64, hx: f64) -> Self {
        Self {
            l,
            dim: 1 << l,
            boundary,
            jp: 0.5 * (1.0 + gamma),
            jm: 0.5 * (1.0 - gamma),
            h,
            hx,
        }
    }

    fn bonds(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.l,
            Boundary::Open => self.l - 1,
        }
    }

    /// out = H ψ. `out` is overwritten.
    pub fn apply(&self, psi: &[f64], out: &mut [f64]) {
        debug_assert_eq!(psi.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            *o = -self.h * (self.l as f64 - 2.0 * (i as u64).count_ones() as f64) * psi[i];
        }
        for j in 0..self.bonds() {
            let l2 = (j + 1) % self.l;
            let mask = (1usize << j) | (1usize << l2);
            for i in 0..self.dim {
                let coef = -(self.jp - self.jm * zbit(i, j) * zbit(i, l2));
                out[i ^ mask] += coef * psi[i];
            }
        }
        if self.hx != 0.0 {
            for j in 0..self.l {
                let mask = 1usize << j;
                for i in 0..self.dim {
                    out[i ^ mask] += -self.hx * psi[i];
                }
            }
        }
    }

    /// ⟨ψ|H|ψ⟩ without keeping the intermediate vector.
    pub fn expectation(&self, psi: &[f64]) -> f64 {
        let mut out = vec![0.0; self.dim];
        self.apply(psi, &mut out);
        psi.iter().zip(&out).map(|(a, b)| a * b).sum()
    }

    /// Dense matrix, column by column; only sensible at small dimension.
    pub fn dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        let mut unit = vec![0.0; self.dim];
        let mut col = vec![0.0; self.dim];
        for j in 0..self.dim {
            unit[j] = 1.0;
            self.apply(&unit, &mut col);
            unit[j] = 0.0;
            for i in 0..self.dim {
                m[(i, j)] = col[i];
            }
        }
        m
    }
}

/// Fermion-parity eigenvalue of basis state `i`: (−1)^(number of down spins).
#[inline]
pub fn parity_of(i: usize) -> f64 {
    if (i as u64).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}
