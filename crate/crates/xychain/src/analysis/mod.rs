//! Derived diagnostics: numerical derivatives, scaling collapses, and fits.
//!
//! The raw observables (discord, classical correlations, mutual information)
//! come from the other modules; here they are organized into datasets of
//! slices (one per system size or per field value), rescaled by trial
//! exponents, and scored against a common master curve. The score is the
//! mean squared deviation of each slice from a monotone piecewise-cubic
//! through the pooled points of the remaining slices, normalized by the
//! pooled variance so that different y-rescalings stay comparable.

pub mod collapse;
pub mod deriv;
pub mod fit;
pub mod interp;
pub mod near_factor;
pub mod thermal;

pub use collapse::{factorization_scaling, fss_collapse, master_curve_residual};
pub use deriv::d_dh;
pub use fit::{linear_fit, FitReport};
pub use interp::Pchip;
pub use near_factor::{near_factorization_fit, NearFactorizationLaw};
pub use thermal::{
    bulk_slope_sampler, displacement, displacement_curve, grid_derivative, qc_ratio_map,
    thermal_collapse_residual, thermal_scaling, thermal_scaling_with, QcRatioMap,
};

use crate::error::{XyError, XyResult};

/// One observation: observable `value` at field `h` in the slice labeled
/// `slice` (a system size L or a temperature, depending on the dataset).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRecord {
    pub slice: f64,
    pub h: f64,
    pub value: f64,
}

/// Pooled observations for a scaling analysis, grouped into slices with a
/// monotone unique field grid per slice.
#[derive(Debug, Clone)]
pub struct ScalingDataset {
    pub observable: String,
    /// Anisotropy of the model the data came from; collapse routines that
    /// need per-slice factorizing fields read it from here.
    pub gamma: f64,
    pub records: Vec<ScalingRecord>,
}

impl ScalingDataset {
    pub fn new(observable: impl Into<String>, gamma: f64) -> Self {
        Self { observable: observable.into(), gamma, records: Vec::new() }
    }

    pub fn push(&mut self, slice: f64, h: f64, value: f64) {
        self.records.push(ScalingRecord { slice, h, value });
    }

    /// Distinct slice labels in ascending order.
    pub fn slices(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.records.iter().map(|r| r.slice).collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.dedup();
        s
    }

    /// (h, value) points of one slice, sorted by h.
    pub fn slice_points(&self, slice: f64) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self
            .records
            .iter()
            .filter(|r| r.slice == slice)
            .map(|r| (r.h, r.value))
            .collect();
        pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        pts
    }

    pub fn validate(&self) -> XyResult<()> {
        for s in self.slices() {
            let pts = self.slice_points(s);
            for w in pts.windows(2) {
                if w[1].0 <= w[0].0 {
                    return Err(XyError::InvalidParams(format!(
                        "slice {s}: duplicate or non-monotone field grid at h={}",
                        w[1].0
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Outcome of a scaling collapse: the exponents used (or fitted), the
/// per-slice shift fields, the normalized master-curve residual, and any
/// auxiliary fits with their diagnostics.
#[derive(Debug, Clone)]
pub struct CollapseResult {
    pub exponents: Vec<(String, f64)>,
    /// Per-slice shift: (slice label, h_m or h_f at that size).
    pub shifts: Vec<(f64, f64)>,
    pub residual: f64,
    pub fits: Vec<(String, FitReport)>,
}

impl CollapseResult {
    pub fn exponent(&self, name: &str) -> Option<f64> {
        self.exponents.iter().find(|(n, _)| n == name).map(|&(_, v)| v)
    }

    pub fn fit(&self, name: &str) -> Option<&FitReport> {
        self.fits.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dataset_orders_and_validates_slices() {
        let mut ds = ScalingDataset::new("test", 0.7);
        ds.push(8.0, 0.3, 1.0);
        ds.push(8.0, 0.1, 2.0);
        ds.push(4.0, 0.2, 3.0);
        assert_eq!(ds.slices(), vec![4.0, 8.0]);
        assert_eq!(ds.slice_points(8.0), vec![(0.1, 2.0), (0.3, 1.0)]);
        assert!(ds.validate().is_ok());
        ds.push(8.0, 0.1, 9.0);
        assert!(ds.validate().is_err());
    }
}
