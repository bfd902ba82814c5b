//! Backend selection behind a common correlator-producing trait.
//!
//! Four ways of preparing the spin state register here: adaptive quadrature
//! in the thermodynamic limit, momentum sums at finite length (including the
//! exact four-ensemble thermal mixture), Lanczos ED for ground states with or
//! without a symmetry-breaking field, and dense thermal ED on short chains.
//! Callers describe the state they want as a [`StateRequest`]; the registry
//! either honors an explicit engine name or picks the cheapest backend that
//! supports the request.

use std::sync::LazyLock;

use crate::correlators::CorrelatorSet;
use crate::ed::{self, EdConfig};
use crate::error::{XyError, XyResult};
use crate::fermion;
use crate::model::{ChainLength, ModelParams};

/// How the longitudinal field for a symmetry-broken run is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HxChoice {
    Fixed(f64),
    /// Scale the field to the parity-sector splitting; see
    /// [`crate::ed::adaptive_hx`].
    Adaptive,
}

/// Which ground-state convention the correlators should follow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateConvention {
    /// Parity-symmetric (thermal-ground) state: ⟨σx⟩ = 0.
    Symmetric,
    /// Symmetry-broken state selected by a small +x field.
    Broken(HxChoice),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateRequest {
    pub params: ModelParams,
    pub r_max: usize,
    pub convention: StateConvention,
}

impl StateRequest {
    pub fn symmetric(params: ModelParams, r_max: usize) -> Self {
        Self { params, r_max, convention: StateConvention::Symmetric }
    }

    pub fn broken(params: ModelParams, r_max: usize, hx: HxChoice) -> Self {
        Self { params, r_max, convention: StateConvention::Broken(hx) }
    }

    fn resolve_hx(&self) -> Option<f64> {
        match self.convention {
            StateConvention::Symmetric => Some(0.0),
            StateConvention::Broken(HxChoice::Fixed(v)) => Some(v),
            StateConvention::Broken(HxChoice::Adaptive) => {
                let l = self.params.length.finite()?;
                Some(ed::adaptive_hx(self.params.gamma, self.params.h, l))
            }
        }
    }
}

pub trait StateEngine: Send + Sync {
    fn name(&self) -> &'static str;
    fn supports(&self, req: &StateRequest) -> bool;
    fn correlators(&self, req: &StateRequest) -> XyResult<CorrelatorSet>;
}

struct BulkQuadrature;

impl StateEngine for BulkQuadrature {
    fn name(&self) -> &'static str {
        "bulk-quadrature"
    }

    fn supports(&self, req: &StateRequest) -> bool {
        req.params.length.is_bulk() && req.convention == StateConvention::Symmetric
    }

    fn correlators(&self, req: &StateRequest) -> XyResult<CorrelatorSet> {
        fermion::correlators(&req.params, req.r_max)
    }
}

struct FiniteFermion;

impl StateEngine for FiniteFermion {
    fn name(&self) -> &'static str {
        "finite-l"
    }

    fn supports(&self, req: &StateRequest) -> bool {
        !req.params.length.is_bulk() && req.convention == StateConvention::Symmetric
    }

    fn correlators(&self, req: &StateRequest) -> XyResult<CorrelatorSet> {
        fermion::correlators(&req.params, req.r_max)
    }
}

struct EdGround;

impl StateEngine for EdGround {
    fn name(&self) -> &'static str {
        "ed"
    }

    fn supports(&self, req: &StateRequest) -> bool {
        matches!(req.params.length, ChainLength::Finite(l) if l <= 20)
            && req.params.temperature == 0.0
    }

    fn correlators(&self, req: &StateRequest) -> XyResult<CorrelatorSet> {
        let l = req.params.length.finite().ok_or_else(|| {
            XyError::InvalidParams("ED engine needs a finite length".into())
        })?;
        let hx = req.resolve_hx().expect("finite length checked above");
        let cfg = EdConfig::new(l, req.params.gamma, req.params.h).with_hx(hx);
        let state = ed::ground_state(&cfg)?;
        ed::correlators_ed(&state, req.r_max)
    }
}

struct EdThermal;

impl StateEngine for EdThermal {
    fn name(&self) -> &'static str {
        "ed-thermal"
    }

    fn supports(&self, req: &StateRequest) -> bool {
        matches!(req.params.length, ChainLength::Finite(l) if l <= 10)
            && req.params.temperature > 0.0
    }

    fn correlators(&self, req: &StateRequest) -> XyResult<CorrelatorSet> {
        let l = req.params.length.finite().ok_or_else(|| {
            XyError::InvalidParams("thermal ED engine needs a finite length".into())
        })?;
        let hx = req.resolve_hx().expect("finite length checked above");
        let cfg = EdConfig::new(l, req.params.gamma, req.params.h).with_hx(hx);
        let state = ed::thermal_state(&cfg, req.params.temperature)?;
        state.correlators(req.r_max)
    }
}

/// Registry in auto-selection preference order: analytic backends first,
/// ED only where nothing cheaper applies.
static REGISTRY: LazyLock<Vec<Box<dyn StateEngine>>> = LazyLock::new(|| {
    vec![
        Box::new(BulkQuadrature),
        Box::new(FiniteFermion),
        Box::new(EdGround),
        Box::new(EdThermal),
    ]
});

pub fn engine_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.name()).collect()
}

pub fn lookup(name: &str) -> Option<&'static dyn StateEngine> {
    REGISTRY.iter().find(|e| e.name() == name).map(|b| &**b)
}

/// First engine in preference order that can serve the request. Broken-sector
/// requests skip past the fermion backends because those fix ⟨σx⟩ = 0.
pub fn auto_select(req: &StateRequest) -> XyResult<&'static dyn StateEngine> {
    let broken = matches!(req.convention, StateConvention::Broken(_));
    REGISTRY
        .iter()
        .find(|e| {
            let analytic = matches!(e.name(), "bulk-quadrature" | "finite-l");
            e.supports(req) && !(broken && analytic)
        })
        .map(|b| &**b)
        .ok_or_else(|| {
            XyError::InvalidParams(format!(
                "no engine supports the request (length {:?}, T={}, convention {:?})",
                req.params.length, req.params.temperature, req.convention
            ))
        })
}

/// Resolve and run in one step; `engine` overrides auto-selection by name.
pub fn correlators_for(req: &StateRequest, engine: Option<&str>) -> XyResult<CorrelatorSet> {
    let eng = match engine {
        Some(name) => lookup(name)
            .ok_or_else(|| XyError::InvalidParams(format!("unknown engine '{name}'")))?,
        None => auto_select(req)?,
    };
    if !eng.supports(req) {
        return Err(XyError::InvalidParams(format!(
            "engine '{}' does not support the request (length {:?}, T={})",
            eng.name(),
            req.params.length,
            req.params.temperature
        )));
    }
    eng.correlators(req)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auto_selection_prefers_analytic_backends() {
        let bulk = StateRequest::symmetric(ModelParams::bulk(0.7, 0.5, 0.0), 2);
        assert_eq!(auto_select(&bulk).unwrap().name(), "bulk-quadrature");
        let finite = StateRequest::symmetric(ModelParams::finite(0.7, 0.5, 0.0, 64), 2);
        assert_eq!(auto_select(&finite).unwrap().name(), "finite-l");
        let broken = StateRequest::broken(
            ModelParams::finite(0.7, 0.5, 0.0, 8),
            2,
            HxChoice::Fixed(1e-6),
        );
        assert_eq!(auto_select(&broken).unwrap().name(), "ed");
    }

    #[test]
    fn broken_bulk_is_rejected() {
        let req = StateRequest::broken(
            ModelParams::bulk(0.7, 0.5, 0.0),
            2,
            HxChoice::Fixed(1e-6),
        );
        assert!(auto_select(&req).is_err());
    }

    #[test]
    fn explicit_override_is_validated() {
        let req = StateRequest::symmetric(ModelParams::finite(0.7, 0.5, 1.0, 12), 2);
        let err = correlators_for(&req, Some("ed-thermal")).unwrap_err();
        assert!(matches!(err, XyError::InvalidParams(_)));
        assert!(lookup("nonexistent").is_none());
    }

    #[test]
    fn engines_agree_where_domains_overlap() {
        let req = StateRequest::symmetric(ModelParams::finite(0.7, 1.2, 0.0, 8), 2);
        let ff = correlators_for(&req, Some("finite-l")).unwrap();
        let ed = correlators_for(&req, Some("ed")).unwrap();
        assert!((ff.g_z - ed.g_z).abs() < 1e-9);
        assert!((ff.g_xx[1] - ed.g_xx[1]).abs() < 1e-9);
    }

    #[test]
    fn registry_lists_all_backends() {
        let names = engine_names();
        assert_eq!(names, vec!["bulk-quadrature", "finite-l", "ed", "ed-thermal"]);
    }
}
