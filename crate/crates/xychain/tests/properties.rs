//! Generative invariants over the physical parameter space.
//!
//! Instead of hand-picked matrices, each property drives the real pipeline
//! (correlators → pair state → information measures) at random parameter
//! points and checks the bounds that hold everywhere in the phase diagram.

use proptest::prelude::*;
use xychain::density::rho_pair;
use xychain::fermion;
use xychain::info::{discord, entropy};
use xychain::ModelParams;

fn triple_bounds_hold(p: &ModelParams, r_max: usize) {
    let set = fermion::correlators(p, r_max).unwrap();
    assert!(
        set.max_abs_entry() <= 1.0 + 1e-9,
        "correlator out of [-1, 1] at gamma={} h={} T={}",
        p.gamma,
        p.h,
        p.temperature
    );
    for r in 1..=r_max {
        let rho = rho_pair(&set, r).unwrap();
        rho.validate().unwrap();
        let s = entropy(&rho).unwrap();
        assert!((0.0..=2.0 + 1e-9).contains(&s), "pair entropy {s} out of range");
        let t = discord(&rho).unwrap();
        assert!(t.mutual_info >= -1e-9, "negative mutual information {}", t.mutual_info);
        assert!(t.classical >= 0.0, "negative classical correlations {}", t.classical);
        assert!(
            t.classical <= t.mutual_info + 1e-9,
            "C = {} exceeds I = {} at gamma={} h={} T={} r={r}",
            t.classical,
            t.mutual_info,
            p.gamma,
            p.h,
            p.temperature
        );
        assert!(t.discord >= 0.0, "negative discord {}", t.discord);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bulk_measures_stay_in_bounds(
        gamma in 0.05f64..=1.0,
        h in 0.0f64..=2.0,
        t in 0.0f64..=2.0,
    ) {
        triple_bounds_hold(&ModelParams::bulk(gamma, h, t), 2);
    }

    #[test]
    fn finite_chain_measures_stay_in_bounds(
        gamma in 0.05f64..=1.0,
        h in 0.0f64..=2.0,
        t in 0.0f64..=1.0,
        half_l in 3usize..=8,
    ) {
        triple_bounds_hold(&ModelParams::finite(gamma, h, t, 2 * half_l), 2);
    }

    #[test]
    fn fidelity_is_a_proper_overlap(
        gamma in 0.1f64..=1.0,
        h in 0.0f64..=2.0,
        dh in -0.01f64..=0.01,
        half_l in 4usize..=40,
    ) {
        let p = ModelParams::finite(gamma, h, 0.0, 2 * half_l);
        // A sector change between the two fields is a legitimate refusal,
        // not a property violation.
        if let Ok(f) = fermion::fidelity(&p, dh) {
            prop_assert!((0.0..=1.0 + 1e-12).contains(&f), "fidelity {f} outside [0, 1]");
        }
        let same = fermion::fidelity(&p, 0.0).unwrap();
        prop_assert!((same - 1.0).abs() < 1e-12, "zero shift must give unit overlap");
    }
}
