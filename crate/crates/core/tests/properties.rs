use std::f64::consts::PI;

use proptest::prelude::*;

use femtoconn::connectivity::{
    connectivity_probability, isolation_probability, log_disconnectivity_bound,
    ConnectivityScenario,
};
use femtoconn::geometry::{lens_area, MobilityGeometry};
use femtoconn::simulate::quadrature::acos_lens_area;
use femtoconn::sweep::{load_spec, Axis, SweepSpec, RECIPES};
use femtoconn::tier_model::{
    connectivity_ratio, outage_probability, sir_threshold, spectral_efficiency_from_threshold,
    OutageQuery, TierParams,
};

fn params(d_f: f64, d_u: f64) -> TierParams {
    TierParams::new(d_f, d_u, 1.0, 10.0, 4.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn lens_area_is_bounded(r in 0.001f64..0.999, beta in -3.0f64..3.0) {
        let a = lens_area(r, beta).unwrap();
        prop_assert!(a >= 0.0 && a <= PI * r * r);
    }

    #[test]
    fn lens_area_non_increasing_in_beta(r in 0.01f64..0.99, b1 in -1.2f64..1.2, b2 in -1.2f64..1.2) {
        let (lo, hi) = if b1 <= b2 { (b1, b2) } else { (b2, b1) };
        prop_assert!(lens_area(r, hi).unwrap() <= lens_area(r, lo).unwrap() + 1e-12);
    }

    #[test]
    fn lens_area_agrees_with_acos_form(r in 0.05f64..0.95, beta in -0.99f64..0.99) {
        let g = MobilityGeometry::new(r, beta).unwrap();
        prop_assert!((g.lens_area() - acos_lens_area(r, g.distance())).abs() < 1e-12);
    }

    #[test]
    fn connectivity_probabilities_are_complementary(
        r in 0.01f64..0.99,
        beta in -1.5f64..1.5,
        n_f in 1u32..500,
    ) {
        let s = ConnectivityScenario::from_parts(r, beta, n_f).unwrap();
        let (d, c) = (isolation_probability(&s), connectivity_probability(&s));
        prop_assert!((0.0..=1.0).contains(&d) && (0.0..=1.0).contains(&c));
        prop_assert!((d + c - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn more_femtocells_never_hurt(r in 0.01f64..0.99, beta in -1.0f64..1.0, n_f in 1u32..200) {
        let a = ConnectivityScenario::from_parts(r, beta, n_f).unwrap();
        let b = ConnectivityScenario::from_parts(r, beta, n_f + 1).unwrap();
        prop_assert!(log_disconnectivity_bound(&b) <= log_disconnectivity_bound(&a));
    }

    #[test]
    fn serving_ratio_is_a_probability(d_f in 0.01f64..20.0, d_u in 0.01f64..20.0, r in 0.01f64..5.0) {
        let pc = connectivity_ratio(&params(d_f, d_u), r).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&pc));
    }

    #[test]
    fn outage_monotone_in_gamma(
        d_f in 0.1f64..10.0,
        d_u in 0.1f64..20.0,
        g1 in 0.0f64..50.0,
        g2 in 0.0f64..50.0,
    ) {
        let p = params(d_f, d_u);
        let r = 0.5;
        let (lo, hi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
        let a = outage_probability(&OutageQuery::with_gamma(p, lo, r).unwrap());
        let b = outage_probability(&OutageQuery::with_gamma(p, hi, r).unwrap());
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(a <= b + 1e-12);
    }

    #[test]
    fn outage_monotone_in_user_density(
        d_f in 0.1f64..10.0,
        u1 in 0.1f64..20.0,
        u2 in 0.1f64..20.0,
        gamma in 0.0f64..20.0,
    ) {
        let (lo, hi) = if u1 <= u2 { (u1, u2) } else { (u2, u1) };
        let a = outage_probability(&OutageQuery::with_gamma(params(d_f, lo), gamma, 0.5).unwrap());
        let b = outage_probability(&OutageQuery::with_gamma(params(d_f, hi), gamma, 0.5).unwrap());
        prop_assert!(a <= b + 1e-12);
    }

    #[test]
    fn threshold_round_trip(eta in 0.0f64..30.0) {
        let back = spectral_efficiency_from_threshold(sir_threshold(eta).unwrap());
        prop_assert!((back - eta).abs() <= 1e-12 * eta.max(1.0));
    }

    #[test]
    fn spec_round_trips_through_text(
        idx in 0usize..RECIPES.len(),
        start in -1.0f64..0.0,
        values in prop::collection::vec(0.01f64..0.99, 1..6),
        note in prop::option::of("[a-z =,.]{0,30}"),
    ) {
        let mut spec = load_spec(RECIPES[idx]).unwrap();
        let keys: Vec<String> = spec.grid.keys().filter(|k| *k != "n_f").cloned().collect();
        spec.grid.insert(keys[0].clone(), Axis::Values(values));
        if let Some(k) = keys.get(1).cloned() {
            spec.grid.insert(k, Axis::Range { start, stop: start + 1.0, step: 0.25 });
        }
        spec.note = note;
        let text = spec.to_toml();
        prop_assert_eq!(SweepSpec::from_toml(&text).unwrap(), spec);
    }
}
