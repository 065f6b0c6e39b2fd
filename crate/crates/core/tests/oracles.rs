use femtoconn::simulate::{mc_connectivity_ratio, mc_outage, Attachment, Interferers, RngSeed};
use femtoconn::tier_model::{OutageQuery, TierParams};

#[test]
fn serving_ratio_is_insensitive_to_window_size() {
    let p = TierParams::new(2.0, 10.0, 1.0, 10.0, 4.0).unwrap();
    let rule = Attachment::UniformInRange;
    let small = mc_connectivity_ratio(&p, 0.5, 20.0, 1_000, RngSeed(5), rule).unwrap();
    let large = mc_connectivity_ratio(&p, 0.5, 40.0, 1_000, RngSeed(6), rule).unwrap();
    let se = small.std_error.hypot(large.std_error);
    assert!(
        (small.value - large.value).abs() < 2.0 * se,
        "{small:?} vs {large:?}"
    );
}

#[test]
fn outage_oracle_limits() {
    let p = TierParams::new(2.0, 10.0, 1.0, 10.0, 4.0).unwrap();
    let run = |gamma: f64| {
        let q = OutageQuery::with_gamma(p, gamma, 0.5).unwrap();
        mc_outage(
            &q,
            20.0,
            1_000,
            RngSeed(9),
            Attachment::UniformInRange,
            Interferers::ServedUsers,
        )
        .unwrap()
    };
    assert_eq!(run(0.0).estimate.value, 0.0);
    assert!(run(1e12).estimate.value > 0.99);
}

#[test]
fn outage_oracle_replays() {
    let p = TierParams::new(1.0, 5.0, 1.0, 10.0, 4.0).unwrap();
    let q = OutageQuery::with_eta(p, 2.0).unwrap();
    let once = || {
        mc_outage(
            &q,
            10.0,
            1_000,
            RngSeed(3),
            Attachment::Nearest,
            Interferers::AllUsers,
        )
        .unwrap()
    };
    assert_eq!(once(), once());
}
