use plrs::ensemble::{conditional_from_tally, count_omega_by_z, empirical_z};
use plrs::verify::{
    build_report, compute_c, estimate_growth, fibonacci_slope, find_threshold,
    gaussian_diagnostics, y_statistics, CTerm,
};
use plrs::{
    BigRational, Ensemble, Error, F64Report, HpFloat, HpReport, MomentTable, RecurrenceSpec, Scalar,
};

const FIXTURES: [&str; 4] = ["1,1", "2,2,0,2", "1,2", "3,0,1"];

fn spec(text: &str) -> RecurrenceSpec {
    text.parse().unwrap()
}

#[test]
fn identities_hold_exactly_by_dp() {
    for text in FIXTURES {
        let ensemble = Ensemble::new(&spec(text), 200);
        for n in 2 * ensemble.spec().length() + 1..=200 {
            assert!(ensemble.identity_check(n).unwrap().holds(), "{text} n={n}");
        }
    }
}

#[test]
fn conditional_identities_match_enumeration() {
    for text in FIXTURES {
        let ensemble = Ensemble::new(&spec(text), 14);
        for n in 2 * ensemble.spec().length() + 1..=14 {
            let tally = ensemble.tally(n, 50_000_000).unwrap();
            for t in 0..ensemble.spec().size() as usize {
                let check =
                    conditional_from_tally(&tally, ensemble.catalog(), ensemble.moments(), t)
                        .unwrap();
                assert!(check.holds(), "{text} n={n} t={t}");
            }
            let z = ensemble.z_distribution(n, 0).unwrap();
            let counts = count_omega_by_z(ensemble.catalog(), n, u64::MAX).unwrap();
            assert_eq!(empirical_z(&counts), z.probs);
        }
    }
}

#[test]
fn z_needs_three_blocks() {
    let ensemble = Ensemble::new(&spec("2,2,0,2"), 20);
    assert!(matches!(
        ensemble.z_distribution(8, 0),
        Err(Error::IndexTooSmall { n: 8, min: 9 })
    ));
    assert!(ensemble.z_distribution(9, 0).is_ok());
}

#[test]
fn fibonacci_growth_matches_classical_constant() {
    let moments = MomentTable::compute(&spec("1,1"), 400);
    let growth = estimate_growth::<HpFloat>(&moments, 400, 128).unwrap();
    assert!((growth.a_est.to_f64() - fibonacci_slope()).abs() < 1e-12);
    assert!((fibonacci_slope() - 0.276393202250021).abs() < 1e-15);
    assert!(growth.convergence_gap.to_f64() < 1e-6);
    assert!(growth.f_shrinks());
    // a_est^2 / (2S) with S = 2.
    let bound = growth.y_variance_floor(2).to_f64();
    assert!((bound - growth.a_est.to_f64().powi(2) / 4.0).abs() < 1e-15);
}

#[test]
fn y_mean_equals_f() {
    for text in FIXTURES {
        let ensemble = Ensemble::new(&spec(text), 200);
        let growth = estimate_growth::<HpFloat>(ensemble.moments(), 200, 128).unwrap();
        for n in [2 * ensemble.spec().length() + 1, 60, 150, 200] {
            let y = y_statistics(ensemble.table(), ensemble.catalog(), &growth, n).unwrap();
            assert!(
                y.mean_matches_f(),
                "{text} n={n} residual {}",
                y.residual.to_f64()
            );
        }
    }
}

#[test]
fn threshold_and_constant() {
    for text in FIXTURES {
        let ensemble = Ensemble::new(&spec(text), 400);
        let growth = estimate_growth::<HpFloat>(ensemble.moments(), 400, 128).unwrap();
        let threshold = find_threshold(ensemble.table(), ensemble.catalog(), &growth, 400).unwrap();
        assert!(threshold.n <= 60, "{text} N = {}", threshold.n);
        assert!(threshold.n > 2 * ensemble.spec().length());
        assert!(threshold
            .var_y
            .iter()
            .filter(|(n, _)| *n > threshold.n)
            .all(|(_, v)| v > &threshold.bound));

        let c = compute_c(ensemble.moments(), &growth, threshold.n).unwrap();
        assert!(c.c.to_f64() > 0.0);
        assert_eq!(
            c.candidates.len(),
            threshold.n - ensemble.spec().length() + 1
        );
        assert!(c.candidates.iter().all(|(_, v)| v >= &c.c));
        assert!(matches!(c.candidates.last(), Some((CTerm::GrowthFloor, _))));

        let too_small = compute_c(ensemble.moments(), &growth, ensemble.spec().length());
        assert!(matches!(too_small, Err(Error::IndexTooSmall { .. })));
    }
}

#[test]
fn variance_bound_holds_in_every_scalar() {
    for text in FIXTURES {
        let ensemble = Ensemble::new(&spec(text), 300);
        let hp: HpReport = build_report(&ensemble, 300, 128).unwrap();
        assert!(hp.all_pass(), "{text}");
        assert_eq!(hp.verdicts.len(), 300 - ensemble.spec().length());
        assert!(hp.slope_consistent(), "{text}");
        assert!(plrs::scalar::ratio_to_f64(&hp.slope_c_est) > 0.0);
        let f: F64Report = build_report(&ensemble, 300, 53).unwrap();
        assert!(f.all_pass(), "{text}");
        assert_eq!(f.threshold.n, hp.threshold.n);
    }
    // Exact arithmetic throughout on a short window.
    let ensemble = Ensemble::new(&spec("1,2"), 60);
    let exact = build_report::<BigRational>(&ensemble, 60, 0).unwrap();
    assert!(exact.all_pass());
}

#[test]
fn verify_rejects_short_windows() {
    let result = plrs::verify_variance_bound::<f64>(&spec("1,1"), 10, 53);
    assert!(matches!(result, Err(Error::WindowTooSmall { .. })));
}

#[test]
fn gaussian_trend_for_fibonacci() {
    let moments = MomentTable::compute(&spec("1,1"), 400);
    let table = gaussian_diagnostics(&moments, &[50, 100, 200, 400]).unwrap();
    assert!(table.trend_holds());
    let skew: Vec<f64> = table.rows.iter().map(|r| r.skewness.abs()).collect();
    assert!(skew.windows(2).all(|w| w[1] < w[0]));
    assert!(table.rows[3].excess_kurtosis.abs() < 0.5);
    assert!(matches!(
        gaussian_diagnostics(&moments, &[500]),
        Err(Error::NotComputed { n: 500, n_max: 400 })
    ));
    assert!(matches!(
        gaussian_diagnostics(&moments, &[1]),
        Err(Error::DegenerateVariance { n: 1 })
    ));
}

#[test]
fn sampling_is_deterministic_and_unbiased() {
    let ensemble = Ensemble::new(&spec("2,2,0,2"), 60);
    let first: Vec<_> = ensemble.sample(60, 50, 11).collect();
    let again: Vec<_> = ensemble.sample(60, 50, 11).collect();
    assert_eq!(first, again);
    let other: Vec<_> = ensemble.sample(60, 50, 12).collect();
    assert_ne!(first, other);

    let count = 4000;
    let total: u64 = ensemble
        .sample(60, count, 3)
        .map(|d| d.summand_count())
        .sum();
    let stats = ensemble.stats(60);
    let mean = plrs::scalar::ratio_to_f64(&stats.mean);
    let se = (plrs::scalar::ratio_to_f64(&stats.variance) / count as f64).sqrt();
    assert!((total as f64 / count as f64 - mean).abs() < 5.0 * se);
}
