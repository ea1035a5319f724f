mod common;

use common::{enumerate_counts, grid_mle, is_boundary, unit_series};
use cox_trend::model::{recenter, IntervalRecord, ObservationSeries};
use cox_trend::simcheck::{simulate_series, SimulationPlan};
use cox_trend::{fisher_info, fit_mle, log_likelihood, score_beta, SolverSettings};

#[test]
fn four_interval_fit_matches_grid_search() {
    let s = unit_series(&[20.0, 12.0, 7.0, 4.0]);
    assert_eq!(s.intervals()[0].center, -1.5);
    let fit = fit_mle(&s, &SolverSettings::default()).unwrap();
    let (l0, b) = grid_mle(&s, 400);
    assert!((fit.beta_hat - b).abs() < 1e-6, "{} vs {b}", fit.beta_hat);
    assert!((fit.lambda0_hat - l0).abs() / l0 < 1e-6);
}

#[test]
fn likelihood_at_mle_dominates_a_grid() {
    let s = unit_series(&[5.0, 2.0, 4.0, 1.0, 0.0, 2.0]);
    let fit = fit_mle(&s, &SolverSettings::default()).unwrap();
    let best = log_likelihood(&s, fit.lambda0_hat, fit.beta_hat).unwrap();
    for i in 0..200 {
        for j in 0..200 {
            let l0 = fit.lambda0_hat * (0.5 + i as f64 / 200.0);
            let b = fit.beta_hat - 0.5 + j as f64 / 200.0;
            assert!(log_likelihood(&s, l0, b).unwrap() <= best + 1e-12);
        }
    }
}

#[test]
fn score_changes_sign_exactly_once() {
    let plan = SimulationPlan::uniform(2.0, 0.1, 5, 1.0, 60, 0.05, 3);
    let mut checked = 0;
    for rep in 0..plan.replications {
        let s = simulate_series(&plan, rep);
        let counts: Vec<f64> = s.intervals().iter().map(|r| r.count).collect();
        if s.total_count() == 0.0 || is_boundary(&counts) {
            continue;
        }
        let signs: Vec<bool> = (0..=2000)
            .map(|i| score_beta(&s, -5.0 + i as f64 * 0.005).unwrap() > 0.0)
            .collect();
        let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
        assert_eq!(changes, 1, "counts {counts:?}");
        checked += 1;
    }
    assert!(checked > 40);
}

#[test]
fn exhaustive_small_series_match_grid_search() {
    // Sampled subset of the full enumeration run by the acceptance suite.
    let settings = SolverSettings::default();
    for n in 2..=3 {
        for counts in enumerate_counts(n, 4).into_iter().step_by(3) {
            if counts.iter().sum::<f64>() < 2.0 || is_boundary(&counts) {
                continue;
            }
            let s = unit_series(&counts);
            let fit = fit_mle(&s, &settings).unwrap();
            let (l0, b) = grid_mle(&s, 120);
            assert!((fit.beta_hat - b).abs() < 1e-4, "{counts:?}");
            assert!((fit.lambda0_hat - l0).abs() / l0 < 1e-4, "{counts:?}");
        }
    }
}

#[test]
fn fisher_information_table_layouts() {
    let layout = |k1: f64, k2: f64| {
        ObservationSeries::new(
            vec![
                IntervalRecord::new(-2.5, 5.0, k1),
                IntervalRecord::new(2.5, 5.0, k2),
            ],
            "year",
        )
    };
    let settings = SolverSettings::default();
    let greece = fit_mle(&layout(2.0, 1.0), &settings).unwrap();
    assert!((fisher_info(&layout(2.0, 1.0), greece.lambda0_hat, greece.beta_hat).unwrap() - 18.75).abs() < 1e-9);
    let ex1 = fit_mle(&layout(84.0, 100.0), &settings).unwrap();
    assert!((ex1.information - 1150.0).abs() < 1e-8);
}

#[test]
fn simulated_counts_have_poisson_means() {
    let plan = SimulationPlan::uniform(20.0, 0.3, 6, 1.0, 10_000, 0.05, 12345);
    let means = plan.means();
    // Spans both samplers: means from about 9 to about 42.
    assert!(means.iter().any(|&m| m < 30.0) && means.iter().any(|&m| m >= 30.0));
    let mut sums = vec![0.0; means.len()];
    for rep in 0..plan.replications {
        for (acc, r) in sums.iter_mut().zip(simulate_series(&plan, rep).intervals()) {
            *acc += r.count;
        }
    }
    let reps = plan.replications as f64;
    for (sum, mean) in sums.iter().zip(&means) {
        let sample_mean = sum / reps;
        assert!(
            (sample_mean - mean).abs() <= 3.0 * (mean / reps).sqrt(),
            "sample mean {sample_mean} vs {mean}"
        );
    }
}

#[test]
fn shifting_the_origin_keeps_the_trend() {
    let s = ObservationSeries::contiguous(1980.0, 5.0, &[14.0, 9.0, 11.0, 6.0, 5.0, 7.0, 3.0, 4.0]);
    let settings = SolverSettings::default();
    let mid = cox_trend::model::Origin::Midpoint.apply(&s);
    let a = fit_mle(&mid, &settings).unwrap();
    let b = fit_mle(&recenter(&mid, -7.3), &settings).unwrap();
    assert!((a.beta_hat - b.beta_hat).abs() < 1e-9);
    assert!((a.information - b.information).abs() > 1.0);
    assert_eq!(a.time_origin, 2000.0);
}
