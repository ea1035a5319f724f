//! Monte Carlo checks of the asymptotic approximations: interval coverage,
//! test size and power, and estimator bias under a known true model.

pub mod rng;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bayes::fit_map;
use crate::error::{Error, Result};
use crate::estimate::{confidence_interval, fit_mle, trend_test, SolverSettings};
use crate::model::{
    default_origin, recenter, validate, Decision, FitResult, IntervalRecord, ObservationSeries,
    PriorSpec, TrendVerdict,
};

/// Center and length of one simulated interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalSpan {
    pub center: f64,
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationPlan {
    pub true_lambda0: f64,
    pub true_beta: f64,
    pub layout: Vec<IntervalSpan>,
    pub replications: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl SimulationPlan {
    /// `intervals` contiguous intervals of equal length, centered on the
    /// window midpoint.
    pub fn uniform(
        true_lambda0: f64,
        true_beta: f64,
        intervals: usize,
        interval_length: f64,
        replications: u64,
        alpha: f64,
        seed: u64,
    ) -> Self {
        let raw = ObservationSeries::contiguous(0.0, interval_length, &vec![0.0; intervals]);
        let centered = recenter(&raw, default_origin(&raw));
        let layout = centered
            .intervals()
            .iter()
            .map(|r| IntervalSpan {
                center: r.center,
                length: r.length,
            })
            .collect();
        Self {
            true_lambda0,
            true_beta,
            layout,
            replications,
            alpha,
            seed,
        }
    }

    pub fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPlan(msg));
        if !(self.true_lambda0 > 0.0 && self.true_lambda0.is_finite()) {
            return bad(format!("true_lambda0 must be positive, got {}", self.true_lambda0));
        }
        if !self.true_beta.is_finite() {
            return bad(format!("true_beta must be finite, got {}", self.true_beta));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return bad(format!("alpha must lie in (0, 0.5), got {}", self.alpha));
        }
        let violations = validate(&self.empty_series());
        if !violations.is_empty() {
            let msg = violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ");
            return bad(format!("layout: {msg}"));
        }
        Ok(())
    }

    fn empty_series(&self) -> ObservationSeries {
        ObservationSeries::new(
            self.layout
                .iter()
                .map(|s| IntervalRecord::new(s.center, s.length, 0.0))
                .collect(),
            "unit",
        )
    }

    /// True expected count of each interval.
    pub fn means(&self) -> Vec<f64> {
        self.layout
            .iter()
            .map(|s| self.true_lambda0 * s.length * (-self.true_beta * s.center).exp())
            .collect()
    }
}

/// Draws replicate `replicate_index` of the plan. The same `(seed, index)`
/// always yields the same series.
pub fn simulate_series(plan: &SimulationPlan, replicate_index: u64) -> ObservationSeries {
    let mut rng = rng::replicate_rng(plan.seed, replicate_index);
    let counts: Vec<f64> = plan
        .means()
        .into_iter()
        .map(|mean| rng::poisson(&mut rng, mean) as f64)
        .collect();
    plan.empty_series().with_counts(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub replications_run: u64,
    pub degenerate_count: u64,
    pub empirical_coverage: f64,
    pub empirical_rejection_rate: f64,
    pub mean_beta_hat: f64,
    pub stddev_beta_hat: f64,
    pub mean_sigma: f64,
}

enum Replicate {
    Degenerate,
    Fitted {
        beta_hat: f64,
        sigma: f64,
        covered: bool,
        rejected: bool,
    },
}

fn run_replicate(plan: &SimulationPlan, index: u64, settings: &SolverSettings) -> Result<Replicate> {
    let series = simulate_series(plan, index);
    let fit = match fit_mle(&series, settings) {
        Ok(fit) => fit,
        Err(e) if e.is_estimation_failure() => return Ok(Replicate::Degenerate),
        Err(e) => return Err(e),
    };
    let ci = confidence_interval(&fit, plan.alpha)?;
    let verdict = trend_test(&fit, plan.alpha)?;
    Ok(Replicate::Fitted {
        beta_hat: fit.beta_hat,
        sigma: fit.sigma,
        covered: ci.contains(plan.true_beta),
        rejected: verdict.u_conf > 0.0,
    })
}

/// Simulates, fits and tests every replicate of the plan.
///
/// Replicates run in parallel; results are reduced in replicate order so the
/// report is identical for any thread count.
pub fn coverage_experiment(plan: &SimulationPlan) -> Result<CoverageReport> {
    plan.check()?;
    let settings = SolverSettings::default();
    let outcomes: Vec<Replicate> = (0..plan.replications)
        .into_par_iter()
        .map(|i| run_replicate(plan, i, &settings))
        .collect::<Result<_>>()?;

    let mut run = 0u64;
    let mut degenerate = 0u64;
    let (mut covered, mut rejected) = (0u64, 0u64);
    let (mut sum_beta, mut sum_beta_sq, mut sum_sigma) = (0.0, 0.0, 0.0);
    for outcome in &outcomes {
        match *outcome {
            Replicate::Degenerate => degenerate += 1,
            Replicate::Fitted {
                beta_hat,
                sigma,
                covered: c,
                rejected: r,
            } => {
                run += 1;
                covered += c as u64;
                rejected += r as u64;
                sum_beta += beta_hat;
                sum_beta_sq += beta_hat * beta_hat;
                sum_sigma += sigma;
            }
        }
    }
    if run == 0 {
        return Ok(CoverageReport {
            replications_run: 0,
            degenerate_count: degenerate,
            empirical_coverage: 0.0,
            empirical_rejection_rate: 0.0,
            mean_beta_hat: 0.0,
            stddev_beta_hat: 0.0,
            mean_sigma: 0.0,
        });
    }
    let n = run as f64;
    let mean_beta = sum_beta / n;
    let stddev = if run > 1 {
        ((sum_beta_sq - n * mean_beta * mean_beta) / (n - 1.0)).max(0.0).sqrt()
    } else {
        0.0
    };
    Ok(CoverageReport {
        replications_run: run,
        degenerate_count: degenerate,
        empirical_coverage: covered as f64 / n,
        empirical_rejection_rate: rejected as f64 / n,
        mean_beta_hat: mean_beta,
        stddev_beta_hat: stddev,
        mean_sigma: sum_sigma / n,
    })
}

/// A replicate on which the classical and posterior-mode verdicts disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictDisagreement {
    pub replicate: u64,
    pub counts: Vec<f64>,
    pub classical: FitResult,
    pub classical_verdict: TrendVerdict,
    pub bayes: FitResult,
    pub bayes_verdict: TrendVerdict,
}

/// Tally of how often a prior changes the verdict on simulated data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorCorruptionReport {
    pub plan: SimulationPlan,
    pub pseudo_counts: Vec<f64>,
    pub compared: u64,
    pub skipped: u64,
    pub classical_significant: u64,
    pub bayes_significant: u64,
    pub disagreements: u64,
    pub first_disagreement: Option<VerdictDisagreement>,
}

/// Fits every replicate both classically and with an augment-mode prior
/// (`pseudo_counts` at the layout centers) and counts verdict changes.
/// Replicates where either fit has no finite estimate are skipped.
pub fn prior_corruption_experiment(
    plan: &SimulationPlan,
    pseudo_counts: &[f64],
) -> Result<PriorCorruptionReport> {
    plan.check()?;
    if pseudo_counts.len() != plan.layout.len() {
        return Err(Error::InvalidPlan(format!(
            "{} pseudo-counts for {} intervals",
            pseudo_counts.len(),
            plan.layout.len()
        )));
    }
    let settings = SolverSettings::default();
    let significant = |d: Decision| d != Decision::Inconclusive;

    let mut report = PriorCorruptionReport {
        plan: plan.clone(),
        pseudo_counts: pseudo_counts.to_vec(),
        compared: 0,
        skipped: 0,
        classical_significant: 0,
        bayes_significant: 0,
        disagreements: 0,
        first_disagreement: None,
    };
    for i in 0..plan.replications {
        let series = simulate_series(plan, i);
        let prior = PriorSpec::at_centers(&series, pseudo_counts);
        let (classical, bayes) = match (fit_mle(&series, &settings), fit_map(&series, &prior, &settings)) {
            (Ok(c), Ok(b)) => (c, b),
            (Err(e), _) | (_, Err(e)) if e.is_estimation_failure() => {
                report.skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let cv = trend_test(&classical, plan.alpha)?;
        let bv = trend_test(&bayes, plan.alpha)?;
        report.compared += 1;
        report.classical_significant += significant(cv.decision) as u64;
        report.bayes_significant += significant(bv.decision) as u64;
        if cv.decision != bv.decision {
            report.disagreements += 1;
            if report.first_disagreement.is_none() {
                report.first_disagreement = Some(VerdictDisagreement {
                    replicate: i,
                    counts: series.intervals().iter().map(|r| r.count).collect(),
                    classical,
                    classical_verdict: cv,
                    bayes,
                    bayes_verdict: bv,
                });
            }
        }
    }
    Ok(report)
}

/// Small-sample before/after setting (two five-unit periods, about ten
/// events in total, a real decrease) with the `a = (2, 2)` prior.
pub fn standard_prior_corruption_plan() -> (SimulationPlan, Vec<f64>) {
    (
        SimulationPlan::uniform(1.0, 0.15, 2, 5.0, 200, 0.05, 2020),
        vec![2.0, 2.0],
    )
}
