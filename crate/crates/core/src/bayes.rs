//! Conjugate-prior layer.
//!
//! A prior of the same form as the likelihood acts like `a_i` extra events
//! observed at `tau_i`. When the prior times coincide with the data centers,
//! the posterior mode is the maximum-likelihood fit of the augmented counts,
//! and a normal approximation around it gives an approximate HPD interval.

use crate::error::{Error, Result};
use crate::estimate::{fit_mle, normal_interval, SolverSettings};
use crate::model::{
    FitMode, FitResult, IntervalEstimate, IntervalKind, ObservationSeries, PriorSpec, WeightMode,
    OVERLAP_TOLERANCE,
};

/// Replaces every count by its posterior pseudo-count.
///
/// `Augment` gives `k + a`; `Blend` gives `q k + (1 - q) a`.
pub fn augment(series: &ObservationSeries, prior: &PriorSpec) -> Result<ObservationSeries> {
    if prior.entries.len() != series.len() {
        return Err(Error::PriorMismatch(format!(
            "prior has {} entries, series has {} intervals",
            prior.entries.len(),
            series.len()
        )));
    }
    for (i, (entry, rec)) in prior.entries.iter().zip(series.intervals()).enumerate() {
        if (entry.tau - rec.center).abs() > OVERLAP_TOLERANCE {
            return Err(Error::PriorMismatch(format!(
                "entry {i}: prior time {} differs from interval center {}",
                entry.tau, rec.center
            )));
        }
        if !(entry.a >= 0.0 && entry.a.is_finite()) {
            return Err(Error::PriorMismatch(format!(
                "entry {i}: pseudo-count must be finite and >= 0, got {}",
                entry.a
            )));
        }
    }

    match prior.weight_mode {
        WeightMode::Augment => Ok(series.with_counts(
            prior
                .entries
                .iter()
                .zip(series.intervals())
                .map(|(e, r)| r.count + e.a),
        )),
        WeightMode::Blend => {
            let weights = prior
                .weights
                .as_ref()
                .ok_or_else(|| Error::PriorMode("blend mode requires weights".into()))?;
            if weights.len() != series.len() {
                return Err(Error::PriorMode(format!(
                    "{} weights for {} intervals",
                    weights.len(),
                    series.len()
                )));
            }
            if let Some(i) = weights.iter().position(|q| !(0.0..=1.0).contains(q)) {
                return Err(Error::PriorMode(format!(
                    "weight {i} must lie in [0, 1], got {}",
                    weights[i]
                )));
            }
            Ok(series.with_counts(
                prior
                    .entries
                    .iter()
                    .zip(series.intervals())
                    .zip(weights)
                    .map(|((e, r), &q)| q * r.count + (1.0 - q) * e.a),
            ))
        }
    }
}

/// Posterior mode: the maximum-likelihood fit of the augmented series.
pub fn fit_map(
    series: &ObservationSeries,
    prior: &PriorSpec,
    settings: &SolverSettings,
) -> Result<FitResult> {
    let augmented = augment(series, prior)?;
    let fit = fit_mle(&augmented, settings)?;
    Ok(FitResult {
        mode: FitMode::BayesMap,
        ..fit
    })
}

/// Normal approximation to the HPD interval around the posterior mode.
pub fn hpd_interval(fit: &FitResult, alpha: f64) -> Result<IntervalEstimate> {
    if fit.mode != FitMode::BayesMap {
        return Err(Error::Domain(
            "HPD intervals require a posterior-mode fit".into(),
        ));
    }
    normal_interval(fit, alpha, IntervalKind::HpdApprox)
}
