//! Before/after comparison of two adjacent periods.
//!
//! The window `[0, T)` is split at `split * T`. Times are measured from the
//! window midpoint, so the two centers are `-(1 - split) T / 2` and
//! `split T / 2` (`-T/4` and `+T/4` for an even split). With two cells and
//! two parameters the model is saturated: fitted cell means equal the counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{fisher_info, fit_mle, SolverSettings};
use crate::model::{FitMode, FitResult, IntervalRecord, ObservationSeries};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleInput {
    pub k1: f64,
    pub k2: f64,
    pub total_time: f64,
    /// Fraction of the window taken by the first period.
    pub split: f64,
}

impl TwoSampleInput {
    /// Two periods of equal length.
    pub fn even(k1: f64, k2: f64, total_time: f64) -> Self {
        Self {
            k1,
            k2,
            total_time,
            split: 0.5,
        }
    }

    pub fn augmented(&self, a1: f64, a2: f64) -> Self {
        Self {
            k1: self.k1 + a1,
            k2: self.k2 + a2,
            ..*self
        }
    }

    pub fn check(&self) -> Result<()> {
        if !(self.total_time > 0.0 && self.total_time.is_finite()) {
            return Err(Error::Domain(format!(
                "total time must be positive, got {}",
                self.total_time
            )));
        }
        if !(self.split > 0.0 && self.split < 1.0) {
            return Err(Error::Domain(format!(
                "split must lie in (0, 1), got {}",
                self.split
            )));
        }
        for (name, k) in [("k1", self.k1), ("k2", self.k2)] {
            if !(k >= 0.0 && k.is_finite()) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {k}")));
            }
        }
        Ok(())
    }

    /// The equivalent two-record series, centered on the window midpoint.
    pub fn series(&self) -> ObservationSeries {
        let (t, s) = (self.total_time, self.split);
        ObservationSeries::new(
            vec![
                IntervalRecord::new(-(1.0 - s) * t / 2.0, s * t, self.k1),
                IntervalRecord::new(s * t / 2.0, (1.0 - s) * t, self.k2),
            ],
            "year",
        )
        .with_origin(0.5 * t)
    }
}

/// Classical fit of the two-period model.
pub fn two_sample_fit(input: &TwoSampleInput) -> Result<FitResult> {
    input.check()?;
    let TwoSampleInput {
        k1, k2, total_time, ..
    } = *input;
    if k1 + k2 == 0.0 {
        return Err(Error::Degenerate("no events in either period".into()));
    }
    if k1 == 0.0 || k2 == 0.0 {
        let side = if k1 == 0.0 { "second" } else { "first" };
        return Err(Error::Boundary(format!(
            "all events fall in the {side} period; the trend estimate is infinite"
        )));
    }

    let series = input.series();
    if input.split != 0.5 {
        return fit_mle(&series, &SolverSettings::default());
    }

    let beta = 2.0 / total_time * (k1.ln() - k2.ln());
    let quarter = 0.25 * total_time;
    let lambda0 = (k1 + k2) / (0.5 * total_time * ((beta * quarter).exp() + (-beta * quarter).exp()));
    let information = fisher_info(&series, lambda0, beta)?;
    Ok(FitResult::new(
        lambda0,
        beta,
        information,
        series.origin(),
        FitMode::ClassicalMle,
    ))
}

/// Posterior-mode fit with pseudo-counts `a1`, `a2` added to the two periods.
pub fn two_sample_bayes(input: &TwoSampleInput, a1: f64, a2: f64) -> Result<FitResult> {
    if !(a1 >= 0.0 && a2 >= 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(Error::Domain(format!(
            "pseudo-counts must be finite and >= 0, got ({a1}, {a2})"
        )));
    }
    let fit = two_sample_fit(&input.augmented(a1, a2))?;
    Ok(FitResult {
        mode: FitMode::BayesMap,
        ..fit
    })
}

/// Fitted expected counts of the two periods. The model is saturated, so
/// these are the counts themselves (use [`TwoSampleInput::augmented`] for the
/// posterior version).
pub fn cell_means(input: &TwoSampleInput) -> (f64, f64) {
    (input.k1, input.k2)
}
