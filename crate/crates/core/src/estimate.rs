//! Classical maximum-likelihood inference for the exponential-trend Poisson model.
//!
//! Interval `i` with center `t_i` and length `T_i` has Poisson count with mean
//! `lambda0 * T_i * exp(-beta * t_i)`. The trend `beta` is the root of the
//! profile score equation, `lambda0` then follows in closed form, and the
//! standard error of `beta` is the inverse square root of the curvature
//! `sum lambda0 T_i t_i^2 exp(-beta t_i)` taken with `lambda0` held fixed.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::model::{
    FitMode, FitResult, IntervalEstimate, IntervalKind, ObservationSeries, TrendVerdict,
};
use crate::quantile::z_alpha;
use crate::roots::{brent, expand_bracket, Bracket};

/// Largest `|beta * t|` the bracket search may reach before the MLE is
/// declared to lie on the boundary.
pub const MAX_EXPONENT: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub max_iterations: usize,
    pub initial_bracket_halfwidth: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 200,
            initial_bracket_halfwidth: 1.0,
        }
    }
}

impl SolverSettings {
    fn check(&self) -> Result<()> {
        if !(self.tolerance > 0.0) || self.max_iterations == 0 || !(self.initial_bracket_halfwidth > 0.0)
        {
            return Err(Error::Domain(format!("invalid solver settings {self:?}")));
        }
        Ok(())
    }
}

fn check_lambda0(lambda0: f64) -> Result<()> {
    if lambda0 > 0.0 && lambda0.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda0 must be positive, got {lambda0}")))
    }
}

/// Poisson log-likelihood of the series at `(lambda0, beta)`.
pub fn log_likelihood(series: &ObservationSeries, lambda0: f64, beta: f64) -> Result<f64> {
    check_lambda0(lambda0)?;
    let ln_l0 = lambda0.ln();
    Ok(series
        .intervals()
        .iter()
        .map(|r| {
            let k = r.count;
            let observed = if k > 0.0 {
                k * (ln_l0 - beta * r.center + r.length.ln())
            } else {
                0.0
            };
            observed - ln_gamma(k + 1.0) - lambda0 * r.length * (-beta * r.center).exp()
        })
        .sum())
}

/// Profile score for `beta`:
/// `g(beta) = (sum k t)(sum T e^{-beta t}) - (sum k)(sum t T e^{-beta t})`.
pub fn score_beta(series: &ObservationSeries, beta: f64) -> Result<f64> {
    let total = series.total_count();
    if !(total > 0.0) {
        return Err(Error::Degenerate("no events observed".into()));
    }
    let (mut kt, mut te, mut tte) = (0.0, 0.0, 0.0);
    for r in series.intervals() {
        let w = r.length * (-beta * r.center).exp();
        kt += r.count * r.center;
        te += w;
        tte += r.center * w;
    }
    Ok(kt * te - total * tte)
}

/// `g(beta) / (sum k)` rescaled by a positive factor so that no exponential
/// overflows. Has the same sign and roots as [`score_beta`].
fn scaled_score(series: &ObservationSeries, mean_time: f64, beta: f64) -> f64 {
    let shift = series
        .intervals()
        .iter()
        .map(|r| -beta * r.center)
        .fold(f64::NEG_INFINITY, f64::max);
    series
        .intervals()
        .iter()
        .map(|r| r.length * (-beta * r.center - shift).exp() * (mean_time - r.center))
        .sum()
}

/// Curvature of the log-likelihood in `beta` with `lambda0` fixed.
pub fn fisher_info(series: &ObservationSeries, lambda0: f64, beta: f64) -> Result<f64> {
    check_lambda0(lambda0)?;
    Ok(series
        .intervals()
        .iter()
        .map(|r| lambda0 * r.length * r.center * r.center * (-beta * r.center).exp())
        .sum())
}

/// Maximum-likelihood fit in the series' own time coordinates.
///
/// Use [`crate::model::recenter`] (or [`crate::model::Origin`]) first to pick
/// the time origin; `beta_hat` does not depend on it, `lambda0_hat` and the
/// information do.
pub fn fit_mle(series: &ObservationSeries, settings: &SolverSettings) -> Result<FitResult> {
    settings.check()?;
    series.ensure_valid()?;
    if series.len() < 2 {
        return Err(Error::Degenerate(
            "at least two intervals are needed to estimate a trend".into(),
        ));
    }
    let total = series.total_count();
    if !(total > 0.0) {
        return Err(Error::Degenerate("no events observed".into()));
    }
    let records = series.intervals();
    let last = records.len() - 1;
    if records[1..].iter().all(|r| r.count == 0.0) {
        return Err(Error::Boundary(
            "all events fall in the earliest interval (beta -> -inf)".into(),
        ));
    }
    if records[..last].iter().all(|r| r.count == 0.0) {
        return Err(Error::Boundary(
            "all events fall in the latest interval (beta -> +inf)".into(),
        ));
    }

    let mean_time = records.iter().map(|r| r.count * r.center).sum::<f64>() / total;
    let max_abs_t = records.iter().map(|r| r.center.abs()).fold(0.0, f64::max);
    let limit = MAX_EXPONENT / max_abs_t;
    let g = |beta: f64| scaled_score(series, mean_time, beta);

    let (lo, hi) = match expand_bracket(&g, settings.initial_bracket_halfwidth, limit) {
        Bracket::Found { lo, hi } => (lo, hi),
        Bracket::Exhausted => {
            return Err(Error::Boundary(format!(
                "no root of the score equation with |beta| <= {limit}"
            )))
        }
    };
    let beta_hat = brent(g, lo, hi, settings.tolerance, settings.max_iterations)?;

    let exposure: f64 = records
        .iter()
        .map(|r| r.length * (-beta_hat * r.center).exp())
        .sum();
    let lambda0_hat = total / exposure;
    let information = fisher_info(series, lambda0_hat, beta_hat)?;
    Ok(FitResult::new(
        lambda0_hat,
        beta_hat,
        information,
        series.origin(),
        FitMode::ClassicalMle,
    ))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 0.5 {
        Ok(())
    } else {
        Err(Error::Domain(format!("alpha must lie in (0, 0.5), got {alpha}")))
    }
}

/// Half-width `z_alpha * sigma` of the symmetric normal interval.
pub(crate) fn half_width(fit: &FitResult, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(fit.information > 0.0 && fit.information.is_finite()) {
        return Err(Error::Domain(format!(
            "information must be positive, got {}",
            fit.information
        )));
    }
    Ok(z_alpha(alpha) * fit.information.sqrt().recip())
}

pub(crate) fn normal_interval(
    fit: &FitResult,
    alpha: f64,
    kind: IntervalKind,
) -> Result<IntervalEstimate> {
    let h = half_width(fit, alpha)?;
    Ok(IntervalEstimate {
        lower: fit.beta_hat - h,
        upper: fit.beta_hat + h,
        alpha,
        coverage: 1.0 - 2.0 * alpha,
        kind,
    })
}

/// `[beta_hat - z_alpha sigma, beta_hat + z_alpha sigma]`, coverage `1 - 2 alpha`.
pub fn confidence_interval(fit: &FitResult, alpha: f64) -> Result<IntervalEstimate> {
    normal_interval(fit, alpha, IntervalKind::Confidence)
}

/// One-sided bounds at level `alpha` and the resulting decision.
pub fn trend_test(fit: &FitResult, alpha: f64) -> Result<TrendVerdict> {
    let h = half_width(fit, alpha)?;
    Ok(TrendVerdict::from_bounds(fit.beta_hat - h, fit.beta_hat + h))
}

/// Observed and fitted count of one interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub center: f64,
    pub observed: f64,
    pub expected: f64,
}

/// Expected count `lambda0 T_i exp(-beta t_i)` for every interval of `series`.
///
/// Centers are reported in the series' coordinates; the fit's time origin is
/// reconciled with the series' origin first.
pub fn fitted_curve(fit: &FitResult, series: &ObservationSeries) -> Vec<CurvePoint> {
    let shift = series.origin() - fit.time_origin;
    series
        .intervals()
        .iter()
        .map(|r| CurvePoint {
            center: r.center,
            observed: r.count,
            expected: fit.lambda0_hat * r.length * (-fit.beta_hat * (r.center + shift)).exp(),
        })
        .collect()
}
