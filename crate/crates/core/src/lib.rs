//! Trend analysis of rare-event count series.
//!
//! Counts in consecutive time intervals are modelled as independent Poisson
//! variables whose intensity decays exponentially in time,
//! `lambda_i = lambda0 * T_i * exp(-beta * t_i)`. The crate provides
//! maximum-likelihood and conjugate-prior (posterior mode) estimates of the
//! trend `beta`, normal-approximation intervals and a significance test, a
//! closed-form two-period comparison, and a Monte Carlo harness that checks
//! the approximations on simulated data.

pub mod bayes;
pub mod cli;
pub mod error;
pub mod estimate;
pub mod model;
pub mod quantile;
pub mod roots;
pub mod simcheck;
pub mod twosample;

pub use error::{Error, Result};
pub use estimate::{
    confidence_interval, fisher_info, fit_mle, fitted_curve, log_likelihood, score_beta,
    trend_test, CurvePoint, SolverSettings,
};
pub use model::{
    default_origin, recenter, validate, Decision, FitMode, FitResult, IntervalEstimate,
    IntervalKind, IntervalRecord, ObservationSeries, Origin, PriorEntry, PriorSpec, TrendVerdict,
    WeightMode,
};
