//! Domain types shared by all estimators.
//!
//! Times are plain reals in a user-chosen unit. A series carries its own time
//! coordinate system: `origin` is the absolute time that coordinate `0` maps
//! to, so recentering never loses the calendar position of the data.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when checking that adjacent intervals do not overlap.
pub const OVERLAP_TOLERANCE: f64 = 1e-9;

/// One observation interval: center `t`, length `T` and event count `k`.
///
/// Counts are stored as reals. Ingested data are integral, but prior
/// augmentation produces fractional pseudo-observations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalRecord {
    pub center: f64,
    pub length: f64,
    pub count: f64,
}

impl IntervalRecord {
    pub fn new(center: f64, length: f64, count: f64) -> Self {
        Self {
            center,
            length,
            count,
        }
    }

    /// Record covering `[start, end)`.
    pub fn from_bounds(start: f64, end: f64, count: f64) -> Self {
        Self::new(0.5 * (start + end), end - start, count)
    }

    pub fn start(&self) -> f64 {
        self.center - 0.5 * self.length
    }

    pub fn end(&self) -> f64 {
        self.center + 0.5 * self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    NonEmpty,
    FiniteValues,
    PositiveLength,
    NonNegativeCount,
    IncreasingCenters,
    NonOverlapping,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::NonEmpty => "at least one record",
            Rule::FiniteValues => "finite values",
            Rule::PositiveLength => "length > 0",
            Rule::NonNegativeCount => "count >= 0",
            Rule::IncreasingCenters => "centers strictly increasing",
            Rule::NonOverlapping => "intervals non-overlapping",
        };
        f.write_str(s)
    }
}

/// A broken invariant, tied to the offending record when there is one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "record {i}: {}", self.rule),
            None => write!(f, "{}", self.rule),
        }
    }
}

/// Ordered observation intervals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservationSeries {
    intervals: Vec<IntervalRecord>,
    time_unit: String,
    origin: f64,
}

impl ObservationSeries {
    /// Builds a series without checking invariants. Use [`validate`] or
    /// [`ObservationSeries::try_new`] for untrusted input.
    pub fn new(intervals: Vec<IntervalRecord>, time_unit: impl Into<String>) -> Self {
        Self {
            intervals,
            time_unit: time_unit.into(),
            origin: 0.0,
        }
    }

    pub fn try_new(intervals: Vec<IntervalRecord>, time_unit: impl Into<String>) -> Result<Self> {
        let series = Self::new(intervals, time_unit);
        series.ensure_valid()?;
        Ok(series)
    }

    /// Equal-length intervals tiling `[start, start + n * length)` with the given counts.
    pub fn contiguous(start: f64, length: f64, counts: &[f64]) -> Self {
        let intervals = counts
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let lo = start + i as f64 * length;
                IntervalRecord::from_bounds(lo, lo + length, k)
            })
            .collect();
        Self::new(intervals, "year")
    }

    /// Declares the absolute time of coordinate zero without moving any center.
    pub fn with_origin(mut self, origin: f64) -> Self {
        self.origin = origin;
        self
    }

    pub fn intervals(&self) -> &[IntervalRecord] {
        &self.intervals
    }

    pub fn time_unit(&self) -> &str {
        &self.time_unit
    }

    /// Absolute time of coordinate zero.
    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_count(&self) -> f64 {
        self.intervals.iter().map(|r| r.count).sum()
    }

    pub fn total_length(&self) -> f64 {
        self.intervals.iter().map(|r| r.length).sum()
    }

    /// `(earliest start, latest end)` in series coordinates.
    pub fn window(&self) -> Option<(f64, f64)> {
        let first = self.intervals.first()?;
        let last = self.intervals.last()?;
        Some((first.start(), last.end()))
    }

    pub fn validate(&self) -> Vec<Violation> {
        validate(self)
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSeries(violations))
        }
    }

    /// Same intervals with replaced counts.
    pub(crate) fn with_counts(&self, counts: impl IntoIterator<Item = f64>) -> Self {
        let intervals = self
            .intervals
            .iter()
            .zip(counts)
            .map(|(r, k)| IntervalRecord { count: k, ..*r })
            .collect();
        Self {
            intervals,
            time_unit: self.time_unit.clone(),
            origin: self.origin,
        }
    }
}

/// Shifts the time axis so that `origin` (in current coordinates) becomes zero.
pub fn recenter(series: &ObservationSeries, origin: f64) -> ObservationSeries {
    if origin == 0.0 {
        return series.clone();
    }
    ObservationSeries {
        intervals: series
            .intervals
            .iter()
            .map(|r| IntervalRecord {
                center: r.center - origin,
                ..*r
            })
            .collect(),
        time_unit: series.time_unit.clone(),
        origin: series.origin + origin,
    }
}

/// Midpoint of the observation window, in the series' coordinates.
pub fn default_origin(series: &ObservationSeries) -> f64 {
    series
        .window()
        .map(|(start, end)| 0.5 * (start + end))
        .unwrap_or(0.0)
}

/// Collects every broken invariant. Never fails.
pub fn validate(series: &ObservationSeries) -> Vec<Violation> {
    let mut out = Vec::new();
    if series.intervals.is_empty() {
        out.push(Violation {
            index: None,
            rule: Rule::NonEmpty,
        });
        return out;
    }
    for (i, r) in series.intervals.iter().enumerate() {
        let at = |rule| Violation {
            index: Some(i),
            rule,
        };
        if !(r.center.is_finite() && r.length.is_finite() && r.count.is_finite()) {
            out.push(at(Rule::FiniteValues));
            continue;
        }
        if r.length <= 0.0 {
            out.push(at(Rule::PositiveLength));
        }
        if r.count < 0.0 {
            out.push(at(Rule::NonNegativeCount));
        }
        if i == 0 {
            continue;
        }
        let prev = &series.intervals[i - 1];
        if r.center <= prev.center {
            out.push(at(Rule::IncreasingCenters));
        } else if r.center - prev.center < 0.5 * (r.length + prev.length) - OVERLAP_TOLERANCE {
            out.push(at(Rule::NonOverlapping));
        }
    }
    out
}

/// How the time origin of a fit is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Origin {
    /// Midpoint of the observation window (the default).
    Midpoint,
    /// Keep the coordinates as given.
    Zero,
    /// An explicit time in the series' coordinates.
    At(f64),
}

impl Origin {
    pub fn resolve(self, series: &ObservationSeries) -> f64 {
        match self {
            Origin::Midpoint => default_origin(series),
            Origin::Zero => 0.0,
            Origin::At(t) => t,
        }
    }

    pub fn apply(self, series: &ObservationSeries) -> ObservationSeries {
        recenter(series, self.resolve(series))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WeightMode {
    /// Counts become `k + a`.
    Augment,
    /// Counts become `q k + (1 - q) a`.
    Blend,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorEntry {
    pub tau: f64,
    pub a: f64,
}

/// Conjugate prior expressed as pseudo-counts `a` placed at times `tau`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub entries: Vec<PriorEntry>,
    pub weight_mode: WeightMode,
    pub weights: Option<Vec<f64>>,
}

impl PriorSpec {
    pub fn augment(entries: Vec<PriorEntry>) -> Self {
        Self {
            entries,
            weight_mode: WeightMode::Augment,
            weights: None,
        }
    }

    pub fn blend(entries: Vec<PriorEntry>, weights: Vec<f64>) -> Self {
        Self {
            entries,
            weight_mode: WeightMode::Blend,
            weights: Some(weights),
        }
    }

    /// Augment-mode prior with the given pseudo-counts at the series centers.
    pub fn at_centers(series: &ObservationSeries, a: &[f64]) -> Self {
        Self::augment(
            series
                .intervals()
                .iter()
                .zip(a)
                .map(|(r, &a)| PriorEntry { tau: r.center, a })
                .collect(),
        )
    }

    /// Non-informative prior (all pseudo-counts zero).
    pub fn flat(series: &ObservationSeries) -> Self {
        Self::at_centers(series, &vec![0.0; series.len()])
    }

    /// Prior with `tau` moved to a new coordinate system, mirroring [`recenter`].
    pub fn shifted(&self, origin: f64) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|e| PriorEntry {
                    tau: e.tau - origin,
                    a: e.a,
                })
                .collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitMode {
    ClassicalMle,
    BayesMap,
}

/// Fitted `(lambda0, beta)` with the curvature information for `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Intensity per time unit at the time origin.
    pub lambda0_hat: f64,
    /// Trend rate per time unit; positive means a decreasing event rate.
    pub beta_hat: f64,
    pub information: f64,
    /// `information^(-1/2)`, infinite when the information vanishes.
    pub sigma: f64,
    /// Absolute time at which `lambda0_hat` applies.
    pub time_origin: f64,
    pub mode: FitMode,
}

impl FitResult {
    pub fn new(
        lambda0_hat: f64,
        beta_hat: f64,
        information: f64,
        time_origin: f64,
        mode: FitMode,
    ) -> Self {
        let sigma = if information > 0.0 {
            information.sqrt().recip()
        } else {
            f64::INFINITY
        };
        Self {
            lambda0_hat,
            beta_hat,
            information,
            sigma,
            time_origin,
            mode,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IntervalKind {
    Confidence,
    HpdApprox,
}

/// Two-sided interval for `beta` with `alpha` in each tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalEstimate {
    pub lower: f64,
    pub upper: f64,
    pub alpha: f64,
    pub coverage: f64,
    pub kind: IntervalKind,
}

impl IntervalEstimate {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    SignificantDecrease,
    SignificantIncrease,
    Inconclusive,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Decision::SignificantDecrease => "SIGNIFICANT_DECREASE",
            Decision::SignificantIncrease => "SIGNIFICANT_INCREASE",
            Decision::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendVerdict {
    pub u_conf: f64,
    pub o_conf: f64,
    pub decision: Decision,
}

impl TrendVerdict {
    pub fn from_bounds(u_conf: f64, o_conf: f64) -> Self {
        let decision = if u_conf > 0.0 {
            Decision::SignificantDecrease
        } else if o_conf < 0.0 {
            Decision::SignificantIncrease
        } else {
            Decision::Inconclusive
        };
        Self {
            u_conf,
            o_conf,
            decision,
        }
    }
}
