//! Command-line front end.
//!
//! Exit codes: `0` success (including inconclusive verdicts), `2` bad input
//! or arguments, `3` no estimate possible for the data.

pub mod ingest;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bayes::{fit_map, hpd_interval};
use crate::error::{Error, Result};
use crate::estimate::{confidence_interval, fit_mle, fitted_curve, trend_test, CurvePoint, SolverSettings};
use crate::model::{FitMode, FitResult, ObservationSeries, Origin, WeightMode};
use crate::simcheck::{coverage_experiment, SimulationPlan};
use crate::twosample::{cell_means, two_sample_bayes, two_sample_fit, TwoSampleInput};

use report::{
    AnalysisReport, CoverageCommandReport, FitConfig, InputSummary, ToolInfo, TwoSampleReport,
    TwoSampleSide,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_ESTIMATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cox-trend", version, about = "Trend analysis of rare-event counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the exponential trend model to a count series.
    Fit(FitArgs),
    /// Compare two adjacent periods, classically and with an optional prior.
    TwoSample(TwoSampleArgs),
    /// Monte Carlo check of interval coverage and test size.
    Coverage(CoverageArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PriorMode {
    Augment,
    Blend,
}

impl From<PriorMode> for WeightMode {
    fn from(m: PriorMode) -> Self {
        match m {
            PriorMode::Augment => WeightMode::Augment,
            PriorMode::Blend => WeightMode::Blend,
        }
    }
}

fn parse_origin(s: &str) -> std::result::Result<Origin, String> {
    match s {
        "midpoint" => Ok(Origin::Midpoint),
        "zero" => Ok(Origin::Zero),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .map(Origin::At)
            .ok_or_else(|| format!("expected 'midpoint', 'zero' or a number, got '{other}'")),
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Delimited data file with columns (start,end,count) or (center,length,count).
    pub data_file: PathBuf,
    /// Tail probability per side; the interval covers 1 - 2 alpha.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Time origin: midpoint, zero, or an absolute time.
    #[arg(long, default_value = "midpoint", value_parser = parse_origin)]
    pub origin: Origin,
    /// Prior file with columns (center,a) and optional q.
    #[arg(long)]
    pub prior: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PriorMode::Augment)]
    pub prior_mode: PriorMode,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
    /// Write (center, observed, fitted) rows to this file.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Label for the time axis.
    #[arg(long, default_value = "year")]
    pub time_unit: String,
}

#[derive(Debug, Args)]
pub struct TwoSampleArgs {
    #[arg(long)]
    pub k1: f64,
    #[arg(long)]
    pub k2: f64,
    #[arg(long)]
    pub total_time: f64,
    /// Fraction of the window taken by the first period.
    #[arg(long, default_value_t = 0.5)]
    pub split: f64,
    #[arg(long)]
    pub a1: Option<f64>,
    #[arg(long)]
    pub a2: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub lambda0: f64,
    #[arg(long)]
    pub beta: f64,
    #[arg(long, default_value_t = 10)]
    pub intervals: usize,
    #[arg(long, default_value_t = 1.0)]
    pub interval_length: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub reps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = OutFormat::Text)]
    pub out: OutFormat,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_estimation_failure() {
        EXIT_ESTIMATION
    } else {
        EXIT_INPUT
    }
}

fn render<T: serde::Serialize>(report: &T, out: OutFormat) -> String {
    match out {
        OutFormat::Json => report::to_json(report),
        OutFormat::Text => report::to_text(report),
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn origin_label(origin: Origin) -> String {
    match origin {
        Origin::Midpoint => "midpoint".into(),
        Origin::Zero => "zero".into(),
        Origin::At(t) => t.to_string(),
    }
}

fn write_plot(path: &Path, curve: &[CurvePoint]) -> Result<()> {
    let mut text = String::from("center,observed,fitted\n");
    for p in curve {
        text.push_str(&format!("{},{},{}\n", p.center, p.observed, p.expected));
    }
    std::fs::write(path, text)
        .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display())))
}

pub fn fit_report(args: &FitArgs) -> Result<AnalysisReport> {
    let text = read_file(&args.data_file)?;
    let series = ingest::parse_series(&text, &args.time_unit)?.validated()?;
    let origin = args.origin.resolve(&series);
    let centered = crate::model::recenter(&series, origin);
    let settings = SolverSettings::default();

    let (fit, interval) = match &args.prior {
        None => {
            let fit = fit_mle(&centered, &settings)?;
            (fit, confidence_interval(&fit, args.alpha)?)
        }
        Some(path) => {
            let prior = ingest::parse_prior(&read_file(path)?, args.prior_mode.into())?;
            let fit = fit_map(&centered, &prior.shifted(origin), &settings)?;
            (fit, hpd_interval(&fit, args.alpha)?)
        }
    };
    let verdict = trend_test(&fit, args.alpha)?;
    // `series` has origin 0, so its centers are absolute times.
    let curve = fitted_curve(&fit, &series);
    if let Some(path) = &args.plot {
        write_plot(path, &curve)?;
    }

    Ok(AnalysisReport {
        tool: ToolInfo::default(),
        config: FitConfig {
            data_file: args.data_file.display().to_string(),
            alpha: args.alpha,
            origin: origin_label(args.origin),
            prior_file: args.prior.as_ref().map(|p| p.display().to_string()),
            prior_mode: match args.prior_mode {
                PriorMode::Augment => "augment".into(),
                PriorMode::Blend => "blend".into(),
            },
            out: match args.out {
                OutFormat::Text => "text".into(),
                OutFormat::Json => "json".into(),
            },
            plot: args.plot.as_ref().map(|p| p.display().to_string()),
        },
        input: summarize(&series).expect("validated series is non-empty"),
        fit,
        interval,
        verdict,
        curve,
    })
}

fn side(input: &TwoSampleInput, fit: FitResult, alpha: f64) -> Result<TwoSampleSide> {
    let interval = match fit.mode {
        FitMode::ClassicalMle => confidence_interval(&fit, alpha)?,
        FitMode::BayesMap => hpd_interval(&fit, alpha)?,
    };
    let (m1, m2) = cell_means(input);
    Ok(TwoSampleSide {
        counts: [input.k1, input.k2],
        cell_means: [m1, m2],
        fit,
        interval,
        verdict: trend_test(&fit, alpha)?,
    })
}

pub fn two_sample_report(args: &TwoSampleArgs) -> Result<TwoSampleReport> {
    let input = TwoSampleInput {
        k1: args.k1,
        k2: args.k2,
        total_time: args.total_time,
        split: args.split,
    };
    input.check()?;
    if !(args.alpha > 0.0 && args.alpha < 0.5) {
        return Err(Error::Domain(format!("alpha must lie in (0, 0.5), got {}", args.alpha)));
    }
    let classical = side(&input, two_sample_fit(&input)?, args.alpha)?;
    let pseudo_counts = match (args.a1, args.a2) {
        (None, None) => None,
        (a1, a2) => Some([a1.unwrap_or(0.0), a2.unwrap_or(0.0)]),
    };
    let bayes = match pseudo_counts {
        Some([a1, a2]) => Some(side(
            &input.augmented(a1, a2),
            two_sample_bayes(&input, a1, a2)?,
            args.alpha,
        )?),
        None => None,
    };
    Ok(TwoSampleReport {
        tool: ToolInfo::default(),
        input,
        alpha: args.alpha,
        pseudo_counts,
        classical,
        bayes,
    })
}

pub fn coverage_report(args: &CoverageArgs) -> Result<CoverageCommandReport> {
    if !(args.interval_length > 0.0 && args.interval_length.is_finite()) {
        return Err(Error::InvalidPlan(format!(
            "interval length must be positive, got {}",
            args.interval_length
        )));
    }
    let plan = SimulationPlan::uniform(
        args.lambda0,
        args.beta,
        args.intervals,
        args.interval_length,
        args.reps,
        args.alpha,
        args.seed,
    );
    let report = coverage_experiment(&plan)?;
    Ok(CoverageCommandReport {
        tool: ToolInfo::default(),
        plan,
        report,
    })
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let rendered = match &cli.command {
        Command::Fit(a) => fit_report(a).map(|r| render(&r, a.out)),
        Command::TwoSample(a) => two_sample_report(a).map(|r| render(&r, a.out)),
        Command::Coverage(a) => coverage_report(a).map(|r| render(&r, a.out)),
    };
    match rendered {
        Ok(text) => {
            if stdout.write_all(text.as_bytes()).is_err() {
                return EXIT_INPUT;
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn summarize(series: &ObservationSeries) -> Option<InputSummary> {
    let (window_start, window_end) = series.window()?;
    Some(InputSummary {
        n: series.len(),
        total_count: series.total_count(),
        window_start,
        window_end,
        time_unit: series.time_unit().to_owned(),
    })
}
