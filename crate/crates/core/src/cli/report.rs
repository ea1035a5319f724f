//! Report documents and their JSON / aligned-text renderings.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::estimate::CurvePoint;
use crate::model::{FitResult, IntervalEstimate, TrendVerdict};
use crate::simcheck::{CoverageReport, SimulationPlan};
use crate::twosample::TwoSampleInput;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub data_file: String,
    pub alpha: f64,
    pub origin: String,
    pub prior_file: Option<String>,
    pub prior_mode: String,
    pub out: String,
    pub plot: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputSummary {
    pub n: usize,
    pub total_count: f64,
    pub window_start: f64,
    pub window_end: f64,
    pub time_unit: String,
}

/// Output of the `fit` command. Curve centers are absolute times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub config: FitConfig,
    pub input: InputSummary,
    pub fit: FitResult,
    pub interval: IntervalEstimate,
    pub verdict: TrendVerdict,
    pub curve: Vec<CurvePoint>,
}

/// One column group of a two-period comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleSide {
    pub counts: [f64; 2],
    pub cell_means: [f64; 2],
    pub fit: FitResult,
    pub interval: IntervalEstimate,
    pub verdict: TrendVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoSampleReport {
    pub tool: ToolInfo,
    pub input: TwoSampleInput,
    pub alpha: f64,
    pub pseudo_counts: Option<[f64; 2]>,
    pub classical: TwoSampleSide,
    pub bayes: Option<TwoSampleSide>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageCommandReport {
    pub tool: ToolInfo,
    pub plan: SimulationPlan,
    pub report: CoverageReport,
}

/// Pretty JSON with object keys in sorted order.
pub fn to_json<T: Serialize>(report: &T) -> String {
    // serde_json::Value keeps object keys in a BTreeMap, so this sorts them.
    let value = serde_json::to_value(report).expect("reports are always serializable");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&key, v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

/// One `key  value` line per leaf of the JSON document, keys aligned.
pub fn to_text<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports are always serializable");
    let mut rows = Vec::new();
    flatten("", &value, &mut rows);
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}
