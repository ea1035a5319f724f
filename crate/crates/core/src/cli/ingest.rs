//! Delimited-text input files.
//!
//! Data files have a header row and three columns, either
//! `start,end,count` or `center,length,count`. Prior files have `center,a`
//! and an optional `q` column. The delimiter is `,`, `;` or tab, detected from
//! the header. Blank lines and lines starting with `#` are skipped. Only `.`
//! is accepted as decimal separator.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{IntervalRecord, ObservationSeries, PriorEntry, PriorSpec, WeightMode};

/// A parsed data file plus the line number of every record.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSeries {
    pub series: ObservationSeries,
    pub lines: Vec<u64>,
}

impl ParsedSeries {
    /// Checks the series invariants, naming file lines in the error.
    pub fn validated(self) -> Result<ObservationSeries> {
        let violations = self.series.validate();
        if violations.is_empty() {
            return Ok(self.series);
        }
        let msg = violations
            .iter()
            .map(|v| match v.index {
                Some(i) => format!("row {}: {}", self.lines[i], v.rule),
                None => v.rule.to_string(),
            })
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::Parse(format!("invalid data: {msg}")))
    }
}

fn detect_delimiter(text: &str) -> char {
    let header = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if header.contains(';') {
        ';'
    } else if header.contains('\t') {
        '\t'
    } else {
        ','
    }
}

fn looks_like_comma_decimal(field: &str) -> bool {
    let f = field.trim().trim_start_matches(['+', '-']);
    match f.split_once(',') {
        Some((a, b)) => {
            !a.is_empty()
                && !b.is_empty()
                && a.chars().all(|c| c.is_ascii_digit())
                && b.chars().all(|c| c.is_ascii_digit())
        }
        None => false,
    }
}

struct Table {
    columns: HashMap<String, usize>,
    rows: Vec<(u64, Vec<String>)>,
}

fn read_table(text: &str, what: &str) -> Result<Table> {
    let delimiter = detect_delimiter(text);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i as u64 + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let split = |l: &str| -> Vec<String> {
        l.split(delimiter).map(|f| f.trim().to_owned()).collect()
    };

    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse(format!("{what}: missing header row")));
    };
    let headers = split(header);
    let mut columns = HashMap::new();
    for (i, h) in headers.iter().enumerate() {
        let name = h.to_ascii_lowercase();
        if name.parse::<f64>().is_ok() {
            return Err(Error::Parse(format!(
                "{what}: header row required, found numeric field '{h}'"
            )));
        }
        if columns.insert(name, i).is_some() {
            return Err(Error::Parse(format!("{what}: duplicate column '{h}'")));
        }
    }

    let mut rows = Vec::new();
    for (line, text) in lines {
        let fields = split(text);
        if fields.len() != headers.len() {
            let hint = if delimiter == ',' {
                " (comma decimal separators are not supported; use '.')"
            } else {
                ""
            };
            return Err(Error::Parse(format!(
                "{what}: row {line}: expected {} fields, found {}{hint}",
                headers.len(),
                fields.len()
            )));
        }
        rows.push((line, fields));
    }
    Ok(Table { columns, rows })
}

fn parse_real(field: &str, line: u64, column: &str, what: &str) -> Result<f64> {
    if looks_like_comma_decimal(field) {
        return Err(Error::Parse(format!(
            "{what}: row {line}: column '{column}' value '{field}' uses a comma decimal separator; use '.'"
        )));
    }
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Parse(format!(
            "{what}: row {line}: column '{column}' is not a number: '{field}'"
        ))),
    }
}

fn parse_count(field: &str, line: u64, what: &str) -> Result<f64> {
    if let Ok(k) = field.parse::<u64>() {
        return Ok(k as f64);
    }
    parse_real(field, line, "count", what)?;
    Err(Error::Parse(format!(
        "{what}: row {line}: count must be a nonnegative integer, got '{field}'"
    )))
}

/// Parses a data file. The result still needs [`ParsedSeries::validated`].
pub fn parse_series(text: &str, time_unit: &str) -> Result<ParsedSeries> {
    const WHAT: &str = "data";
    let table = read_table(text, WHAT)?;
    let has = |c: &str| table.columns.contains_key(c);
    let bounds = has("start") && has("end");
    let centered = has("center") && has("length");
    if table.columns.len() != 3 || !has("count") || bounds == centered {
        let mut found: Vec<_> = table.columns.keys().cloned().collect();
        found.sort();
        return Err(Error::Parse(format!(
            "{WHAT}: columns must be exactly (start, end, count) or (center, length, count); found ({})",
            found.join(", ")
        )));
    }
    let (a, b) = if bounds {
        ("start", "end")
    } else {
        ("center", "length")
    };
    let (ia, ib, ik) = (table.columns[a], table.columns[b], table.columns["count"]);

    let mut intervals = Vec::with_capacity(table.rows.len());
    let mut lines = Vec::with_capacity(table.rows.len());
    for (line, row) in &table.rows {
        let x = parse_real(&row[ia], *line, a, WHAT)?;
        let y = parse_real(&row[ib], *line, b, WHAT)?;
        let k = parse_count(&row[ik], *line, WHAT)?;
        intervals.push(if bounds {
            IntervalRecord::from_bounds(x, y, k)
        } else {
            IntervalRecord::new(x, y, k)
        });
        lines.push(*line);
    }
    if intervals.is_empty() {
        return Err(Error::Parse(format!("{WHAT}: no data rows")));
    }
    Ok(ParsedSeries {
        series: ObservationSeries::new(intervals, time_unit),
        lines,
    })
}

/// Parses a prior file in absolute time. Blend mode requires the `q` column.
pub fn parse_prior(text: &str, mode: WeightMode) -> Result<PriorSpec> {
    const WHAT: &str = "prior";
    let table = read_table(text, WHAT)?;
    let (Some(&ic), Some(&ia)) = (table.columns.get("center"), table.columns.get("a")) else {
        return Err(Error::Parse(format!(
            "{WHAT}: columns (center, a) and optional q are required"
        )));
    };
    let iq = table.columns.get("q").copied();
    if table.columns.len() != 2 + iq.is_some() as usize {
        return Err(Error::Parse(format!(
            "{WHAT}: unexpected columns; allowed are center, a, q"
        )));
    }
    let mut entries = Vec::new();
    let mut weights = Vec::new();
    for (line, row) in &table.rows {
        let tau = parse_real(&row[ic], *line, "center", WHAT)?;
        let a = parse_real(&row[ia], *line, "a", WHAT)?;
        if a < 0.0 {
            return Err(Error::Parse(format!(
                "{WHAT}: row {line}: pseudo-count a must be >= 0, got {a}"
            )));
        }
        entries.push(PriorEntry { tau, a });
        if let Some(iq) = iq {
            let q = parse_real(&row[iq], *line, "q", WHAT)?;
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::Parse(format!(
                    "{WHAT}: row {line}: weight q must lie in [0, 1], got {q}"
                )));
            }
            weights.push(q);
        }
    }
    match mode {
        WeightMode::Augment => Ok(PriorSpec::augment(entries)),
        WeightMode::Blend if iq.is_some() => Ok(PriorSpec::blend(entries, weights)),
        WeightMode::Blend => Err(Error::PriorMode(
            "blend mode requires a 'q' column in the prior file".into(),
        )),
    }
}
