//! The adapter line format: `<timestamp>|<id>|<value>[|<id>|<value>...]\n`.
//!
//! `%`, `|`, CR and LF inside ids and values are percent-escaped so a line
//! never contains a bare separator or terminator.

use chrono::{DateTime, Utc};
use panel_readers::{Reading, ReadingValue};
use panel_station::{format_timestamp, parse_timestamp};

use crate::error::WireError;

/// Value reported for an item whose state is unknown.
pub const UNAVAILABLE: &str = "UNAVAILABLE";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataLine {
    pub timestamp: DateTime<Utc>,
    pub items: Vec<(String, String)>,
}

impl DataLine {
    pub fn new(timestamp: DateTime<Utc>, items: Vec<(String, String)>) -> Self {
        Self { timestamp, items }
    }
}

/// One parsed input line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Line {
    Data(DataLine),
    /// A `* ...` line, with the text after the marker.
    Heartbeat(String),
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '%' => out.push_str("%25"),
            '|' => out.push_str("%7C"),
            '\n' => out.push_str("%0A"),
            '\r' => out.push_str("%0D"),
            c => out.push(c),
        }
    }
    out
}

pub fn unescape(s: &str) -> Result<String, WireError> {
    if !s.contains('%') {
        return Ok(s.to_string());
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(i) = rest.find('%') {
        out.push_str(&rest[..i]);
        let c = match rest.get(i + 1..i + 3) {
            Some("25") => '%',
            Some("7C" | "7c") => '|',
            Some("0A" | "0a") => '\n',
            Some("0D" | "0d") => '\r',
            _ => return Err(WireError::BadEscape(s.to_string())),
        };
        out.push(c);
        rest = &rest[i + 3..];
    }
    out.push_str(rest);
    Ok(out)
}

/// The wire bytes of a line, newline included.
pub fn format_data_line(line: &DataLine) -> Result<String, WireError> {
    if line.items.is_empty() {
        return Err(WireError::NoItems);
    }
    let mut out = format_timestamp(&line.timestamp);
    for (id, value) in &line.items {
        out.push('|');
        out.push_str(&escape(id));
        out.push('|');
        out.push_str(&escape(value));
    }
    out.push('\n');
    Ok(out)
}

/// Parses one line; a trailing LF or CRLF is ignored.
pub fn parse_data_line(line: &str) -> Result<Line, WireError> {
    let line = line.strip_suffix('\n').unwrap_or(line);
    let line = line.strip_suffix('\r').unwrap_or(line);
    if let Some(rest) = line.strip_prefix('*') {
        return Ok(Line::Heartbeat(rest.trim().to_string()));
    }
    let mut fields = line.split('|');
    let ts = fields.next().unwrap_or_default();
    let timestamp = parse_timestamp(ts).map_err(|_| WireError::BadTimestamp(ts.to_string()))?;
    let rest: Vec<&str> = fields.collect();
    if rest.is_empty() {
        return Err(WireError::NoItems);
    }
    if rest.len() % 2 != 0 {
        return Err(WireError::OddFields(rest.len() + 1));
    }
    let items = rest
        .chunks(2)
        .map(|kv| Ok((unescape(kv[0])?, unescape(kv[1])?)))
        .collect::<Result<_, WireError>>()?;
    Ok(Line::Data(DataLine { timestamp, items }))
}

/// `%.6g`: at most six significant digits, trailing zeros dropped.
pub fn format_number(v: f64) -> String {
    if !v.is_finite() {
        return UNAVAILABLE.to_string();
    }
    if v == 0.0 {
        return "0".to_string();
    }
    // Rounding to six digits first fixes the exponent (9999995 -> 1.00000e7).
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("{:e} always has an exponent");
    let exp: i32 = exp.parse().expect("{:e} exponents are integers");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa.to_string()), exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// The `(id, value)` item for a reading; not-found readings are `UNAVAILABLE`.
pub fn reading_item(r: &Reading) -> (String, String) {
    let value = match &r.value {
        None => UNAVAILABLE.to_string(),
        Some(ReadingValue::Number(v)) => format_number(*v),
        Some(ReadingValue::Text(s)) => s.clone(),
    };
    (r.artifact_id.clone(), value)
}

pub fn reading_to_data_line(r: &Reading) -> DataLine {
    DataLine::new(r.timestamp, vec![reading_item(r)])
}

/// Readings folded into lines, consecutive readings with equal timestamps
/// sharing one line. Order is preserved.
pub fn readings_to_data_lines(readings: &[Reading]) -> Vec<DataLine> {
    let mut out: Vec<DataLine> = Vec::new();
    for r in readings {
        match out.last_mut() {
            Some(l) if l.timestamp == r.timestamp => l.items.push(reading_item(r)),
            _ => out.push(reading_to_data_line(r)),
        }
    }
    out
}
