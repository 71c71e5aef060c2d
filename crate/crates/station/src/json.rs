//! The newline-delimited reading stream handed to the adapter.

use chrono::{DateTime, SecondsFormat, Utc};
use panel_readers::{Reading, ReadingKind, ReadingValue};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// One line of the reading stream. Field order is the wire key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReadingRecord {
    pub station_id: String,
    pub artifact_id: String,
    pub kind: ReadingKind,
    pub value: Option<ReadingValue>,
    pub units: String,
    #[serde(serialize_with = "ser_ts", deserialize_with = "de_ts")]
    pub timestamp: DateTime<Utc>,
    pub confidence: f64,
}

/// ISO-8601 UTC with exactly three fractional digits and a `Z` suffix.
pub fn format_timestamp(ts: &DateTime<Utc>) -> String {
    ts.to_rfc3339_opts(SecondsFormat::Millis, true)
}

pub fn parse_timestamp(s: &str) -> Result<DateTime<Utc>, chrono::ParseError> {
    DateTime::parse_from_rfc3339(s).map(|t| t.with_timezone(&Utc))
}

fn ser_ts<S: Serializer>(ts: &DateTime<Utc>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_timestamp(ts))
}

fn de_ts<'de, D: Deserializer<'de>>(d: D) -> Result<DateTime<Utc>, D::Error> {
    let s = String::deserialize(d)?;
    parse_timestamp(&s).map_err(serde::de::Error::custom)
}

impl ReadingRecord {
    pub fn new(station_id: &str, r: &Reading) -> Self {
        Self {
            station_id: station_id.to_string(),
            artifact_id: r.artifact_id.clone(),
            kind: r.kind,
            value: r.value.clone(),
            units: r.units.clone(),
            timestamp: r.timestamp,
            confidence: r.confidence,
        }
    }

    pub fn into_reading(self) -> Reading {
        Reading {
            artifact_id: self.artifact_id,
            kind: self.kind,
            value: self.value,
            units: self.units,
            timestamp: self.timestamp,
            confidence: self.confidence,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reading records always serialize")
    }

    pub fn from_json(line: &str) -> serde_json::Result<Self> {
        serde_json::from_str(line.trim_end_matches(['\r', '\n']))
    }
}

/// A single-line JSON object without the trailing newline.
pub fn reading_to_json(station_id: &str, r: &Reading) -> String {
    ReadingRecord::new(station_id, r).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timestamp_always_has_millis() {
        let ts = parse_timestamp("2020-01-01T00:00:00Z").unwrap();
        assert_eq!(format_timestamp(&ts), "2020-01-01T00:00:00.000Z");
    }
}
