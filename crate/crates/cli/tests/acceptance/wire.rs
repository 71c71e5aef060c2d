use chrono::{DateTime, TimeDelta, TimeZone, Utc};
use panel_mtconnect::{format_data_line, parse_data_line, DataLine, Line};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{check, Verdict};

/// Characters the wire format must escape, plus ordinary and multi-byte ones.
const ALPHABET: &[char] = &['|', '%', '\n', '\r', ' ', 'a', 'Z', '7', '.', '_', '-', ':', 'é', '°', '*'];

fn random_text(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let n = rng.random_range(min..=max);
    (0..n).map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())]).collect()
}

fn ts(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32, ms: i64) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, mo, d, h, mi, s).unwrap() + TimeDelta::milliseconds(ms)
}

fn items(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn canonical_lines() -> Vec<DataLine> {
    vec![
        DataLine::new(ts(2020, 1, 1, 0, 0, 0, 0), items(&[("g1", "25")])),
        DataLine::new(
            ts(2020, 1, 1, 0, 0, 0, 33),
            items(&[("spindle_load", "40.5"), ("status_light", "green")]),
        ),
        DataLine::new(ts(2020, 1, 1, 0, 0, 1, 0), items(&[("g1", "UNAVAILABLE")])),
        DataLine::new(ts(2021, 6, 15, 12, 30, 45, 123), items(&[("program", "A|B\nC 100%")])),
        DataLine::new(
            ts(2024, 2, 29, 23, 59, 59, 999),
            items(&[("fixtures", "ok"), ("fixtures.f1", "aligned"), ("fixtures.f2", "misaligned")]),
        ),
    ]
}

pub fn a7_wire() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for case in 0..10_000 {
        let ms = rng.random_range(0..4_102_444_800_000i64);
        let n = rng.random_range(1..=5);
        let pairs = (0..n).map(|_| (random_text(&mut rng, 1, 10), random_text(&mut rng, 0, 16))).collect();
        let line = DataLine::new(DateTime::from_timestamp_millis(ms).unwrap(), pairs);
        let wire = format_data_line(&line).unwrap();
        let framed = wire.ends_with('\n') && wire.matches('\n').count() == 1;
        if !framed || parse_data_line(&wire) != Ok(Line::Data(line.clone())) {
            failures.push(format!("case {case}: {wire:?}"));
        }
    }

    let golden = include_str!("../../../mtconnect/tests/golden/lines.txt");
    let formatted: String = canonical_lines().iter().map(|l| format_data_line(l).unwrap()).collect();
    let golden_ok = formatted == golden;
    let detail = format!(
        "{} of 10000 random lines round-trip, golden file ({} lines) byte-equal: {golden_ok}{}",
        10_000 - failures.len(),
        golden.lines().count(),
        failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
    );
    check(failures.is_empty() && golden_ok, detail)
}
