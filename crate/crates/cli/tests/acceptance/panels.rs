use std::time::Instant;

use panel_imaging::ImageBuffer;
use panel_mock::artifacts::flipped_digit;
use panel_mock::scenes::{demo_panel, nominal_fixtures, vertical_gauge_panel};
use panel_mock::{
    render_panel, sequence_epoch, GroundTruth, LampColor, MockArtifact, PanelSpec, StateValue, ToggleState, TruthState,
};
use panel_readers::Reading;
use panel_station::{calibrate_mock, CalibrationOptions, FrameSourceConfig, Station};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{check, Verdict};

const TILTS_DEG: [f64; 2] = [10.0, 20.0];

fn station_for(spec: &PanelSpec, keep: &[&str]) -> Station {
    let source = FrameSourceConfig::Mock {
        path: "panel.json".into(),
        fps: 30,
        repeat: false,
    };
    let mut cfg = calibrate_mock(spec, &CalibrationOptions::new("acceptance", source)).expect("mock panel calibrates");
    cfg.artifacts.retain(|a| keep.contains(&a.artifact_id.as_str()));
    Station::new(cfg).expect("calibrated config is valid")
}

fn render(spec: &PanelSpec) -> (ImageBuffer, GroundTruth) {
    render_panel(spec, sequence_epoch()).expect("mock panel renders")
}

fn read(station: &Station, frame: &ImageBuffer) -> Vec<Reading> {
    station.run_tick(frame, sequence_epoch(), 0).expect("frame matches the station")
}

fn reading<'a>(readings: &'a [Reading], id: &str) -> Option<&'a Reading> {
    readings.iter().find(|r| r.artifact_id == id)
}

fn number(readings: &[Reading], id: &str) -> f64 {
    reading(readings, id)
        .and_then(|r| r.value.as_ref())
        .and_then(|v| v.as_number())
        .unwrap_or(f64::NAN)
}

fn text(readings: &[Reading], id: &str) -> Option<String> {
    reading(readings, id)
        .and_then(|r| r.value.as_ref())
        .and_then(|v| v.as_text())
        .map(str::to_string)
}

/// `(min, max)` of a numeric mock artifact.
fn scale(spec: &PanelSpec, id: &str) -> (f64, f64) {
    match &spec.artifact(id).expect("artifact exists").artifact {
        MockArtifact::CircularGauge { style, .. } => (style.min, style.max),
        MockArtifact::LinearGauge { style, .. } => (style.min, style.max),
        MockArtifact::LiquidVessel { style, .. } => (style.min, style.max),
        other => panic!("{id} is not numeric: {other:?}"),
    }
}

/// Worst error in percent of span over `n` evenly spaced values per artifact.
fn sweep_error(spec: &PanelSpec, station: &Station, ids: &[&str], n: usize) -> (f64, String) {
    let mut worst = (-1.0f64, String::new());
    for k in 0..n {
        let mut s = spec.clone();
        for id in ids {
            let (lo, hi) = scale(spec, id);
            s = s.with_state(id, StateValue::Number(lo + (hi - lo) * k as f64 / (n - 1) as f64)).unwrap();
        }
        let (frame, truth) = render(&s);
        let readings = read(station, &frame);
        for id in ids {
            let (lo, hi) = scale(spec, id);
            let want = truth.get(id).and_then(TruthState::as_number).unwrap();
            let got = number(&readings, id);
            let err = (got - want).abs() / (hi - lo) * 100.0;
            // NaN (not found) must count as a failure.
            if !(err <= worst.0) {
                worst = (if err.is_nan() { f64::INFINITY } else { err }, format!("{id} read {got} at {want}"));
            }
        }
    }
    worst
}

fn gauges(tilt: Option<f64>) -> Verdict {
    let tilted = |s: PanelSpec| match tilt {
        Some(t) => s.with_tilt(t, 0.0),
        None => s,
    };
    let demo = tilted(demo_panel());
    let vertical = tilted(vertical_gauge_panel());
    let demo_station = station_for(&demo, &["spindle_load", "feed_rate"]);
    let vertical_station = station_for(&vertical, &["level_bar"]);
    let start = Instant::now();
    let a = sweep_error(&demo, &demo_station, &["spindle_load", "feed_rate"], 21);
    let b = sweep_error(&vertical, &vertical_station, &["level_bar"], 21);
    let secs = start.elapsed().as_secs_f64();
    let worst = if a.0 >= b.0 { a } else { b };
    let detail = format!(
        "max |error| {:.3}% of span (limit 2%; worst {}), 63 readings in {secs:.2} s (limit 10 s)",
        worst.0, worst.1
    );
    check(worst.0 <= 2.0 && secs < 10.0, detail)
}

pub fn a1_gauges() -> Verdict {
    gauges(None)
}

pub fn a2_seven_segment() -> Verdict {
    let spec = demo_panel();
    let station = station_for(&spec, &["part_count"]);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut wrong = Vec::new();
    let mut corrupted = 0;
    for _ in 0..200 {
        let digits: String = (0..4).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect();
        let (frame, _) = render(&spec.with_state("part_count", StateValue::Text(digits.clone())).unwrap());
        let got = text(&read(&station, &frame), "part_count");
        if got.as_deref() != Some(digits.as_str()) {
            wrong.push(format!("{digits} read {got:?}"));
        }

        // Flip one segment that leaves no valid digit behind.
        let at = rng.random_range(0..4);
        let original = digits.as_bytes()[at] as char;
        let candidates: Vec<char> = ('a'..='g')
            .filter(|&s| flipped_digit(original, &[(at, s)], at) == '?')
            .collect();
        let seg = candidates[rng.random_range(0..candidates.len())];
        let mut s = spec.clone();
        s.artifacts.iter_mut().for_each(|a| {
            if let MockArtifact::SevenSegment { text, flips } = &mut a.artifact {
                *text = digits.clone();
                *flips = vec![(at, seg)];
            }
        });
        let mut want: Vec<char> = digits.chars().collect();
        want[at] = '?';
        let want: String = want.into_iter().collect();
        let (frame, truth) = render(&s);
        assert_eq!(truth.get("part_count").and_then(TruthState::as_label), Some(want.as_str()));
        let got = text(&read(&station, &frame), "part_count");
        if got.as_deref() != Some(want.as_str()) {
            wrong.push(format!("{digits} with ({at},{seg}) read {got:?}, want {want}"));
        }
        corrupted += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    let detail = format!(
        "{} of 200 clean and {} of {corrupted} single-flip strings exact, {secs:.2} s (limit 10 s){}",
        200 - wrong.iter().filter(|w| !w.contains("with")).count(),
        corrupted - wrong.iter().filter(|w| w.contains("with")).count(),
        wrong.first().map(|w| format!("; first miss {w}")).unwrap_or_default()
    );
    check(wrong.is_empty() && secs < 10.0, detail)
}

const DISCRETE: [&str; 5] = ["mode", "coolant_switch", "status_light", "fixtures", "part"];

/// Label mismatches of every discrete artifact, fixture slots included.
fn label_mismatches(readings: &[Reading], truth: &GroundTruth) -> Vec<String> {
    let mut out = Vec::new();
    for id in DISCRETE {
        let got = text(readings, id);
        match truth.get(id).unwrap() {
            TruthState::Label(want) if got.as_deref() == Some(want) => {}
            TruthState::Fixtures { overall, fixtures } if got.as_deref() == Some(overall) => {
                for f in fixtures {
                    let slot = format!("{id}.{}", f.id);
                    let want = if f.aligned { "aligned" } else { "misaligned" };
                    if text(readings, &slot).as_deref() != Some(want) {
                        out.push(format!("{slot} read {:?}, true {want}", text(readings, &slot)));
                    }
                }
            }
            want => out.push(format!("{id} read {got:?}, true {want:?}")),
        }
    }
    out
}

fn discrete(tilt: Option<f64>) -> Verdict {
    let base = match tilt {
        Some(t) => demo_panel().with_tilt(t, 0.0),
        None => demo_panel(),
    };
    let station = station_for(&base, &DISCRETE);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut wrong = Vec::new();
    let mut labels = 0;
    for scenario in 0..100 {
        let knob = ["OFF", "LOW", "MED", "HIGH"][rng.random_range(0..4)];
        let toggle = [ToggleState::Up, ToggleState::Down][rng.random_range(0..2)];
        let lamps = match rng.random_range(0..4) {
            3 => Vec::new(),
            i => vec![LampColor::ALL[i]],
        };
        let part = ["unmachined", "partial", "good"][rng.random_range(0..3)];
        let mut fixtures = nominal_fixtures();
        let mut slots: Vec<usize> = (0..6).collect();
        for _ in 0..rng.random_range(0..=2) {
            let f = &mut fixtures[slots.swap_remove(rng.random_range(0..slots.len()))];
            if rng.random_bool(0.5) {
                f.offset = [rng.random_range(10.0..15.0), rng.random_range(-3.0..3.0)];
            } else {
                f.rotation_deg = rng.random_range(25.0..40.0);
            }
        }
        let spec = base
            .with_state("mode", StateValue::Text(knob.into())).unwrap()
            .with_state("coolant_switch", StateValue::Text(toggle.label().into())).unwrap()
            .with_state("status_light", StateValue::Lamps(lamps)).unwrap()
            .with_state("part", StateValue::Text(part.into())).unwrap()
            .with_state("fixtures", StateValue::Fixtures(fixtures)).unwrap();
        let (frame, truth) = render(&spec);
        let readings = read(&station, &frame);
        labels += DISCRETE.len() + 6;
        wrong.extend(label_mismatches(&readings, &truth).into_iter().map(|m| format!("scenario {scenario}: {m}")));
    }
    let detail = format!(
        "{} of {labels} labels correct over 100 scenarios{}",
        labels - wrong.len(),
        wrong.first().map(|w| format!("; first miss {w}")).unwrap_or_default()
    );
    check(wrong.is_empty(), detail)
}

pub fn a3_discrete() -> Verdict {
    discrete(None)
}

pub fn a4_liquid() -> Verdict {
    let spec = demo_panel();
    let station = station_for(&spec, &["coolant_level"]);
    let (worst, at) = sweep_error(&spec, &station, &["coolant_level"], 11);
    check(worst <= 2.0, format!("max |error| {worst:.3}% of span over 11 levels (limit 2%; worst {at})"))
}

pub fn a5_tilt() -> Verdict {
    let mut lines = Vec::new();
    let mut ok = true;
    for t in TILTS_DEG {
        for (name, verdict) in [("gauges", gauges(Some(t))), ("discrete", discrete(Some(t)))] {
            ok &= verdict.is_ok();
            let (Ok(d) | Err(d)) = verdict;
            lines.push(format!("{t}° {name}: {d}"));
        }
    }
    check(ok, lines.join(" | "))
}
