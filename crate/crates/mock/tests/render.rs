use panel_imaging::{to_grayscale, warp_perspective, BoundingBox, ImageBuffer, Point2};
use panel_mock::artifacts::{self, seven};
use panel_mock::*;

fn gray_at(img: &ImageBuffer, p: Point2) -> u8 {
    let px = img.pixel(p.x.round() as usize, p.y.round() as usize);
    ((px[0] as u32 * 299 + px[1] as u32 * 587 + px[2] as u32 * 114) / 1000) as u8
}

#[test]
fn empty_panel_is_uniform_background() {
    let spec = PanelSpec::new(32, 24);
    let (img, truth) = render_panel(&spec, sequence_epoch()).unwrap();
    assert!(img.data().chunks(3).all(|p| p == spec.background));
    assert!(truth.entries.is_empty());
    assert!(truth.tilt_homography.is_none());
}

#[test]
fn renders_are_bit_identical() {
    let mut spec = scenes::demo_panel().with_tilt(12.0, -7.0);
    spec.noise = Some(NoiseSpec {
        gaussian_sigma: 3.0,
        glare: Some(Glare { cx: 300.0, cy: 200.0, rx: 60.0, ry: 40.0, intensity: 80.0 }),
    });
    let a = render_panel(&spec, sequence_epoch()).unwrap();
    let b = render_panel(&spec, sequence_epoch()).unwrap();
    assert_eq!(a.0, b.0);
    assert_eq!(a.1, b.1);
}

#[test]
fn truth_mirrors_every_artifact() {
    let spec = scenes::demo_panel();
    let (_, truth) = render_panel(&spec, sequence_epoch()).unwrap();
    assert_eq!(truth.entries.len(), spec.artifacts.len());
    assert_eq!(truth.get("spindle_load").unwrap().as_number(), Some(40.0));
    assert_eq!(truth.get("part_count").unwrap().as_label(), Some("8421"));
    assert_eq!(truth.get("status_light").unwrap().as_label(), Some("green"));
    assert_eq!(truth.get("part").unwrap().as_label(), Some("good"));
    assert_eq!(truth.get("fixtures").unwrap().as_label(), Some("ok"));
}

#[test]
fn gauge_midpoint_needle_points_up() {
    let b = BoundingBox::new(0, 0, 101, 101);
    let img = render_circular_gauge(50.0, CircularGaugeStyle::default(), b.width, b.height).unwrap();
    let c = artifacts::box_center(b);
    let r = artifacts::dial_radius(b);
    // Along the needle (straight up) the face is dark; mirrored below it is light.
    for k in [0.3, 0.5, 0.65] {
        assert!(gray_at(&img, Point2::new(c.x, c.y - k * r)) < 60);
        assert!(gray_at(&img, Point2::new(c.x, c.y + k * r)) > 200);
    }
}

#[test]
fn seven_segment_zero_lights_a_to_f() {
    let (w, h) = (40, 70);
    let img = render_seven_segment("0", w, h).unwrap();
    let lit: Vec<bool> = (0..7)
        .map(|s| {
            let (x0, y0, x1, y1) = seven::segment_rect(s, w as f64 / h as f64);
            let p = Point2::new((x0 + x1) / 2.0 * w as f64 - 0.5, (y0 + y1) / 2.0 * h as f64 - 0.5);
            img.pixel(p.x.round() as usize, p.y.round() as usize)[0] > 200
        })
        .collect();
    assert_eq!(lit, vec![true, true, true, true, true, true, false]);
}

#[test]
fn corrupted_segment_truth() {
    let spec = PanelSpec::new(200, 100).with_artifact(
        "d",
        BoundingBox::new(10, 10, 160, 70),
        MockArtifact::SevenSegment { text: "1234".into(), flips: vec![(1, 'e')] },
    );
    let (_, truth) = render_panel(&spec, sequence_epoch()).unwrap();
    // '2' loses e: {a,b,d,g} is not a digit.
    assert_eq!(truth.get("d").unwrap().as_label(), Some("1?34"));
}

#[test]
fn empty_vessel_surface_is_on_zero_row() {
    let b = BoundingBox::new(0, 0, 60, 200);
    let style = VesselStyle::default();
    let img = render_liquid_vessel(0.0, style.clone(), b.width, b.height).unwrap();
    let g = artifacts::vessel_geometry(b);
    let x = 30;
    let first_liquid = (0..200).find(|&y| img.pixel(x, y) == artifacts::VESSEL_LIQUID).unwrap();
    // The surface edge lies on a pixel boundary half a pixel above the first full liquid row.
    assert_eq!(first_liquid as f64 - 0.5, g.zero_row);
    assert_eq!(artifacts::liquid_surface_row(b, &style, 0.0), g.zero_row);
}

#[test]
fn offset_fixture_is_marked_misaligned() {
    let mut fixtures = scenes::nominal_fixtures();
    fixtures[2].offset = [12.0, 0.0];
    let spec = scenes::demo_panel()
        .with_state("fixtures", StateValue::Fixtures(fixtures))
        .unwrap();
    let (_, truth) = render_panel(&spec, sequence_epoch()).unwrap();
    match truth.get("fixtures").unwrap() {
        TruthState::Fixtures { overall, fixtures } => {
            assert_eq!(overall, "fault");
            let bad: Vec<&str> = fixtures.iter().filter(|f| !f.aligned).map(|f| f.id.as_str()).collect();
            assert_eq!(bad, vec!["f3"]);
        }
        other => panic!("unexpected truth {other:?}"),
    }
}

#[test]
fn overlapping_placements_are_rejected() {
    let spec = PanelSpec::new(100, 100)
        .with_artifact("a", BoundingBox::new(0, 0, 50, 50), MockArtifact::Toggle { state: ToggleState::Up })
        .with_artifact("b", BoundingBox::new(40, 40, 50, 50), MockArtifact::Toggle { state: ToggleState::Up });
    assert!(matches!(render_panel(&spec, sequence_epoch()), Err(MockError::Spec(_))));
}

#[test]
fn out_of_range_state_is_rejected() {
    assert!(render_circular_gauge(101.0, CircularGaugeStyle::default(), 100, 100).is_err());
    assert!(render_knob("TURBO", KnobStyle::default(), 80, 80).is_err());
    let spec = scenes::demo_panel().with_tilt(50.0, 0.0);
    assert!(render_panel(&spec, sequence_epoch()).is_err());
}

/// Mean absolute gray difference over every pixel that lies inside some artifact placement.
fn roi_mean_abs_gray(a: &ImageBuffer, b: &ImageBuffer, rois: &[BoundingBox]) -> f64 {
    let (ga, gb) = (to_grayscale(a).unwrap(), to_grayscale(b).unwrap());
    let (mut total, mut count) = (0u64, 0u64);
    for y in 0..ga.height() {
        for x in 0..ga.width() {
            if rois.iter().any(|r| x >= r.x && x < r.right() && y >= r.y && y < r.bottom()) {
                total += (ga.get(x, y, 0) as i64 - gb.get(x, y, 0) as i64).unsigned_abs();
                count += 1;
            }
        }
    }
    total as f64 / count as f64
}

#[test]
fn tilt_then_correct_restores_artifact_rois() {
    let flat = scenes::demo_panel();
    let rois: Vec<BoundingBox> = flat.artifacts.iter().map(|a| a.placement).collect();
    let (reference, _) = render_panel(&flat, sequence_epoch()).unwrap();
    for (yaw, pitch) in [(10.0, 0.0), (0.0, 10.0), (20.0, 0.0), (0.0, -20.0), (-14.0, 14.0)] {
        let (tilted, truth) = render_panel(&flat.clone().with_tilt(yaw, pitch), sequence_epoch()).unwrap();
        let h = truth.calibration_homography().unwrap();
        let corrected = warp_perspective(&tilted, &h, flat.width, flat.height).unwrap();
        let mae = roi_mean_abs_gray(&corrected, &reference, &rois);
        assert!(mae <= 3.0, "tilt ({yaw}, {pitch}): mean abs diff {mae:.2}");
    }
}

#[test]
fn sequence_of_three_deltas() {
    let base = scenes::gauge_and_light_panel();
    let seq = SequenceSpec::sweep(base, "gauge", 0.0, 100.0, 3, 30);
    let frames: Vec<Frame> = render_sequence(&seq).unwrap().collect::<Result<_>>().unwrap();
    let ms: Vec<i64> = frames.iter().map(|f| (f.timestamp - sequence_epoch()).num_milliseconds()).collect();
    assert_eq!(ms, vec![0, 33, 67]);
    let values: Vec<f64> = frames.iter().map(|f| f.truth.get("gauge").unwrap().as_number().unwrap()).collect();
    assert_eq!(values, vec![0.0, 50.0, 100.0]);
}

#[test]
fn single_spec_is_single_frame() {
    let seq = SequenceSpec { base: scenes::gauge_and_light_panel(), fps: 30, frames: vec![] };
    assert_eq!(render_sequence(&seq).unwrap().count(), 1);
}

#[test]
fn ninety_frames_span_three_seconds() {
    let seq = SequenceSpec::sweep(PanelSpec::new(4, 4), "x", 0.0, 1.0, 0, 30);
    assert_eq!(seq.frames.len(), 0);
    assert_eq!((frame_timestamp(89, 30) - frame_timestamp(0, 30)).num_milliseconds(), 2967);
    assert_eq!((frame_timestamp(90, 30) - frame_timestamp(0, 30)).num_milliseconds(), 3000);
}

#[test]
fn deltas_are_cumulative() {
    let seq = SequenceSpec {
        base: scenes::gauge_and_light_panel(),
        fps: 10,
        frames: vec![
            FrameDelta::set("light", StateValue::Text("yellow".into())),
            FrameDelta::set("gauge", StateValue::Number(30.0)),
        ],
    };
    let frames: Vec<Frame> = render_sequence(&seq).unwrap().collect::<Result<_>>().unwrap();
    assert_eq!(frames[1].truth.get("light").unwrap().as_label(), Some("yellow"));
    assert_eq!(frames[1].truth.get("gauge").unwrap().as_number(), Some(30.0));
}

#[test]
fn panel_spec_json_round_trip() {
    let spec = scenes::demo_panel().with_tilt(5.0, 3.0);
    let json = serde_json::to_string(&spec).unwrap();
    let back: PanelSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, spec);
}
