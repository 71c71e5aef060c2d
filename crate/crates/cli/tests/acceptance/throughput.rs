use std::time::Duration;

use panel_mock::scenes::gauge_and_light_panel;
use panel_mock::{frame_timestamp, render_panel, LampColor, SequenceSpec, StateValue};
use panel_mtconnect::{follow_adapter, Adapter, AdapterOptions, Agent, ClientOptions, DeviceModel};
use panel_station::{
    calibrate_mock, run_station, CalibrationOptions, FrameSourceConfig, MemorySource, MockSource, RunOptions,
    SourceFrame, Station, StationConfig, StationHandle,
};

use crate::{check, Verdict};

const FPS: u32 = 30;

fn gauge_and_light_config() -> StationConfig {
    let source = FrameSourceConfig::Mock {
        path: "sweep.json".into(),
        fps: FPS,
        repeat: false,
    };
    calibrate_mock(&gauge_and_light_panel(), &CalibrationOptions::new("acceptance", source)).expect("mock panel calibrates")
}

/// Ten seconds of frames at the nominal rate, released in real time.
pub fn a6_throughput() -> Verdict {
    const FRAMES: usize = 300;
    const DISTINCT: usize = 30;
    let base = gauge_and_light_panel();
    let lights = [vec![LampColor::Red], vec![LampColor::Yellow], vec![LampColor::Green], Vec::new()];
    let images: Vec<_> = (0..DISTINCT)
        .map(|i| {
            let spec = base
                .with_state("gauge", StateValue::Number(100.0 * i as f64 / (DISTINCT - 1) as f64))
                .unwrap()
                .with_state("light", StateValue::Lamps(lights[i % lights.len()].clone()))
                .unwrap();
            render_panel(&spec, frame_timestamp(i, FPS)).unwrap().0
        })
        .collect();
    let frames = (0..FRAMES).map(|i| SourceFrame {
        image: images[i % DISTINCT].clone(),
        timestamp: frame_timestamp(i, FPS),
    });
    let handle = StationHandle::new(Station::new(gauge_and_light_config()).unwrap());
    let summary = run_station(
        &handle,
        Box::new(MemorySource::new(frames)),
        RunOptions { pace_fps: Some(FPS) },
        |_, _| {},
    )
    .expect("run completes");
    let l = summary.latency;
    let detail = format!(
        "{} frames at {FPS} fps, {} drops, per-tick p50 {:.2} ms, p95 {:.2} ms, max {:.2} ms (limit p95 < 33 ms, 0 drops)",
        summary.frames, summary.drops, l.p50_ms, l.p95_ms, l.max_ms
    );
    check(summary.drops == 0 && summary.frames == FRAMES as u64 && l.p95_ms < 33.0, detail)
}

async fn get(url: String) -> (u16, String) {
    let resp = reqwest::get(url).await.expect("agent answers");
    (resp.status().as_u16(), resp.text().await.unwrap())
}

fn attr(xml: &str, name: &str) -> u64 {
    let doc = roxmltree::Document::parse(xml).unwrap();
    let header = doc.descendants().find(|n| n.has_tag_name("Header")).unwrap();
    header.attribute(name).unwrap().parse().unwrap()
}

/// A gauge sweep 0 to 100 over 90 frames through pipeline, adapter and agent.
pub fn a9_end_to_end() -> Verdict {
    const FRAMES: usize = 90;
    let rt = tokio::runtime::Runtime::new().unwrap();
    rt.block_on(async {
        let cfg = gauge_and_light_config();
        let adapter = Adapter::new(AdapterOptions::default());
        let adapter_listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let adapter_port = adapter_listener.local_addr().unwrap().port();
        tokio::spawn(adapter.clone().serve(adapter_listener));

        let agent = Agent::new(DeviceModel::from_station(&cfg), 4096);
        let http = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let http_addr = http.local_addr().unwrap();
        let app = agent.router();
        tokio::spawn(async move { axum::serve(http, app).await });
        tokio::spawn(follow_adapter(agent.clone(), "127.0.0.1".into(), adapter_port, ClientOptions::default()));
        for _ in 0..500 {
            if adapter.connection_count() == 1 {
                break;
            }
            tokio::time::sleep(Duration::from_millis(10)).await;
        }
        assert_eq!(adapter.connection_count(), 1, "agent connects to the adapter");

        let seq = SequenceSpec::sweep(gauge_and_light_panel(), "gauge", 0.0, 100.0, FRAMES, FPS);
        let handle = StationHandle::new(Station::new(cfg).unwrap());
        let source = MockSource::new(seq, false).unwrap();
        let publisher = adapter.clone();
        let summary = tokio::task::spawn_blocking(move || {
            let mut emitted = 0usize;
            let summary = run_station(&handle, Box::new(source), RunOptions { pace_fps: Some(FPS) }, |_, readings| {
                emitted += readings.iter().filter(|r| r.artifact_id == "gauge").count();
                publisher.publish_readings(readings);
            })
            .expect("run completes");
            (summary, emitted)
        })
        .await
        .unwrap();
        let (summary, emitted) = summary;

        // Poll /sample in pages until the agent has seen every emitted reading.
        let base = format!("http://{http_addr}");
        let mut values = Vec::new();
        let mut from = 1u64;
        let deadline = tokio::time::Instant::now() + Duration::from_secs(10);
        while values.len() < emitted && tokio::time::Instant::now() < deadline {
            let (status, xml) = get(format!("{base}/sample?from={from}&count=25")).await;
            assert_eq!(status, 200, "{xml}");
            let doc = roxmltree::Document::parse(&xml).unwrap();
            values.extend(
                doc.descendants()
                    .filter(|n| n.attribute("dataItemId") == Some("gauge"))
                    .map(|n| n.text().unwrap_or_default().parse::<f64>().unwrap_or(f64::NAN)),
            );
            let next = attr(&xml, "nextSequence");
            if next == from {
                tokio::time::sleep(Duration::from_millis(20)).await;
            }
            from = next;
        }
        let monotone = values.windows(2).all(|w| w[1] >= w[0]);
        let (first, last) = (values.first().copied().unwrap_or(f64::NAN), values.last().copied().unwrap_or(f64::NAN));
        let detail = format!(
            "{} frames, {} drops, {emitted} gauge readings emitted, {} recovered from /sample, monotone {monotone}, endpoints {first} and {last} (limits 0±2, 100±2)",
            summary.frames,
            summary.drops,
            values.len()
        );
        check(
            !values.is_empty() && values.len() == emitted && monotone && first.abs() <= 2.0 && (last - 100.0).abs() <= 2.0,
            detail,
        )
    })
}
