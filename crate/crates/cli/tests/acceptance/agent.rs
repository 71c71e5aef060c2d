use std::collections::BTreeMap;

use chrono::DateTime;
use panel_mtconnect::{Agent, DataItemDef, DataLine, DeviceModel};
use panel_readers::ReadingKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{check, Verdict};

const CAPACITY: usize = 256;
const APPENDS: usize = 1000;

struct Page {
    status: u16,
    header: BTreeMap<String, u64>,
    /// `(sequence, dataItemId, value)` in document order.
    observations: Vec<(u64, String, String)>,
    error_code: Option<String>,
}

async fn fetch(base: &str, path: &str) -> Page {
    let resp = reqwest::get(format!("{base}{path}")).await.expect("agent answers");
    let status = resp.status().as_u16();
    let xml = resp.text().await.unwrap();
    let doc = roxmltree::Document::parse(&xml).unwrap();
    let header = doc
        .descendants()
        .find(|n| n.has_tag_name("Header"))
        .map(|h| {
            h.attributes()
                .filter_map(|a| a.value().parse().ok().map(|v| (a.name().to_string(), v)))
                .collect()
        })
        .unwrap_or_default();
    let observations = doc
        .descendants()
        .filter(|n| n.has_attribute("dataItemId") && n.has_attribute("sequence"))
        .map(|n| {
            (
                n.attribute("sequence").unwrap().parse().unwrap(),
                n.attribute("dataItemId").unwrap().to_string(),
                n.text().unwrap_or_default().to_string(),
            )
        })
        .collect();
    let error_code = doc
        .descendants()
        .find(|n| n.has_tag_name("Error"))
        .and_then(|n| n.attribute("errorCode"))
        .map(str::to_string);
    Page {
        status,
        header,
        observations,
        error_code,
    }
}

pub fn a8_agent() -> Verdict {
    let ids: Vec<String> = (0..5).map(|i| format!("item{i}")).collect();
    let model = DeviceModel::new(
        "acceptance",
        ids.iter().map(|id| DataItemDef::for_kind(id, ReadingKind::Toggle, "")).collect(),
    )
    .unwrap();
    let agent = Agent::new(model, CAPACITY);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut log = Vec::with_capacity(APPENDS);
    for i in 0..APPENDS {
        let id = ids[rng.random_range(0..ids.len())].clone();
        let value = rng.random_range(0..1000u32).to_string();
        let line = DataLine::new(DateTime::from_timestamp_millis(i as i64).unwrap(), vec![(id.clone(), value.clone())]);
        assert_eq!(agent.append(&line).appended, 1);
        log.push((i as u64 + 1, id, value));
    }
    let retained = log[APPENDS - CAPACITY..].to_vec();

    let rt = tokio::runtime::Runtime::new().unwrap();
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let app = agent.router();
        tokio::spawn(async move { axum::serve(listener, app).await });

        // (i) cursor walk with random page sizes.
        let first = fetch(&base, "/current").await.header["firstSequence"];
        let mut walked = Vec::new();
        let mut cursor = first;
        loop {
            let count = rng.random_range(1..=40);
            let page = fetch(&base, &format!("/sample?from={cursor}&count={count}")).await;
            assert_eq!(page.status, 200);
            if page.observations.is_empty() {
                break;
            }
            walked.extend(page.observations);
            cursor = page.header["nextSequence"];
        }
        let walk_ok = walked == retained;

        // (ii) current equals the fold of the samples.
        let fold: BTreeMap<String, String> = walked.iter().map(|(_, id, v)| (id.clone(), v.clone())).collect();
        let current: BTreeMap<String, String> = fetch(&base, "/current")
            .await
            .observations
            .into_iter()
            .map(|(_, id, v)| (id, v))
            .collect();
        let fold_ok = current == fold;

        // (iii) anything before the window is out of range.
        let stale = fetch(&base, &format!("/sample?from={}&count=1", first - 1)).await;
        let range_ok = stale.status == 404 && stale.error_code.as_deref() == Some("OUT_OF_RANGE");

        let detail = format!(
            "walk reconstructed {} of {CAPACITY} retained (exact: {walk_ok}), current == fold: {fold_ok}, from={} gives {} {:?}",
            walked.len(),
            first - 1,
            stale.status,
            stale.error_code
        );
        check(first == (APPENDS - CAPACITY) as u64 + 1 && walk_ok && fold_ok && range_ok, detail)
    })
}
