#![allow(dead_code)]

use std::net::SocketAddr;
use std::sync::Arc;

use panel_mtconnect::{Agent, DataItemDef, DeviceModel};
use panel_readers::ReadingKind;

pub fn model() -> DeviceModel {
    DeviceModel::new(
        "s1",
        vec![
            DataItemDef::for_kind("g1", ReadingKind::CircularGauge, "psi"),
            DataItemDef::for_kind("light", ReadingKind::SafetyLight, ""),
            DataItemDef::for_kind("mode", ReadingKind::Knob, ""),
        ],
    )
    .unwrap()
}

pub async fn serve_agent(agent: &Arc<Agent>) -> SocketAddr {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    let app = agent.router();
    tokio::spawn(async move { axum::serve(listener, app).await.unwrap() });
    addr
}

pub struct XmlResponse {
    pub status: u16,
    pub content_type: String,
    pub body: String,
}

pub async fn get(addr: SocketAddr, path: &str) -> XmlResponse {
    let resp = reqwest::get(format!("http://{addr}{path}")).await.unwrap();
    XmlResponse {
        status: resp.status().as_u16(),
        content_type: resp
            .headers()
            .get("content-type")
            .map(|v| v.to_str().unwrap().to_string())
            .unwrap_or_default(),
        body: resp.text().await.unwrap(),
    }
}

/// `(dataItemId, sequence, value)` of every observation element, in document order.
pub fn observations(xml: &str) -> Vec<(String, Option<u64>, String)> {
    let doc = roxmltree::Document::parse(xml).unwrap();
    doc.descendants()
        .filter(|n| n.has_attribute("dataItemId"))
        .map(|n| {
            (
                n.attribute("dataItemId").unwrap().to_string(),
                n.attribute("sequence").map(|s| s.parse().unwrap()),
                n.text().unwrap_or_default().to_string(),
            )
        })
        .collect()
}

pub fn header_attr(xml: &str, name: &str) -> u64 {
    let doc = roxmltree::Document::parse(xml).unwrap();
    let header = doc.descendants().find(|n| n.has_tag_name("Header")).unwrap();
    header.attribute(name).unwrap().parse().unwrap()
}

pub fn error_code(xml: &str) -> String {
    let doc = roxmltree::Document::parse(xml).unwrap();
    let e = doc.descendants().find(|n| n.has_tag_name("Error")).unwrap();
    e.attribute("errorCode").unwrap().to_string()
}
