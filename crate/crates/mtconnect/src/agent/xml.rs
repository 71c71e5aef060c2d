//! MTConnectDevices / MTConnectStreams / MTConnectError shaped documents.

use std::fmt::Write;

use chrono::{DateTime, Utc};
use panel_station::format_timestamp;

use super::buffer::Observation;
use super::model::{Category, DataItemDef, DeviceModel};
use crate::error::AgentError;
use crate::wire::UNAVAILABLE;

const DEVICES_NS: &str = "urn:mtconnect.org:MTConnectDevices:1.3";
const STREAMS_NS: &str = "urn:mtconnect.org:MTConnectStreams:1.3";
const ERROR_NS: &str = "urn:mtconnect.org:MTConnectError:1.3";
const SENDER: &str = "panel-sight";
const VERSION: &str = "1.3";

/// Buffer state echoed in every header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeaderInfo {
    pub creation_time: DateTime<Utc>,
    pub instance_id: u64,
    pub buffer_size: usize,
    pub first_sequence: u64,
    pub last_sequence: u64,
    pub next_sequence: u64,
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            '\t' => out.push_str("&#9;"),
            c => out.push(c),
        }
    }
    out
}

/// `CIRCULAR_GAUGE` -> `CircularGauge`.
pub fn element_name(item_type: &str) -> String {
    item_type
        .split('_')
        .filter(|w| !w.is_empty())
        .map(|w| {
            let lower = w.to_ascii_lowercase();
            let mut cs = lower.chars();
            cs.next()
                .map(|c| c.to_ascii_uppercase().to_string() + cs.as_str())
                .unwrap_or_default()
        })
        .collect()
}

fn prolog(out: &mut String) {
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
}

fn base_header(h: &HeaderInfo) -> String {
    format!(
        "creationTime=\"{}\" sender=\"{SENDER}\" instanceId=\"{}\" version=\"{VERSION}\" bufferSize=\"{}\"",
        format_timestamp(&h.creation_time),
        h.instance_id,
        h.buffer_size
    )
}

pub fn probe(model: &DeviceModel, h: &HeaderInfo) -> String {
    let mut out = String::new();
    prolog(&mut out);
    let name = escape(&model.name);
    let _ = writeln!(out, "<MTConnectDevices xmlns=\"{DEVICES_NS}\">");
    let _ = writeln!(out, "  <Header {}/>", base_header(h));
    out.push_str("  <Devices>\n");
    let _ = writeln!(out, "    <Device id=\"{name}\" name=\"{name}\" uuid=\"{name}\">");
    out.push_str("      <DataItems>\n");
    for i in model.items() {
        let id = escape(&i.id);
        let _ = write!(
            out,
            "        <DataItem id=\"{id}\" name=\"{id}\" category=\"{}\" type=\"{}\"",
            i.category.as_str(),
            escape(&i.item_type)
        );
        if !i.units.is_empty() {
            let _ = write!(out, " units=\"{}\"", escape(&i.units));
        }
        out.push_str("/>\n");
    }
    out.push_str("      </DataItems>\n    </Device>\n  </Devices>\n</MTConnectDevices>\n");
    out
}

fn observation_element(out: &mut String, def: &DataItemDef, o: Option<&Observation>, h: &HeaderInfo) {
    let id = escape(&def.id);
    let tag = element_name(&def.item_type);
    let _ = write!(out, "          <{tag} dataItemId=\"{id}\" name=\"{id}\"");
    match o {
        Some(o) => {
            let _ = write!(
                out,
                " timestamp=\"{}\" sequence=\"{}\">{}",
                format_timestamp(&o.timestamp),
                o.sequence,
                escape(&o.value)
            );
        }
        // Never observed: no sequence, stamped with the agent's start.
        None => {
            let _ = write!(out, " timestamp=\"{}\">{UNAVAILABLE}", format_timestamp(&h.creation_time));
        }
    }
    let _ = writeln!(out, "</{tag}>");
}

/// A streams document; `rows` pair each observation (or its absence) with
/// the item it belongs to and are emitted in the given order.
pub fn streams(model: &DeviceModel, h: &HeaderInfo, rows: &[(&DataItemDef, Option<&Observation>)]) -> String {
    let mut out = String::new();
    prolog(&mut out);
    let name = escape(&model.name);
    let _ = writeln!(out, "<MTConnectStreams xmlns=\"{STREAMS_NS}\">");
    let _ = writeln!(
        out,
        "  <Header {} firstSequence=\"{}\" lastSequence=\"{}\" nextSequence=\"{}\"/>",
        base_header(h),
        h.first_sequence,
        h.last_sequence,
        h.next_sequence
    );
    out.push_str("  <Streams>\n");
    let _ = writeln!(out, "    <DeviceStream name=\"{name}\" uuid=\"{name}\">");
    let _ = writeln!(out, "      <ComponentStream component=\"Device\" name=\"{name}\" componentId=\"{name}\">");
    for (category, wrapper) in [(Category::Sample, "Samples"), (Category::Event, "Events")] {
        let mut group = rows.iter().filter(|(d, _)| d.category == category).peekable();
        if group.peek().is_none() {
            continue;
        }
        let _ = writeln!(out, "        <{wrapper}>");
        for (def, o) in group {
            observation_element(&mut out, def, *o, h);
        }
        let _ = writeln!(out, "        </{wrapper}>");
    }
    out.push_str("      </ComponentStream>\n    </DeviceStream>\n  </Streams>\n</MTConnectStreams>\n");
    out
}

pub fn error(e: &AgentError, h: &HeaderInfo) -> String {
    let mut out = String::new();
    prolog(&mut out);
    let _ = writeln!(out, "<MTConnectError xmlns=\"{ERROR_NS}\">");
    let _ = writeln!(out, "  <Header {}/>", base_header(h));
    out.push_str("  <Errors>\n");
    let _ = writeln!(out, "    <Error errorCode=\"{}\">{}</Error>", e.code(), escape(&e.to_string()));
    out.push_str("  </Errors>\n</MTConnectError>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_names_are_pascal_case() {
        assert_eq!(element_name("CIRCULAR_GAUGE"), "CircularGauge");
        assert_eq!(element_name("KNOB"), "Knob");
    }

    #[test]
    fn escapes_markup() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }
}
