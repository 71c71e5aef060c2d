//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

mod agent;
mod imaging;
mod panels;
mod throughput;
mod wire;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

/// A criterion's verdict with a one-line measurement summary.
pub type Verdict = Result<String, String>;

pub fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn run(id: &str, title: &str, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    let (tag, detail) = match &verdict {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{id:<4} {tag} {title}: {detail} [{secs:.1} s]");
    verdict.is_ok()
}

fn main() -> ExitCode {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let wanted = |id: &str| filter.is_empty() || filter.iter().any(|f| f == id);
    let criteria: [(&str, &str, fn() -> Verdict); 10] = [
        ("A1", "gauge round-trip", panels::a1_gauges),
        ("A2", "seven-segment", panels::a2_seven_segment),
        ("A3", "discrete artifacts", panels::a3_discrete),
        ("A4", "liquid level", panels::a4_liquid),
        ("A5", "perspective robustness", panels::a5_tilt),
        ("A6", "throughput", throughput::a6_throughput),
        ("A7", "wire protocol", wire::a7_wire),
        ("A8", "agent semantics", agent::a8_agent),
        ("A9", "end-to-end", throughput::a9_end_to_end),
        ("A10", "imaging oracles", imaging::a10_imaging),
    ];
    let mut failed = 0;
    for (id, title, f) in criteria {
        if wanted(id) && !run(id, title, f) {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
