//! Persistent run reports: a commented header echoing everything needed to
//! re-run, one JSON record per line, and a summary block.

use std::fmt::Write as _;

use crate::bounds::chain::main_delta_chain;
use crate::config::RunConfig;
use crate::elliptic::PointVector;
use crate::scan::ScanOutput;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn comment_block(out: &mut String, text: &str) {
    for line in text.lines() {
        if line.is_empty() {
            out.push_str("#\n");
        } else {
            writeln!(out, "# {line}").unwrap();
        }
    }
}

/// Renders a scan run. The output depends only on its inputs.
pub fn render_scan_report(cfg: &RunConfig, points: &[PointVector], out: &ScanOutput) -> String {
    let mut s = String::new();
    writeln!(s, "# ellsub scan report").unwrap();
    writeln!(s, "# version = {VERSION}").unwrap();
    writeln!(s, "# --- config ---").unwrap();
    comment_block(&mut s, &cfg.to_toml());
    let sc = cfg.scan_config();
    writeln!(s, "# --- thresholds ---").unwrap();
    writeln!(
        s,
        "# K = {}, eps = {}, r = {}, M_cap = {}, compare_tol = {}, height_tol = {}, canonical_only = {}, budget = {}",
        sc.k,
        sc.eps,
        sc.r,
        sc.m_cap,
        sc.tol,
        cfg.height_tol(),
        sc.canonical_only,
        sc.budget
    )
    .unwrap();
    writeln!(s, "# threshold(phi) = (g - r + 1) * H(phi) * eps").unwrap();
    writeln!(s, "# --- bounds ---").unwrap();
    match cfg.bound_params().and_then(|p| main_delta_chain(&p)) {
        Ok(rep) => comment_block(&mut s, &rep.to_text()),
        Err(e) => writeln!(s, "# unavailable: {e}").unwrap(),
    }
    writeln!(s, "# --- points ({}) ---", points.len()).unwrap();
    for (i, p) in points.iter().enumerate() {
        writeln!(s, "# point {i} = {p}").unwrap();
    }
    writeln!(s, "# --- records ---").unwrap();
    for r in &out.records {
        writeln!(s, "{}", serde_json::to_string(r).expect("records serialize")).unwrap();
    }
    writeln!(s, "# --- summary ---").unwrap();
    writeln!(s, "{}", serde_json::json!({ "summary": out.summary })).unwrap();
    s
}
