//! File formats, table rendering and the command-line front end.

pub mod cli;
pub mod files;
pub mod tables;

use crate::verification::SweepRow;

fn show<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

const SWEEP_COLUMNS: [&str; 14] = [
    "family", "size", "m", "K", "N", "T", "q", "attempts", "rate", "c_perp", "margin", "mds", "privacy",
    "correctness",
];

fn sweep_cells(r: &SweepRow) -> Vec<String> {
    let b = r.barrier.as_ref();
    vec![
        r.family.to_string(),
        r.size.to_string(),
        r.m_factor.to_string(),
        r.messages.to_string(),
        r.databases.to_string(),
        r.threshold.to_string(),
        show(r.field_order),
        show(r.attempts),
        show(b.map(|b| b.rate)),
        show(b.map(|b| b.c_perp)),
        show(b.map(|b| b.margin)),
        verdict(r.mds_ok).to_string(),
        verdict(r.privacy_ok).to_string(),
        verdict(r.correctness_ok).to_string(),
    ]
}

/// Markdown table with a trailing `status` column; failed rows carry the error.
pub fn sweep_markdown(rows: &[SweepRow]) -> String {
    let mut out = format!("| {} | status |\n", SWEEP_COLUMNS.join(" | "));
    out.push_str(&format!("|{}\n", " --- |".repeat(SWEEP_COLUMNS.len() + 1)));
    for r in rows {
        let status = match (&r.error, r.ok) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "ok".to_string(),
            (None, false) => "FAILED".to_string(),
        };
        out.push_str(&format!("| {} | {status} |\n", sweep_cells(r).join(" | ")));
    }
    out
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = format!("{},ok,error\n", SWEEP_COLUMNS.join(","));
    for r in rows {
        let err = r.error.as_deref().unwrap_or("").replace('"', "\"\"");
        out.push_str(&format!("{},{},\"{err}\"\n", sweep_cells(r).join(","), r.ok));
    }
    out
}
