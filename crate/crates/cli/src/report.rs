//! CSV row and JSON report serialization. All formatting is deterministic:
//! floats print with the shortest round-trip representation, infinite PSNR
//! prints as "inf", and JSON maps have sorted keys.

use casir_core::metrics::MetricsReport;
use casir_core::sampler::SamplingReport;
use serde_json::json;

pub const CSV_HEADER: &str = "image,rate%,psnr,ssim,nre,generations,seed";

pub fn fmt_metric(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

pub fn csv_row(image: &str, m: &MetricsReport, generations: u32, seed: u64) -> String {
    format!(
        "{image},{},{},{},{},{generations},{seed}",
        fmt_metric(m.sampling_rate_percent),
        fmt_metric(m.psnr_db),
        fmt_metric(m.ssim),
        fmt_metric(m.nre),
    )
}

pub fn sampling_report_json(report: &SamplingReport, seed: u64) -> serde_json::Value {
    let patches: Vec<serde_json::Value> = report
        .patches
        .iter()
        .map(|p| {
            json!({
                "block_row": p.block_row,
                "block_col": p.block_col,
                "eta": p.eta,
                "sparsity": p.sparsity,
                "random_rate": p.random_rate,
                "edge": p.edge.to_string(),
                "live_cells": p.live_cells,
            })
        })
        .collect();
    let random_rate_hist: Vec<serde_json::Value> = report
        .random_rate_counts
        .iter()
        .map(|(rate, count)| json!({"rate": rate, "count": count}))
        .collect();
    json!({
        "height": report.height,
        "width": report.width,
        "live_cells": report.live_cells,
        "rate_percent": report.rate_percent,
        "seed": seed,
        "eta_tier_counts": report.eta_tier_counts,
        "sparsity_counts": report.sparsity_counts.to_vec(),
        "random_rate_hist": random_rate_hist,
        "patches": patches,
    })
}

pub fn recovery_report_json(
    generations: u32,
    wall_ms: f64,
    initial_dead: usize,
    postprocessed: bool,
) -> serde_json::Value {
    json!({
        "generations": generations,
        "wall_ms": wall_ms,
        "initial_dead_cells": initial_dead,
        "postprocessed": postprocessed,
    })
}
