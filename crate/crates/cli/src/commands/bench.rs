//! `casir bench`: run the full pipeline over a corpus directory, write
//! per-image CSV rows plus aggregate rows, and optionally sweep single
//! parameters or compare against the matched-rate random baseline.

use std::path::{Path, PathBuf};

use casir_core::image::GrayImage;
use rayon::prelude::*;

use super::{ensure_out_dir, file_stem, read_input_pgm, write_bytes};
use crate::config::Params;
use crate::pipeline::{run_adaptive, run_baseline};
use crate::report::{csv_row, fmt_metric, CSV_HEADER};
use crate::{AppError, AppResult};

pub struct BenchOpts {
    pub out_dir: PathBuf,
    pub with_baseline: bool,
    pub no_postprocess: bool,
    pub sweep_c: Vec<f64>,
    pub sweep_tau: Vec<f64>,
    pub sweep_rho: Vec<f64>,
    pub sweep_noise_var: Vec<f64>,
}

#[derive(Debug, Clone)]
struct Row {
    name: String,
    rate: f64,
    psnr: f64,
    ssim: f64,
    nre: f64,
    generations: u32,
}

pub fn run(corpus: &Path, params: &Params, opts: &BenchOpts) -> AppResult<()> {
    let images = load_corpus(corpus)?;
    ensure_out_dir(&opts.out_dir)?;

    let rows = run_corpus(&images, params, opts.no_postprocess)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for row in &rows {
        csv.push_str(&row_line(row, params.seed));
        csv.push('\n');
    }
    csv.push_str(&aggregate_lines(&rows, params.seed));
    write_bytes(&opts.out_dir.join("bench.csv"), csv.as_bytes())?;

    let (mean_rate, mean_psnr) = (mean(&rows, |r| r.rate), mean(&rows, |r| r.psnr));
    println!(
        "{} images: mean rate {mean_rate} %, mean psnr {mean_psnr} dB",
        rows.len()
    );

    if opts.with_baseline {
        let baseline = run_matched_baseline(&images, &rows, params, opts.no_postprocess)?;
        let mut csv = String::from(CSV_HEADER);
        csv.push('\n');
        for row in &baseline {
            csv.push_str(&row_line(row, params.seed));
            csv.push('\n');
        }
        csv.push_str(&aggregate_lines(&baseline, params.seed));
        write_bytes(&opts.out_dir.join("baseline.csv"), csv.as_bytes())?;
        println!(
            "matched-rate random baseline: mean psnr {} dB",
            mean(&baseline, |r| r.psnr)
        );
    }

    run_sweep(
        &images,
        params,
        "c",
        &opts.sweep_c,
        &opts.out_dir,
        |p, v| p.c = v,
    )?;
    run_sweep(
        &images,
        params,
        "tau",
        &opts.sweep_tau,
        &opts.out_dir,
        |p, v| p.tau = v,
    )?;
    run_sweep(
        &images,
        params,
        "rho",
        &opts.sweep_rho,
        &opts.out_dir,
        |p, v| p.rho = v,
    )?;
    run_sweep(
        &images,
        params,
        "noise_var",
        &opts.sweep_noise_var,
        &opts.out_dir,
        |p, v| p.noise_var = v,
    )?;
    Ok(())
}

fn load_corpus(corpus: &Path) -> AppResult<Vec<(String, GrayImage)>> {
    let entries = std::fs::read_dir(corpus)
        .map_err(|e| AppError::invalid(format!("cannot read corpus {}: {e}", corpus.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .map(|x| x.eq_ignore_ascii_case("pgm"))
                .unwrap_or(false)
        })
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(AppError::invalid(format!(
            "corpus {} holds no .pgm images",
            corpus.display()
        )));
    }
    paths
        .iter()
        .map(|p| Ok((file_stem(p), read_input_pgm(p)?)))
        .collect()
}

fn run_corpus(
    images: &[(String, GrayImage)],
    params: &Params,
    no_postprocess: bool,
) -> AppResult<Vec<Row>> {
    images
        .par_iter()
        .map(|(name, img)| {
            let r = run_adaptive(img, params, no_postprocess, false)?;
            Ok(Row {
                name: name.clone(),
                rate: r.metrics.sampling_rate_percent,
                psnr: r.metrics.psnr_db,
                ssim: r.metrics.ssim,
                nre: r.metrics.nre,
                generations: r.generations,
            })
        })
        .collect()
}

fn run_matched_baseline(
    images: &[(String, GrayImage)],
    adaptive_rows: &[Row],
    params: &Params,
    no_postprocess: bool,
) -> AppResult<Vec<Row>> {
    images
        .par_iter()
        .zip(adaptive_rows.par_iter())
        .map(|((name, img), adaptive)| {
            let r = run_baseline(img, adaptive.rate / 100.0, params, no_postprocess, false)?;
            Ok(Row {
                name: name.clone(),
                rate: r.metrics.sampling_rate_percent,
                psnr: r.metrics.psnr_db,
                ssim: r.metrics.ssim,
                nre: r.metrics.nre,
                generations: r.generations,
            })
        })
        .collect()
}

fn run_sweep(
    images: &[(String, GrayImage)],
    params: &Params,
    name: &str,
    values: &[f64],
    out_dir: &Path,
    apply: impl Fn(&mut Params, f64),
) -> AppResult<()> {
    if values.is_empty() {
        return Ok(());
    }
    let mut csv = format!("{name},rate%,psnr,ssim,nre\n");
    for &value in values {
        let mut p = *params;
        apply(&mut p, value);
        let rows = run_corpus(images, &p, false)?;
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_metric(value),
            fmt_metric(mean(&rows, |r| r.rate)),
            fmt_metric(mean(&rows, |r| r.psnr)),
            fmt_metric(mean(&rows, |r| r.ssim)),
            fmt_metric(mean(&rows, |r| r.nre)),
        ));
    }
    write_bytes(&out_dir.join(format!("sweep_{name}.csv")), csv.as_bytes())
}

fn row_line(row: &Row, seed: u64) -> String {
    csv_row(
        &row.name,
        &casir_core::metrics::MetricsReport {
            psnr_db: row.psnr,
            ssim: row.ssim,
            nre: row.nre,
            sampling_rate_percent: row.rate,
        },
        row.generations,
        seed,
    )
}

fn mean(rows: &[Row], f: impl Fn(&Row) -> f64) -> f64 {
    rows.iter().map(&f).sum::<f64>() / rows.len() as f64
}

fn variance(rows: &[Row], f: impl Fn(&Row) -> f64) -> f64 {
    let m = mean(rows, &f);
    rows.iter().map(|r| (f(r) - m) * (f(r) - m)).sum::<f64>() / rows.len() as f64
}

/// Aggregate rows keyed "mean" and "variance"; means are the arithmetic
/// means of the per-image rows above them.
fn aggregate_lines(rows: &[Row], seed: u64) -> String {
    let gens_mean = rows.iter().map(|r| f64::from(r.generations)).sum::<f64>() / rows.len() as f64;
    let mut out = format!(
        "mean,{},{},{},{},{},{seed}\n",
        fmt_metric(mean(rows, |r| r.rate)),
        fmt_metric(mean(rows, |r| r.psnr)),
        fmt_metric(mean(rows, |r| r.ssim)),
        fmt_metric(mean(rows, |r| r.nre)),
        fmt_metric(gens_mean),
    );
    let gens_var = rows
        .iter()
        .map(|r| (f64::from(r.generations) - gens_mean).powi(2))
        .sum::<f64>()
        / rows.len() as f64;
    out.push_str(&format!(
        "variance,{},{},{},{},{},{seed}\n",
        fmt_metric(variance(rows, |r| r.rate)),
        fmt_metric(variance(rows, |r| r.psnr)),
        fmt_metric(variance(rows, |r| r.ssim)),
        fmt_metric(variance(rows, |r| r.nre)),
        fmt_metric(gens_var),
    ));
    out
}
