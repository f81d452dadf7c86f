//! `casir roundtrip`: sample → (optional noise) → recover → metrics in one
//! pass, printing a CSV row against the original image.

use std::path::Path;

use super::{ensure_out_dir, file_stem, read_input_pgm, write_bytes};
use crate::config::Params;
use crate::pipeline::{run_adaptive, run_baseline, RoundtripResult};
use crate::report::{csv_row, CSV_HEADER};
use crate::{pnm, AppResult};

pub struct RoundtripOpts<'a> {
    pub out_dir: Option<&'a Path>,
    pub csv: Option<&'a Path>,
    pub baseline_random: Option<f64>,
    pub snapshots: bool,
    pub no_postprocess: bool,
}

pub fn run(input: &Path, params: &Params, opts: &RoundtripOpts) -> AppResult<()> {
    let img = read_input_pgm(input)?;
    let result = match opts.baseline_random {
        Some(rate) => run_baseline(&img, rate, params, opts.no_postprocess, opts.snapshots)?,
        None => run_adaptive(&img, params, opts.no_postprocess, opts.snapshots)?,
    };

    let stem = file_stem(input);
    let row = csv_row(&stem, &result.metrics, result.generations, params.seed);
    println!("{CSV_HEADER}");
    println!("{row}");

    if let Some(path) = opts.csv {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            ensure_out_dir(parent)?;
        }
        write_bytes(path, format!("{CSV_HEADER}\n{row}\n").as_bytes())?;
    }
    if let Some(dir) = opts.out_dir {
        write_artifacts(dir, &stem, &result)?;
    }
    Ok(())
}

fn write_artifacts(dir: &Path, stem: &str, result: &RoundtripResult) -> AppResult<()> {
    ensure_out_dir(dir)?;
    write_bytes(
        &dir.join(format!("{stem}.mask.pbm")),
        &pnm::encode_pbm(&result.mask),
    )?;
    write_bytes(
        &dir.join(format!("{stem}.sampled.pgm")),
        &pnm::encode_pgm(&result.sampled),
    )?;
    write_bytes(
        &dir.join(format!("{stem}.recovered.pgm")),
        &pnm::encode_pgm(&result.recovered),
    )?;
    for snap in &result.snapshots {
        write_bytes(
            &dir.join(format!("{stem}.gen{}.pgm", snap.generation)),
            &pnm::encode_pgm(&snap.image),
        )?;
        write_bytes(
            &dir.join(format!("{stem}.gen{}.mask.pbm", snap.generation)),
            &pnm::encode_pbm(&snap.mask),
        )?;
    }
    Ok(())
}
