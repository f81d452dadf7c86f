//! `casir sample`: adaptively sample one PGM image and write the mask,
//! the subsampled image, and the JSON sampling report.

use std::path::Path;

use casir_core::sampler::sample_image;

use super::{ensure_out_dir, file_stem, read_input_pgm, write_bytes};
use crate::config::Params;
use crate::pipeline::sampler_config;
use crate::report::sampling_report_json;
use crate::{pnm, AppResult};

pub fn run(input: &Path, out_dir: &Path, params: &Params) -> AppResult<()> {
    let img = read_input_pgm(input)?;
    let sampled = sample_image(&img, &sampler_config(params));

    ensure_out_dir(out_dir)?;
    let stem = file_stem(input);
    write_bytes(
        &out_dir.join(format!("{stem}.mask.pbm")),
        &pnm::encode_pbm(&sampled.mask),
    )?;
    write_bytes(
        &out_dir.join(format!("{stem}.sampled.pgm")),
        &pnm::encode_pgm(&sampled.image),
    )?;
    let report = sampling_report_json(&sampled.report, params.seed);
    write_bytes(
        &out_dir.join(format!("{stem}.report.json")),
        format!("{report:#}\n").as_bytes(),
    )?;

    println!(
        "{stem}: {} of {} pixels kept ({} %)",
        sampled.report.live_cells,
        sampled.report.height * sampled.report.width,
        sampled.report.rate_percent,
    );
    Ok(())
}
