//! `casir recover`: refill a subsampled PGM from its mask, optionally
//! dumping one snapshot per CA generation.

use std::path::Path;
use std::time::Instant;

use casir_core::recovery::{postprocess, recover_with, CaOptions};

use super::{ensure_out_dir, file_stem, write_bytes};
use crate::config::Params;
use crate::pipeline::postprocess_config;
use crate::report::recovery_report_json;
use crate::{pnm, AppError, AppResult};

#[allow(clippy::too_many_arguments)]
pub fn run(
    mask_path: &Path,
    input: &Path,
    out_dir: &Path,
    params: &Params,
    no_postprocess: bool,
    snapshots: bool,
) -> AppResult<()> {
    let mask = pnm::read_pbm(mask_path).map_err(|e| AppError::invalid(e.to_string()))?;
    let img = pnm::read_pgm(input).map_err(|e| AppError::invalid(e.to_string()))?;
    if mask.dims() != img.dims() {
        return Err(AppError::invalid(format!(
            "mask is {}x{} but image is {}x{}",
            mask.height(),
            mask.width(),
            img.height(),
            img.width()
        )));
    }

    let opts = CaOptions {
        zeta: params.zeta,
        snapshots,
    };
    let start = Instant::now();
    let initial_dead = mask.dead_count();
    let rec = recover_with(&mask, &img, &opts).map_err(|e| AppError::invalid(e.to_string()))?;
    let output = if no_postprocess {
        rec.image
    } else {
        postprocess(&rec.image, &mask, &postprocess_config(params))
            .map_err(|e| AppError::invalid(e.to_string()))?
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;

    ensure_out_dir(out_dir)?;
    let stem = file_stem(input);
    write_bytes(
        &out_dir.join(format!("{stem}.recovered.pgm")),
        &pnm::encode_pgm(&output),
    )?;
    let report = recovery_report_json(rec.generations, wall_ms, initial_dead, !no_postprocess);
    write_bytes(
        &out_dir.join(format!("{stem}.recovery.json")),
        format!("{report:#}\n").as_bytes(),
    )?;
    for snap in &rec.snapshots {
        write_bytes(
            &out_dir.join(format!("{stem}.gen{}.pgm", snap.generation)),
            &pnm::encode_pgm(&snap.image),
        )?;
        write_bytes(
            &out_dir.join(format!("{stem}.gen{}.mask.pbm", snap.generation)),
            &pnm::encode_pbm(&snap.mask),
        )?;
    }

    println!(
        "{stem}: revived {initial_dead} cells in {} generations ({wall_ms:.1} ms)",
        rec.generations
    );
    Ok(())
}
