pub mod bench;
pub mod recover;
pub mod roundtrip;
pub mod sample;

use std::fs;
use std::path::Path;

use casir_core::image::GrayImage;

use crate::pnm;
use crate::{AppError, AppResult};

pub(crate) fn read_input_pgm(path: &Path) -> AppResult<GrayImage> {
    pnm::read_pgm(path).map_err(|e| AppError::invalid(e.to_string()))
}

pub(crate) fn ensure_out_dir(dir: &Path) -> AppResult<()> {
    fs::create_dir_all(dir)
        .map_err(|e| AppError::runtime(format!("cannot create {}: {e}", dir.display())))
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> AppResult<()> {
    fs::write(path, bytes)
        .map_err(|e| AppError::runtime(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "image".to_string())
}
