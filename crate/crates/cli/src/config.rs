//! Run parameters with the published defaults, overridable first by a JSON
//! config file and then by explicit command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Deserialize;

use crate::{AppError, AppResult};

/// Numeric pipeline parameters. Defaults are the published operating
/// point: c = 1.3, d = 2.8, τ = 0.9, ρ = 0.3, ζ = 1.05, σ_f = 1.5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub seed: u64,
    pub c: f64,
    pub d: f64,
    pub tau: f64,
    pub rho: f64,
    pub zeta: f64,
    pub sigma_f: f64,
    pub noise_var: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            seed: 0,
            c: 1.3,
            d: 2.8,
            tau: 0.9,
            rho: 0.3,
            zeta: 1.05,
            sigma_f: 1.5,
            noise_var: 0.0,
        }
    }
}

/// Shared flags; every field may also be supplied by `--config <json>`,
/// with explicit flags taking precedence over the file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// RNG seed for masks and noise.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random-rate gain factor.
    #[arg(long)]
    pub c: Option<f64>,
    /// Random-rate saturation factor.
    #[arg(long)]
    pub d: Option<f64>,
    /// Nonuniform sampler gradient threshold in [0, 1].
    #[arg(long)]
    pub tau: Option<f64>,
    /// Post-smoother flatness coefficient in [0, 1]; 0 disables smoothing.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Recovery kernel growth factor (>= 1).
    #[arg(long)]
    pub zeta: Option<f64>,
    /// Post-smoother Gaussian std.
    #[arg(long = "sigma-f")]
    pub sigma_f: Option<f64>,
    /// Measurement-noise variance on the [0, 1] scale.
    #[arg(long = "noise-var")]
    pub noise_var: Option<f64>,
    /// JSON file supplying any of the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: one per core).
    #[arg(long)]
    pub threads: Option<usize>,
}

/// JSON config schema; keys mirror the long flag names.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub c: Option<f64>,
    pub d: Option<f64>,
    pub tau: Option<f64>,
    pub rho: Option<f64>,
    pub zeta: Option<f64>,
    pub sigma_f: Option<f64>,
    pub noise_var: Option<f64>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub baseline_random: Option<f64>,
    pub snapshots: Option<bool>,
    pub no_postprocess: Option<bool>,
}

pub fn load_file_config(path: &Path) -> AppResult<FileConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| AppError::invalid(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| AppError::invalid(format!("bad config {}: {e}", path.display())))
}

/// Fully resolved run settings after defaults < file < flags.
#[derive(Debug, Clone, Default)]
pub struct Resolved {
    pub params: Params,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub baseline_random: Option<f64>,
    pub snapshots: bool,
    pub no_postprocess: bool,
}

impl CommonArgs {
    pub fn resolve(&self) -> AppResult<Resolved> {
        let file = match &self.config {
            Some(path) => load_file_config(path)?,
            None => FileConfig::default(),
        };
        let d = Params::default();
        let params = Params {
            seed: self.seed.or(file.seed).unwrap_or(d.seed),
            c: self.c.or(file.c).unwrap_or(d.c),
            d: self.d.or(file.d).unwrap_or(d.d),
            tau: self.tau.or(file.tau).unwrap_or(d.tau),
            rho: self.rho.or(file.rho).unwrap_or(d.rho),
            zeta: self.zeta.or(file.zeta).unwrap_or(d.zeta),
            sigma_f: self.sigma_f.or(file.sigma_f).unwrap_or(d.sigma_f),
            noise_var: self.noise_var.or(file.noise_var).unwrap_or(d.noise_var),
        };
        validate(&params)?;
        Ok(Resolved {
            params,
            threads: self.threads.or(file.threads),
            out_dir: file.out_dir,
            csv: file.csv,
            baseline_random: file.baseline_random,
            snapshots: file.snapshots.unwrap_or(false),
            no_postprocess: file.no_postprocess.unwrap_or(false),
        })
    }
}

fn validate(p: &Params) -> AppResult<()> {
    if !(0.0..=1.0).contains(&p.tau) {
        return Err(AppError::invalid(format!("tau {} outside [0, 1]", p.tau)));
    }
    if !(0.0..=1.0).contains(&p.rho) {
        return Err(AppError::invalid(format!("rho {} outside [0, 1]", p.rho)));
    }
    if p.zeta < 1.0 {
        return Err(AppError::invalid(format!("zeta {} must be >= 1", p.zeta)));
    }
    if p.sigma_f <= 0.0 {
        return Err(AppError::invalid(format!(
            "sigma-f {} must be positive",
            p.sigma_f
        )));
    }
    if p.noise_var < 0.0 {
        return Err(AppError::invalid(format!(
            "noise-var {} must be nonnegative",
            p.noise_var
        )));
    }
    if p.c < 0.0 || p.d < 0.0 {
        return Err(AppError::invalid("c and d must be nonnegative"));
    }
    Ok(())
}
