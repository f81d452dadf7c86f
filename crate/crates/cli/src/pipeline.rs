//! One-shot sample → (noise) → recover → metrics pipelines shared by the
//! roundtrip and bench commands.

use casir_core::image::{subsample, BitMask, GrayImage};
use casir_core::metrics::{self, MetricsReport, NoiseConfig};
use casir_core::recovery::{postprocess, recover_with, CaOptions, CaSnapshot, PostprocessConfig};
use casir_core::rng::RngSeed;
use casir_core::sampler::{random_baseline_mask, sample_image, SamplerConfig, SamplingReport};

use crate::config::Params;
use crate::{AppError, AppResult};

/// Outcome of one full pipeline run, everything on the [0, 255] scale.
#[derive(Debug, Clone)]
pub struct RoundtripResult {
    pub mask: BitMask,
    pub sampled: GrayImage,
    pub recovered: GrayImage,
    pub generations: u32,
    pub snapshots: Vec<CaSnapshot>,
    pub metrics: MetricsReport,
    pub sampling_report: Option<SamplingReport>,
}

pub fn sampler_config(p: &Params) -> SamplerConfig {
    SamplerConfig {
        c: p.c,
        d: p.d,
        tau: p.tau,
        seed: RngSeed(p.seed),
    }
}

pub fn postprocess_config(p: &Params) -> PostprocessConfig {
    PostprocessConfig {
        rho: p.rho,
        sigma: p.sigma_f,
        ..PostprocessConfig::default()
    }
}

/// Adaptive sampling followed by recovery and metrics.
pub fn run_adaptive(
    img: &GrayImage,
    params: &Params,
    no_postprocess: bool,
    snapshots: bool,
) -> AppResult<RoundtripResult> {
    let sampled = sample_image(img, &sampler_config(params));
    let report = sampled.report.clone();
    let mut result = recover_pipeline(
        img,
        sampled.mask,
        sampled.image,
        params,
        no_postprocess,
        snapshots,
    )?;
    result.sampling_report = Some(report);
    Ok(result)
}

/// Pure-random sampling at a fixed rate followed by the same recovery.
pub fn run_baseline(
    img: &GrayImage,
    rate: f64,
    params: &Params,
    no_postprocess: bool,
    snapshots: bool,
) -> AppResult<RoundtripResult> {
    let (h, w) = img.dims();
    let mask = random_baseline_mask(h, w, rate, RngSeed(params.seed))
        .map_err(|e| AppError::invalid(format!("baseline rate: {e}")))?;
    if mask.live_count() == 0 {
        return Err(AppError::invalid(
            "baseline rate keeps no pixels; raise --baseline-random",
        ));
    }
    let sampled = subsample(img, &mask).expect("mask built for image dims");
    recover_pipeline(img, mask, sampled, params, no_postprocess, snapshots)
}

/// Recovery + optional measurement noise + conditional smoothing + metrics
/// against the reference image.
pub fn recover_pipeline(
    reference: &GrayImage,
    mask: BitMask,
    sampled: GrayImage,
    params: &Params,
    no_postprocess: bool,
    snapshots: bool,
) -> AppResult<RoundtripResult> {
    let opts = CaOptions {
        zeta: params.zeta,
        snapshots,
    };

    let (recovered_raw, generations, snaps) = if params.noise_var > 0.0 {
        // The noisy path runs on the [0, 1] scale and is rescaled back.
        let normalized = sampled.scaled(1.0 / 255.0);
        let noisy = metrics::add_measurement_noise(
            &normalized,
            &mask,
            &NoiseConfig {
                variance: params.noise_var,
                seed: RngSeed(params.seed),
            },
        )
        .expect("mask dims match");
        let rec = recover_with(&mask, &noisy, &opts).map_err(app_invalid)?;
        let image = rec.image.scaled(255.0);
        let snaps = rec
            .snapshots
            .into_iter()
            .map(|s| CaSnapshot {
                generation: s.generation,
                mask: s.mask,
                image: s.image.scaled(255.0),
            })
            .collect();
        (image, rec.generations, snaps)
    } else {
        let rec = recover_with(&mask, &sampled, &opts).map_err(app_invalid)?;
        (rec.image, rec.generations, rec.snapshots)
    };

    let recovered = if no_postprocess {
        recovered_raw
    } else {
        postprocess(&recovered_raw, &mask, &postprocess_config(params)).map_err(app_invalid)?
    };

    let report = MetricsReport {
        psnr_db: metrics::psnr(reference, &recovered).map_err(app_invalid)?,
        ssim: metrics::ssim(reference, &recovered).map_err(app_invalid)?,
        nre: metrics::nre(reference, &recovered).map_err(app_invalid)?,
        sampling_rate_percent: 100.0 * mask.rate(),
    };
    Ok(RoundtripResult {
        mask,
        sampled,
        recovered,
        generations,
        snapshots: snaps,
        metrics: report,
        sampling_report: None,
    })
}

fn app_invalid(e: casir_core::Error) -> AppError {
    AppError::invalid(e.to_string())
}
