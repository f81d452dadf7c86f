//! Reconstruction quality metrics (PSNR, SSIM, NRE) and the additive
//! measurement-noise model for robustness experiments.

use rand_distr::{Distribution, Normal};

use crate::image::{BitMask, GrayImage};
use crate::math;
use crate::rng::{self, RngSeed};
use crate::{Error, Result};

/// Quality summary for one recovered image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    /// Peak signal-to-noise ratio in dB; +∞ for a perfect reconstruction.
    pub psnr_db: f64,
    pub ssim: f64,
    pub nre: f64,
    pub sampling_rate_percent: f64,
}

/// 10·log₁₀(255²/MSE); +∞ when the images are identical.
pub fn psnr(reference: &GrayImage, estimate: &GrayImage) -> Result<f64> {
    if reference.dims() != estimate.dims() {
        return Err(Error::DimensionMismatch {
            left: reference.dims(),
            right: estimate.dims(),
        });
    }
    let mut sq = 0.0;
    for (a, b) in reference.pixels().iter().zip(estimate.pixels()) {
        let d = a - b;
        sq += d * d;
    }
    let mse = sq / reference.pixels().len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * math::log10(255.0 * 255.0 / mse))
}

/// Normalized recovery error ‖est − ref‖₂ / ‖ref‖₂.
pub fn nre(reference: &GrayImage, estimate: &GrayImage) -> Result<f64> {
    if reference.dims() != estimate.dims() {
        return Err(Error::DimensionMismatch {
            left: reference.dims(),
            right: estimate.dims(),
        });
    }
    let mut err = 0.0;
    let mut norm = 0.0;
    for (a, b) in reference.pixels().iter().zip(estimate.pixels()) {
        let d = b - a;
        err += d * d;
        norm += a * a;
    }
    if norm == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok(math::sqrt(err) / math::sqrt(norm))
}

/// SSIM window side.
pub const SSIM_WINDOW: usize = 11;
/// SSIM window Gaussian std.
pub const SSIM_SIGMA: f64 = 1.5;
const SSIM_K1: f64 = 0.01;
const SSIM_K2: f64 = 0.03;

/// Mean structural similarity with the standard 11×11 Gaussian window
/// (σ = 1.5) and constants C₁ = (0.01·255)², C₂ = (0.03·255)², averaged
/// over all fully interior window positions.
pub fn ssim(reference: &GrayImage, estimate: &GrayImage) -> Result<f64> {
    if reference.dims() != estimate.dims() {
        return Err(Error::DimensionMismatch {
            left: reference.dims(),
            right: estimate.dims(),
        });
    }
    let (h, w) = reference.dims();
    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Err(Error::ImageTooSmall {
            min: SSIM_WINDOW,
            got: (h, w),
        });
    }

    // Normalized Gaussian window.
    let mut window = [0.0; SSIM_WINDOW * SSIM_WINDOW];
    let half = (SSIM_WINDOW / 2) as isize;
    let mut sum = 0.0;
    for p in -half..=half {
        for q in -half..=half {
            let v = math::exp(-((p * p + q * q) as f64) / (2.0 * SSIM_SIGMA * SSIM_SIGMA));
            window[((p + half) as usize) * SSIM_WINDOW + (q + half) as usize] = v;
            sum += v;
        }
    }
    for v in &mut window {
        *v /= sum;
    }

    let c1 = (SSIM_K1 * 255.0) * (SSIM_K1 * 255.0);
    let c2 = (SSIM_K2 * 255.0) * (SSIM_K2 * 255.0);

    let mut total = 0.0;
    let mut count = 0usize;
    for top in 0..=(h - SSIM_WINDOW) {
        for left in 0..=(w - SSIM_WINDOW) {
            let mut mx = 0.0;
            let mut my = 0.0;
            let mut mxx = 0.0;
            let mut myy = 0.0;
            let mut mxy = 0.0;
            for p in 0..SSIM_WINDOW {
                for q in 0..SSIM_WINDOW {
                    let wt = window[p * SSIM_WINDOW + q];
                    let x = reference.get(top + p, left + q);
                    let y = estimate.get(top + p, left + q);
                    mx += wt * x;
                    my += wt * y;
                    mxx += wt * x * x;
                    myy += wt * y * y;
                    mxy += wt * x * y;
                }
            }
            let vx = mxx - mx * mx;
            let vy = myy - my * my;
            let cov = mxy - mx * my;
            let s = ((2.0 * mx * my + c1) * (2.0 * cov + c2))
                / ((mx * mx + my * my + c1) * (vx + vy + c2));
            total += s;
            count += 1;
        }
    }
    Ok(total / count as f64)
}

/// Additive white Gaussian measurement noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// Noise variance on the [0, 1] intensity scale.
    pub variance: f64,
    pub seed: RngSeed,
}

/// Ī = I + M ⊙ N with N ~ N(0, σ²), applied on a [0, 1]-normalized
/// subsampled image and clamped back to [0, 1]. Dead cells pass through
/// bit-exactly; σ² = 0 returns the input unchanged.
pub fn add_measurement_noise(
    image: &GrayImage,
    mask: &BitMask,
    cfg: &NoiseConfig,
) -> Result<GrayImage> {
    if image.dims() != mask.dims() {
        return Err(Error::DimensionMismatch {
            left: image.dims(),
            right: mask.dims(),
        });
    }
    if cfg.variance == 0.0 {
        return Ok(image.clone());
    }
    let normal = Normal::new(0.0, math::sqrt(cfg.variance)).expect("nonnegative std");
    let mut rng = rng::noise_stream(cfg.seed);
    let mut out = image.clone();
    for (v, &b) in out.pixels_mut().iter_mut().zip(mask.bits()) {
        if b == 1 {
            *v = (*v + normal.sample(&mut rng)).clamp(0.0, 1.0);
        }
    }
    Ok(out)
}
