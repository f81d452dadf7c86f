//! The three mask generators — texture-keyed uniform lattices, the graduate
//! randomization procedure, and the edge-aware nonuniform sampler — plus
//! the per-patch and whole-image orchestration.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;

use crate::gradient::{self, DirectionalGradients};
use crate::image::{assemble_mask, subsample, tile_image, union_masks, BitMask, GrayImage, Patch};
use crate::math;
use crate::rng::{self, RngSeed};
use crate::spectral::{
    classify_regions, quant_table, quantize, random_rate, DctKernel, EdgeSignature,
    FrequencyPartition, QuantizedSpectrum, RandomRateParams, QUANT_BYPASS_ETA,
};
use crate::texture::{patch_texture, TexturePercentage};
use crate::{Error, Result, BLOCK};

#[cfg(feature = "rayon")]
use rayon::prelude::*;

/// The five regular punch lattices, from very-low to very-high texture,
/// with 1, 2, 4, 8, and 16 live cells.
#[derive(Debug, Clone)]
pub struct UniformPatternSet {
    tiers: [BitMask; 5],
}

/// 0-based punch coordinates per tier. The very-low lattice keeps its
/// single cell near the block center so that the worst-case in-block
/// Chebyshev distance stays within the cumulative three-generation reach
/// of the recoverer.
const TIER_POINTS: [&[(usize, usize)]; 5] = [
    &[(3, 3)],
    &[(2, 2), (5, 5)],
    &[(1, 1), (1, 5), (5, 1), (5, 5)],
    &[
        (1, 1),
        (1, 5),
        (5, 1),
        (5, 5),
        (3, 3),
        (3, 7),
        (7, 3),
        (7, 7),
    ],
    &[
        (1, 1),
        (1, 3),
        (1, 5),
        (1, 7),
        (3, 1),
        (3, 3),
        (3, 5),
        (3, 7),
        (5, 1),
        (5, 3),
        (5, 5),
        (5, 7),
        (7, 1),
        (7, 3),
        (7, 5),
        (7, 7),
    ],
];

impl UniformPatternSet {
    pub fn standard() -> Self {
        let tiers = core::array::from_fn(|t| {
            let mut m = BitMask::zeros(BLOCK, BLOCK).expect("8x8 mask");
            for &(r, c) in TIER_POINTS[t] {
                m.set_live(r, c);
            }
            m
        });
        Self { tiers }
    }

    #[inline]
    pub fn tier(&self, idx: usize) -> &BitMask {
        &self.tiers[idx]
    }
}

impl Default for UniformPatternSet {
    fn default() -> Self {
        Self::standard()
    }
}

/// Texture tier: [0,10) very low, [10,25) low,
/// [25,45) bandpass, [45,70) high, [70,100] very high.
pub fn texture_tier(eta: TexturePercentage) -> usize {
    let eta = eta.value();
    if eta < 10.0 {
        0
    } else if eta < 25.0 {
        1
    } else if eta < 45.0 {
        2
    } else if eta < 70.0 {
        3
    } else {
        4
    }
}

/// Select the punch lattice for a texture percentage.
pub fn uniform_mask(eta: TexturePercentage, patterns: &UniformPatternSet) -> BitMask {
    patterns.tier(texture_tier(eta)).clone()
}

/// Graduate randomization: place min(r_rs, Z(P_u)) live cells uniformly
/// without replacement on the zero cells of the uniform pattern.
pub fn grp<R: Rng + ?Sized>(uniform: &BitMask, r_rs: u32, rng: &mut R) -> BitMask {
    let (h, w) = uniform.dims();
    let mut zeros = Vec::with_capacity(h * w);
    for r in 0..h {
        for c in 0..w {
            if !uniform.is_live(r, c) {
                zeros.push((r, c));
            }
        }
    }
    let take = (r_rs as usize).min(zeros.len());
    let mut out = BitMask::zeros(h, w).expect("mask dims");
    for idx in rand::seq::index::sample(rng, zeros.len(), take) {
        let (r, c) = zeros[idx];
        out.set_live(r, c);
    }
    out
}

/// Edge-aware nonuniform pattern. For structured-edge signatures, combine
/// the two strongest direction planes into a per-pixel Euclidean magnitude,
/// renormalize to [0, 1], and mark cells strictly exceeding τ. Any other
/// signature yields an empty pattern.
pub fn nonuniform_mask(dg: &DirectionalGradients, edge: EdgeSignature, tau: f64) -> BitMask {
    let mut out = BitMask::zeros(BLOCK, BLOCK).expect("8x8 mask");
    if !edge.is_structured_edge() {
        return out;
    }
    let sums: [f64; 8] = core::array::from_fn(|d| dg.plane_by_index(d).iter().sum());
    let mut order: [usize; 8] = core::array::from_fn(|d| d);
    // Strongest first; ties broken by the lower direction index.
    order.sort_unstable_by(|&a, &b| {
        sums[b]
            .partial_cmp(&sums[a])
            .expect("finite direction sums")
            .then(a.cmp(&b))
    });
    let top = dg.plane_by_index(order[0]);
    let second = dg.plane_by_index(order[1]);
    let mut magnitude = [0.0; BLOCK * BLOCK];
    for i in 0..BLOCK * BLOCK {
        magnitude[i] = math::sqrt(top[i] * top[i] + second[i] * second[i]);
    }
    gradient::min_max_normalize(&mut magnitude);
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            if magnitude[r * BLOCK + c] > tau {
                out.set_live(r, c);
            }
        }
    }
    out
}

/// Sampler tuning knobs with the published defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplerConfig {
    /// Random-rate gain factor.
    pub c: f64,
    /// Random-rate saturation factor.
    pub d: f64,
    /// Nonuniform gradient threshold.
    pub tau: f64,
    pub seed: RngSeed,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            c: 1.3,
            d: 2.8,
            tau: 0.9,
            seed: RngSeed(0),
        }
    }
}

/// Read-only tables shared across patches.
#[derive(Debug, Clone)]
pub struct SamplerContext {
    pub dct: DctKernel,
    pub partition: FrequencyPartition,
    pub patterns: UniformPatternSet,
}

impl SamplerContext {
    pub fn new() -> Self {
        Self {
            dct: DctKernel::new(),
            partition: FrequencyPartition::standard(),
            patterns: UniformPatternSet::standard(),
        }
    }
}

impl Default for SamplerContext {
    fn default() -> Self {
        Self::new()
    }
}

/// Everything the per-patch pipeline produced, kept for audit.
#[derive(Debug, Clone)]
pub struct PatchAnalysis {
    pub eta: TexturePercentage,
    pub spectrum: QuantizedSpectrum,
    /// Untruncated random rate from the rate formula.
    pub random_rate: u32,
    pub edge: EdgeSignature,
    pub uniform: BitMask,
    pub random: BitMask,
    pub nonuniform: BitMask,
    /// Union of the three patterns.
    pub mask: BitMask,
    /// Subsampled patch values (mask ⊙ patch).
    pub samples: [f64; BLOCK * BLOCK],
}

/// Run the full per-patch sampling sequence: texture → uniform lattice →
/// quantized spectrum → sparsity → random rate → GRP → edge signature →
/// nonuniform pattern → mask union → Hadamard subsampling.
pub fn sample_patch<R: Rng + ?Sized>(
    patch: &Patch,
    img: &GrayImage,
    cfg: &SamplerConfig,
    ctx: &SamplerContext,
    rng: &mut R,
) -> PatchAnalysis {
    let eta = patch_texture(patch);
    let uniform = uniform_mask(eta, &ctx.patterns);
    let spectrum = if eta.value() < QUANT_BYPASS_ETA {
        QuantizedSpectrum::zero()
    } else {
        let table = quant_table(eta);
        quantize(&ctx.dct.forward(patch.values()), &table)
    };
    let rate = random_rate(
        spectrum.sparsity(),
        &RandomRateParams { c: cfg.c, d: cfg.d },
    );
    let random = grp(&uniform, rate, rng);
    let edge = classify_regions(&spectrum, &ctx.partition);
    let field = gradient::sobel_with_border(img, patch.origin());
    let directions = gradient::normalize_directions(&gradient::decompose(&field));
    let nonuniform = nonuniform_mask(&directions, edge, cfg.tau);
    let mask = union_masks(&[&uniform, &random, &nonuniform]).expect("per-patch mask dims");
    let mut samples = [0.0; BLOCK * BLOCK];
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            if mask.is_live(r, c) {
                samples[r * BLOCK + c] = patch.get(r, c);
            }
        }
    }
    PatchAnalysis {
        eta,
        spectrum,
        random_rate: rate,
        edge,
        uniform,
        random,
        nonuniform,
        mask,
        samples,
    }
}

/// Per-patch summary kept in the sampling report.
#[derive(Debug, Clone)]
pub struct PatchRecord {
    pub block_row: u32,
    pub block_col: u32,
    pub eta: f64,
    pub sparsity: u32,
    pub random_rate: u32,
    pub edge: EdgeSignature,
    /// Live cells in the patch mask before padding cells are dropped.
    pub live_cells: u32,
}

/// Whole-image sampling statistics.
#[derive(Debug, Clone)]
pub struct SamplingReport {
    pub height: usize,
    pub width: usize,
    pub live_cells: usize,
    pub rate_percent: f64,
    /// Patch counts per texture tier.
    pub eta_tier_counts: [u32; 5],
    /// Patch counts per sparsity number k = 0..=64.
    pub sparsity_counts: [u32; 65],
    /// Patch counts per untruncated random rate.
    pub random_rate_counts: BTreeMap<u32, u32>,
    pub patches: Vec<PatchRecord>,
}

/// A sampled image: overall mask, subsampled pixels, and the report.
#[derive(Debug, Clone)]
pub struct SampledImage {
    pub mask: BitMask,
    pub image: GrayImage,
    pub report: SamplingReport,
}

fn analyze_patches(
    patches: &[Patch],
    img: &GrayImage,
    cfg: &SamplerConfig,
    ctx: &SamplerContext,
) -> Vec<PatchAnalysis> {
    let run = |(index, patch): (usize, &Patch)| {
        let mut rng = rng::patch_stream(cfg.seed, index as u64);
        sample_patch(patch, img, cfg, ctx, &mut rng)
    };
    #[cfg(feature = "rayon")]
    {
        patches.par_iter().enumerate().map(run).collect()
    }
    #[cfg(not(feature = "rayon"))]
    {
        patches.iter().enumerate().map(run).collect()
    }
}

/// Sample a whole image block by block. Every patch draws from its own
/// RNG stream keyed by the block index, so the result is independent of
/// scheduling and thread count.
pub fn sample_image(img: &GrayImage, cfg: &SamplerConfig) -> SampledImage {
    let (h, w) = img.dims();
    let block_cols = w.div_ceil(BLOCK);
    let ctx = SamplerContext::new();
    let patches = tile_image(img);
    let analyses = analyze_patches(&patches, img, cfg, &ctx);

    let entries: Vec<(BitMask, (usize, usize))> = patches
        .iter()
        .zip(&analyses)
        .map(|(p, a)| (a.mask.clone(), p.origin()))
        .collect();
    let mask = assemble_mask(h, w, &entries).expect("tiling origins are aligned and distinct");
    let image = subsample(img, &mask).expect("mask matches image dims");

    let mut eta_tier_counts = [0u32; 5];
    let mut sparsity_counts = [0u32; 65];
    let mut random_rate_counts = BTreeMap::new();
    let mut records = Vec::with_capacity(analyses.len());
    for (index, a) in analyses.iter().enumerate() {
        eta_tier_counts[texture_tier(a.eta)] += 1;
        sparsity_counts[a.spectrum.sparsity() as usize] += 1;
        *random_rate_counts.entry(a.random_rate).or_insert(0) += 1;
        records.push(PatchRecord {
            block_row: (index / block_cols) as u32,
            block_col: (index % block_cols) as u32,
            eta: a.eta.value(),
            sparsity: a.spectrum.sparsity(),
            random_rate: a.random_rate,
            edge: a.edge,
            live_cells: a.mask.live_count() as u32,
        });
    }
    let live_cells = mask.live_count();
    let report = SamplingReport {
        height: h,
        width: w,
        live_cells,
        rate_percent: 100.0 * live_cells as f64 / (h * w) as f64,
        eta_tier_counts,
        sparsity_counts,
        random_rate_counts,
        patches: records,
    };
    SampledImage {
        mask,
        image,
        report,
    }
}

/// Pure-random comparison mask: exactly ⌊rate·h·w⌉ live cells, uniform
/// without replacement.
pub fn random_baseline_mask(
    height: usize,
    width: usize,
    rate: f64,
    seed: RngSeed,
) -> Result<BitMask> {
    if !(0.0..=1.0).contains(&rate) || !rate.is_finite() {
        return Err(Error::RateRange { rate });
    }
    let total = height * width;
    let count = math::round(rate * total as f64) as usize;
    let mut mask = BitMask::zeros(height, width)?;
    let mut rng = rng::baseline_stream(seed);
    for idx in rand::seq::index::sample(&mut rng, total, count.min(total)) {
        mask.bits_mut()[idx] = 1;
    }
    Ok(mask)
}
