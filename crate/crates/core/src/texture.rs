//! Per-patch texture percentage from the joint entropy of the gray-level
//! co-occurrence matrix (horizontal neighbor offset).

use crate::image::Patch;
use crate::math;
use crate::BLOCK;

/// Number of distinct gray levels the patch is scaled to.
pub const GRAY_LEVELS: usize = 8;

/// Maximum joint entropy in bits for an 8×8-bin PMF (uniform distribution).
pub const MAX_ENTROPY_BITS: f64 = 6.0;

/// Patch re-quantized to levels 1..=8 with equal-width bins of [0, 255].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaledPatch {
    levels: [u8; BLOCK * BLOCK],
}

impl ScaledPatch {
    #[inline]
    pub fn level(&self, row: usize, col: usize) -> u8 {
        self.levels[row * BLOCK + col]
    }
}

/// Joint PMF of horizontally adjacent level pairs; entries sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CooccurrenceMatrix {
    probs: [[f64; GRAY_LEVELS]; GRAY_LEVELS],
}

impl CooccurrenceMatrix {
    /// Build directly from a PMF; entries must be nonnegative and sum to 1.
    pub fn from_probs(probs: [[f64; GRAY_LEVELS]; GRAY_LEVELS]) -> Self {
        debug_assert!({
            let sum: f64 = probs.iter().flatten().sum();
            (sum - 1.0).abs() < 1e-9 && probs.iter().flatten().all(|&p| p >= 0.0)
        });
        Self { probs }
    }

    #[inline]
    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i][j]
    }
}

/// Texture percentage in [0, 100]: normalized joint entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TexturePercentage(f64);

impl TexturePercentage {
    pub fn new(eta: f64) -> Self {
        Self(eta.clamp(0.0, 100.0))
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Uniform quantization of [0, 255] into 8 levels: level = min(8, ⌊v/32⌋+1).
pub fn scale_patch(patch: &Patch) -> ScaledPatch {
    let mut levels = [0u8; BLOCK * BLOCK];
    for (l, &v) in levels.iter_mut().zip(patch.values().iter()) {
        *l = (math::floor(v / 32.0) as u8 + 1).min(GRAY_LEVELS as u8);
    }
    ScaledPatch { levels }
}

/// Count the 56 horizontal level pairs and normalize to a joint PMF.
pub fn cooccurrence(sp: &ScaledPatch) -> CooccurrenceMatrix {
    let mut counts = [[0u32; GRAY_LEVELS]; GRAY_LEVELS];
    for r in 0..BLOCK {
        for c in 0..BLOCK - 1 {
            let i = sp.level(r, c) as usize - 1;
            let j = sp.level(r, c + 1) as usize - 1;
            counts[i][j] += 1;
        }
    }
    let total = (BLOCK * (BLOCK - 1)) as f64;
    let mut probs = [[0.0; GRAY_LEVELS]; GRAY_LEVELS];
    for i in 0..GRAY_LEVELS {
        for j in 0..GRAY_LEVELS {
            probs[i][j] = f64::from(counts[i][j]) / total;
        }
    }
    CooccurrenceMatrix { probs }
}

/// η = (100 / H_max) · Σ p̂ log₂(1/p̂), with 0·log(1/0) taken as 0.
pub fn texture_eta(cm: &CooccurrenceMatrix) -> TexturePercentage {
    let mut entropy = 0.0;
    for row in &cm.probs {
        for &p in row {
            if p > 0.0 {
                entropy -= p * math::log2(p);
            }
        }
    }
    TexturePercentage::new(100.0 / MAX_ENTROPY_BITS * entropy)
}

/// Texture percentage of a patch (scale → co-occurrence → entropy).
pub fn patch_texture(patch: &Patch) -> TexturePercentage {
    texture_eta(&cooccurrence(&scale_patch(patch)))
}
