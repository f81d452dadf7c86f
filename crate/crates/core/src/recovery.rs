//! Two-state cellular-automaton recovery with growing Moore windows and
//! Gaussian-weighted revival, the conditional post-smoother, and a
//! convergence probe for the generation bound.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::image::{BitMask, GrayImage};
use crate::math;
use crate::{Error, Result};

#[cfg(feature = "rayon")]
use rayon::prelude::*;

/// Centered Ω×Ω Gaussian weights w(p,q) = exp(−(p²+q²)/(2σ²)), kept
/// unnormalized; the weighted mean divides by the gathered weight sum.
#[derive(Debug, Clone)]
pub struct GaussianKernel {
    size: usize,
    weights: Vec<f64>,
}

impl GaussianKernel {
    pub fn new(size: usize, sigma: f64) -> Self {
        debug_assert!(size % 2 == 1 && sigma > 0.0);
        let half = (size / 2) as isize;
        let mut weights = Vec::with_capacity(size * size);
        for p in -half..=half {
            for q in -half..=half {
                let d2 = (p * p + q * q) as f64;
                weights.push(math::exp(-d2 / (2.0 * sigma * sigma)));
            }
        }
        Self { size, weights }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Weight at offset (p, q) from the center.
    #[inline]
    pub fn weight(&self, p: isize, q: isize) -> f64 {
        let half = (self.size / 2) as isize;
        self.weights[((p + half) as usize) * self.size + (q + half) as usize]
    }
}

/// Weighted mean over gathered (value, weight) pairs, accumulated in
/// shifted form around the first gathered value: constant inputs are
/// reproduced exactly, which keeps recovered constants bit-identical to
/// the source.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ShiftedMean {
    base: f64,
    num: f64,
    den: f64,
    seen: bool,
}

impl ShiftedMean {
    pub(crate) fn new() -> Self {
        Self {
            base: 0.0,
            num: 0.0,
            den: 0.0,
            seen: false,
        }
    }

    #[inline]
    pub(crate) fn push(&mut self, value: f64, weight: f64) {
        if !self.seen {
            self.base = value;
            self.seen = true;
        }
        self.num += weight * (value - self.base);
        self.den += weight;
    }

    #[inline]
    pub(crate) fn any(&self) -> bool {
        self.seen
    }

    #[inline]
    pub(crate) fn value(&self) -> f64 {
        self.base + self.num / self.den
    }
}

/// Recovery schedule knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaOptions {
    /// Per-generation growth factor of the kernel std.
    pub zeta: f64,
    /// Keep a copy of mask and estimate after every generation.
    pub snapshots: bool,
}

impl Default for CaOptions {
    fn default() -> Self {
        Self {
            zeta: 1.05,
            snapshots: false,
        }
    }
}

/// Mask and estimate after one generation.
#[derive(Debug, Clone)]
pub struct CaSnapshot {
    pub generation: u32,
    pub mask: BitMask,
    pub image: GrayImage,
}

/// The evolving recoverer state: current generation mask and estimate plus
/// the window/σ schedule. One [`CaState::step`] is one synchronous
/// generation.
#[derive(Debug, Clone)]
pub struct CaState {
    mask: BitMask,
    image: GrayImage,
    initial_mask: BitMask,
    window: usize,
    sigma: f64,
    zeta: f64,
    generation: u32,
    dead: usize,
}

impl CaState {
    pub fn new(mask: &BitMask, image: &GrayImage, zeta: f64) -> Result<Self> {
        if mask.dims() != image.dims() {
            return Err(Error::DimensionMismatch {
                left: mask.dims(),
                right: image.dims(),
            });
        }
        let live = mask.live_count();
        if live == 0 {
            return Err(Error::AllDeadMask);
        }
        Ok(Self {
            mask: mask.clone(),
            image: image.clone(),
            initial_mask: mask.clone(),
            window: 3,
            sigma: 1.0,
            zeta,
            generation: 0,
            dead: mask.bits().len() - live,
        })
    }

    #[inline]
    pub fn dead_cells(&self) -> usize {
        self.dead
    }

    #[inline]
    pub fn generation(&self) -> u32 {
        self.generation
    }

    #[inline]
    pub fn window(&self) -> usize {
        self.window
    }

    #[inline]
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn mask(&self) -> &BitMask {
        &self.mask
    }

    #[inline]
    pub fn image(&self) -> &GrayImage {
        &self.image
    }

    #[inline]
    pub fn initial_mask(&self) -> &BitMask {
        &self.initial_mask
    }

    /// One synchronous generation: every dead cell gathers live neighbors
    /// in the (Ω−1)-Moore neighborhood of the *current* mask/estimate
    /// (replicating at borders) and revives to their Gaussian-weighted
    /// mean; then the window and σ schedules advance.
    pub fn step(&mut self) {
        let (h, w) = self.mask.dims();
        let kernel = GaussianKernel::new(self.window, self.sigma);
        let half = (self.window / 2) as isize;

        let mut next_image = self.image.clone();
        let mut next_mask = self.mask.clone();

        let cur_mask = &self.mask;
        let cur_image = &self.image;
        let row_update = |r: usize, image_row: &mut [f64], mask_row: &mut [u8]| {
            for c in 0..w {
                if mask_row[c] == 1 {
                    continue;
                }
                let mut mean = ShiftedMean::new();
                for p in -half..=half {
                    let rr = (r as isize + p).clamp(0, h as isize - 1) as usize;
                    for q in -half..=half {
                        let cc = (c as isize + q).clamp(0, w as isize - 1) as usize;
                        if cur_mask.is_live(rr, cc) {
                            mean.push(cur_image.get(rr, cc), kernel.weight(p, q));
                        }
                    }
                }
                if mean.any() {
                    image_row[c] = mean.value();
                    mask_row[c] = 1;
                }
            }
        };

        #[cfg(feature = "rayon")]
        next_image
            .pixels_mut()
            .par_chunks_mut(w)
            .zip(next_mask.bits_mut().par_chunks_mut(w))
            .enumerate()
            .for_each(|(r, (image_row, mask_row))| row_update(r, image_row, mask_row));

        #[cfg(not(feature = "rayon"))]
        next_image
            .pixels_mut()
            .chunks_mut(w)
            .zip(next_mask.bits_mut().chunks_mut(w))
            .enumerate()
            .for_each(|(r, (image_row, mask_row))| row_update(r, image_row, mask_row));

        self.dead = next_mask.dead_count();
        self.image = next_image;
        self.mask = next_mask;
        self.window += 2;
        self.sigma *= self.zeta;
        self.generation += 1;
    }
}

/// A finished recovery: the filled image, the generation count, and the
/// per-generation snapshots when requested.
#[derive(Debug, Clone)]
pub struct Recovered {
    pub image: GrayImage,
    pub generations: u32,
    pub snapshots: Vec<CaSnapshot>,
}

/// Iterate generations until no dead cell remains. Live-cell values pass
/// through all generations verbatim.
pub fn recover_with(mask: &BitMask, image: &GrayImage, opts: &CaOptions) -> Result<Recovered> {
    let mut state = CaState::new(mask, image, opts.zeta)?;
    let mut snapshots = Vec::new();
    while state.dead_cells() != 0 {
        state.step();
        if opts.snapshots {
            snapshots.push(CaSnapshot {
                generation: state.generation(),
                mask: state.mask().clone(),
                image: state.image().clone(),
            });
        }
    }
    Ok(Recovered {
        image: state.image,
        generations: state.generation,
        snapshots,
    })
}

/// [`recover_with`] under the default schedule (ζ = 1.05, no snapshots).
pub fn recover(mask: &BitMask, image: &GrayImage) -> Result<Recovered> {
    recover_with(mask, image, &CaOptions::default())
}

/// Upper bound on the generation count: the smallest g whose cumulative
/// window reach 1+2+…+g covers the largest dead-to-live Chebyshev
/// distance. Returns `None` for an all-dead mask.
pub fn convergence_probe(mask: &BitMask) -> Option<u32> {
    let (h, w) = mask.dims();
    let mut dist = vec![u32::MAX; h * w];
    let mut queue = VecDeque::new();
    for r in 0..h {
        for c in 0..w {
            if mask.is_live(r, c) {
                dist[r * w + c] = 0;
                queue.push_back((r, c));
            }
        }
    }
    if queue.is_empty() {
        return None;
    }
    // Multi-source BFS over the 8-neighborhood computes Chebyshev distance.
    let mut max_dist = 0;
    while let Some((r, c)) = queue.pop_front() {
        let d = dist[r * w + c];
        max_dist = max_dist.max(d);
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                if dr == 0 && dc == 0 {
                    continue;
                }
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                    continue;
                }
                let idx = nr as usize * w + nc as usize;
                if dist[idx] == u32::MAX {
                    dist[idx] = d + 1;
                    queue.push_back((nr as usize, nc as usize));
                }
            }
        }
    }
    let mut bound = 0;
    let mut reach = 0;
    while reach < max_dist {
        bound += 1;
        reach += bound;
    }
    Some(bound)
}

/// Conditional smoother configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostprocessConfig {
    /// Flatness coefficient: windows with fewer than ⌊ρ·Ω_f²⌉ initially
    /// live cells are smoothed.
    pub rho: f64,
    /// Smoother window side Ω_f (odd).
    pub window: usize,
    /// Smoother kernel std.
    pub sigma: f64,
}

impl Default for PostprocessConfig {
    fn default() -> Self {
        Self {
            rho: 0.3,
            window: 3,
            sigma: 1.5,
        }
    }
}

/// Smooth only flat regions: wherever the initial mask holds fewer than
/// ⌊ρ·Ω_f²⌉ live cells in the window, replace the pixel with the Gaussian
/// weighted mean of the recovered image over that window. The output is
/// built from the unmodified input, so smoothing never cascades.
pub fn postprocess(
    image: &GrayImage,
    initial_mask: &BitMask,
    cfg: &PostprocessConfig,
) -> Result<GrayImage> {
    if image.dims() != initial_mask.dims() {
        return Err(Error::DimensionMismatch {
            left: image.dims(),
            right: initial_mask.dims(),
        });
    }
    let (h, w) = image.dims();
    let threshold = math::round(cfg.rho * (cfg.window * cfg.window) as f64) as usize;
    let kernel = GaussianKernel::new(cfg.window, cfg.sigma);
    let half = (cfg.window / 2) as isize;
    let mut out = image.clone();
    for r in 0..h {
        for c in 0..w {
            let mut live = 0usize;
            for p in -half..=half {
                for q in -half..=half {
                    if initial_mask.is_live_clamped(r as isize + p, c as isize + q) {
                        live += 1;
                    }
                }
            }
            if live >= threshold {
                continue;
            }
            let mut mean = ShiftedMean::new();
            for p in -half..=half {
                for q in -half..=half {
                    let v = image.get_clamped(r as isize + p, c as isize + q);
                    mean.push(v, kernel.weight(p, q));
                }
            }
            out.set(r, c, mean.value());
        }
    }
    Ok(out)
}
