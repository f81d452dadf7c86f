//! Sobel gradients with cross-patch border context and the 8-directional
//! decomposition feeding the nonuniform sampler.
//!
//! Axis convention: x is the column axis and y the row axis, so `gx`
//! responds to horizontal intensity change (vertical edges) and `gy` to
//! vertical change. The decomposition splits each gradient vector into a
//! cardinal and an ordinal component and files them into eight direction
//! planes ordered {N, NW, W, SW, S, SE, E, NE} following the sign rules of
//! the sampling scheme literally.

use crate::image::GrayImage;
use crate::math;
use crate::BLOCK;

/// Per-pixel Sobel responses over one 8×8 patch.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub gx: [f64; BLOCK * BLOCK],
    pub gy: [f64; BLOCK * BLOCK],
}

/// Compass directions in the plane order d1..d8.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    North = 0,
    NorthWest = 1,
    West = 2,
    SouthWest = 3,
    South = 4,
    SouthEast = 5,
    East = 6,
    NorthEast = 7,
}

pub const DIRECTION_COUNT: usize = 8;

/// Eight nonnegative direction planes; per pixel at most one cardinal and
/// one ordinal plane carry mass.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalGradients {
    planes: [[f64; BLOCK * BLOCK]; DIRECTION_COUNT],
}

impl DirectionalGradients {
    fn zeros() -> Self {
        Self {
            planes: [[0.0; BLOCK * BLOCK]; DIRECTION_COUNT],
        }
    }

    #[inline]
    pub fn plane(&self, dir: Direction) -> &[f64; BLOCK * BLOCK] {
        &self.planes[dir as usize]
    }

    #[inline]
    pub fn plane_by_index(&self, idx: usize) -> &[f64; BLOCK * BLOCK] {
        &self.planes[idx]
    }
}

/// Sobel gradients for the patch at `origin`, reading neighbor pixels from
/// the parent image and replicating at the image borders.
pub fn sobel_with_border(img: &GrayImage, origin: (usize, usize)) -> GradientField {
    let mut gx = [0.0; BLOCK * BLOCK];
    let mut gy = [0.0; BLOCK * BLOCK];
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            let ir = (origin.0 + r) as isize;
            let ic = (origin.1 + c) as isize;
            let p = |dr: isize, dc: isize| img.get_clamped(ir + dr, ic + dc);
            // Column-derivative kernel [-1 0 1; -2 0 2; -1 0 1].
            gx[r * BLOCK + c] =
                p(-1, 1) + 2.0 * p(0, 1) + p(1, 1) - p(-1, -1) - 2.0 * p(0, -1) - p(1, -1);
            // Row-derivative kernel [-1 -2 -1; 0 0 0; 1 2 1].
            gy[r * BLOCK + c] =
                p(1, -1) + 2.0 * p(1, 0) + p(1, 1) - p(-1, -1) - 2.0 * p(-1, 0) - p(-1, 1);
        }
    }
    GradientField { gx, gy }
}

/// Split each gradient vector into its cardinal component
/// α₁ = ||gx|−|gy|| / ‖g‖ and ordinal component α₂ = √2·min(|gx|,|gy|) / ‖g‖
/// and assign them to direction planes by the sign rules:
/// cardinal — gx ≥ 0 ∧ |gy| ≤ |gx| → N; gx < 0 ∧ |gy| ≤ |gx| → S;
/// gx ≥ 0 ∧ |gy| > |gx| → E; gx < 0 ∧ |gy| > |gx| → W.
/// ordinal — (gx ≥ 0, gy ≥ 0) → NE; (gx ≥ 0, gy < 0) → NW;
/// (gx < 0, gy < 0) → SW; (gx < 0, gy ≥ 0) → SE.
pub fn decompose(gf: &GradientField) -> DirectionalGradients {
    let mut out = DirectionalGradients::zeros();
    for idx in 0..BLOCK * BLOCK {
        let (gx, gy) = (gf.gx[idx], gf.gy[idx]);
        let norm = math::sqrt(gx * gx + gy * gy);
        if norm == 0.0 {
            continue;
        }
        let (ax, ay) = (math::abs(gx), math::abs(gy));
        let alpha1 = math::abs(ax - ay) / norm;
        let alpha2 = core::f64::consts::SQRT_2 * ax.min(ay) / norm;

        let cardinal = if ay <= ax {
            if gx >= 0.0 {
                Direction::North
            } else {
                Direction::South
            }
        } else if gx >= 0.0 {
            Direction::East
        } else {
            Direction::West
        };
        let ordinal = if gx >= 0.0 {
            if gy >= 0.0 {
                Direction::NorthEast
            } else {
                Direction::NorthWest
            }
        } else if gy < 0.0 {
            Direction::SouthWest
        } else {
            Direction::SouthEast
        };
        out.planes[cardinal as usize][idx] = alpha1;
        out.planes[ordinal as usize][idx] = alpha2;
    }
    out
}

/// Min-max normalize a plane to [0, 1]. A constant nonzero plane maps to
/// all ones (it uniformly carries the direction); an all-zero plane stays
/// zero.
pub(crate) fn min_max_normalize(values: &mut [f64]) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values.iter() {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if hi == lo {
        if hi != 0.0 {
            values.fill(1.0);
        }
        return;
    }
    let span = hi - lo;
    for v in values.iter_mut() {
        *v = (*v - lo) / span;
    }
}

/// Independently min-max normalize each of the eight planes.
pub fn normalize_directions(dg: &DirectionalGradients) -> DirectionalGradients {
    let mut out = dg.clone();
    for plane in &mut out.planes {
        min_max_normalize(plane);
    }
    out
}
