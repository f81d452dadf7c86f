//! Image and mask containers plus the 8×8 block plumbing shared by the
//! sampler and the recoverer: tiling with zero padding, mask union,
//! Hadamard subsampling, and mask assembly.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result, BLOCK};

/// Grayscale image with real-valued luminance in [0, 255], row-major.
///
/// 8-bit inputs are widened on load; [`GrayImage::to_bytes`] rounds to
/// nearest and clamps on the way out, so integer-valued images round-trip
/// bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    pixels: Vec<f64>,
}

impl GrayImage {
    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyDimensions);
        }
        Ok(Self {
            height,
            width,
            pixels: vec![0.0; height * width],
        })
    }

    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        let mut img = Self::zeros(height, width)?;
        check_pixel(value)?;
        img.pixels.fill(value);
        Ok(img)
    }

    pub fn from_pixels(height: usize, width: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyDimensions);
        }
        if pixels.len() != height * width {
            return Err(Error::BufferLength {
                expected: height * width,
                got: pixels.len(),
            });
        }
        for &v in &pixels {
            check_pixel(v)?;
        }
        Ok(Self {
            height,
            width,
            pixels,
        })
    }

    pub fn from_bytes(height: usize, width: usize, bytes: &[u8]) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyDimensions);
        }
        if bytes.len() != height * width {
            return Err(Error::BufferLength {
                expected: height * width,
                got: bytes.len(),
            });
        }
        Ok(Self {
            height,
            width,
            pixels: bytes.iter().map(|&b| f64::from(b)).collect(),
        })
    }

    /// Round-to-nearest, clamp to [0, 255], narrow to bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels
            .iter()
            .map(|&v| math::round(v).clamp(0.0, 255.0) as u8)
            .collect()
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(value.is_finite());
        self.pixels[row * self.width + col] = value;
    }

    /// Pixel at clamped coordinates (replication rule at the borders).
    #[inline]
    pub fn get_clamped(&self, row: isize, col: isize) -> f64 {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.get(r, c)
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub(crate) fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    /// Rescale every pixel by a positive factor, clamping to [0, 255].
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for v in &mut out.pixels {
            *v = (*v * factor).clamp(0.0, 255.0);
        }
        out
    }
}

fn check_pixel(v: f64) -> Result<()> {
    if !v.is_finite() || !(0.0..=255.0).contains(&v) {
        return Err(Error::PixelRange { value: v });
    }
    Ok(())
}

/// Binary sampling mask; 1 marks a live (sampled) cell, 0 a dead one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitMask {
    height: usize,
    width: usize,
    bits: Vec<u8>,
}

impl BitMask {
    pub fn zeros(height: usize, width: usize) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyDimensions);
        }
        Ok(Self {
            height,
            width,
            bits: vec![0; height * width],
        })
    }

    pub fn full(height: usize, width: usize) -> Result<Self> {
        let mut m = Self::zeros(height, width)?;
        m.bits.fill(1);
        Ok(m)
    }

    pub fn from_bits(height: usize, width: usize, bits: Vec<u8>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::EmptyDimensions);
        }
        if bits.len() != height * width {
            return Err(Error::BufferLength {
                expected: height * width,
                got: bits.len(),
            });
        }
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit { value: bad });
        }
        Ok(Self {
            height,
            width,
            bits,
        })
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn is_live(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col] == 1
    }

    /// Live test at clamped coordinates (replication rule at the borders).
    #[inline]
    pub fn is_live_clamped(&self, row: isize, col: isize) -> bool {
        let r = row.clamp(0, self.height as isize - 1) as usize;
        let c = col.clamp(0, self.width as isize - 1) as usize;
        self.is_live(r, c)
    }

    #[inline]
    pub fn set_live(&mut self, row: usize, col: usize) {
        self.bits[row * self.width + col] = 1;
    }

    #[inline]
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub(crate) fn bits_mut(&mut self) -> &mut [u8] {
        &mut self.bits
    }

    pub fn live_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    pub fn dead_count(&self) -> usize {
        self.bits.len() - self.live_count()
    }

    /// Live fraction in [0, 1].
    pub fn rate(&self) -> f64 {
        self.live_count() as f64 / self.bits.len() as f64
    }
}

/// One 8×8 block of luminance values with its top-left position in the
/// parent image. Blocks that hang over the image boundary are zero padded;
/// [`Patch::in_image`] tells padding cells apart from real ones.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    values: [f64; BLOCK * BLOCK],
    origin: (usize, usize),
}

impl Patch {
    pub fn new(values: [f64; BLOCK * BLOCK], origin: (usize, usize)) -> Self {
        Self { values, origin }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * BLOCK + col]
    }

    #[inline]
    pub fn values(&self) -> &[f64; BLOCK * BLOCK] {
        &self.values
    }

    #[inline]
    pub fn origin(&self) -> (usize, usize) {
        self.origin
    }

    /// True when the cell maps to a real pixel of an image with the given
    /// dimensions rather than to zero padding.
    #[inline]
    pub fn in_image(&self, row: usize, col: usize, height: usize, width: usize) -> bool {
        self.origin.0 + row < height && self.origin.1 + col < width
    }
}

/// Split an image into ⌈h/8⌉·⌈w/8⌉ non-overlapping patches in row-major
/// block order, zero-padding at the right and bottom boundaries.
pub fn tile_image(img: &GrayImage) -> Vec<Patch> {
    let (h, w) = img.dims();
    let block_rows = h.div_ceil(BLOCK);
    let block_cols = w.div_ceil(BLOCK);
    let mut patches = Vec::with_capacity(block_rows * block_cols);
    for br in 0..block_rows {
        for bc in 0..block_cols {
            let origin = (br * BLOCK, bc * BLOCK);
            let mut values = [0.0; BLOCK * BLOCK];
            for r in 0..BLOCK {
                for c in 0..BLOCK {
                    let (ir, ic) = (origin.0 + r, origin.1 + c);
                    if ir < h && ic < w {
                        values[r * BLOCK + c] = img.get(ir, ic);
                    }
                }
            }
            patches.push(Patch::new(values, origin));
        }
    }
    patches
}

/// Logical OR of masks sharing one dimension.
pub fn union_masks(masks: &[&BitMask]) -> Result<BitMask> {
    let first = masks.first().expect("union of at least one mask");
    let mut out = (*first).clone();
    for m in &masks[1..] {
        if m.dims() != out.dims() {
            return Err(Error::DimensionMismatch {
                left: out.dims(),
                right: m.dims(),
            });
        }
        for (o, &b) in out.bits.iter_mut().zip(m.bits.iter()) {
            *o |= b;
        }
    }
    Ok(out)
}

/// Hadamard product of an image with a mask: live pixels pass through
/// bit-identically, dead ones become 0.
pub fn subsample(img: &GrayImage, mask: &BitMask) -> Result<GrayImage> {
    if img.dims() != mask.dims() {
        return Err(Error::DimensionMismatch {
            left: img.dims(),
            right: mask.dims(),
        });
    }
    let mut out = img.clone();
    for (v, &b) in out.pixels.iter_mut().zip(mask.bits.iter()) {
        if b == 0 {
            *v = 0.0;
        }
    }
    Ok(out)
}

/// Stitch per-patch 8×8 masks into a full-image mask. Live cells that fall
/// into the zero-padding region are dropped; origins must be block-aligned
/// and distinct.
pub fn assemble_mask(
    height: usize,
    width: usize,
    patch_masks: &[(BitMask, (usize, usize))],
) -> Result<BitMask> {
    let mut out = BitMask::zeros(height, width)?;
    let block_cols = width.div_ceil(BLOCK);
    let block_rows = height.div_ceil(BLOCK);
    let mut seen = vec![false; block_rows * block_cols];
    for (mask, origin) in patch_masks {
        if mask.dims() != (BLOCK, BLOCK) {
            return Err(Error::PatchMaskSize { got: mask.dims() });
        }
        if origin.0 % BLOCK != 0 || origin.1 % BLOCK != 0 {
            return Err(Error::MisalignedOrigin { origin: *origin });
        }
        let (br, bc) = (origin.0 / BLOCK, origin.1 / BLOCK);
        if br >= block_rows || bc >= block_cols {
            return Err(Error::MisalignedOrigin { origin: *origin });
        }
        let slot = &mut seen[br * block_cols + bc];
        if *slot {
            return Err(Error::OverlappingPatches { origin: *origin });
        }
        *slot = true;
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                let (ir, ic) = (origin.0 + r, origin.1 + c);
                if ir < height && ic < width && mask.is_live(r, c) {
                    out.set_live(ir, ic);
                }
            }
        }
    }
    Ok(out)
}
