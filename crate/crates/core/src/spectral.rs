//! Frequency-domain analysis of a patch: orthonormal 2-D DCT, the
//! texture-driven IJG quantization table, sparsity-based random sampling
//! rate, and the six-region frequency partition behind the edge signature.

// Index loops keep the matrix algebra readable here.
#![allow(clippy::needless_range_loop)]

use core::fmt;

use crate::math;
use crate::texture::TexturePercentage;
use crate::BLOCK;

/// 8×8 orthonormal DCT-II basis; forward transform is T·R·Tᵀ.
#[derive(Debug, Clone)]
pub struct DctKernel {
    basis: [[f64; BLOCK]; BLOCK],
}

impl DctKernel {
    pub fn new() -> Self {
        let mut basis = [[0.0; BLOCK]; BLOCK];
        let n = BLOCK as f64;
        for (u, row) in basis.iter_mut().enumerate() {
            let scale = if u == 0 {
                math::sqrt(1.0 / n)
            } else {
                math::sqrt(2.0 / n)
            };
            for (x, entry) in row.iter_mut().enumerate() {
                let angle = core::f64::consts::PI * (2.0 * x as f64 + 1.0) * u as f64 / (2.0 * n);
                *entry = scale * cos(angle);
            }
        }
        Self { basis }
    }

    #[inline]
    pub fn basis(&self) -> &[[f64; BLOCK]; BLOCK] {
        &self.basis
    }

    /// Forward 2-D DCT of a row-major 8×8 block.
    pub fn forward(&self, values: &[f64; BLOCK * BLOCK]) -> [[f64; BLOCK]; BLOCK] {
        // tmp = T · R
        let mut tmp = [[0.0; BLOCK]; BLOCK];
        for u in 0..BLOCK {
            for c in 0..BLOCK {
                let mut acc = 0.0;
                for r in 0..BLOCK {
                    acc += self.basis[u][r] * values[r * BLOCK + c];
                }
                tmp[u][c] = acc;
            }
        }
        // out = tmp · Tᵀ
        let mut out = [[0.0; BLOCK]; BLOCK];
        for u in 0..BLOCK {
            for v in 0..BLOCK {
                let mut acc = 0.0;
                for c in 0..BLOCK {
                    acc += tmp[u][c] * self.basis[v][c];
                }
                out[u][v] = acc;
            }
        }
        out
    }

    /// Inverse 2-D DCT back to a row-major block.
    pub fn inverse(&self, spectrum: &[[f64; BLOCK]; BLOCK]) -> [f64; BLOCK * BLOCK] {
        // tmp = Tᵀ · F
        let mut tmp = [[0.0; BLOCK]; BLOCK];
        for r in 0..BLOCK {
            for v in 0..BLOCK {
                let mut acc = 0.0;
                for u in 0..BLOCK {
                    acc += self.basis[u][r] * spectrum[u][v];
                }
                tmp[r][v] = acc;
            }
        }
        // out = tmp · T
        let mut out = [0.0; BLOCK * BLOCK];
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                let mut acc = 0.0;
                for v in 0..BLOCK {
                    acc += tmp[r][v] * self.basis[v][c];
                }
                out[r * BLOCK + c] = acc;
            }
        }
        out
    }
}

impl Default for DctKernel {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(feature = "std")]
#[inline]
fn cos(x: f64) -> f64 {
    x.cos()
}

#[cfg(all(not(feature = "std"), feature = "libm"))]
#[inline]
fn cos(x: f64) -> f64 {
    libm::cos(x)
}

/// IJG luminance reference quantization table.
pub const REFERENCE_QUANT_TABLE: [[u16; BLOCK]; BLOCK] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

/// Below this texture percentage quantization is bypassed and the patch is
/// treated as fully sparse (k = 0): the scaling factor 5000/η blows up as
/// η → 0 and a near-DC patch needs no random samples.
pub const QUANT_BYPASS_ETA: f64 = 0.5;

/// IJG scaling factor driven by texture instead of a quality setting.
pub fn scaling_factor(eta: f64) -> f64 {
    if eta < 50.0 {
        5000.0 / eta
    } else {
        2.0 * (100.0 - eta)
    }
}

/// Quantization table for a texture level: ⌊(s_η/100)·Q_r + ½J⌋ floored
/// against the all-ones table.
pub fn quant_table(eta: TexturePercentage) -> [[u16; BLOCK]; BLOCK] {
    let s = scaling_factor(eta.value());
    let mut q = [[1u16; BLOCK]; BLOCK];
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            let scaled = math::floor(s / 100.0 * f64::from(REFERENCE_QUANT_TABLE[i][j]) + 0.5);
            q[i][j] = if scaled < 1.0 {
                1
            } else if scaled > f64::from(u16::MAX) {
                u16::MAX
            } else {
                scaled as u16
            };
        }
    }
    q
}

/// Quantized spectrum with its sparsity number k = ‖·‖₀.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedSpectrum {
    coeffs: [[i32; BLOCK]; BLOCK],
    sparsity: u32,
}

impl QuantizedSpectrum {
    pub fn zero() -> Self {
        Self {
            coeffs: [[0; BLOCK]; BLOCK],
            sparsity: 0,
        }
    }

    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> i32 {
        self.coeffs[i][j]
    }

    #[inline]
    pub fn coeffs(&self) -> &[[i32; BLOCK]; BLOCK] {
        &self.coeffs
    }

    /// Number of nonzero quantized coefficients.
    #[inline]
    pub fn sparsity(&self) -> u32 {
        self.sparsity
    }
}

/// Entry-by-entry division by the table, rounded to the nearest integer
/// (ties away from zero).
pub fn quantize(
    spectrum: &[[f64; BLOCK]; BLOCK],
    table: &[[u16; BLOCK]; BLOCK],
) -> QuantizedSpectrum {
    let mut coeffs = [[0i32; BLOCK]; BLOCK];
    let mut sparsity = 0;
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            let q = math::round(spectrum[i][j] / f64::from(table[i][j])) as i32;
            coeffs[i][j] = q;
            if q != 0 {
                sparsity += 1;
            }
        }
    }
    QuantizedSpectrum { coeffs, sparsity }
}

/// Tunable factors of the random-rate formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomRateParams {
    pub c: f64,
    pub d: f64,
}

impl Default for RandomRateParams {
    fn default() -> Self {
        Self { c: 1.3, d: 2.8 }
    }
}

/// Patch length n = b².
pub const PATCH_LEN: u32 = (BLOCK * BLOCK) as u32;

/// Random sampling rate ⌊c·k·log₁₀(d·n/k)⌉, zero for k = 0.
pub fn random_rate(k: u32, params: &RandomRateParams) -> u32 {
    if k == 0 {
        return 0;
    }
    let k = f64::from(k);
    let raw = params.c * k * math::log10(params.d * f64::from(PATCH_LEN) / k);
    let rounded = math::round(raw);
    if rounded < 0.0 {
        0
    } else {
        rounded as u32
    }
}

/// Frequency regions of the 8×8 mode grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqRegion {
    /// The single DC mode.
    Dc,
    /// S1: low frequencies.
    Low,
    /// S2: horizontal-frequency band (vertical edges).
    HorizontalBand,
    /// S3: vertical-frequency band (horizontal edges).
    VerticalBand,
    /// S4: diagonal band.
    Diagonal,
    /// S5: remaining high frequencies.
    High,
}

/// Map from each of the 64 modes to its region. (1,1) is DC.
#[derive(Debug, Clone)]
pub struct FrequencyPartition {
    regions: [[FreqRegion; BLOCK]; BLOCK],
}

impl FrequencyPartition {
    /// The partition used throughout: with 1-based mode indices,
    /// S1 = {i+j ≤ 4} \ DC, S2 = {i ≤ 2, j ≥ 4}, S3 = {j ≤ 2, i ≥ 4},
    /// S4 = {|i−j| ≤ 1, i+j ≥ 5, i,j ≤ 6}, S5 = the rest.
    pub fn standard() -> Self {
        let mut regions = [[FreqRegion::High; BLOCK]; BLOCK];
        for (ri, row) in regions.iter_mut().enumerate() {
            for (rj, slot) in row.iter_mut().enumerate() {
                let (i, j) = (ri as i32 + 1, rj as i32 + 1);
                *slot = if (i, j) == (1, 1) {
                    FreqRegion::Dc
                } else if i + j <= 4 {
                    FreqRegion::Low
                } else if i <= 2 && j >= 4 {
                    FreqRegion::HorizontalBand
                } else if j <= 2 && i >= 4 {
                    FreqRegion::VerticalBand
                } else if (i - j).abs() <= 1 && i + j >= 5 && i <= 6 && j <= 6 {
                    FreqRegion::Diagonal
                } else {
                    FreqRegion::High
                };
            }
        }
        Self { regions }
    }

    #[inline]
    pub fn region(&self, i: usize, j: usize) -> FreqRegion {
        self.regions[i][j]
    }
}

impl Default for FrequencyPartition {
    fn default() -> Self {
        Self::standard()
    }
}

/// Five bits marking which AC regions S1..S5 hold nonzero coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeSignature(pub [bool; 5]);

impl EdgeSignature {
    /// Signatures of well-structured edges: vertical, horizontal, diagonal,
    /// vertical-diagonal, and horizontal-diagonal.
    const STRUCTURED: [[bool; 5]; 5] = [
        [true, true, false, false, false],
        [true, false, true, false, false],
        [true, false, false, true, false],
        [true, true, false, true, false],
        [true, false, true, true, false],
    ];

    pub fn is_structured_edge(&self) -> bool {
        Self::STRUCTURED.contains(&self.0)
    }
}

impl fmt::Display for EdgeSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.0 {
            write!(f, "{}", u8::from(bit))?;
        }
        Ok(())
    }
}

/// Read the edge-structure string off a quantized spectrum: bit s is set
/// iff any nonzero coefficient lies in region S_s.
pub fn classify_regions(qs: &QuantizedSpectrum, fp: &FrequencyPartition) -> EdgeSignature {
    let mut bits = [false; 5];
    for i in 0..BLOCK {
        for j in 0..BLOCK {
            if qs.coeff(i, j) == 0 {
                continue;
            }
            match fp.region(i, j) {
                FreqRegion::Dc => {}
                FreqRegion::Low => bits[0] = true,
                FreqRegion::HorizontalBand => bits[1] = true,
                FreqRegion::VerticalBand => bits[2] = true,
                FreqRegion::Diagonal => bits[3] = true,
                FreqRegion::High => bits[4] = true,
            }
        }
    }
    EdgeSignature(bits)
}
