use core::fmt;

/// Errors surfaced by container construction and the recovery/metric stages.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Image or mask constructed with a zero dimension.
    EmptyDimensions,
    /// Backing buffer length does not match height × width.
    BufferLength { expected: usize, got: usize },
    /// Pixel value outside [0, 255] or not finite.
    PixelRange { value: f64 },
    /// Mask bit other than 0 or 1.
    InvalidBit { value: u8 },
    /// Two containers that must share dimensions do not.
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Patch mask in an assembly is not 8×8.
    PatchMaskSize { got: (usize, usize) },
    /// Patch origin not aligned to the block grid.
    MisalignedOrigin { origin: (usize, usize) },
    /// Two patch masks claim the same block.
    OverlappingPatches { origin: (usize, usize) },
    /// Sampling rate outside [0, 1].
    RateRange { rate: f64 },
    /// Recovery started from a mask with no live cells.
    AllDeadMask,
    /// NRE reference image has zero norm.
    ZeroReference,
    /// Image smaller than the SSIM window.
    ImageTooSmall { min: usize, got: (usize, usize) },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyDimensions => write!(f, "image dimensions must be at least 1x1"),
            Error::BufferLength { expected, got } => {
                write!(f, "buffer has {got} entries, expected {expected}")
            }
            Error::PixelRange { value } => {
                write!(f, "pixel value {value} outside [0, 255] or not finite")
            }
            Error::InvalidBit { value } => write!(f, "mask bit {value} is neither 0 nor 1"),
            Error::DimensionMismatch { left, right } => write!(
                f,
                "dimension mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::PatchMaskSize { got } => {
                write!(f, "patch mask is {}x{}, expected 8x8", got.0, got.1)
            }
            Error::MisalignedOrigin { origin } => write!(
                f,
                "patch origin ({}, {}) is not block-aligned",
                origin.0, origin.1
            ),
            Error::OverlappingPatches { origin } => write!(
                f,
                "two patch masks share the origin ({}, {})",
                origin.0, origin.1
            ),
            Error::RateRange { rate } => write!(f, "sampling rate {rate} outside [0, 1]"),
            Error::AllDeadMask => write!(f, "mask has no live cells to propagate from"),
            Error::ZeroReference => write!(f, "reference image has zero norm"),
            Error::ImageTooSmall { min, got } => write!(
                f,
                "image {}x{} smaller than the {min}x{min} window",
                got.0, got.1
            ),
        }
    }
}

impl core::error::Error for Error {}
