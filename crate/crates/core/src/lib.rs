//! Content-adaptive sparse image sampling and cellular-automaton recovery.
//!
//! The pipeline works on grayscale images in 8×8 blocks. For every block a
//! texture percentage, a quantized DCT spectrum, and a directional gradient
//! decomposition decide how many samples to keep and where; the union of a
//! regular lattice, a random pattern, and an edge-aware nonuniform pattern
//! forms the sampling mask. Missing pixels are then refilled by a two-state
//! cellular automaton that grows its Gaussian-weighted window from
//! generation to generation, followed by an optional conditional smoother.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable default features
//! and enable `libm` for builds without the standard library. The `rayon`
//! feature parallelizes per-patch sampling and per-row recovery sweeps
//! without changing any output bit.

#![cfg_attr(not(feature = "std"), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("casir-core needs either the `std` feature or the `libm` fallback");

pub mod error;
pub mod gradient;
pub mod image;
mod math;
pub mod metrics;
pub mod recovery;
pub mod rng;
pub mod sampler;
pub mod spectral;
pub mod texture;

pub use error::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Side length of the square processing blocks.
pub const BLOCK: usize = 8;
