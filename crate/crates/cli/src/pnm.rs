//! Netpbm readers and writers: binary PGM (P5, maxval 255) for images and
//! plain PBM (P1) for masks. Integer-valued images round-trip bit-exactly;
//! live mask cells serialize as '1'.

use std::fs;
use std::path::Path;

use casir_core::image::{BitMask, GrayImage};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PnmError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("expected {expected} magic, found something else")]
    BadMagic { expected: &'static str },
    #[error("malformed header: {0}")]
    Header(String),
    #[error("unsupported maxval {0}, only 255 is handled")]
    Maxval(u64),
    #[error("pixel data truncated: expected {expected} bytes, found {got}")]
    Truncated { expected: usize, got: usize },
    #[error("invalid mask digit {0:?}")]
    MaskDigit(char),
    #[error("zero image dimension")]
    ZeroDimension,
}

/// Cursor over header bytes that skips whitespace and '#' comments.
struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(data: &'a [u8]) -> Self {
        Self { data, pos: 0 }
    }

    fn skip_filler(&mut self) {
        while self.pos < self.data.len() {
            let b = self.data[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_unsigned(&mut self) -> Result<u64, PnmError> {
        self.skip_filler();
        let start = self.pos;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PnmError::Header("expected an unsigned integer".into()));
        }
        let text =
            std::str::from_utf8(&self.data[start..self.pos]).expect("digits are valid utf-8");
        text.parse()
            .map_err(|_| PnmError::Header(format!("integer out of range: {text}")))
    }
}

pub fn decode_pgm(data: &[u8]) -> Result<GrayImage, PnmError> {
    if data.len() < 2 || &data[..2] != b"P5" {
        return Err(PnmError::BadMagic { expected: "P5" });
    }
    let mut tok = Tokens::new(&data[2..]);
    let width = tok.next_unsigned()? as usize;
    let height = tok.next_unsigned()? as usize;
    let maxval = tok.next_unsigned()?;
    if maxval != 255 {
        return Err(PnmError::Maxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(PnmError::ZeroDimension);
    }
    // Exactly one whitespace byte separates the header from the raster.
    let mut pos = 2 + tok.pos;
    if pos >= data.len() || !data[pos].is_ascii_whitespace() {
        return Err(PnmError::Header("missing raster separator".into()));
    }
    pos += 1;
    let expected = width * height;
    let raster = &data[pos..];
    if raster.len() < expected {
        return Err(PnmError::Truncated {
            expected,
            got: raster.len(),
        });
    }
    Ok(GrayImage::from_bytes(height, width, &raster[..expected])
        .expect("dimensions validated above"))
}

pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(&img.to_bytes());
    out
}

pub fn decode_pbm(data: &[u8]) -> Result<BitMask, PnmError> {
    if data.len() < 2 || &data[..2] != b"P1" {
        return Err(PnmError::BadMagic { expected: "P1" });
    }
    let mut tok = Tokens::new(&data[2..]);
    let width = tok.next_unsigned()? as usize;
    let height = tok.next_unsigned()? as usize;
    if width == 0 || height == 0 {
        return Err(PnmError::ZeroDimension);
    }
    let mut bits = Vec::with_capacity(width * height);
    let mut pos = 2 + tok.pos;
    while bits.len() < width * height && pos < data.len() {
        match data[pos] {
            b'0' => bits.push(0),
            b'1' => bits.push(1),
            b'#' => {
                while pos < data.len() && data[pos] != b'\n' {
                    pos += 1;
                }
            }
            b if b.is_ascii_whitespace() => {}
            other => return Err(PnmError::MaskDigit(other as char)),
        }
        pos += 1;
    }
    if bits.len() < width * height {
        return Err(PnmError::Truncated {
            expected: width * height,
            got: bits.len(),
        });
    }
    Ok(BitMask::from_bits(height, width, bits).expect("bits validated above"))
}

pub fn encode_pbm(mask: &BitMask) -> Vec<u8> {
    let mut out = format!("P1\n{} {}\n", mask.width(), mask.height()).into_bytes();
    // Keep raster lines at 64 digits or fewer.
    let mut line = 0usize;
    for &bit in mask.bits() {
        out.push(b'0' + bit);
        line += 1;
        if line == 64 {
            out.push(b'\n');
            line = 0;
        }
    }
    if line != 0 {
        out.push(b'\n');
    }
    out
}

fn read_file(path: &Path) -> Result<Vec<u8>, PnmError> {
    fs::read(path).map_err(|source| PnmError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), PnmError> {
    fs::write(path, bytes).map_err(|source| PnmError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_pgm(path: &Path) -> Result<GrayImage, PnmError> {
    decode_pgm(&read_file(path)?)
}

pub fn write_pgm(path: &Path, img: &GrayImage) -> Result<(), PnmError> {
    write_file(path, &encode_pgm(img))
}

pub fn read_pbm(path: &Path) -> Result<BitMask, PnmError> {
    decode_pbm(&read_file(path)?)
}

pub fn write_pbm(path: &Path, mask: &BitMask) -> Result<(), PnmError> {
    write_file(path, &encode_pbm(mask))
}
