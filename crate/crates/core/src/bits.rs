//! Bit sequences with the renderings used by the hash output: plain 0/1
//! text, nibble-packed hex, and byte-packed "ASCII" form. Bits pack most
//! significant first; a final partial nibble or byte is padded with
//! trailing zeros.

use std::fmt;

use crate::error::{Error, Result};

/// An ordered sequence of bits (stored one byte per bit, values 0/1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidInput("bit values must be 0 or 1".into()));
        }
        Ok(Self { bits })
    }

    /// Parse from text of '0'/'1' characters; ASCII whitespace is skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(text.len());
        for ch in text.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_ascii_whitespace() => {}
                c => {
                    return Err(Error::InvalidInput(format!(
                        "unexpected character {c:?} in bitstring"
                    )))
                }
            }
        }
        Ok(Self { bits })
    }

    /// Expand bytes to bits, most significant bit of each byte first.
    pub fn from_bytes_msb(bytes: &[u8]) -> Self {
        let mut bits = Vec::with_capacity(bytes.len() * 8);
        for &byte in bytes {
            for shift in (0..8).rev() {
                bits.push((byte >> shift) & 1);
            }
        }
        Self { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// Append the lowest `width` bits of `value`, most significant first.
    pub fn push_value(&mut self, value: u64, width: usize) {
        for shift in (0..width).rev() {
            if shift >= 64 {
                self.bits.push(0);
            } else {
                self.bits.push(((value >> shift) & 1) as u8);
            }
        }
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// Number of positions where the two bitstrings differ.
    pub fn hamming(&self, other: &Self) -> Result<usize> {
        Ok(self.xor(other)?.count_ones())
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::InvalidInput(format!(
                "length mismatch: {} vs {} bits",
                self.len(),
                other.len()
            )));
        }
        Ok(Self {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    /// Uppercase hex, one character per 4 bits, final partial nibble padded
    /// with trailing zeros. Length is `ceil(len/4)`.
    pub fn hex(&self) -> String {
        self.bits
            .chunks(4)
            .map(|chunk| {
                let mut nibble = 0u8;
                for (i, &b) in chunk.iter().enumerate() {
                    nibble |= b << (3 - i);
                }
                char::from_digit(nibble as u32, 16)
                    .expect("nibble < 16")
                    .to_ascii_uppercase()
            })
            .collect()
    }

    /// Hex split into 4-character display groups (the last group may be
    /// shorter).
    pub fn hex_grouped(&self) -> Vec<String> {
        let hex = self.hex();
        hex.as_bytes()
            .chunks(4)
            .map(|c| String::from_utf8_lossy(c).into_owned())
            .collect()
    }

    /// Byte rendering: 8 bits per byte, most significant first, final
    /// partial byte padded with trailing zeros. Length is `ceil(len/8)`.
    pub fn ascii_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|chunk| {
                let mut byte = 0u8;
                for (i, &b) in chunk.iter().enumerate() {
                    byte |= b << (7 - i);
                }
                byte
            })
            .collect()
    }
}

impl Default for BitString {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}
