use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{invalid, PolarError, Result};

/// A sequence of bits stored one per byte, every element 0 or 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector(Vec<u8>);

impl BitVector {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return invalid(format!("element {pos} is {} (not a bit)", bits[pos]));
        }
        Ok(BitVector(bits))
    }

    pub fn zeros(len: usize) -> Self {
        BitVector(vec![0; len])
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitVector(iter.into_iter().map(u8::from).collect())
    }

    /// Bits of `value`, most significant first, `len` wide.
    pub fn from_u64(value: u64, len: usize) -> Self {
        BitVector((0..len).rev().map(|i| ((value >> i) & 1) as u8).collect())
    }

    /// Crate-internal constructor for buffers already known to hold bits.
    pub(crate) fn from_raw(bits: Vec<u8>) -> Self {
        debug_assert!(bits.iter().all(|&b| b <= 1));
        BitVector(bits)
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn set(&mut self, idx: usize, bit: bool) {
        self.0[idx] = u8::from(bit);
    }

    pub fn flip(&mut self, idx: usize) {
        self.0[idx] ^= 1;
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|&&b| b == 1).count()
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len() != other.len() {
            return Err(PolarError::LengthMismatch {
                expected: self.len(),
                got: other.len(),
            });
        }
        Ok(BitVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a ^ b).collect(),
        ))
    }

    /// Gathers the bits at `positions`.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        BitVector(positions.iter().map(|&p| self.0[p]).collect())
    }
}

impl Deref for BitVector {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitVector {
    type Err = PolarError;

    /// Parses a string of `0`/`1` characters; whitespace and commas are skipped.
    fn from_str(s: &str) -> Result<Self> {
        let mut out = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => out.push(0),
                '1' => out.push(1),
                c if c.is_whitespace() || c == ',' => {}
                c => return invalid(format!("unexpected character {c:?} in bit string")),
            }
        }
        Ok(BitVector(out))
    }
}

impl TryFrom<Vec<u8>> for BitVector {
    type Error = PolarError;
    fn try_from(v: Vec<u8>) -> Result<Self> {
        BitVector::new(v)
    }
}
