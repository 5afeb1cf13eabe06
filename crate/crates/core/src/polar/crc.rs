//! Systematic CRC over GF(2) with an arbitrary generator polynomial.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, PolarError, Result};
use crate::polar::BitVector;

/// A CRC generator polynomial, coefficients stored most significant first
/// (the leading coefficient is always 1). Its degree is the CRC length `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CrcPoly {
    coeffs: Vec<u8>,
}

impl CrcPoly {
    /// `x^11 + x^10 + x^9 + x^5 + 1`, the 11-bit CRC used as the default for
    /// CRC-aided list decoding.
    pub fn crc11() -> Self {
        Self::from_value(0xE21).expect("nonzero constant")
    }

    /// `x + 1`: a single even-parity bit.
    pub fn parity() -> Self {
        Self::from_value(0b11).expect("nonzero constant")
    }

    /// Builds the polynomial whose coefficients are the binary digits of
    /// `value` (bit `r` is the `x^r` coefficient).
    pub fn from_value(value: u64) -> Result<Self> {
        if value < 2 {
            return invalid("CRC polynomial must have degree >= 1");
        }
        let degree = 63 - value.leading_zeros() as usize;
        Ok(CrcPoly {
            coeffs: BitVector::from_u64(value, degree + 1).into_inner(),
        })
    }

    /// Coefficients most significant first; the leading one is included.
    pub fn from_coeffs(coeffs: &[u8]) -> Result<Self> {
        let first = coeffs.iter().position(|&c| c == 1);
        match first {
            Some(i) if coeffs.len() - i >= 2 => {
                BitVector::new(coeffs.to_vec())?;
                Ok(CrcPoly {
                    coeffs: coeffs[i..].to_vec(),
                })
            }
            _ => invalid("CRC polynomial must have degree >= 1"),
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Remainder of `bits(x) * x^r` modulo the polynomial, `r` bits long.
    fn remainder(&self, bits: &[u8], shift: bool) -> Vec<u8> {
        let r = self.degree();
        let mut reg = vec![0u8; r];
        let feed = bits
            .iter()
            .copied()
            .chain(std::iter::repeat(0).take(if shift { r } else { 0 }));
        for b in feed {
            let out = reg[0];
            reg.rotate_left(1);
            reg[r - 1] = b;
            if out == 1 {
                for (x, &g) in reg.iter_mut().zip(&self.coeffs[1..]) {
                    *x ^= g;
                }
            }
        }
        reg
    }
}

impl fmt::Display for CrcPoly {
    /// Hexadecimal, most significant coefficient first, e.g. `0xE21`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut digits = String::new();
        let pad = (4 - self.coeffs.len() % 4) % 4;
        let padded: Vec<u8> = std::iter::repeat(0)
            .take(pad)
            .chain(self.coeffs.iter().copied())
            .collect();
        for nibble in padded.chunks(4) {
            let v = nibble.iter().fold(0u8, |acc, &b| (acc << 1) | b);
            digits.push(char::from_digit(v as u32, 16).unwrap().to_ascii_uppercase());
        }
        write!(f, "0x{digits}")
    }
}

impl FromStr for CrcPoly {
    type Err = PolarError;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let hex = s
            .strip_prefix("0x")
            .or_else(|| s.strip_prefix("0X"))
            .unwrap_or(s);
        if hex.is_empty() {
            return invalid("empty CRC polynomial");
        }
        let mut coeffs = Vec::with_capacity(hex.len() * 4);
        for c in hex.chars() {
            let v = c
                .to_digit(16)
                .ok_or_else(|| PolarError::InvalidArgument(format!("bad hex digit {c:?}")))?;
            coeffs.extend((0..4).rev().map(|i| ((v >> i) & 1) as u8));
        }
        CrcPoly::from_coeffs(&coeffs)
    }
}

/// Appends the `r`-bit remainder of `payload * x^r` mod `poly`.
pub fn crc_attach(payload: &BitVector, poly: &CrcPoly) -> Result<BitVector> {
    if payload.is_empty() {
        return invalid(format!(
            "CRC length {} leaves no payload bits",
            poly.degree()
        ));
    }
    let rem = poly.remainder(payload, true);
    let mut out = payload.as_slice().to_vec();
    out.extend(rem);
    Ok(BitVector::from_raw(out))
}

/// True when `word` (payload followed by CRC) is divisible by `poly`.
pub fn crc_check(word: &BitVector, poly: &CrcPoly) -> bool {
    if word.len() <= poly.degree() {
        return false;
    }
    poly.remainder(word, false).iter().all(|&b| b == 0)
}
