//! Code parameters `(N, k, F, u_F)` plus an optional outer CRC, and their
//! text serialization.
//!
//! Text grammar (one `key=value` per line, `#` starts a comment, indices
//! 1-based and ascending):
//!
//! ```text
//! polar-code v1
//! N=8
//! k=4
//! frozen=1,2,3,5
//! frozen-values=0000      # optional, defaults to all-zero
//! crc=0xE21               # optional, generator polynomial in hex, MSB first
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, PolarError, Result};
use crate::polar::crc::{crc_attach, CrcPoly};
use crate::polar::transform::{log2_exact, polar_transform_in_place};
use crate::polar::BitVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    n: usize,
    frozen: Vec<usize>,
    frozen_values: BitVector,
    crc: Option<CrcPoly>,
    info: Vec<usize>,
    frozen_mask: Vec<bool>,
    /// Value pinned at each position; zero on information positions.
    pinned: Vec<u8>,
}

impl CodeSpec {
    /// A code of length `n` with the given (0-based) frozen positions, all
    /// frozen to zero.
    pub fn new(n: usize, frozen: Vec<usize>) -> Result<Self> {
        let len = frozen.len();
        Self::with_frozen_values(n, frozen, BitVector::zeros(len))
    }

    /// Coset code: frozen positions carry `frozen_values` (in ascending
    /// position order).
    pub fn with_frozen_values(
        n: usize,
        mut frozen: Vec<usize>,
        frozen_values: BitVector,
    ) -> Result<Self> {
        if log2_exact(n)? == 0 {
            return invalid("block length must be at least 2");
        }
        if frozen_values.len() != frozen.len() {
            return Err(PolarError::LengthMismatch {
                expected: frozen.len(),
                got: frozen_values.len(),
            });
        }
        // keep frozen values paired with their positions while sorting
        let mut pairs: Vec<(usize, u8)> = frozen
            .iter()
            .copied()
            .zip(frozen_values.iter().copied())
            .collect();
        pairs.sort_unstable_by_key(|p| p.0);
        frozen = pairs.iter().map(|p| p.0).collect();
        let values = BitVector::from_raw(pairs.iter().map(|p| p.1).collect());
        let mut mask = vec![false; n];
        let mut pinned = vec![0u8; n];
        for &(pos, v) in &pairs {
            if pos >= n {
                return invalid(format!("frozen index {} outside 1..={n}", pos + 1));
            }
            if mask[pos] {
                return invalid(format!("frozen index {} repeated", pos + 1));
            }
            mask[pos] = true;
            pinned[pos] = v;
        }
        let info = (0..n).filter(|&i| !mask[i]).collect();
        Ok(CodeSpec {
            n,
            frozen,
            frozen_values: values,
            crc: None,
            info,
            frozen_mask: mask,
            pinned,
        })
    }

    /// Attaches an outer CRC. The CRC bits occupy the last `r` information
    /// positions, so the payload shrinks to `k - r`.
    pub fn with_crc(mut self, poly: CrcPoly) -> Result<Self> {
        if poly.degree() >= self.k() {
            return invalid(format!(
                "CRC length {} must be smaller than k = {}",
                poly.degree(),
                self.k()
            ));
        }
        self.crc = Some(poly);
        Ok(self)
    }

    pub fn without_crc(mut self) -> Self {
        self.crc = None;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn log_n(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    /// Number of unfrozen positions (CRC bits included).
    pub fn k(&self) -> usize {
        self.info.len()
    }

    pub fn crc(&self) -> Option<&CrcPoly> {
        self.crc.as_ref()
    }

    pub fn crc_len(&self) -> usize {
        self.crc.as_ref().map_or(0, CrcPoly::degree)
    }

    /// Bits supplied by the user per block: `k - r`.
    pub fn payload_len(&self) -> usize {
        self.k() - self.crc_len()
    }

    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn frozen_values(&self) -> &BitVector {
        &self.frozen_values
    }

    pub fn info_positions(&self) -> &[usize] {
        &self.info
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen_mask[i]
    }

    pub fn frozen_mask(&self) -> &[bool] {
        &self.frozen_mask
    }

    /// The value a frozen position is pinned to (0 for information positions).
    pub fn pinned_value(&self, i: usize) -> u8 {
        self.pinned[i]
    }

    /// Replaces the frozen values, given in ascending position order.
    pub fn set_frozen_values(&mut self, values: &[u8]) -> Result<()> {
        if values.len() != self.frozen.len() {
            return Err(PolarError::LengthMismatch {
                expected: self.frozen.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|&b| b > 1) {
            return invalid("frozen values must be 0 or 1");
        }
        for (&pos, &v) in self.frozen.iter().zip(values) {
            self.pinned[pos] = v;
        }
        self.frozen_values = BitVector::from_raw(values.to_vec());
        Ok(())
    }

    pub fn has_nonzero_frozen(&self) -> bool {
        self.frozen_values.iter().any(|&b| b == 1)
    }

    /// Scatters `info_with_crc` (length `k`) and the frozen values into a
    /// length-`N` input vector `u`.
    pub fn u_vector(&self, info_with_crc: &[u8]) -> Result<Vec<u8>> {
        if info_with_crc.len() != self.k() {
            return Err(PolarError::LengthMismatch {
                expected: self.k(),
                got: info_with_crc.len(),
            });
        }
        let mut u = self.pinned.clone();
        for (&pos, &b) in self.info.iter().zip(info_with_crc) {
            u[pos] = b;
        }
        Ok(u)
    }

    /// Encodes a payload of `k - r` bits (CRC appended when configured).
    pub fn encode(&self, payload: &BitVector) -> Result<BitVector> {
        if payload.len() != self.payload_len() {
            return Err(PolarError::LengthMismatch {
                expected: self.payload_len(),
                got: payload.len(),
            });
        }
        let with_crc = match &self.crc {
            Some(poly) => crc_attach(payload, poly)?,
            None => payload.clone(),
        };
        let mut x = self.u_vector(&with_crc)?;
        polar_transform_in_place(&mut x);
        Ok(BitVector::from_raw(x))
    }

    /// Information bits (CRC included) read back out of a `u` vector.
    pub fn extract_info(&self, u: &[u8]) -> BitVector {
        BitVector::from_raw(self.info.iter().map(|&i| u[i]).collect())
    }
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "polar-code v1")?;
        writeln!(f, "N={}", self.n)?;
        writeln!(f, "k={}", self.k())?;
        let idx: Vec<String> = self.frozen.iter().map(|i| (i + 1).to_string()).collect();
        writeln!(f, "frozen={}", idx.join(","))?;
        if self.has_nonzero_frozen() {
            writeln!(f, "frozen-values={}", self.frozen_values)?;
        }
        if let Some(poly) = &self.crc {
            writeln!(f, "crc={poly}")?;
        }
        Ok(())
    }
}

/// Splits a `key=value` record line, skipping comments. Shared by the text
/// formats of this crate.
pub(crate) fn parse_kv_lines(text: &str) -> impl Iterator<Item = (usize, &str, &str)> {
    text.lines().enumerate().filter_map(|(no, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        match line.split_once('=') {
            Some((k, v)) => Some((no + 1, k.trim(), v.trim())),
            None => Some((no + 1, line, "")),
        }
    })
}

pub(crate) fn parse_index_list(value: &str, line: usize) -> Result<Vec<usize>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|tok| {
            let v: usize = tok.trim().parse().map_err(|_| PolarError::Parse {
                line,
                msg: format!("bad index {tok:?}"),
            })?;
            if v == 0 {
                return Err(PolarError::Parse {
                    line,
                    msg: "indices are 1-based".into(),
                });
            }
            Ok(v - 1)
        })
        .collect()
}

impl FromStr for CodeSpec {
    type Err = PolarError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = parse_kv_lines(text);
        match lines.next() {
            Some((_, "polar-code v1", "")) => {}
            _ => {
                return Err(PolarError::Parse {
                    line: 1,
                    msg: "expected header `polar-code v1`".into(),
                })
            }
        }
        let (mut n, mut k, mut frozen, mut values, mut crc) = (None, None, None, None, None);
        for (line, key, value) in lines {
            let perr = |msg: String| PolarError::Parse { line, msg };
            match key {
                "N" => n = Some(value.parse::<usize>().map_err(|e| perr(e.to_string()))?),
                "k" => k = Some(value.parse::<usize>().map_err(|e| perr(e.to_string()))?),
                "frozen" => frozen = Some(parse_index_list(value, line)?),
                "frozen-values" => values = Some(value.parse::<BitVector>()?),
                "crc" => crc = Some(value.parse::<CrcPoly>()?),
                other => return Err(perr(format!("unknown key {other:?}"))),
            }
        }
        let missing = |what: &str| PolarError::Parse {
            line: 0,
            msg: format!("missing {what}"),
        };
        let n = n.ok_or_else(|| missing("N"))?;
        let frozen = frozen.ok_or_else(|| missing("frozen"))?;
        let values = values.unwrap_or_else(|| BitVector::zeros(frozen.len()));
        let spec = CodeSpec::with_frozen_values(n, frozen, values)?;
        if let Some(k) = k {
            if k != spec.k() {
                return invalid(format!("k={k} but frozen set leaves {}", spec.k()));
            }
        }
        match crc {
            Some(poly) => spec.with_crc(poly),
            None => Ok(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::generator_matrix;

    fn example() -> CodeSpec {
        CodeSpec::new(8, vec![0, 1, 2, 4]).unwrap()
    }

    #[test]
    fn worked_example_encoding() {
        let x = example().encode(&"1001".parse().unwrap()).unwrap();
        assert_eq!(x.to_string(), "00001111");
    }

    #[test]
    fn zero_info_zero_codeword() {
        assert_eq!(
            example().encode(&BitVector::zeros(4)).unwrap(),
            BitVector::zeros(8)
        );
    }

    #[test]
    fn length_mismatch() {
        assert!(example().encode(&BitVector::zeros(3)).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(CodeSpec::new(6, vec![]).is_err());
        assert!(CodeSpec::new(1, vec![]).is_err());
        assert!(CodeSpec::new(8, vec![8]).is_err());
        assert!(CodeSpec::new(8, vec![1, 1]).is_err());
        // r >= k
        let tight = CodeSpec::new(4, vec![0, 1, 2]).unwrap();
        assert!(tight.with_crc(CrcPoly::parity()).is_err());
    }

    #[test]
    fn full_rate_round_trips() {
        let spec = CodeSpec::new(16, vec![]).unwrap();
        for seed in 0..200u64 {
            let w = BitVector::from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15), 16);
            let x = crate::polar::polar_transform(&w).unwrap();
            assert_eq!(spec.encode(&x).unwrap(), w);
        }
    }

    #[test]
    fn matches_generator_submatrix_all_inputs() {
        for (n, frozen) in [
            (8usize, vec![0usize, 1, 2, 4]),
            (16, vec![0, 1, 2, 3, 4, 5, 8, 9]),
            (16, vec![0, 1, 2, 4, 8]),
        ] {
            let spec = CodeSpec::new(n, frozen).unwrap();
            let g = generator_matrix(n).unwrap();
            let k = spec.k();
            for word in 0..(1u64 << k) {
                let info = BitVector::from_u64(word, k);
                let mut expect = vec![0u8; n];
                for (j, &row) in spec.info_positions().iter().enumerate() {
                    if info[j] == 1 {
                        for c in 0..n {
                            expect[c] ^= g[row][c];
                        }
                    }
                }
                assert_eq!(spec.encode(&info).unwrap().as_slice(), &expect[..]);
            }
        }
    }

    #[test]
    fn coset_encoding_adds_frozen_contribution() {
        let values: BitVector = "1010".parse().unwrap();
        let coset = CodeSpec::with_frozen_values(8, vec![0, 1, 2, 4], values.clone()).unwrap();
        let g = generator_matrix(8).unwrap();
        let mut offset = vec![0u8; 8];
        for (&row, &v) in coset.frozen().iter().zip(values.iter()) {
            if v == 1 {
                for c in 0..8 {
                    offset[c] ^= g[row][c];
                }
            }
        }
        for word in 0..16u64 {
            let info = BitVector::from_u64(word, 4);
            let plain = example().encode(&info).unwrap();
            let expect = plain.xor(&BitVector::new(offset.clone()).unwrap()).unwrap();
            assert_eq!(coset.encode(&info).unwrap(), expect);
        }
    }

    #[test]
    fn crc_payload_length() {
        let spec = CodeSpec::new(16, vec![0, 1, 2, 4])
            .unwrap()
            .with_crc(CrcPoly::from_value(0b1011).unwrap())
            .unwrap();
        assert_eq!(spec.k(), 12);
        assert_eq!(spec.payload_len(), 9);
        let x = spec.encode(&BitVector::from_u64(0x1A5, 9)).unwrap();
        let mut u = x.into_inner();
        polar_transform_in_place(&mut u);
        let info = spec.extract_info(&u);
        assert!(crate::polar::crc_check(&info, spec.crc().unwrap()));
    }

    #[test]
    fn text_round_trip() {
        let spec = CodeSpec::with_frozen_values(8, vec![4, 0, 2, 1], "1001".parse().unwrap())
            .unwrap()
            .with_crc(CrcPoly::parity())
            .unwrap();
        let text = spec.to_string();
        assert!(text.contains("frozen=1,2,3,5"));
        let back: CodeSpec = text.parse().unwrap();
        assert_eq!(back, spec);
        // value paired with position 5 after sorting
        assert_eq!(back.pinned_value(4), 1);
    }

    #[test]
    fn text_errors() {
        assert!("N=8\nfrozen=1".parse::<CodeSpec>().is_err());
        assert!("polar-code v1\nN=8\nfrozen=0".parse::<CodeSpec>().is_err());
        assert!("polar-code v1\nN=8\nk=5\nfrozen=1,2,3,5"
            .parse::<CodeSpec>()
            .is_err());
        assert!("polar-code v1\nN=8\nfrozen=1,2\nbogus=1"
            .parse::<CodeSpec>()
            .is_err());
        let ok: CodeSpec = "polar-code v1\n# comment\nN=8\nfrozen=1,2,3,5\n"
            .parse()
            .unwrap();
        assert_eq!(ok.k(), 4);
    }
}
