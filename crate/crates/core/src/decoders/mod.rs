//! Successive-cancellation family, belief propagation and a brute-force
//! maximum-likelihood reference.
//!
//! Every decoder takes channel LLRs of length `N` and a [`CodeSpec`], pins
//! frozen positions to their frozen values and returns a [`DecodeOutput`].
//! Hard decisions map `L > 0` and `L = 0` to bit `0`.

mod bp;
mod kernel;
mod ml;
mod sc;
mod scl;
mod scs;
mod ssc;

pub use bp::{bp_decode, scan_decode, BpDecoder, ScanDecoder};
pub use kernel::{f_op, g_op, hard, partial_sum, path_metric_update, penalty, Kernel, Mode};
pub use ml::{channel_metric, ml_bruteforce, ML_MAX_INFO_BITS};
pub use sc::{sc_decode, ScDecoder};
pub use scl::{ca_scl_decode, scl_decode, ListEntry, SclDecoder, SclOutput};
pub use scs::{scs_decode, ScsDecoder};
pub use ssc::{classify_nodes, ssc_decode, NodeClass, SscDecoder};

use crate::channels::LlrVec;
use crate::error::{PolarError, Result};
use crate::polar::{crc_check, polar_transform_in_place, BitVector, CodeSpec};
use crate::scalar::Llr;

/// Element-wise kernel evaluations performed by one decoding run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub f: u64,
    pub g: u64,
    /// Path extensions (stack decoder only).
    pub extensions: u64,
}

impl OpCounts {
    pub fn kernel_total(&self) -> u64 {
        self.f + self.g
    }
}

/// Result of decoding one block.
#[derive(Clone, Debug, PartialEq)]
pub struct DecodeOutput<T: Llr> {
    /// Payload bits; CRC bits are stripped when the code carries a CRC.
    pub info_bits: BitVector,
    pub u_hat: BitVector,
    /// Always `polar_transform(u_hat)`.
    pub codeword_hat: BitVector,
    /// Path metric of the returned path for SC-family decoders; the channel
    /// metric of `codeword_hat` for SSC, BP, SCAN and ML.
    pub metric: T,
    /// Left-edge LLRs (BP and SCAN).
    pub soft_out: Option<LlrVec<T>>,
    /// CRC verdict on the decoded information bits, when the code has one.
    pub crc_ok: Option<bool>,
    pub ops: OpCounts,
}

impl<T: Llr> DecodeOutput<T> {
    pub(crate) fn from_u(spec: &CodeSpec, u: Vec<u8>, metric: T) -> Self {
        let info = spec.extract_info(&u);
        let crc_ok = spec.crc().map(|poly| crc_check(&info, poly));
        let payload = BitVector::from_raw(info[..spec.payload_len()].to_vec());
        let mut x = u.clone();
        polar_transform_in_place(&mut x);
        DecodeOutput {
            info_bits: payload,
            u_hat: BitVector::from_raw(u),
            codeword_hat: BitVector::from_raw(x),
            metric,
            soft_out: None,
            crc_ok,
            ops: OpCounts::default(),
        }
    }
}

pub(crate) fn check_len<T: Llr>(llr: &LlrVec<T>, spec: &CodeSpec) -> Result<()> {
    if llr.len() != spec.n() {
        return Err(PolarError::LengthMismatch {
            expected: spec.n(),
            got: llr.len(),
        });
    }
    Ok(())
}

/// Decoder selection shared by the harness and the command line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecoderKind {
    Sc { mode: Mode },
    Ssc { mode: Mode },
    Scl { list: usize, mode: Mode },
    CaScl { list: usize, mode: Mode },
    Scs { depth: usize, mode: Mode },
    Bp { iterations: usize, mode: Mode },
    Scan { iterations: usize, mode: Mode },
    Ml,
}

impl DecoderKind {
    pub fn validate(&self, spec: &CodeSpec) -> Result<()> {
        let bad = |m: &str| Err(PolarError::InvalidArgument(m.to_string()));
        match *self {
            DecoderKind::Scl { list: 0, .. } | DecoderKind::CaScl { list: 0, .. } => {
                bad("list size must be at least 1")
            }
            DecoderKind::CaScl { .. } if spec.crc().is_none() => {
                bad("CA-SCL needs a code with a CRC")
            }
            DecoderKind::Scs { depth, .. } if depth < 2 => bad("stack depth must be at least 2"),
            DecoderKind::Bp { iterations: 0, .. } | DecoderKind::Scan { iterations: 0, .. } => {
                bad("iteration count must be at least 1")
            }
            DecoderKind::Ml if spec.payload_len() > ML_MAX_INFO_BITS => {
                bad("ML enumeration limited to 20 payload bits")
            }
            _ => Ok(()),
        }
    }

    /// Short descriptor, e.g. `scl-l8-minsum`.
    pub fn label(&self) -> String {
        match *self {
            DecoderKind::Sc { mode } => format!("sc-{}", mode.name()),
            DecoderKind::Ssc { mode } => format!("ssc-{}", mode.name()),
            DecoderKind::Scl { list, mode } => format!("scl-l{list}-{}", mode.name()),
            DecoderKind::CaScl { list, mode } => format!("cascl-l{list}-{}", mode.name()),
            DecoderKind::Scs { depth, mode } => format!("scs-d{depth}-{}", mode.name()),
            DecoderKind::Bp { iterations, mode } => format!("bp-i{iterations}-{}", mode.name()),
            DecoderKind::Scan { iterations, mode } => {
                format!("scan-i{iterations}-{}", mode.name())
            }
            DecoderKind::Ml => "ml".to_string(),
        }
    }

    /// Builds a reusable decoder instance for `spec`.
    pub fn build<T: Llr>(&self, spec: &CodeSpec) -> Result<Box<dyn Decoder<T>>> {
        self.validate(spec)?;
        Ok(match *self {
            DecoderKind::Sc { mode } => Box::new(ScDecoder::new(spec.clone(), mode)),
            DecoderKind::Ssc { mode } => Box::new(SscDecoder::new(spec.clone(), mode)),
            DecoderKind::Scl { list, mode } => {
                Box::new(SclDecoder::new(spec.clone(), list, mode, false)?)
            }
            DecoderKind::CaScl { list, mode } => {
                Box::new(SclDecoder::new(spec.clone(), list, mode, true)?)
            }
            DecoderKind::Scs { depth, mode } => {
                Box::new(ScsDecoder::new(spec.clone(), depth, mode)?)
            }
            DecoderKind::Bp { iterations, mode } => {
                Box::new(BpDecoder::new(spec.clone(), iterations, mode)?)
            }
            DecoderKind::Scan { iterations, mode } => {
                Box::new(ScanDecoder::new(spec.clone(), iterations, mode)?)
            }
            DecoderKind::Ml => Box::new(MlDecoder(spec.clone())),
        })
    }
}

/// A decoder bound to one code, reusable across blocks.
pub trait Decoder<T: Llr>: Send {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>>;
}

struct MlDecoder(CodeSpec);

impl<T: Llr> Decoder<T> for MlDecoder {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        ml_bruteforce(llr, &self.0)
    }
}
