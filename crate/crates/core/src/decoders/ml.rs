use crate::channels::LlrVec;
use crate::error::{invalid, Result};
use crate::polar::{crc_attach, polar_transform_in_place, BitVector, CodeSpec};
use crate::scalar::Llr;

use super::kernel::{penalty, Mode};
use super::{check_len, DecodeOutput};

/// Largest payload the exhaustive search accepts.
pub const ML_MAX_INFO_BITS: usize = 20;

/// `sum_j penalty(L_j, x_j)`: the negative log-probability of `x` given
/// independent channel LLRs (exact mode), or the correlation discrepancy
/// (min-sum mode). Both are minimised by the maximum-likelihood codeword.
pub fn channel_metric<T: Llr>(llr: &[T], x: &[u8], mode: Mode) -> T {
    llr.iter()
        .zip(x)
        .fold(T::zero(), |acc, (&l, &b)| acc + penalty(l, b, mode))
}

/// Exhaustive maximum-likelihood decoding over every payload (with its CRC
/// attached when the code has one). Ties go to the numerically smallest
/// payload, first bit most significant.
pub fn ml_bruteforce<T: Llr>(llr: &LlrVec<T>, spec: &CodeSpec) -> Result<DecodeOutput<T>> {
    check_len(llr, spec)?;
    let m = spec.payload_len();
    if m > ML_MAX_INFO_BITS {
        return invalid(format!(
            "exhaustive search over {m} payload bits exceeds the limit of {ML_MAX_INFO_BITS}"
        ));
    }
    let mut best: Option<(T, Vec<u8>)> = None;
    for word in 0..(1u64 << m) {
        let payload = BitVector::from_u64(word, m);
        let info = match spec.crc() {
            Some(poly) => crc_attach(&payload, poly)?,
            None => payload,
        };
        let mut x = spec.u_vector(&info)?;
        polar_transform_in_place(&mut x);
        let metric = channel_metric(llr, &x, Mode::Exact);
        if best.as_ref().map_or(true, |(b, _)| metric < *b) {
            polar_transform_in_place(&mut x);
            best = Some((metric, x));
        }
    }
    let (metric, u) = best.expect("at least one candidate");
    Ok(DecodeOutput::from_u(spec, u, metric))
}
