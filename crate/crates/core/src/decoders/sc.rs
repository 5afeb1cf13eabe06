use crate::channels::LlrVec;
use crate::error::Result;
use crate::polar::CodeSpec;
use crate::scalar::Llr;

use super::kernel::{hard, Kernel, Mode};
use super::{check_len, DecodeOutput, Decoder, OpCounts};

/// Working state of one successive-cancellation path.
///
/// LLRs and left-sibling bits are stored by node size: the array for nodes
/// of size `s` occupies `[s, 2s)`, the channel LLRs sit in `alpha[N..2N)`.
#[derive(Clone, Debug)]
pub(crate) struct ScState<T> {
    pub alpha: Vec<T>,
    pub beta_l: Vec<u8>,
    pub u: Vec<u8>,
    scratch: Vec<u8>,
    pub pos: usize,
    pub metric: T,
}

impl<T: Llr> ScState<T> {
    pub fn new(n: usize) -> Self {
        ScState {
            alpha: vec![T::zero(); 2 * n],
            beta_l: vec![0; n],
            u: vec![0; n],
            scratch: vec![0; 2 * n],
            pos: 0,
            metric: T::zero(),
        }
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn reset(&mut self, llr: &[T]) {
        let n = self.n();
        self.alpha[n..].copy_from_slice(llr);
        self.pos = 0;
        self.metric = T::zero();
    }

    /// LLR of leaf `pos`, recomputing the nodes on its path that changed.
    pub fn leaf_llr(&mut self, k: &Kernel<T>, ops: &mut OpCounts) -> T {
        let n = self.n();
        let i = self.pos;
        let mut s = if i == 0 {
            n / 2
        } else {
            1 << i.trailing_zeros()
        };
        while s >= 1 {
            let (lo, hi) = self.alpha.split_at_mut(2 * s);
            let child = &mut lo[s..];
            let (pa, pb) = hi[..2 * s].split_at(s);
            if (i / s) & 1 == 0 {
                for j in 0..s {
                    child[j] = k.f(pa[j], pb[j]);
                }
                ops.f += s as u64;
            } else {
                let bl = &self.beta_l[s..2 * s];
                for j in 0..s {
                    child[j] = k.g(pa[j], pb[j], bl[j]);
                }
                ops.g += s as u64;
            }
            s /= 2;
        }
        self.alpha[1]
    }

    /// Fixes leaf `pos` to `bit` and propagates partial sums upward.
    pub fn push_bit(&mut self, bit: u8) {
        let n = self.n();
        let i = self.pos;
        self.u[i] = bit;
        self.scratch[1] = bit;
        let mut s = 1;
        let mut idx = i;
        while idx & 1 == 1 {
            let (lo, hi) = self.scratch.split_at_mut(2 * s);
            let cur = &lo[s..];
            let bl = &self.beta_l[s..2 * s];
            for j in 0..s {
                hi[j] = bl[j] ^ cur[j];
                hi[s + j] = cur[j];
            }
            s *= 2;
            idx >>= 1;
        }
        if s < n {
            self.beta_l[s..2 * s].copy_from_slice(&self.scratch[s..2 * s]);
        }
        self.pos += 1;
    }
}

/// Successive-cancellation decoder with reusable buffers.
pub struct ScDecoder<T: Llr> {
    spec: CodeSpec,
    mode: Mode,
    state: ScState<T>,
}

impl<T: Llr> ScDecoder<T> {
    pub fn new(spec: CodeSpec, mode: Mode) -> Self {
        let state = ScState::new(spec.n());
        ScDecoder { spec, mode, state }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// Re-pins the frozen positions without reallocating buffers.
    pub fn set_frozen_values(&mut self, values: &[u8]) -> Result<()> {
        self.spec.set_frozen_values(values)
    }

    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        check_len(llr, &self.spec)?;
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        let st = &mut self.state;
        st.reset(llr);
        for i in 0..self.spec.n() {
            let l = st.leaf_llr(&k, &mut ops);
            let bit = if self.spec.is_frozen(i) {
                self.spec.pinned_value(i)
            } else {
                hard(l)
            };
            st.metric = st.metric + k.penalty(l, bit);
            st.push_bit(bit);
        }
        let mut out = DecodeOutput::from_u(&self.spec, st.u.clone(), st.metric);
        out.ops = ops;
        Ok(out)
    }
}

impl<T: Llr> Decoder<T> for ScDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        ScDecoder::decode(self, llr)
    }
}

pub fn sc_decode<T: Llr>(llr: &LlrVec<T>, spec: &CodeSpec, mode: Mode) -> Result<DecodeOutput<T>> {
    ScDecoder::new(spec.clone(), mode).decode(llr)
}
