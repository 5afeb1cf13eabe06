use crate::channels::LlrVec;
use crate::error::Result;
use crate::polar::{polar_transform_in_place, CodeSpec};
use crate::scalar::Llr;

use super::kernel::{hard, Kernel, Mode};
use super::ml::channel_metric;
use super::{check_len, DecodeOutput, Decoder, OpCounts};

/// Kind of a decoding-tree subtree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeClass {
    /// Only frozen leaves.
    Rate0,
    /// Only information leaves.
    Rate1,
    /// Mixed.
    RateR,
}

/// Class of every tree node in heap order: the root is entry 1, node `v`
/// has children `2v` and `2v + 1`, leaf `i` is entry `N + i`. Entry 0 is
/// unused.
pub fn classify_nodes(spec: &CodeSpec) -> Vec<NodeClass> {
    let n = spec.n();
    let mut class = vec![NodeClass::RateR; 2 * n];
    for i in 0..n {
        class[n + i] = if spec.is_frozen(i) {
            NodeClass::Rate0
        } else {
            NodeClass::Rate1
        };
    }
    for v in (1..n).rev() {
        class[v] = match (class[2 * v], class[2 * v + 1]) {
            (NodeClass::Rate0, NodeClass::Rate0) => NodeClass::Rate0,
            (NodeClass::Rate1, NodeClass::Rate1) => NodeClass::Rate1,
            _ => NodeClass::RateR,
        };
    }
    class
}

/// Simplified SC decoder: Rate-0 subtrees are skipped and Rate-1 subtrees
/// are resolved by a hard decision on their input LLRs.
pub struct SscDecoder<T: Llr> {
    spec: CodeSpec,
    mode: Mode,
    class: Vec<NodeClass>,
    alpha: Vec<T>,
    beta_l: Vec<u8>,
    res: Vec<u8>,
    u: Vec<u8>,
}

impl<T: Llr> SscDecoder<T> {
    pub fn new(spec: CodeSpec, mode: Mode) -> Self {
        let n = spec.n();
        SscDecoder {
            class: classify_nodes(&spec),
            spec,
            mode,
            alpha: vec![T::zero(); 2 * n],
            beta_l: vec![0; n],
            res: vec![0; 2 * n],
            u: vec![0; n],
        }
    }

    pub fn node_classes(&self) -> &[NodeClass] {
        &self.class
    }

    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        check_len(llr, &self.spec)?;
        let n = self.spec.n();
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        self.alpha[n..].copy_from_slice(llr);
        self.node(1, n, &k, &mut ops);
        let mut out = DecodeOutput::from_u(&self.spec, self.u.clone(), T::zero());
        out.metric = channel_metric(llr, &out.codeword_hat, self.mode);
        out.ops = ops;
        Ok(out)
    }

    /// Decodes node `v` of size `s`, whose LLRs are in `alpha[s..2s)`; its
    /// re-encoded bits are left in `res[s..2s)`.
    fn node(&mut self, v: usize, s: usize, k: &Kernel<T>, ops: &mut OpCounts) {
        let first = v * s - self.spec.n();
        match self.class[v] {
            NodeClass::Rate0 => {
                for j in 0..s {
                    let bit = self.spec.pinned_value(first + j);
                    self.u[first + j] = bit;
                    self.res[s + j] = bit;
                }
                polar_transform_in_place(&mut self.res[s..2 * s]);
                return;
            }
            // An exact zero LLR would make SC's per-leaf tie rule diverge from
            // the block hard decision, so such nodes take the general path.
            NodeClass::Rate1 if s == 1 || self.alpha[s..2 * s].iter().all(|&a| a != T::zero()) => {
                for j in 0..s {
                    let bit = hard(self.alpha[s + j]);
                    self.res[s + j] = bit;
                    self.u[first + j] = bit;
                }
                polar_transform_in_place(&mut self.u[first..first + s]);
                return;
            }
            _ => {}
        }
        let h = s / 2;
        {
            let (lo, hi) = self.alpha.split_at_mut(s);
            let (pa, pb) = hi[..s].split_at(h);
            for j in 0..h {
                lo[h + j] = k.f(pa[j], pb[j]);
            }
            ops.f += h as u64;
        }
        self.node(2 * v, h, k, ops);
        self.beta_l[h..s].copy_from_slice(&self.res[h..s]);
        {
            let (lo, hi) = self.alpha.split_at_mut(s);
            let (pa, pb) = hi[..s].split_at(h);
            let bl = &self.beta_l[h..s];
            for j in 0..h {
                lo[h + j] = k.g(pa[j], pb[j], bl[j]);
            }
            ops.g += h as u64;
        }
        self.node(2 * v + 1, h, k, ops);
        for j in 0..h {
            let r = self.res[h + j];
            self.res[s + j] = self.beta_l[h + j] ^ r;
            self.res[s + h + j] = r;
        }
    }
}

impl<T: Llr> Decoder<T> for SscDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        SscDecoder::decode(self, llr)
    }
}

pub fn ssc_decode<T: Llr>(llr: &LlrVec<T>, spec: &CodeSpec, mode: Mode) -> Result<DecodeOutput<T>> {
    SscDecoder::new(spec.clone(), mode).decode(llr)
}
