use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::channels::LlrVec;
use crate::error::{invalid, Result};
use crate::polar::CodeSpec;
use crate::scalar::Llr;

use super::kernel::{hard, Kernel, Mode};
use super::sc::ScState;
use super::{check_len, DecodeOutput, Decoder, OpCounts};

#[derive(Clone, Copy, Debug)]
struct Key {
    metric: f64,
    seq: u64,
}

impl PartialEq for Key {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> Ordering {
        self.metric
            .total_cmp(&other.metric)
            .then(self.seq.cmp(&other.seq))
    }
}

/// Observer of stack operations, used to trace the decoder.
pub(crate) trait StackObserver {
    fn pulled(&mut self, _len: usize, _metric: f64) {}
    fn deleted(&mut self, _len: usize, _metric: f64) {}
    fn finished(&mut self, _stack: &[(usize, f64)]) {}
}

impl StackObserver for () {}

/// Stack decoder: paths of different lengths compete in one metric-ordered
/// stack of capacity `depth`.
pub struct ScsDecoder<T: Llr> {
    spec: CodeSpec,
    depth: usize,
    mode: Mode,
    spare: Vec<ScState<T>>,
}

impl<T: Llr> ScsDecoder<T> {
    pub fn new(spec: CodeSpec, depth: usize, mode: Mode) -> Result<Self> {
        if depth < 2 {
            return invalid("stack depth must be at least 2");
        }
        Ok(ScsDecoder {
            spec,
            depth,
            mode,
            spare: Vec::new(),
        })
    }

    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        self.decode_observed(llr, &mut ())
    }

    pub(crate) fn decode_observed(
        &mut self,
        llr: &LlrVec<T>,
        obs: &mut dyn StackObserver,
    ) -> Result<DecodeOutput<T>> {
        check_len(llr, &self.spec)?;
        let n = self.spec.n();
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        let mut seq = 0u64;
        let mut stack: BTreeMap<Key, ScState<T>> = BTreeMap::new();
        let mut root = self.spare.pop().unwrap_or_else(|| ScState::new(n));
        root.reset(llr);
        stack.insert(Key { metric: 0.0, seq }, root);
        loop {
            // pull
            let (_, mut top) = stack.pop_first().expect("stack never empties");
            obs.pulled(top.pos, top.metric.as_f64());
            if top.pos == n {
                let mut rest = vec![(top.pos, top.metric.as_f64())];
                rest.extend(stack.iter().map(|(key, st)| (st.pos, key.metric)));
                obs.finished(&rest);
                let out_u = top.u.clone();
                let metric = top.metric;
                self.spare.push(top);
                self.spare.extend(stack.into_values());
                let mut out = DecodeOutput::from_u(&self.spec, out_u, metric);
                out.ops = ops;
                return Ok(out);
            }
            // extend
            ops.extensions += 1;
            let i = top.pos;
            let l = top.leaf_llr(&k, &mut ops);
            let children: Vec<(u8, T)> = if self.spec.is_frozen(i) {
                let b = self.spec.pinned_value(i);
                vec![(b, top.metric + k.penalty(l, b))]
            } else {
                let h = hard(l);
                vec![
                    (h, top.metric + k.penalty(l, h)),
                    (1 - h, top.metric + k.penalty(l, 1 - h)),
                ]
            };
            // delete
            while stack.len() + children.len() > self.depth {
                if let Some((key, dropped)) = stack.pop_last() {
                    obs.deleted(dropped.pos, key.metric);
                    self.spare.push(dropped);
                } else {
                    break;
                }
            }
            // push, sorted by the map order
            let mut pending = Some(top);
            for (idx, &(bit, metric)) in children.iter().enumerate() {
                let mut child = if idx + 1 == children.len() {
                    pending.take().expect("parent state")
                } else {
                    let parent = pending.as_ref().expect("parent state");
                    let mut c = self.spare.pop().unwrap_or_else(|| ScState::new(n));
                    c.clone_from(parent);
                    c
                };
                child.push_bit(bit);
                child.metric = metric;
                seq += 1;
                stack.insert(
                    Key {
                        metric: metric.as_f64(),
                        seq,
                    },
                    child,
                );
            }
        }
    }
}

impl<T: Llr> Decoder<T> for ScsDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        ScsDecoder::decode(self, llr)
    }
}

pub fn scs_decode<T: Llr>(
    llr: &LlrVec<T>,
    spec: &CodeSpec,
    depth: usize,
    mode: Mode,
) -> Result<DecodeOutput<T>> {
    ScsDecoder::new(spec.clone(), depth, mode)?.decode(llr)
}
