use std::cmp::Ordering;

use crate::channels::LlrVec;
use crate::error::{invalid, Result};
use crate::polar::{crc_check, BitVector, CodeSpec};
use crate::scalar::Llr;

use super::kernel::{hard, Kernel, Mode};
use super::{check_len, DecodeOutput, Decoder, OpCounts};

/// One surviving path of the final list.
#[derive(Clone, Debug, PartialEq)]
pub struct ListEntry<T> {
    pub u_hat: BitVector,
    pub metric: T,
}

/// Best path plus the complete final list, ordered by metric.
#[derive(Clone, Debug)]
pub struct SclOutput<T: Llr> {
    pub best: DecodeOutput<T>,
    pub list: Vec<ListEntry<T>>,
}

/// Reference-counted arrays, one pool per node size `2^e`.
#[derive(Clone, Debug)]
struct Pool<V> {
    data: Vec<V>,
    refs: Vec<u32>,
    free: Vec<usize>,
    size: usize,
}

impl<V: Copy + Default> Pool<V> {
    fn new(count: usize, size: usize) -> Self {
        Pool {
            data: vec![V::default(); count * size],
            refs: vec![0; count],
            free: (0..count).rev().collect(),
            size,
        }
    }

    fn reset(&mut self) {
        self.refs.iter_mut().for_each(|r| *r = 0);
        self.free.clear();
        self.free.extend((0..self.refs.len()).rev());
    }

    fn alloc(&mut self) -> usize {
        let a = self.free.pop().expect("pool sized to the list");
        self.refs[a] = 1;
        a
    }

    fn release(&mut self, a: usize) {
        self.refs[a] -= 1;
        if self.refs[a] == 0 {
            self.free.push(a);
        }
    }

    /// Array `a` if unshared, otherwise a fresh one; callers overwrite the
    /// whole array, so nothing is copied.
    fn writable(&mut self, a: usize) -> usize {
        if self.refs[a] == 1 {
            a
        } else {
            self.refs[a] -= 1;
            self.alloc()
        }
    }

    fn slice(&self, a: usize) -> &[V] {
        &self.data[a * self.size..(a + 1) * self.size]
    }

    fn slice_mut(&mut self, a: usize) -> &mut [V] {
        &mut self.data[a * self.size..(a + 1) * self.size]
    }
}

struct Candidate<T> {
    metric: T,
    key: usize,
    slot: usize,
    bit: u8,
}

/// List decoder with lazily copied per-path state.
pub struct SclDecoder<T: Llr> {
    spec: CodeSpec,
    list: usize,
    mode: Mode,
    use_crc: bool,
    log_n: usize,
    channel: Vec<T>,
    /// Node LLRs of size `2^e` for `e < log_n`.
    alpha: Vec<Pool<T>>,
    /// Left-sibling bits of size `2^e`.
    beta: Vec<Pool<u8>>,
    path_alpha: Vec<usize>,
    path_beta: Vec<usize>,
    active: Vec<bool>,
    metric: Vec<T>,
    free_slots: Vec<usize>,
    /// `(parent slot, bit)` per leaf and slot.
    trace: Vec<(u32, u8)>,
    scratch: Vec<u8>,
    leaf: Vec<T>,
    cands: Vec<Candidate<T>>,
}

impl<T: Llr> SclDecoder<T> {
    /// `use_crc` selects the CRC-aided final choice; the code must then
    /// carry a CRC.
    pub fn new(spec: CodeSpec, list: usize, mode: Mode, use_crc: bool) -> Result<Self> {
        if list == 0 {
            return invalid("list size must be at least 1");
        }
        if use_crc && spec.crc().is_none() {
            return invalid("CRC-aided decoding needs a code with a CRC");
        }
        let n = spec.n();
        let log_n = spec.log_n();
        Ok(SclDecoder {
            alpha: (0..log_n).map(|e| Pool::new(list, 1 << e)).collect(),
            beta: (0..log_n).map(|e| Pool::new(list, 1 << e)).collect(),
            path_alpha: vec![0; list * log_n],
            path_beta: vec![0; list * log_n],
            active: vec![false; list],
            metric: vec![T::zero(); list],
            free_slots: Vec::with_capacity(list),
            trace: vec![(0, 0); n * list],
            scratch: vec![0; 2 * n],
            leaf: vec![T::zero(); list],
            cands: Vec::with_capacity(2 * list),
            channel: vec![T::zero(); n],
            spec,
            list,
            mode,
            use_crc,
            log_n,
        })
    }

    fn start(&mut self) {
        for p in self.alpha.iter_mut() {
            p.reset();
        }
        for p in self.beta.iter_mut() {
            p.reset();
        }
        self.active.iter_mut().for_each(|a| *a = false);
        self.free_slots.clear();
        self.free_slots.extend((1..self.list).rev());
        self.active[0] = true;
        self.metric[0] = T::zero();
        for e in 0..self.log_n {
            self.path_alpha[e] = self.alpha[e].alloc();
            self.path_beta[e] = self.beta[e].alloc();
        }
    }

    fn kill(&mut self, slot: usize) {
        let ln = self.log_n;
        for e in 0..ln {
            self.alpha[e].release(self.path_alpha[slot * ln + e]);
            self.beta[e].release(self.path_beta[slot * ln + e]);
        }
        self.active[slot] = false;
        self.free_slots.push(slot);
    }

    fn clone_path(&mut self, src: usize) -> usize {
        let dst = self.free_slots.pop().expect("free slot after pruning");
        let ln = self.log_n;
        for e in 0..ln {
            let a = self.path_alpha[src * ln + e];
            let b = self.path_beta[src * ln + e];
            self.alpha[e].refs[a] += 1;
            self.beta[e].refs[b] += 1;
            self.path_alpha[dst * ln + e] = a;
            self.path_beta[dst * ln + e] = b;
        }
        self.active[dst] = true;
        self.metric[dst] = self.metric[src];
        dst
    }

    fn leaf_llr(&mut self, slot: usize, i: usize, k: &Kernel<T>, ops: &mut OpCounts) -> T {
        let ln = self.log_n;
        let mut e = if i == 0 {
            ln - 1
        } else {
            i.trailing_zeros() as usize
        };
        loop {
            let s = 1usize << e;
            let dst = self.alpha[e].writable(self.path_alpha[slot * ln + e]);
            self.path_alpha[slot * ln + e] = dst;
            let (lower, upper) = self.alpha.split_at_mut(e + 1);
            let parent: &[T] = if e + 1 == ln {
                &self.channel
            } else {
                upper[0].slice(self.path_alpha[slot * ln + e + 1])
            };
            let (pa, pb) = parent.split_at(s);
            let child = lower[e].slice_mut(dst);
            if (i >> e) & 1 == 0 {
                for j in 0..s {
                    child[j] = k.f(pa[j], pb[j]);
                }
                ops.f += s as u64;
            } else {
                let bl = self.beta[e].slice(self.path_beta[slot * ln + e]);
                for j in 0..s {
                    child[j] = k.g(pa[j], pb[j], bl[j]);
                }
                ops.g += s as u64;
            }
            if e == 0 {
                return child[0];
            }
            e -= 1;
        }
    }

    fn push_bit(&mut self, slot: usize, i: usize, bit: u8) {
        let ln = self.log_n;
        self.scratch[1] = bit;
        let (mut s, mut e, mut idx) = (1usize, 0usize, i);
        while idx & 1 == 1 {
            let bl = self.beta[e].slice(self.path_beta[slot * ln + e]);
            let (lo, hi) = self.scratch.split_at_mut(2 * s);
            for j in 0..s {
                hi[j] = bl[j] ^ lo[s + j];
                hi[s + j] = lo[s + j];
            }
            s *= 2;
            e += 1;
            idx >>= 1;
        }
        if e < ln {
            let w = self.beta[e].writable(self.path_beta[slot * ln + e]);
            self.path_beta[slot * ln + e] = w;
            self.beta[e]
                .slice_mut(w)
                .copy_from_slice(&self.scratch[s..2 * s]);
        }
    }

    /// Runs the list decoder and returns every surviving path.
    pub fn decode_list(&mut self, llr: &LlrVec<T>) -> Result<SclOutput<T>> {
        check_len(llr, &self.spec)?;
        let n = self.spec.n();
        let l = self.list;
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        self.channel.copy_from_slice(llr);
        self.start();
        for i in 0..n {
            for slot in 0..l {
                if self.active[slot] {
                    self.leaf[slot] = self.leaf_llr(slot, i, &k, &mut ops);
                }
            }
            if self.spec.is_frozen(i) {
                let bit = self.spec.pinned_value(i);
                for slot in 0..l {
                    if self.active[slot] {
                        self.metric[slot] = self.metric[slot] + k.penalty(self.leaf[slot], bit);
                        self.push_bit(slot, i, bit);
                        self.trace[i * l + slot] = (slot as u32, bit);
                    }
                }
                continue;
            }
            self.cands.clear();
            for slot in 0..l {
                if self.active[slot] {
                    let lv = self.leaf[slot];
                    let h = hard(lv);
                    for (off, bit) in [(0, h), (1, 1 - h)] {
                        self.cands.push(Candidate {
                            metric: self.metric[slot] + k.penalty(lv, bit),
                            key: 2 * slot + off,
                            slot,
                            bit,
                        });
                    }
                }
            }
            self.cands.sort_unstable_by(|a, b| {
                a.metric
                    .partial_cmp(&b.metric)
                    .unwrap_or(Ordering::Equal)
                    .then(a.key.cmp(&b.key))
            });
            self.cands.truncate(l);
            let mut keep = vec![[false; 2]; l];
            for c in &self.cands {
                keep[c.slot][c.bit as usize] = true;
            }
            for slot in 0..l {
                if self.active[slot] && !keep[slot][0] && !keep[slot][1] {
                    self.kill(slot);
                }
            }
            let cands = std::mem::take(&mut self.cands);
            let mut assigned = vec![false; l];
            for c in &cands {
                let target = if assigned[c.slot] {
                    self.clone_path(c.slot)
                } else {
                    assigned[c.slot] = true;
                    c.slot
                };
                // clones share the parent's arrays until they write
                self.metric[target] = c.metric;
                self.trace[i * l + target] = (c.slot as u32, c.bit);
            }
            for slot in 0..l {
                if self.active[slot] {
                    let bit = self.trace[i * l + slot].1;
                    self.push_bit(slot, i, bit);
                }
            }
            self.cands = cands;
        }

        let mut order: Vec<usize> = (0..l).filter(|&s| self.active[s]).collect();
        order.sort_by(|&a, &b| {
            self.metric[a]
                .partial_cmp(&self.metric[b])
                .unwrap_or(Ordering::Equal)
                .then(a.cmp(&b))
        });
        let list: Vec<ListEntry<T>> = order
            .iter()
            .map(|&slot| ListEntry {
                u_hat: BitVector::from_raw(self.traceback(slot)),
                metric: self.metric[slot],
            })
            .collect();
        let mut best = DecodeOutput::from_u(&self.spec, list[0].u_hat.to_vec(), list[0].metric);
        best.ops = ops;
        Ok(SclOutput { best, list })
    }

    fn traceback(&self, mut slot: usize) -> Vec<u8> {
        let n = self.spec.n();
        let mut u = vec![0u8; n];
        for i in (0..n).rev() {
            let (p, b) = self.trace[i * self.list + slot];
            u[i] = b;
            slot = p as usize;
        }
        u
    }

    /// Lowest-metric path, or with CRC aid the lowest-metric path passing
    /// the CRC (falling back to the overall best with `crc_ok = false`).
    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        let out = self.decode_list(llr)?;
        if !self.use_crc {
            return Ok(out.best);
        }
        let poly = self.spec.crc().expect("checked at construction");
        for entry in &out.list {
            if crc_check(&self.spec.extract_info(&entry.u_hat), poly) {
                let mut chosen =
                    DecodeOutput::from_u(&self.spec, entry.u_hat.to_vec(), entry.metric);
                chosen.ops = out.best.ops;
                return Ok(chosen);
            }
        }
        Ok(out.best)
    }
}

impl<T: Llr> Decoder<T> for SclDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        SclDecoder::decode(self, llr)
    }
}

pub fn scl_decode<T: Llr>(
    llr: &LlrVec<T>,
    spec: &CodeSpec,
    list: usize,
    mode: Mode,
) -> Result<SclOutput<T>> {
    SclDecoder::new(spec.clone(), list, mode, false)?.decode_list(llr)
}

pub fn ca_scl_decode<T: Llr>(
    llr: &LlrVec<T>,
    spec: &CodeSpec,
    list: usize,
    mode: Mode,
) -> Result<DecodeOutput<T>> {
    SclDecoder::new(spec.clone(), list, mode, true)?.decode(llr)
}
