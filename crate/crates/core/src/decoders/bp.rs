//! Message passing on the `(n + 1) x N` polar factor graph.
//!
//! Stage `0` is the `u` side and stage `n` the channel side. Between stages
//! `j` and `j + 1` the butterfly pairs positions `i` and `i + 2^j`. Left
//! messages `L` flow toward `u`, right messages `R` toward the channel.
//! `R` at stage 0 is pinned to `+-B` on frozen positions and zero elsewhere.

use crate::channels::LlrVec;
use crate::error::{invalid, Result};
use crate::polar::CodeSpec;
use crate::scalar::Llr;

use super::kernel::{hard, Kernel, Mode};
use super::ml::channel_metric;
use super::{check_len, DecodeOutput, Decoder, OpCounts};

struct Graph<T> {
    n: usize,
    log_n: usize,
    l: Vec<T>,
    r: Vec<T>,
}

impl<T: Llr> Graph<T> {
    fn new(n: usize, log_n: usize) -> Self {
        Graph {
            n,
            log_n,
            l: vec![T::zero(); (log_n + 1) * n],
            r: vec![T::zero(); (log_n + 1) * n],
        }
    }

    fn reset(&mut self, llr: &[T], spec: &CodeSpec, bound: T) {
        let n = self.n;
        self.l.iter_mut().for_each(|v| *v = T::zero());
        self.r.iter_mut().for_each(|v| *v = T::zero());
        self.l[self.log_n * n..].copy_from_slice(llr);
        for i in 0..n {
            if spec.is_frozen(i) {
                self.r[i] = if spec.pinned_value(i) == 0 {
                    bound
                } else {
                    -bound
                };
            }
        }
    }

    /// Left messages into stage `j` for butterflies `i in [lo, hi)` with
    /// bit `j` of `i` clear.
    #[inline]
    fn left(&mut self, j: usize, lo: usize, hi: usize, k: &Kernel<T>, ops: &mut OpCounts) {
        let n = self.n;
        let s = 1 << j;
        let (lj, lj1) = self.l.split_at_mut((j + 1) * n);
        let lj = &mut lj[j * n..];
        let lj1 = &lj1[..n];
        let rj = &self.r[j * n..(j + 1) * n];
        let mut i = lo;
        while i < hi {
            for a in i..i + s {
                let b = a + s;
                lj[a] = k.f(lj1[a], k.add(lj1[b], rj[b]));
                lj[b] = k.add(lj1[b], k.f(lj1[a], rj[a]));
            }
            ops.f += 2 * s as u64;
            ops.g += 2 * s as u64;
            i += 2 * s;
        }
    }

    /// Right messages into stage `j + 1`.
    #[inline]
    fn right(&mut self, j: usize, lo: usize, hi: usize, k: &Kernel<T>, ops: &mut OpCounts) {
        let n = self.n;
        let s = 1 << j;
        let (rj, rj1) = self.r.split_at_mut((j + 1) * n);
        let rj = &rj[j * n..];
        let rj1 = &mut rj1[..n];
        let lj1 = &self.l[(j + 1) * n..(j + 2) * n];
        let mut i = lo;
        while i < hi {
            for a in i..i + s {
                let b = a + s;
                rj1[a] = k.f(rj[a], k.add(lj1[b], rj[b]));
                rj1[b] = k.add(rj[b], k.f(rj[a], lj1[a]));
            }
            ops.f += 2 * s as u64;
            ops.g += 2 * s as u64;
            i += 2 * s;
        }
    }

    fn finish(
        &self,
        spec: &CodeSpec,
        llr: &LlrVec<T>,
        mode: Mode,
        ops: OpCounts,
    ) -> Result<DecodeOutput<T>> {
        let n = self.n;
        let u: Vec<u8> = (0..n)
            .map(|i| {
                if spec.is_frozen(i) {
                    spec.pinned_value(i)
                } else {
                    hard(self.l[i])
                }
            })
            .collect();
        let mut out = DecodeOutput::from_u(spec, u, T::zero());
        out.metric = channel_metric(llr, &out.codeword_hat, mode);
        out.soft_out = Some(LlrVec::new(self.l[..n].to_vec(), llr.bound())?);
        out.ops = ops;
        Ok(out)
    }
}

/// Flooding belief propagation: each iteration is a full right-to-left
/// sweep followed by a full left-to-right sweep.
pub struct BpDecoder<T: Llr> {
    spec: CodeSpec,
    iterations: usize,
    mode: Mode,
    graph: Graph<T>,
}

impl<T: Llr> BpDecoder<T> {
    pub fn new(spec: CodeSpec, iterations: usize, mode: Mode) -> Result<Self> {
        if iterations == 0 {
            return invalid("iteration count must be at least 1");
        }
        let graph = Graph::new(spec.n(), spec.log_n());
        Ok(BpDecoder {
            spec,
            iterations,
            mode,
            graph,
        })
    }

    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        check_len(llr, &self.spec)?;
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        let (n, log_n) = (self.spec.n(), self.spec.log_n());
        let g = &mut self.graph;
        g.reset(llr, &self.spec, llr.bound());
        for it in 0..self.iterations {
            for j in (0..log_n).rev() {
                g.left(j, 0, n, &k, &mut ops);
            }
            // the last right sweep cannot influence the decision
            if it + 1 < self.iterations {
                for j in 0..log_n {
                    g.right(j, 0, n, &k, &mut ops);
                }
            }
        }
        g.finish(&self.spec, llr, self.mode, ops)
    }
}

impl<T: Llr> Decoder<T> for BpDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        BpDecoder::decode(self, llr)
    }
}

pub fn bp_decode<T: Llr>(
    llr: &LlrVec<T>,
    spec: &CodeSpec,
    iterations: usize,
    mode: Mode,
) -> Result<DecodeOutput<T>> {
    BpDecoder::new(spec.clone(), iterations, mode)?.decode(llr)
}

/// Soft cancellation: the belief-propagation updates evaluated in the
/// depth-first order of successive cancellation. Right messages persist
/// across iterations; internal ones start at zero.
pub struct ScanDecoder<T: Llr> {
    spec: CodeSpec,
    iterations: usize,
    mode: Mode,
    graph: Graph<T>,
}

impl<T: Llr> ScanDecoder<T> {
    pub fn new(spec: CodeSpec, iterations: usize, mode: Mode) -> Result<Self> {
        if iterations == 0 {
            return invalid("iteration count must be at least 1");
        }
        let graph = Graph::new(spec.n(), spec.log_n());
        Ok(ScanDecoder {
            spec,
            iterations,
            mode,
            graph,
        })
    }

    pub fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        check_len(llr, &self.spec)?;
        let k = Kernel::new(self.mode, llr.bound());
        let mut ops = OpCounts::default();
        let log_n = self.spec.log_n();
        self.graph.reset(llr, &self.spec, llr.bound());
        for _ in 0..self.iterations {
            self.node(log_n, 0, &k, &mut ops);
        }
        self.graph.finish(&self.spec, llr, self.mode, ops)
    }

    /// Visits the subtree at stage `e` starting at position `t`.
    fn node(&mut self, e: usize, t: usize, k: &Kernel<T>, ops: &mut OpCounts) {
        if e == 0 {
            return;
        }
        let j = e - 1;
        let h = 1 << j;
        let g = &mut self.graph;
        let n = g.n;
        {
            let (lj, rest) = g.l.split_at_mut((j + 1) * n);
            let (lj, lj1) = (&mut lj[j * n..], &rest[..n]);
            let rj = &g.r[j * n..(j + 1) * n];
            for a in t..t + h {
                lj[a] = k.f(lj1[a], k.add(lj1[a + h], rj[a + h]));
            }
            ops.f += h as u64;
        }
        self.node(j, t, k, ops);
        let g = &mut self.graph;
        {
            let (lj, rest) = g.l.split_at_mut((j + 1) * n);
            let (lj, lj1) = (&mut lj[j * n..], &rest[..n]);
            let rj = &g.r[j * n..(j + 1) * n];
            for a in t..t + h {
                lj[a + h] = k.add(lj1[a + h], k.f(lj1[a], rj[a]));
            }
            ops.g += h as u64;
        }
        self.node(j, t + h, k, ops);
        self.graph.right(j, t, t + 2 * h, k, ops);
    }
}

impl<T: Llr> Decoder<T> for ScanDecoder<T> {
    fn decode(&mut self, llr: &LlrVec<T>) -> Result<DecodeOutput<T>> {
        ScanDecoder::decode(self, llr)
    }
}

pub fn scan_decode<T: Llr>(
    llr: &LlrVec<T>,
    spec: &CodeSpec,
    iterations: usize,
    mode: Mode,
) -> Result<DecodeOutput<T>> {
    ScanDecoder::new(spec.clone(), iterations, mode)?.decode(llr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decoders::testutil::{bec_code, noiseless, noisy_block};
    use crate::decoders::{f_op, sc_decode};
    use crate::polar::BitVector;

    #[test]
    fn two_bit_first_message_is_f() {
        let spec = CodeSpec::new(2, vec![]).unwrap();
        let llr = LlrVec::new(vec![1.3f64, -0.7], 40.0).unwrap();
        let out = bp_decode(&llr, &spec, 1, Mode::Exact).unwrap();
        let soft = out.soft_out.unwrap();
        assert!((soft[0] - f_op(1.3, -0.7, Mode::Exact, 40.0)).abs() < 1e-15);
        // second message with zero prior on u1: L2 + f(L1, 0) = L2
        assert!((soft[1] - -0.7).abs() < 1e-15);
    }

    #[test]
    fn noiseless_one_iteration() {
        let spec = bec_code(64, 32);
        for t in 0..20u64 {
            let x = spec
                .encode(&BitVector::from_u64(t * 0x9E37_79B9, 32))
                .unwrap();
            for mode in [Mode::Exact, Mode::MinSum] {
                let bp = bp_decode(&noiseless(&x), &spec, 1, mode).unwrap();
                assert_eq!(bp.codeword_hat, x);
                let scan = scan_decode(&noiseless(&x), &spec, 1, mode).unwrap();
                assert_eq!(scan.codeword_hat, x);
            }
        }
    }

    #[test]
    fn frozen_outputs_are_pinned() {
        let values: BitVector = "1010".parse().unwrap();
        let spec = CodeSpec::with_frozen_values(8, vec![0, 1, 2, 4], values).unwrap();
        let llr = LlrVec::new(vec![3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 3.0], 40.0).unwrap();
        for out in [
            bp_decode(&llr, &spec, 5, Mode::Exact).unwrap(),
            scan_decode(&llr, &spec, 2, Mode::Exact).unwrap(),
        ] {
            assert_eq!(out.u_hat.select(spec.frozen()).to_string(), "1010");
            assert!(out.soft_out.is_some());
        }
    }

    #[test]
    fn scan_first_left_messages_match_sc_f() {
        // with no frozen priors the first leaf LLR is SC's
        let spec = CodeSpec::new(16, vec![]).unwrap();
        let (_, _, llr) = noisy_block(&spec, 0.8, 3, 0);
        let out = scan_decode(&llr, &spec, 1, Mode::Exact).unwrap();
        let mut a: Vec<f64> = llr.to_vec();
        while a.len() > 1 {
            let h = a.len() / 2;
            a = (0..h)
                .map(|i| f_op(a[i], a[i + h], Mode::Exact, 40.0))
                .collect();
        }
        assert!((out.soft_out.unwrap()[0] - a[0]).abs() < 1e-12);
    }

    #[test]
    fn iterative_decoders_are_reasonable() {
        let spec = bec_code(128, 64);
        let mut errs = [0usize; 3];
        for t in 0..300 {
            let (_, x, llr) = noisy_block(&spec, 0.5, 4, t);
            let outs = [
                sc_decode(&llr, &spec, Mode::Exact).unwrap(),
                bp_decode(&llr, &spec, 30, Mode::Exact).unwrap(),
                scan_decode(&llr, &spec, 2, Mode::Exact).unwrap(),
            ];
            for (e, o) in errs.iter_mut().zip(&outs) {
                *e += usize::from(o.codeword_hat != x);
            }
        }
        assert!(errs.iter().all(|&e| e < 30), "{errs:?}");
    }

    #[test]
    fn rejects_zero_iterations() {
        assert!(BpDecoder::<f64>::new(bec_code(8, 4), 0, Mode::Exact).is_err());
        assert!(ScanDecoder::<f64>::new(bec_code(8, 4), 0, Mode::Exact).is_err());
    }
}
