//! Syndrome-decoded quantum polar codes over the depolarizing channel,
//! simulated at the level of binary Pauli frames.
//!
//! Bit flips `e_x` reach the code's input side as `e_x G` and phase flips
//! `e_z` as `e_z G^T`. Since `G^T` is `G` conjugated by index reversal, the
//! phase side is decoded by an ordinary SC decoder on reversed indices, so
//! its decoding order runs from the last position to the first.

mod code;
mod pauli;

pub use code::{
    bit_flip_profile, classify_channels, classify_profile, phase_flip_profile, ClassifyRule,
    QuantumCodeSpec,
};
pub use pauli::{sample_pauli, Pauli, PauliErrorVector};

use crate::channels::{LlrVec, DEFAULT_SATURATION};
use crate::decoders::{Mode, ScDecoder};
use crate::error::{invalid, PolarError, Result};
use crate::harness::engine::{run_blocks, BlockOutcome, StopRule};
use crate::polar::{polar_transform_in_place, transposed_transform_in_place, BitVector, CodeSpec};
use crate::seed;
use crate::stats::{wilson_interval, Z95};

use pauli::check_depolarizing;

/// Measured syndromes.
///
/// `s_x` holds the bit-flip outcomes on the computational-frozen qubits,
/// `s_z` the phase-flip outcomes on the Hadamard-frozen qubits and `s_y`
/// the `(bit, phase)` outcome pair of each ebit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyndromePair {
    pub s_x: BitVector,
    pub s_z: BitVector,
    pub s_y: Vec<(u8, u8)>,
}

impl SyndromePair {
    /// Values pinned on [`QuantumCodeSpec::bit_frozen`], in position order.
    pub fn bit_side(&self, spec: &QuantumCodeSpec) -> Vec<u8> {
        interleave(
            spec.frozen_computational(),
            &self.s_x,
            spec.ebits(),
            self.s_y.iter().map(|p| p.0),
        )
    }

    /// Values pinned on [`QuantumCodeSpec::phase_frozen`], in position order.
    pub fn phase_side(&self, spec: &QuantumCodeSpec) -> Vec<u8> {
        interleave(
            spec.frozen_hadamard(),
            &self.s_z,
            spec.ebits(),
            self.s_y.iter().map(|p| p.1),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.s_x.weight() == 0 && self.s_z.weight() == 0 && self.s_y.iter().all(|&p| p == (0, 0))
    }
}

fn interleave(a: &[usize], av: &[u8], b: &[usize], bv: impl Iterator<Item = u8>) -> Vec<u8> {
    let mut pairs: Vec<(usize, u8)> = a.iter().copied().zip(av.iter().copied()).collect();
    pairs.extend(b.iter().copied().zip(bv));
    pairs.sort_unstable_by_key(|p| p.0);
    pairs.into_iter().map(|p| p.1).collect()
}

/// `e G`.
pub fn bit_side_image(e_x: &[u8]) -> Vec<u8> {
    let mut u = e_x.to_vec();
    polar_transform_in_place(&mut u);
    u
}

/// `e G^T`.
pub fn phase_side_image(e_z: &[u8]) -> Vec<u8> {
    let mut u = e_z.to_vec();
    transposed_transform_in_place(&mut u);
    u
}

pub fn extract_syndromes(err: &PauliErrorVector, spec: &QuantumCodeSpec) -> Result<SyndromePair> {
    if err.len() != spec.n() {
        return Err(PolarError::LengthMismatch {
            expected: spec.n(),
            got: err.len(),
        });
    }
    let ux = bit_side_image(&err.x_mask);
    let uz = phase_side_image(&err.z_mask);
    let pick = |u: &[u8], idx: &[usize]| BitVector::from_bools(idx.iter().map(|&i| u[i] == 1));
    Ok(SyndromePair {
        s_x: pick(&ux, spec.frozen_computational()),
        s_z: pick(&uz, spec.frozen_hadamard()),
        s_y: spec.ebits().iter().map(|&i| (ux[i], uz[i])).collect(),
    })
}

fn prior_llr(p_marginal: f64) -> f64 {
    ((1.0 - p_marginal) / p_marginal)
        .ln()
        .min(DEFAULT_SATURATION)
}

/// Most likely error pattern, as found by SC, whose image `e G` matches
/// `syndrome` on the `frozen` positions (ascending, 0-based), for i.i.d.
/// bit errors of probability `p_marginal`.
pub fn syndrome_sc_decode(
    syndrome: &[u8],
    frozen: &[usize],
    n: usize,
    p_marginal: f64,
) -> Result<BitVector> {
    if !(p_marginal > 0.0 && p_marginal < 0.5) {
        return invalid(format!(
            "marginal error probability {p_marginal} outside (0, 1/2)"
        ));
    }
    let spec =
        CodeSpec::with_frozen_values(n, frozen.to_vec(), BitVector::new(syndrome.to_vec())?)?;
    let llr = LlrVec::new(vec![prior_llr(p_marginal); n], DEFAULT_SATURATION)?;
    Ok(ScDecoder::new(spec, Mode::Exact).decode(&llr)?.codeword_hat)
}

/// Pair of syndrome SC decoders for one quantum code.
pub struct QuantumDecoder {
    spec: QuantumCodeSpec,
    bit: ScDecoder<f64>,
    phase: ScDecoder<f64>,
    llr: LlrVec<f64>,
}

impl QuantumDecoder {
    /// Decoder whose priors assume depolarizing probability `p`. At `p = 0`
    /// the prior saturates.
    pub fn new(spec: QuantumCodeSpec, p: f64, mode: Mode) -> Result<Self> {
        check_depolarizing(p)?;
        let pm = 2.0 * p / 3.0;
        if pm >= 0.5 {
            return invalid("p = 3/4 leaves no information in the prior");
        }
        let n = spec.n();
        let mirror = |v: Vec<usize>| {
            let mut m: Vec<usize> = v.iter().map(|&i| n - 1 - i).collect();
            m.sort_unstable();
            m
        };
        let bit_frozen = spec.bit_frozen();
        let phase_frozen = mirror(spec.phase_frozen());
        let bit = ScDecoder::new(CodeSpec::new(n, bit_frozen)?, mode);
        let phase = ScDecoder::new(CodeSpec::new(n, phase_frozen)?, mode);
        let llr_value = if pm == 0.0 {
            DEFAULT_SATURATION
        } else {
            prior_llr(pm)
        };
        let llr = LlrVec::new(vec![llr_value; n], DEFAULT_SATURATION)?;
        Ok(QuantumDecoder {
            spec,
            bit,
            phase,
            llr,
        })
    }

    pub fn spec(&self) -> &QuantumCodeSpec {
        &self.spec
    }

    /// Estimated Pauli error consistent with `synd`.
    pub fn decode(&mut self, synd: &SyndromePair) -> Result<PauliErrorVector> {
        self.bit.set_frozen_values(&synd.bit_side(&self.spec))?;
        let ex = self.bit.decode(&self.llr)?.codeword_hat;
        // reversed view: position i of the phase side sits at n - 1 - i
        let mut pv = synd.phase_side(&self.spec);
        pv.reverse();
        self.phase.set_frozen_values(&pv)?;
        let rz = self.phase.decode(&self.llr)?.codeword_hat;
        let ez = BitVector::from_bools(rz.iter().rev().map(|&b| b == 1));
        PauliErrorVector::new(ex, ez)
    }

    /// Residual Pauli operator on the logical qubits after correcting `err`
    /// with the decoder's estimate.
    pub fn logical_residual(&mut self, err: &PauliErrorVector) -> Result<Vec<Pauli>> {
        let synd = extract_syndromes(err, &self.spec)?;
        let est = self.decode(&synd)?;
        let (ux, uz) = (bit_side_image(&err.x_mask), phase_side_image(&err.z_mask));
        let (vx, vz) = (bit_side_image(&est.x_mask), phase_side_image(&est.z_mask));
        Ok(self
            .spec
            .info()
            .iter()
            .map(|&i| Pauli::from_bits(uz[i] ^ vz[i], ux[i] ^ vx[i]))
            .collect())
    }

    pub fn is_logical_error(&mut self, err: &PauliErrorVector) -> Result<bool> {
        Ok(self.logical_residual(err)?.iter().any(|&p| p != Pauli::I))
    }
}

/// Logical error statistics at one depolarizing probability.
#[derive(Clone, Debug, PartialEq)]
pub struct QsimRecord {
    pub p: f64,
    pub blocks: u64,
    pub logical_errors: u64,
    pub rate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub c: usize,
    pub seed: u64,
}

/// Simulates blocks until `stop` holds. Block `b` draws its error from
/// `seed::stream(seed, point, b)`.
pub fn simulate_logical_error_rate(
    spec: &QuantumCodeSpec,
    p: f64,
    stop: StopRule,
    seed: u64,
    point: u64,
) -> Result<QsimRecord> {
    QuantumDecoder::new(spec.clone(), p, Mode::Exact)?;
    let n = spec.n();
    let tally = run_blocks(
        stop,
        || QuantumDecoder::new(spec.clone(), p, Mode::Exact).expect("validated above"),
        |dec, b| {
            let mut rng = seed::stream(seed, point, b);
            let err = sample_pauli(n, p, &mut rng)?;
            let residual = dec.logical_residual(&err)?;
            let wrong = residual.iter().filter(|&&q| q != Pauli::I).count() as u64;
            Ok(BlockOutcome {
                bit_errors: wrong,
                block_error: wrong > 0,
            })
        },
    )?;
    let (ci_low, ci_high) = wilson_interval(tally.block_errors, tally.blocks, Z95);
    Ok(QsimRecord {
        p,
        blocks: tally.blocks,
        logical_errors: tally.block_errors,
        rate: tally.block_errors as f64 / tally.blocks as f64,
        ci_low,
        ci_high,
        c: spec.c(),
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Method;
    use crate::polar::generator_matrix;
    use rand::Rng;

    fn example() -> QuantumCodeSpec {
        QuantumCodeSpec::new(8, vec![], vec![3, 5, 6, 7], vec![0, 1, 2, 4], vec![]).unwrap()
    }

    fn mixed() -> QuantumCodeSpec {
        classify_channels(16, 0.05, Method::BecApprox, ClassifyRule::Rank { k: 10 }).unwrap()
    }

    fn single(n: usize, i: usize, op: Pauli) -> PauliErrorVector {
        let mut v = vec![Pauli::I; n];
        v[i] = op;
        PauliErrorVector::from_paulis(&v)
    }

    #[test]
    fn phase_image_is_transpose_product() {
        let g = generator_matrix(8).unwrap();
        for e in 0u32..256 {
            let ev: Vec<u8> = (0..8).map(|i| (e >> i & 1) as u8).collect();
            let want: Vec<u8> = (0..8)
                .map(|j| (0..8).fold(0, |a, i| a ^ (ev[i] & g[j][i])))
                .collect();
            assert_eq!(phase_side_image(&ev), want);
        }
    }

    #[test]
    fn identity_gives_zero_syndromes() {
        let q = mixed();
        let s = extract_syndromes(&PauliErrorVector::identity(16), &q).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.s_x.len(), q.frozen_computational().len());
        assert_eq!(s.s_z.len(), q.frozen_hadamard().len());
        assert_eq!(s.s_y.len(), q.c());
        assert!(extract_syndromes(&PauliErrorVector::identity(8), &q).is_err());
    }

    #[test]
    fn single_errors_match_matrix_product() {
        let q = QuantumCodeSpec::new(8, vec![7], vec![3, 5, 6], vec![0, 1, 2], vec![4]).unwrap();
        let g = generator_matrix(8).unwrap();
        for i in 0..8 {
            let sx = extract_syndromes(&single(8, i, Pauli::X), &q).unwrap();
            let want: Vec<u8> = q.frozen_computational().iter().map(|&j| g[i][j]).collect();
            assert_eq!(sx.s_x.as_slice(), want.as_slice());
            assert_eq!(sx.s_y, vec![(g[i][4], 0)]);
            assert_eq!(sx.s_z.weight(), 0);
            let sz = extract_syndromes(&single(8, i, Pauli::Z), &q).unwrap();
            let want: Vec<u8> = q.frozen_hadamard().iter().map(|&j| g[j][i]).collect();
            assert_eq!(sz.s_z.as_slice(), want.as_slice());
            assert_eq!(sz.s_y, vec![(0, g[4][i])]);
            assert_eq!(sz.s_x.weight(), 0);
        }
    }

    #[test]
    fn zero_syndrome_decodes_to_identity() {
        let q = mixed();
        let mut dec = QuantumDecoder::new(q.clone(), 0.05, Mode::Exact).unwrap();
        let s = extract_syndromes(&PauliErrorVector::identity(16), &q).unwrap();
        assert_eq!(dec.decode(&s).unwrap(), PauliErrorVector::identity(16));
        let zeros = vec![0u8; 4];
        assert_eq!(
            syndrome_sc_decode(&zeros, &[0, 1, 2, 4], 8, 0.01).unwrap(),
            BitVector::zeros(8)
        );
        assert!(syndrome_sc_decode(&zeros, &[0, 1, 2, 4], 8, 0.0).is_err());
        assert!(syndrome_sc_decode(&zeros, &[0, 1, 2, 4], 8, 0.5).is_err());
    }

    /// Minimum-weight errors consistent with a bit-side syndrome, among
    /// patterns of weight at most two.
    fn ml_low_weight(frozen: &[usize], synd: &[u8]) -> Vec<Vec<u8>> {
        let mut best: Vec<Vec<u8>> = Vec::new();
        let mut best_w = usize::MAX;
        for e in 0u32..256 {
            let w = e.count_ones() as usize;
            if w > 2 {
                continue;
            }
            let ev: Vec<u8> = (0..8).map(|i| (e >> i & 1) as u8).collect();
            let u = bit_side_image(&ev);
            if frozen.iter().zip(synd).all(|(&f, &s)| u[f] == s) {
                if w < best_w {
                    best_w = w;
                    best.clear();
                }
                if w == best_w {
                    best.push(ev);
                }
            }
        }
        best
    }

    #[test]
    fn every_single_error_is_corrected_exactly() {
        let q = example();
        let mut dec = QuantumDecoder::new(q.clone(), 0.01, Mode::Exact).unwrap();
        for i in 0..8 {
            for op in [Pauli::X, Pauli::Y, Pauli::Z] {
                let e = single(8, i, op);
                let s = extract_syndromes(&e, &q).unwrap();
                assert_eq!(dec.decode(&s).unwrap(), e, "{op} on qubit {i}");
            }
            let e = single(8, i, Pauli::X);
            let s = extract_syndromes(&e, &q).unwrap();
            let ml = ml_low_weight(&q.bit_frozen(), &s.bit_side(&q));
            assert_eq!(ml, vec![e.x_mask.to_vec()]);
            let alone =
                syndrome_sc_decode(&s.bit_side(&q), &q.bit_frozen(), 8, 0.01 * 2.0 / 3.0).unwrap();
            assert_eq!(alone, e.x_mask);
        }
    }

    #[test]
    fn estimates_reproduce_their_syndromes() {
        let q = mixed();
        let mut dec = QuantumDecoder::new(q.clone(), 0.1, Mode::Exact).unwrap();
        let mut rng = seed::stream(4, 0, 0);
        for _ in 0..2000 {
            let e = sample_pauli(16, rng.gen_range(0.0..0.5), &mut rng).unwrap();
            let s = extract_syndromes(&e, &q).unwrap();
            let est = dec.decode(&s).unwrap();
            assert_eq!(extract_syndromes(&est, &q).unwrap(), s);
        }
    }

    #[test]
    fn sides_decode_independently() {
        let q = mixed();
        let mut dec = QuantumDecoder::new(q.clone(), 0.1, Mode::Exact).unwrap();
        let mut rng = seed::stream(5, 0, 0);
        for _ in 0..500 {
            let a = sample_pauli(16, 0.3, &mut rng).unwrap();
            let b = sample_pauli(16, 0.3, &mut rng).unwrap();
            let mixed_err = PauliErrorVector::new(a.x_mask.clone(), b.z_mask.clone()).unwrap();
            let ea = dec.decode(&extract_syndromes(&a, &q).unwrap()).unwrap();
            let eb = dec.decode(&extract_syndromes(&b, &q).unwrap()).unwrap();
            let em = dec
                .decode(&extract_syndromes(&mixed_err, &q).unwrap())
                .unwrap();
            assert_eq!(em.x_mask, ea.x_mask);
            assert_eq!(em.z_mask, eb.z_mask);
        }
    }

    #[test]
    fn noiseless_channel_has_no_logical_errors() {
        let q = mixed();
        let r = simulate_logical_error_rate(&q, 0.0, StopRule::fixed(500), 1, 0).unwrap();
        assert_eq!((r.blocks, r.logical_errors, r.rate), (500, 0, 0.0));
        assert_eq!(r.c, q.c());
        assert!(simulate_logical_error_rate(&q, 0.1, StopRule::fixed(0), 1, 0).is_err());
    }

    #[test]
    fn simulation_is_reproducible() {
        let q = mixed();
        let stop = StopRule {
            min_block_errors: 50,
            max_blocks: 100_000,
        };
        let a = simulate_logical_error_rate(&q, 0.05, stop, 7, 3).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| simulate_logical_error_rate(&q, 0.05, stop, 7, 3).unwrap());
        assert_eq!(a, b);
        assert_eq!(a.logical_errors, 50);
        assert!(a.ci_low <= a.rate && a.rate <= a.ci_high);
    }
}
