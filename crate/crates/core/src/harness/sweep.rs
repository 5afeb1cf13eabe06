use std::time::Instant;

use rand::Rng;

use crate::channels::DEFAULT_SATURATION;
use crate::decoders::DecoderKind;
use crate::error::{invalid, Result};
use crate::polar::{BitVector, CodeSpec};
use crate::quantum::{simulate_logical_error_rate, QsimRecord, QuantumCodeSpec};
use crate::scalar::Llr;
use crate::seed;

use super::config::{Precision, SimConfig};
use super::engine::{run_blocks, BlockOutcome, StopRule, Tally};

/// Outcome of one grid point.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResultRecord {
    /// `E_b/N_0` in dB, or the erasure or crossover probability.
    pub param_db: f64,
    pub blocks: u64,
    pub bit_errors: u64,
    pub block_errors: u64,
    pub ber: f64,
    pub bler: f64,
    pub seconds: f64,
    pub seed: u64,
    pub decoder: String,
}

impl ResultRecord {
    pub fn from_tally(
        param: f64,
        t: &Tally,
        payload_len: usize,
        seconds: f64,
        seed: u64,
        decoder: String,
    ) -> Self {
        let bits = t.blocks as f64 * payload_len as f64;
        ResultRecord {
            param_db: param,
            blocks: t.blocks,
            bit_errors: t.bit_errors,
            block_errors: t.block_errors,
            ber: if bits > 0.0 {
                t.bit_errors as f64 / bits
            } else {
                0.0
            },
            bler: if t.blocks > 0 {
                t.block_errors as f64 / t.blocks as f64
            } else {
                0.0
            },
            seconds,
            seed,
            decoder,
        }
    }
}

/// Runs every grid point of `cfg` on a pool of `cfg.workers` threads.
pub fn run_sweep(cfg: &SimConfig) -> Result<Vec<ResultRecord>> {
    cfg.validate()?;
    let spec = cfg.build_code()?;
    let kind = cfg.decoder.kind()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| crate::PolarError::InvalidArgument(e.to_string()))?;
    pool.install(|| match cfg.precision {
        Precision::F64 => sweep_points::<f64>(cfg, &spec, kind),
        Precision::F32 => sweep_points::<f32>(cfg, &spec, kind),
    })
}

fn sweep_points<T: Llr>(
    cfg: &SimConfig,
    spec: &CodeSpec,
    kind: DecoderKind,
) -> Result<Vec<ResultRecord>> {
    kind.validate(spec)?;
    let rate = spec.payload_len() as f64 / spec.n() as f64;
    cfg.channel
        .points
        .iter()
        .enumerate()
        .map(|(point, &value)| {
            let channel = cfg.channel_at(value, rate)?;
            let start = Instant::now();
            let tally = simulate_point::<T>(
                spec,
                kind,
                &channel,
                cfg.stop_rule(),
                cfg.seed,
                point as u64,
            )?;
            let seconds = if cfg.timing {
                start.elapsed().as_secs_f64()
            } else {
                0.0
            };
            Ok(ResultRecord::from_tally(
                value,
                &tally,
                spec.payload_len(),
                seconds,
                cfg.seed,
                kind.label(),
            ))
        })
        .collect()
}

/// Error counts for one decoder and channel. Block `b` draws its payload
/// and noise from `seed::stream(seed, point, b)`.
pub fn simulate_point<T: Llr>(
    spec: &CodeSpec,
    kind: DecoderKind,
    channel: &crate::ChannelModel,
    stop: StopRule,
    seed: u64,
    point: u64,
) -> Result<Tally> {
    kind.validate(spec)?;
    channel.validate()?;
    let bound = T::of(DEFAULT_SATURATION);
    run_blocks(
        stop,
        || kind.build::<T>(spec).expect("validated above"),
        |dec, b| {
            let mut rng = seed::stream(seed, point, b);
            let payload = BitVector::from_bools((0..spec.payload_len()).map(|_| rng.gen::<bool>()));
            let x = spec.encode(&payload)?;
            let llr = channel.llr_for(&x, bound, &mut rng)?;
            let out = dec.decode(&llr)?;
            let bit_errors = out.info_bits.xor(&payload)?.weight() as u64;
            Ok(BlockOutcome {
                bit_errors,
                block_error: bit_errors > 0,
            })
        },
    )
}

/// Logical error rate at each depolarizing probability in `ps`, grid point
/// `i` using seed stream `i`.
pub fn run_qsim(
    spec: &QuantumCodeSpec,
    ps: &[f64],
    stop: StopRule,
    seed: u64,
    workers: usize,
) -> Result<Vec<QsimRecord>> {
    if ps.is_empty() {
        return invalid("the probability grid is empty");
    }
    if workers == 0 {
        return invalid("workers must be positive");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::PolarError::InvalidArgument(e.to_string()))?;
    pool.install(|| {
        ps.iter()
            .enumerate()
            .map(|(i, &p)| simulate_logical_error_rate(spec, p, stop, seed, i as u64))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::{ChannelKind, DecoderName};

    fn config() -> SimConfig {
        r#"
seed = 3
[code]
n = 64
k = 32
construction = "gade"
design = "ebn0:2"
[channel]
kind = "awgn-bpsk"
points = [1.0, 2.0]
[decoder]
kind = "sc"
mode = "exact"
[stop]
min_block_errors = 20
max_blocks = 20000
"#
        .parse()
        .unwrap()
    }

    #[test]
    fn noiseless_point_runs_to_block_limit() {
        let mut cfg = config();
        cfg.channel.kind = ChannelKind::Bec;
        cfg.channel.points = vec![0.0];
        cfg.stop.max_blocks = 300;
        let r = run_sweep(&cfg).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!((r[0].blocks, r[0].block_errors, r[0].bler), (300, 0, 0.0));
    }

    #[test]
    fn stopping_rule_holds_for_every_record() {
        let cfg = config();
        for r in run_sweep(&cfg).unwrap() {
            assert!(r.block_errors >= 20 || r.blocks == 20000);
            assert_eq!(r.bler, r.block_errors as f64 / r.blocks as f64);
            assert_eq!(r.ber, r.bit_errors as f64 / (r.blocks * 32) as f64);
            assert_eq!(r.decoder, "sc-exact");
            assert_eq!(r.seconds, 0.0);
        }
    }

    #[test]
    fn sc_and_ssc_records_agree() {
        let cfg = config();
        let mut ssc = config();
        ssc.decoder.kind = DecoderName::Ssc;
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&ssc).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(
                (x.blocks, x.bit_errors, x.block_errors),
                (y.blocks, y.bit_errors, y.block_errors)
            );
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut cfg = config();
        cfg.decoder.kind = DecoderName::Scl;
        cfg.decoder.list = 4;
        let one = run_sweep(&cfg).unwrap();
        cfg.workers = 4;
        assert_eq!(run_sweep(&cfg).unwrap(), one);
        cfg.precision = Precision::F32;
        assert_eq!(run_sweep(&cfg).unwrap().len(), 2);
    }

    #[test]
    fn decoder_mismatch_is_reported() {
        let mut cfg = config();
        cfg.decoder.kind = DecoderName::CaScl;
        assert!(run_sweep(&cfg).is_err());
    }
}
