//! Monte-Carlo estimation of bit-channel error rates with a genie-aided SC
//! decoder on the all-zero codeword.

use rayon::prelude::*;

use crate::channels::{ChannelModel, DEFAULT_SATURATION};
use crate::decoders::{Kernel, Mode};
use crate::error::{invalid, Result};
use crate::polar::log2_exact;
use crate::seed;
use crate::stats::{wilson_interval, Z95};

use super::{DesignParam, Metric, ReliabilityProfile};

pub const DEFAULT_ROUNDS: u64 = 100_000;

const STREAM_TAG: u64 = 0x6d63_7072_6f66;

/// Leaf LLRs of genie-aided SC when every decided bit is zero.
fn genie_leaves(llr: &mut Vec<f64>, tmp: &mut Vec<f64>, k: &Kernel<f64>) {
    let n = llr.len();
    tmp.resize(n, 0.0);
    let mut s = n;
    while s > 1 {
        let h = s / 2;
        for m in (0..n).step_by(s) {
            for j in 0..h {
                let (a, b) = (llr[m + j], llr[m + h + j]);
                tmp[m + j] = k.f(a, b);
                tmp[m + h + j] = k.add(a, b);
            }
        }
        std::mem::swap(llr, tmp);
        s = h;
    }
}

/// Estimated error probability of each bit channel over `rounds` blocks.
///
/// A leaf LLR below zero counts as an error and an LLR of exactly zero as
/// half an error. Results do not depend on the number of worker threads.
pub fn monte_carlo_profile(
    n: usize,
    channel: &ChannelModel,
    rounds: u64,
    seed: u64,
) -> Result<ReliabilityProfile> {
    log2_exact(n)?;
    channel.validate()?;
    if rounds == 0 {
        return invalid("Monte-Carlo construction needs at least one round");
    }
    if !channel.is_symmetric() {
        return invalid(format!("{} is not symmetric", channel.describe()));
    }
    let kernel = Kernel::new(Mode::Exact, DEFAULT_SATURATION);
    let zeros = vec![0u8; n];
    let halves = (0..rounds)
        .into_par_iter()
        .try_fold(
            || (vec![0u64; n], Vec::new()),
            |(mut acc, mut tmp), r| {
                let mut rng = seed::stream(seed, STREAM_TAG, r);
                let mut llr = channel
                    .llr_for(&zeros, DEFAULT_SATURATION, &mut rng)?
                    .into_inner();
                genie_leaves(&mut llr, &mut tmp, &kernel);
                for (a, &l) in acc.iter_mut().zip(&llr) {
                    *a += if l < 0.0 { 2 } else { u64::from(l == 0.0) };
                }
                Ok::<_, crate::PolarError>((acc, tmp))
            },
        )
        .map(|r| r.map(|(acc, _)| acc))
        .try_reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    let values = halves
        .iter()
        .map(|&h| h as f64 / (2 * rounds) as f64)
        .collect();
    let intervals = halves
        .iter()
        .map(|&h| {
            let (lo, hi) = wilson_interval(h, 2 * rounds, Z95);
            (lo, hi)
        })
        .collect();
    let design = match *channel {
        ChannelModel::Bec { epsilon } => DesignParam::Erasure(epsilon),
        ChannelModel::Bsc { p } => DesignParam::Crossover(p),
        ChannelModel::AwgnBpsk { sigma2 } | ChannelModel::AwgnQpsk { sigma2 } => {
            DesignParam::NoiseVariance(sigma2)
        }
    };
    Ok(ReliabilityProfile::new(values, Metric::BitErrorRate, design)?.with_intervals(intervals))
}

#[cfg(test)]
mod tests {
    use super::super::{bec_bhattacharyya_profile, gade_profile, select_frozen};
    use super::*;

    #[test]
    fn bec_matches_half_erasure_probability() {
        let rounds = 20_000;
        let ch = ChannelModel::bec(0.5).unwrap();
        let mc = monte_carlo_profile(16, &ch, rounds, 7).unwrap();
        let z = bec_bhattacharyya_profile(16, 0.5).unwrap();
        for (i, (&p, &zi)) in mc.values().iter().zip(z.values()).enumerate() {
            // each half-error unit is a Bernoulli(Z/2) draw with variance at most 1/4
            let sd = (zi * (1.0 - zi) / rounds as f64).sqrt() + (0.25 / rounds as f64).sqrt();
            assert!((2.0 * p - zi).abs() <= 3.0 * sd, "index {i}: {p} vs {zi}");
        }
        assert_eq!(mc.intervals().unwrap().len(), 16);
    }

    #[test]
    fn deterministic_in_seed() {
        let ch = ChannelModel::awgn_bpsk(0.5).unwrap();
        let a = monte_carlo_profile(32, &ch, 2000, 3).unwrap();
        let b = monte_carlo_profile(32, &ch, 2000, 3).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let c = pool.install(|| monte_carlo_profile(32, &ch, 2000, 3).unwrap());
        assert_eq!(a, c);
        assert_ne!(a, monte_carlo_profile(32, &ch, 2000, 4).unwrap());
    }

    #[test]
    fn agrees_with_gade_on_awgn() {
        let sigma2 = 0.5;
        let ch = ChannelModel::awgn_bpsk(sigma2).unwrap();
        let mc = monte_carlo_profile(64, &ch, 20_000, 11).unwrap();
        let ga = gade_profile(64, sigma2).unwrap();
        let k = 32;
        let a = select_frozen(&mc, k).unwrap();
        let b = select_frozen(&ga, k).unwrap();
        let common = a.iter().filter(|i| b.contains(i)).count();
        assert!(common >= 30, "only {common} shared frozen indices");
    }

    #[test]
    fn rejects_bad_input() {
        let ch = ChannelModel::bec(0.5).unwrap();
        assert!(monte_carlo_profile(16, &ch, 0, 1).is_err());
        assert!(monte_carlo_profile(12, &ch, 10, 1).is_err());
    }
}
