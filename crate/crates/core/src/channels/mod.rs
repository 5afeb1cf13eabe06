//! Channel models, transmission and soft demodulation.
//!
//! Bit `0` maps to the symbol `+1` and bit `1` to `-1`. Positive LLRs favour
//! bit `0`. Observations are plain `f64` sequences: received bits `0.0`/`1.0`
//! for BEC and BSC (an erasure is `NaN`), matched-filter outputs for AWGN.

mod llr;

pub use llr::{LlrVec, DEFAULT_SATURATION};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::scalar::Llr;

/// Memoryless binary-input symmetric channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ChannelModel {
    Bec {
        epsilon: f64,
    },
    Bsc {
        p: f64,
    },
    /// BPSK over real AWGN with noise variance `sigma2`.
    AwgnBpsk {
        sigma2: f64,
    },
    /// Gray-mapped QPSK: consecutive bit pairs ride the in-phase and
    /// quadrature dimensions, each with noise variance `sigma2`.
    AwgnQpsk {
        sigma2: f64,
    },
}

/// Noise variance per real dimension for unit-energy symbols at the given
/// `E_b/N_0` (dB) and code rate `k/N`: `sigma^2 = 1 / (2 R E_b/N_0)`.
pub fn ebn0_db_to_sigma2(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return invalid(format!("code rate {rate} outside (0, 1]"));
    }
    if !ebn0_db.is_finite() {
        return invalid("E_b/N_0 must be finite");
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

impl ChannelModel {
    pub fn bec(epsilon: f64) -> Result<Self> {
        check_probability(epsilon, "erasure probability")?;
        Ok(ChannelModel::Bec { epsilon })
    }

    pub fn bsc(p: f64) -> Result<Self> {
        check_probability(p, "crossover probability")?;
        Ok(ChannelModel::Bsc { p })
    }

    pub fn awgn_bpsk(sigma2: f64) -> Result<Self> {
        check_variance(sigma2)?;
        Ok(ChannelModel::AwgnBpsk { sigma2 })
    }

    pub fn awgn_qpsk(sigma2: f64) -> Result<Self> {
        check_variance(sigma2)?;
        Ok(ChannelModel::AwgnQpsk { sigma2 })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::Bec { epsilon } => check_probability(epsilon, "erasure probability"),
            ChannelModel::Bsc { p } => check_probability(p, "crossover probability"),
            ChannelModel::AwgnBpsk { sigma2 } | ChannelModel::AwgnQpsk { sigma2 } => {
                check_variance(sigma2)
            }
        }
    }

    /// Every supported model is output-symmetric.
    pub fn is_symmetric(&self) -> bool {
        true
    }

    /// Samples the channel output for `code`.
    pub fn transmit<R: Rng + ?Sized>(&self, code: &[u8], rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(match *self {
            ChannelModel::Bec { epsilon } => code
                .iter()
                .map(|&b| {
                    if rng.gen::<f64>() < epsilon {
                        f64::NAN
                    } else {
                        f64::from(b)
                    }
                })
                .collect(),
            ChannelModel::Bsc { p } => code
                .iter()
                .map(|&b| f64::from(b ^ u8::from(rng.gen::<f64>() < p)))
                .collect(),
            // QPSK per-dimension samples coincide with BPSK ones; the pairing
            // only fixes which bits share a complex symbol.
            ChannelModel::AwgnBpsk { sigma2 } | ChannelModel::AwgnQpsk { sigma2 } => {
                let sigma = sigma2.sqrt();
                code.iter()
                    .map(|&b| {
                        let n: f64 = StandardNormal.sample(rng);
                        1.0 - 2.0 * f64::from(b) + sigma * n
                    })
                    .collect()
            }
        })
    }

    /// Soft demodulation with saturation at `bound`.
    pub fn demodulate_llr<T: Llr>(&self, obs: &[f64], bound: T) -> Result<LlrVec<T>> {
        self.validate()?;
        let b = bound.as_f64();
        let values: Vec<T> = match *self {
            ChannelModel::Bec { .. } => obs
                .iter()
                .map(|&y| {
                    if y.is_nan() {
                        Ok(T::zero())
                    } else {
                        Ok(T::of(hard_symbol(y)? * b))
                    }
                })
                .collect::<Result<_>>()?,
            ChannelModel::Bsc { p } => {
                let mag = if p == 0.0 || p == 1.0 {
                    b * (1.0 - 2.0 * p)
                } else {
                    ((1.0 - p) / p).ln().clamp(-b, b)
                };
                obs.iter()
                    .map(|&y| Ok(T::of(hard_symbol(y)? * mag)))
                    .collect::<Result<_>>()?
            }
            ChannelModel::AwgnBpsk { sigma2 } | ChannelModel::AwgnQpsk { sigma2 } => {
                obs.iter().map(|&y| T::of(2.0 * y / sigma2)).collect()
            }
        };
        LlrVec::new(values, bound)
    }

    /// [`transmit`](Self::transmit) followed by
    /// [`demodulate_llr`](Self::demodulate_llr).
    pub fn llr_for<T: Llr, R: Rng + ?Sized>(
        &self,
        code: &[u8],
        bound: T,
        rng: &mut R,
    ) -> Result<LlrVec<T>> {
        let obs = self.transmit(code, rng)?;
        self.demodulate_llr(&obs, bound)
    }

    pub fn describe(&self) -> String {
        match *self {
            ChannelModel::Bec { epsilon } => format!("bec({epsilon})"),
            ChannelModel::Bsc { p } => format!("bsc({p})"),
            ChannelModel::AwgnBpsk { sigma2 } => format!("awgn-bpsk(sigma2={sigma2})"),
            ChannelModel::AwgnQpsk { sigma2 } => format!("awgn-qpsk(sigma2={sigma2})"),
        }
    }
}

fn hard_symbol(y: f64) -> Result<f64> {
    if y == 0.0 {
        Ok(1.0)
    } else if y == 1.0 {
        Ok(-1.0)
    } else {
        invalid(format!("binary observation expected, got {y}"))
    }
}

fn check_probability(p: f64, what: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        invalid(format!("{what} {p} outside [0, 1]"))
    }
}

fn check_variance(sigma2: f64) -> Result<()> {
    if sigma2 > 0.0 && sigma2.is_finite() {
        Ok(())
    } else {
        invalid(format!("noise variance {sigma2} must be positive"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::stream;

    #[test]
    fn parameter_validation() {
        assert!(ChannelModel::bec(1.5).is_err());
        assert!(ChannelModel::bsc(-0.1).is_err());
        assert!(ChannelModel::awgn_bpsk(0.0).is_err());
        assert!(ChannelModel::awgn_qpsk(f64::NAN).is_err());
        assert!(ebn0_db_to_sigma2(0.0, 0.0).is_err());
    }

    #[test]
    fn noiseless_extremes() {
        let mut rng = stream(1, 0, 0);
        let code = [0u8, 1, 1, 0, 1];
        let y = ChannelModel::bec(0.0)
            .unwrap()
            .transmit(&code, &mut rng)
            .unwrap();
        assert_eq!(y, vec![0.0, 1.0, 1.0, 0.0, 1.0]);
        let y = ChannelModel::bsc(1.0)
            .unwrap()
            .transmit(&code, &mut rng)
            .unwrap();
        assert_eq!(y, vec![1.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn small_noise_recovers_signs() {
        let mut rng = stream(2, 0, 0);
        let ch = ChannelModel::awgn_bpsk(1e-3).unwrap();
        let code: Vec<u8> = (0..10_000).map(|i| (i % 3 == 0) as u8).collect();
        let y = ch.transmit(&code, &mut rng).unwrap();
        for (&b, &v) in code.iter().zip(&y) {
            assert_eq!(b == 1, v < 0.0);
        }
    }

    #[test]
    fn llr_formulas() {
        let ch = ChannelModel::awgn_bpsk(0.8).unwrap();
        let l = ch.demodulate_llr(&[0.4], 40.0f64).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-15);

        let ch = ChannelModel::bsc(0.11).unwrap();
        let l = ch.demodulate_llr(&[0.0, 1.0], 40.0f64).unwrap();
        assert!((l[0] - 2.090_741_096_933_769).abs() < 1e-12);
        assert_eq!(l[1], -l[0]);

        let ch = ChannelModel::bec(0.5).unwrap();
        let l = ch.demodulate_llr(&[f64::NAN, 0.0, 1.0], 40.0f32).unwrap();
        assert_eq!(l.as_slice(), &[0.0, 40.0, -40.0]);

        let l = ChannelModel::bsc(0.0)
            .unwrap()
            .demodulate_llr(&[0.0, 1.0], 40.0)
            .unwrap();
        assert_eq!(l.as_slice(), &[40.0, -40.0]);
        let l = ChannelModel::bsc(1.0)
            .unwrap()
            .demodulate_llr(&[0.0], 40.0)
            .unwrap();
        assert_eq!(l.as_slice(), &[-40.0]);
        assert!(ChannelModel::bsc(0.1)
            .unwrap()
            .demodulate_llr(&[0.5], 40.0f64)
            .is_err());
    }

    #[test]
    fn large_awgn_values_saturate() {
        let ch = ChannelModel::awgn_bpsk(0.01).unwrap();
        let l = ch.demodulate_llr(&[5.0, -5.0], 40.0f64).unwrap();
        assert_eq!(l.as_slice(), &[40.0, -40.0]);
    }

    #[test]
    fn sigma2_conversion() {
        let s = ebn0_db_to_sigma2(0.0, 0.5).unwrap();
        assert!((s - 1.0).abs() < 1e-15);
        let s = ebn0_db_to_sigma2(10.0 * 2f64.log10(), 0.5).unwrap();
        assert!((s - 0.5).abs() < 1e-12);
    }

    #[test]
    fn qpsk_llr_moments_match_bpsk() {
        let sigma2 = ebn0_db_to_sigma2(1.0, 0.5).unwrap();
        let bpsk = ChannelModel::awgn_bpsk(sigma2).unwrap();
        let qpsk = ChannelModel::awgn_qpsk(sigma2).unwrap();
        let n = 1_000_000;
        let code = vec![0u8; n];
        let moments = |ch: ChannelModel, seed: u64| {
            let mut rng = stream(seed, 0, 0);
            let l = ch.llr_for(&code, 1e9f64, &mut rng).unwrap();
            let mean = l.iter().sum::<f64>() / n as f64;
            let var = l.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
            (mean, var)
        };
        let (mb, vb) = moments(bpsk, 3);
        let (mq, vq) = moments(qpsk, 4);
        // mean 2/sigma2 and variance 4/sigma2
        let m0 = 2.0 / sigma2;
        let v0 = 4.0 / sigma2;
        let se_m = (v0 / n as f64).sqrt();
        let se_v = v0 * (2.0 / n as f64).sqrt();
        for (m, v) in [(mb, vb), (mq, vq)] {
            assert!((m - m0).abs() < 4.0 * se_m, "mean {m} vs {m0}");
            assert!((v - v0).abs() < 4.0 * se_v, "var {v} vs {v0}");
        }
        assert!((mb - mq).abs() < 6.0 * se_m);
    }
}
