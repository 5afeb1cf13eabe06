//! Bit-channel reliability estimation and frozen-set selection.
//!
//! Profiles are indexed in natural order: entry `i` is the synthetic channel
//! seen by `u_i` under `G_N` with 0-based `i`.

mod bec;
mod gade;
mod monte_carlo;
mod sequence;

pub use bec::{bec_bhattacharyya_profile, bec_capacity_profile};
pub use gade::{gade_phi, gade_phi_inv, gade_profile, ln_phi, mean_to_ber, PHI_INV_UPPER};
pub use monte_carlo::{monte_carlo_profile, DEFAULT_ROUNDS};
pub use sequence::{read_sequence, write_sequence, SequenceFile};

use std::fmt;
use std::str::FromStr;

use crate::channels::{ebn0_db_to_sigma2, ChannelModel};
use crate::error::{invalid, PolarError, Result};
use crate::polar::{log2_exact, CodeSpec};

/// Quantity stored in a [`ReliabilityProfile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Metric {
    MutualInformation,
    Bhattacharyya,
    BitErrorRate,
    MeanLlr,
}

impl Metric {
    /// Whether larger values mean a more reliable channel.
    pub fn higher_is_better(self) -> bool {
        matches!(self, Metric::MutualInformation | Metric::MeanLlr)
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::MutualInformation => "mutual-information",
            Metric::Bhattacharyya => "bhattacharyya",
            Metric::BitErrorRate => "ber",
            Metric::MeanLlr => "mean-llr",
        }
    }

    fn check(self, v: f64) -> bool {
        match self {
            Metric::MutualInformation | Metric::Bhattacharyya => (0.0..=1.0).contains(&v),
            Metric::BitErrorRate => (0.0..=1.0).contains(&v),
            Metric::MeanLlr => v >= 0.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mutual-information" => Ok(Metric::MutualInformation),
            "bhattacharyya" => Ok(Metric::Bhattacharyya),
            "ber" => Ok(Metric::BitErrorRate),
            "mean-llr" => Ok(Metric::MeanLlr),
            _ => invalid(format!("unknown metric {s:?}")),
        }
    }
}

/// Channel a profile was designed for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DesignParam {
    Erasure(f64),
    Crossover(f64),
    NoiseVariance(f64),
    /// `E_b/N_0` in dB together with the rate used for the conversion.
    EbN0Db {
        db: f64,
        rate: f64,
    },
}

impl DesignParam {
    pub fn sigma2(&self) -> Option<f64> {
        match *self {
            DesignParam::NoiseVariance(s) => Some(s),
            DesignParam::EbN0Db { db, rate } => ebn0_db_to_sigma2(db, rate).ok(),
            _ => None,
        }
    }
}

impl fmt::Display for DesignParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DesignParam::Erasure(e) => write!(f, "bec:{e}"),
            DesignParam::Crossover(p) => write!(f, "bsc:{p}"),
            DesignParam::NoiseVariance(s) => write!(f, "sigma2:{s}"),
            DesignParam::EbN0Db { db, rate } => write!(f, "ebn0:{db}dB@{rate}"),
        }
    }
}

impl FromStr for DesignParam {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || PolarError::InvalidArgument(format!("bad design parameter {s:?}"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let num = |v: &str| v.parse::<f64>().map_err(|_| bad());
        match kind {
            "bec" => Ok(DesignParam::Erasure(num(value)?)),
            "bsc" => Ok(DesignParam::Crossover(num(value)?)),
            "sigma2" => Ok(DesignParam::NoiseVariance(num(value)?)),
            "ebn0" => {
                let (db, rate) = value.split_once("dB@").ok_or_else(bad)?;
                Ok(DesignParam::EbN0Db {
                    db: num(db)?,
                    rate: num(rate)?,
                })
            }
            _ => Err(bad()),
        }
    }
}

/// Per-bit-channel reliability values with their metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ReliabilityProfile {
    values: Vec<f64>,
    metric: Metric,
    design: DesignParam,
    /// 95% Wilson intervals for Monte-Carlo estimates.
    intervals: Option<Vec<(f64, f64)>>,
}

impl ReliabilityProfile {
    pub fn new(values: Vec<f64>, metric: Metric, design: DesignParam) -> Result<Self> {
        log2_exact(values.len())?;
        if let Some(v) = values.iter().find(|&&v| !metric.check(v)) {
            return invalid(format!("{v} is not a valid {metric} value"));
        }
        Ok(ReliabilityProfile {
            values,
            metric,
            design,
            intervals: None,
        })
    }

    pub(crate) fn with_intervals(mut self, ci: Vec<(f64, f64)>) -> Self {
        self.intervals = Some(ci);
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn design(&self) -> DesignParam {
        self.design
    }

    pub fn intervals(&self) -> Option<&[(f64, f64)]> {
        self.intervals.as_deref()
    }

    /// Indices from most to least reliable. Among equal values the higher
    /// index counts as more reliable, so that [`select_frozen`] freezes the
    /// lower index first.
    pub fn reliability_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        let v = &self.values;
        let better = self.metric.higher_is_better();
        idx.sort_by(|&a, &b| {
            let ord = v[a].total_cmp(&v[b]);
            let ord = if better { ord.reverse() } else { ord };
            ord.then(b.cmp(&a))
        });
        idx
    }
}

/// The `N - k` least reliable indices (0-based, ascending).
pub fn select_frozen(profile: &ReliabilityProfile, k: usize) -> Result<Vec<usize>> {
    frozen_from_order(&profile.reliability_order(), k)
}

/// The last `N - k` entries of a most-reliable-first order (ascending).
pub fn frozen_from_order(order: &[usize], k: usize) -> Result<Vec<usize>> {
    if k > order.len() {
        return invalid(format!("k = {k} exceeds N = {}", order.len()));
    }
    let mut frozen = order[k..].to_vec();
    frozen.sort_unstable();
    Ok(frozen)
}

/// Construction recipe for a code.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// BEC recursion with the channel's Bhattacharyya parameter as erasure
    /// probability.
    BecApprox,
    Gade,
    MonteCarlo {
        rounds: u64,
        seed: u64,
    },
}

impl FromStr for Method {
    type Err = PolarError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bec" | "bhattacharyya" => Ok(Method::BecApprox),
            "gade" | "ga" => Ok(Method::Gade),
            "mc" | "monte-carlo" => Ok(Method::MonteCarlo {
                rounds: DEFAULT_ROUNDS,
                seed: 0,
            }),
            _ => invalid(format!("unknown construction method {s:?} (bec|gade|mc)")),
        }
    }
}

/// Profile for an AWGN design point, or for a BEC/BSC design parameter.
pub fn design_profile(n: usize, method: Method, design: DesignParam) -> Result<ReliabilityProfile> {
    let channel = match design {
        DesignParam::Erasure(e) => ChannelModel::bec(e)?,
        DesignParam::Crossover(p) => ChannelModel::bsc(p)?,
        _ => ChannelModel::awgn_bpsk(
            design
                .sigma2()
                .ok_or_else(|| PolarError::InvalidArgument(format!("invalid design {design}")))?,
        )?,
    };
    let mut profile = match (method, channel) {
        (Method::BecApprox, ChannelModel::Bec { epsilon }) => {
            bec_bhattacharyya_profile(n, epsilon)?
        }
        (Method::BecApprox, ChannelModel::Bsc { p }) => {
            bec_bhattacharyya_profile(n, 2.0 * (p * (1.0 - p)).sqrt())?
        }
        (Method::BecApprox, ChannelModel::AwgnBpsk { sigma2 }) => {
            bec_bhattacharyya_profile(n, (-1.0 / (2.0 * sigma2)).exp())?
        }
        (Method::Gade, ChannelModel::AwgnBpsk { sigma2 }) => gade_profile(n, sigma2)?,
        (Method::Gade, _) => {
            return Err(PolarError::Unsupported(
                "GA-DE needs an AWGN design point".into(),
            ))
        }
        (Method::MonteCarlo { rounds, seed }, ch) => monte_carlo_profile(n, &ch, rounds, seed)?,
        _ => unreachable!("channel built from design parameter"),
    };
    profile.design = design;
    Ok(profile)
}

/// `(N, k)` code designed at `E_b/N_0 = ebn0_db` with rate `k/N`.
pub fn construct_awgn_code(n: usize, k: usize, method: Method, ebn0_db: f64) -> Result<CodeSpec> {
    if k == 0 {
        return invalid("k must be positive for an AWGN design rate");
    }
    let design = DesignParam::EbN0Db {
        db: ebn0_db,
        rate: k as f64 / n as f64,
    };
    let profile = design_profile(n, method, design)?;
    CodeSpec::new(n, select_frozen(&profile, k)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example_frozen_set() {
        let p = bec_capacity_profile(8, 0.5).unwrap();
        assert_eq!(select_frozen(&p, 4).unwrap(), vec![0, 1, 2, 4]);
        let z = bec_bhattacharyya_profile(8, 0.5).unwrap();
        assert_eq!(select_frozen(&z, 4).unwrap(), vec![0, 1, 2, 4]);
        assert!(select_frozen(&p, 8).unwrap().is_empty());
        assert_eq!(select_frozen(&p, 0).unwrap(), (0..8).collect::<Vec<_>>());
        assert!(select_frozen(&p, 9).is_err());
    }

    #[test]
    fn ties_freeze_lower_index() {
        let p = ReliabilityProfile::new(
            vec![0.5; 4],
            Metric::Bhattacharyya,
            DesignParam::Erasure(0.5),
        )
        .unwrap();
        assert_eq!(select_frozen(&p, 2).unwrap(), vec![0, 1]);
        let p = ReliabilityProfile::new(
            vec![1.0, 1.0, 3.0, 1.0],
            Metric::MeanLlr,
            DesignParam::NoiseVariance(1.0),
        )
        .unwrap();
        assert_eq!(select_frozen(&p, 2).unwrap(), vec![0, 1]);
    }

    #[test]
    fn value_ranges_enforced() {
        let d = DesignParam::Erasure(0.1);
        assert!(ReliabilityProfile::new(vec![1.5, 0.1], Metric::BitErrorRate, d).is_err());
        assert!(ReliabilityProfile::new(vec![-1.0, 0.1], Metric::MeanLlr, d).is_err());
        assert!(ReliabilityProfile::new(vec![0.1, 0.1, 0.1], Metric::Bhattacharyya, d).is_err());
    }

    #[test]
    fn design_param_round_trip() {
        for d in [
            DesignParam::Erasure(0.25),
            DesignParam::Crossover(0.11),
            DesignParam::NoiseVariance(0.7),
            DesignParam::EbN0Db { db: 2.0, rate: 0.5 },
        ] {
            assert_eq!(d.to_string().parse::<DesignParam>().unwrap(), d);
        }
        assert!("ebn0:2".parse::<DesignParam>().is_err());
    }

    #[test]
    fn awgn_code_construction() {
        let spec = construct_awgn_code(1024, 512, Method::Gade, 2.0).unwrap();
        assert_eq!(spec.k(), 512);
        let bec = construct_awgn_code(64, 32, Method::BecApprox, 1.0).unwrap();
        assert_eq!(bec.k(), 32);
        assert!(construct_awgn_code(64, 0, Method::Gade, 1.0).is_err());
        assert!(design_profile(8, Method::Gade, DesignParam::Erasure(0.1)).is_err());
    }

    proptest! {
        #[test]
        fn selection_is_permutation_equivariant(
            vals in proptest::collection::vec(0.0f64..1.0, 16),
            perm_seed in any::<u64>(),
            k in 0usize..=16,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let mut perm: Vec<usize> = (0..16).collect();
            perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
            let d = DesignParam::Erasure(0.5);
            let p = ReliabilityProfile::new(vals.clone(), Metric::Bhattacharyya, d).unwrap();
            // permuted[perm[i]] = vals[i]
            let mut permuted = vec![0.0; 16];
            for i in 0..16 {
                permuted[perm[i]] = vals[i];
            }
            let q = ReliabilityProfile::new(permuted, Metric::Bhattacharyya, d).unwrap();
            let a = select_frozen(&p, k).unwrap();
            let b = select_frozen(&q, k).unwrap();
            let mut mapped: Vec<usize> = a.iter().map(|&i| perm[i]).collect();
            mapped.sort_unstable();
            // continuous draws are distinct, so the tie-break never applies
            prop_assert_eq!(mapped, b);
        }
    }
}
