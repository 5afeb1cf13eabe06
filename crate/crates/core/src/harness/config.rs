//! Sweep configuration, read from TOML.
//!
//! ```toml
//! seed = 1
//! workers = 4
//!
//! [code]
//! n = 1024
//! k = 512
//! construction = "gade"   # gade | bec | mc | file | sequence
//! design = "ebn0:2"       # design point; the rate defaults to k/N
//! crc = "0xE21"           # optional outer CRC inside the k positions
//!
//! [channel]
//! kind = "awgn-qpsk"      # awgn-bpsk | awgn-qpsk | bec | bsc
//! points = [1.0, 1.5, 2.0]
//!
//! [decoder]
//! kind = "scl"            # sc | ssc | scl | ca-scl | scs | bp | scan | ml
//! list = 8
//! mode = "minsum"
//!
//! [stop]
//! min_block_errors = 100
//! max_blocks = 10000000
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channels::{ebn0_db_to_sigma2, ChannelModel};
use crate::construction::{
    design_profile, read_sequence, select_frozen, DesignParam, Method, DEFAULT_ROUNDS,
};
use crate::decoders::{DecoderKind, Mode};
use crate::error::{invalid, PolarError, Result};
use crate::polar::{CodeSpec, CrcPoly};

use super::engine::StopRule;

/// Environment variable overriding [`SimConfig::workers`].
pub const ENV_WORKERS: &str = "POLARLAB_WORKERS";
/// Environment variable overriding [`SimConfig::seed`].
pub const ENV_SEED: &str = "POLARLAB_SEED";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    /// Record wall-clock seconds per point. Off by default so that output
    /// files are reproducible byte for byte.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub precision: Precision,
    pub code: CodeConfig,
    pub channel: ChannelConfig,
    pub decoder: DecoderConfig,
    #[serde(default)]
    pub stop: StopConfig,
}

fn default_workers() -> usize {
    1
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    F64,
    F32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Gade,
    Bec,
    Mc,
    /// A code file in the `polar-code v1` format.
    File,
    /// A `polar-seq v1` reliability sequence.
    Sequence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub n: Option<usize>,
    /// Information positions, CRC bits included.
    pub k: Option<usize>,
    pub construction: Construction,
    /// `ebn0:<dB>`, `ebn0:<dB>dB@<rate>`, `sigma2:<v>`, `bec:<eps>` or
    /// `bsc:<p>`.
    pub design: Option<String>,
    pub path: Option<PathBuf>,
    pub crc: Option<String>,
    pub mc_rounds: Option<u64>,
    pub mc_seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    AwgnBpsk,
    AwgnQpsk,
    Bec,
    Bsc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    /// `E_b/N_0` in dB for AWGN, erasure or crossover probability otherwise.
    pub points: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecoderName {
    Sc,
    Ssc,
    Scl,
    CaScl,
    Scs,
    Bp,
    Scan,
    Ml,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecoderConfig {
    pub kind: DecoderName,
    #[serde(default = "default_list")]
    pub list: usize,
    #[serde(default = "default_depth")]
    pub depth: usize,
    /// Defaults to 30 for BP and 1 for SCAN.
    pub iterations: Option<usize>,
    #[serde(default = "default_mode")]
    pub mode: String,
}

fn default_list() -> usize {
    8
}

fn default_depth() -> usize {
    1024
}

fn default_mode() -> String {
    "minsum".into()
}

pub const DEFAULT_BP_ITERATIONS: usize = 30;
pub const DEFAULT_SCAN_ITERATIONS: usize = 1;

impl DecoderConfig {
    pub fn kind(&self) -> Result<DecoderKind> {
        let mode = Mode::from_str(&self.mode)?;
        Ok(match self.kind {
            DecoderName::Sc => DecoderKind::Sc { mode },
            DecoderName::Ssc => DecoderKind::Ssc { mode },
            DecoderName::Scl => DecoderKind::Scl {
                list: self.list,
                mode,
            },
            DecoderName::CaScl => DecoderKind::CaScl {
                list: self.list,
                mode,
            },
            DecoderName::Scs => DecoderKind::Scs {
                depth: self.depth,
                mode,
            },
            DecoderName::Bp => DecoderKind::Bp {
                iterations: self.iterations.unwrap_or(DEFAULT_BP_ITERATIONS),
                mode,
            },
            DecoderName::Scan => DecoderKind::Scan {
                iterations: self.iterations.unwrap_or(DEFAULT_SCAN_ITERATIONS),
                mode,
            },
            DecoderName::Ml => DecoderKind::Ml,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StopConfig {
    pub min_block_errors: u64,
    pub max_blocks: u64,
}

impl Default for StopConfig {
    fn default() -> Self {
        StopConfig {
            min_block_errors: StopRule::DEFAULT.min_block_errors,
            max_blocks: StopRule::DEFAULT.max_blocks,
        }
    }
}

impl From<StopConfig> for StopRule {
    fn from(s: StopConfig) -> Self {
        StopRule {
            min_block_errors: s.min_block_errors,
            max_blocks: s.max_blocks,
        }
    }
}

impl FromStr for SimConfig {
    type Err = PolarError;

    fn from_str(text: &str) -> Result<Self> {
        let cfg: SimConfig = toml::from_str(text).map_err(|e| PolarError::Parse {
            line: e
                .span()
                .map(|s| text[..s.start].lines().count().max(1))
                .unwrap_or(0),
            msg: e.message().to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SimConfig {
    /// Reads a config file. Relative code paths are resolved against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: SimConfig = text.parse()?;
        if let (Some(p), Some(dir)) = (cfg.code.path.as_mut(), path.parent()) {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always serializable")
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return invalid("workers must be positive");
        }
        if self.channel.points.is_empty() {
            return invalid("the channel grid is empty");
        }
        if self.channel.points.iter().any(|v| !v.is_finite()) {
            return invalid("channel grid values must be finite");
        }
        StopRule::from(self.stop).validate()?;
        self.decoder.kind()?;
        Ok(())
    }

    /// Applies the worker-count and seed overrides from `lookup`, which is
    /// normally `std::env::var`.
    pub fn apply_overrides<F>(&mut self, lookup: F) -> Result<()>
    where
        F: Fn(&str) -> Option<String>,
    {
        if let Some(w) = lookup(ENV_WORKERS) {
            self.workers = w
                .trim()
                .parse()
                .map_err(|_| PolarError::InvalidArgument(format!("{ENV_WORKERS}={w:?}")))?;
        }
        if let Some(s) = lookup(ENV_SEED) {
            self.seed = s
                .trim()
                .parse()
                .map_err(|_| PolarError::InvalidArgument(format!("{ENV_SEED}={s:?}")))?;
        }
        self.validate()
    }

    pub fn stop_rule(&self) -> StopRule {
        self.stop.into()
    }

    /// Channel at grid point `value` for a code of rate `rate`.
    pub fn channel_at(&self, value: f64, rate: f64) -> Result<ChannelModel> {
        match self.channel.kind {
            ChannelKind::AwgnBpsk => ChannelModel::awgn_bpsk(ebn0_db_to_sigma2(value, rate)?),
            ChannelKind::AwgnQpsk => ChannelModel::awgn_qpsk(ebn0_db_to_sigma2(value, rate)?),
            ChannelKind::Bec => ChannelModel::bec(value),
            ChannelKind::Bsc => ChannelModel::bsc(value),
        }
    }

    /// Builds the code described by the `[code]` table.
    pub fn build_code(&self) -> Result<CodeSpec> {
        self.code.build()
    }
}

fn parse_design(s: &str, k: usize, n: usize) -> Result<DesignParam> {
    match s.strip_prefix("ebn0:") {
        Some(v) if !v.contains("dB@") => {
            if k == 0 {
                return invalid("an ebn0 design needs k > 0");
            }
            let db = v
                .trim_end_matches("dB")
                .parse::<f64>()
                .map_err(|_| PolarError::InvalidArgument(format!("bad design parameter {s:?}")))?;
            Ok(DesignParam::EbN0Db {
                db,
                rate: k as f64 / n as f64,
            })
        }
        _ => s.parse(),
    }
}

impl CodeConfig {
    fn require<T: Copy>(v: Option<T>, what: &str) -> Result<T> {
        v.ok_or_else(|| PolarError::InvalidArgument(format!("[code] needs `{what}`")))
    }

    pub fn build(&self) -> Result<CodeSpec> {
        let spec = match self.construction {
            Construction::File => {
                let path = self.path.as_ref().ok_or_else(|| {
                    PolarError::InvalidArgument(
                        "[code] construction = \"file\" needs `path`".into(),
                    )
                })?;
                let spec: CodeSpec = std::fs::read_to_string(path)?.parse()?;
                if self.n.is_some_and(|n| n != spec.n()) || self.k.is_some_and(|k| k != spec.k()) {
                    return invalid("code file disagrees with the n/k given in [code]");
                }
                return match &self.crc {
                    Some(c) if spec.crc().is_none() => spec.with_crc(c.parse::<CrcPoly>()?),
                    _ => Ok(spec),
                };
            }
            Construction::Sequence => {
                let path = self.path.as_ref().ok_or_else(|| {
                    PolarError::InvalidArgument(
                        "[code] construction = \"sequence\" needs `path`".into(),
                    )
                })?;
                let seq = read_sequence(&std::fs::read_to_string(path)?)?;
                let k = Self::require(self.k, "k")?;
                if self.n.is_some_and(|n| n != seq.n) {
                    return invalid("sequence length disagrees with n");
                }
                CodeSpec::new(seq.n, seq.frozen(k)?)?
            }
            c => {
                let n = Self::require(self.n, "n")?;
                let k = Self::require(self.k, "k")?;
                let design = self
                    .design
                    .as_deref()
                    .ok_or_else(|| PolarError::InvalidArgument("[code] needs `design`".into()))?;
                let design = parse_design(design, k, n)?;
                let method = match c {
                    Construction::Gade => Method::Gade,
                    Construction::Bec => Method::BecApprox,
                    _ => Method::MonteCarlo {
                        rounds: self.mc_rounds.unwrap_or(DEFAULT_ROUNDS),
                        seed: self.mc_seed.unwrap_or(0),
                    },
                };
                let profile = design_profile(n, method, design)?;
                CodeSpec::new(n, select_frozen(&profile, k)?)?
            }
        };
        match &self.crc {
            Some(c) => spec.with_crc(c.parse::<CrcPoly>()?),
            None => Ok(spec),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
seed = 7
workers = 2

[code]
n = 64
k = 32
construction = "gade"
design = "ebn0:2"
crc = "0x3"

[channel]
kind = "awgn-qpsk"
points = [1.0, 2.5]

[decoder]
kind = "ca-scl"
list = 4

[stop]
min_block_errors = 10
max_blocks = 1000
"#;

    #[test]
    fn parses_sample() {
        let cfg: SimConfig = SAMPLE.parse().unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.workers, 2);
        assert!(!cfg.timing);
        assert_eq!(cfg.precision, Precision::F64);
        assert_eq!(
            cfg.decoder.kind().unwrap(),
            DecoderKind::CaScl {
                list: 4,
                mode: Mode::MinSum
            }
        );
        let code = cfg.build_code().unwrap();
        assert_eq!((code.n(), code.k(), code.payload_len()), (64, 32, 31));
        let again: SimConfig = cfg.to_toml().parse().unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn matches_direct_construction() {
        let cfg: SimConfig = SAMPLE.parse().unwrap();
        let direct = crate::construction::construct_awgn_code(64, 32, Method::Gade, 2.0).unwrap();
        assert_eq!(cfg.build_code().unwrap().frozen(), direct.frozen());
    }

    #[test]
    fn rejects_bad_configs() {
        let swap = |from: &str, to: &str| SAMPLE.replace(from, to).parse::<SimConfig>();
        assert!(swap("points = [1.0, 2.5]", "points = []").is_err());
        assert!(swap("min_block_errors = 10", "min_block_errors = 0").is_err());
        assert!(swap("workers = 2", "workers = 0").is_err());
        assert!(swap("list = 4", "list = 4\nbogus = 1").is_err());
        assert!(swap("kind = \"ca-scl\"", "kind = \"turbo\"").is_err());
        let err = swap("seed = 7", "seed = \"x\"").unwrap_err();
        assert!(matches!(err, PolarError::Parse { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn overrides_apply() {
        let mut cfg: SimConfig = SAMPLE.parse().unwrap();
        cfg.apply_overrides(|k| match k {
            ENV_WORKERS => Some("8".into()),
            ENV_SEED => Some("99".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!((cfg.workers, cfg.seed), (8, 99));
        assert!(cfg
            .apply_overrides(|k| (k == ENV_WORKERS).then(|| "zero".into()))
            .is_err());
    }

    #[test]
    fn code_from_files() {
        let dir = tempfile::tempdir().unwrap();
        let spec = CodeSpec::new(8, vec![0, 1, 2, 4]).unwrap();
        std::fs::write(dir.path().join("c.txt"), spec.to_string()).unwrap();
        let text = SAMPLE
            .replace(
                "construction = \"gade\"",
                "construction = \"file\"\npath = \"c.txt\"",
            )
            .replace("n = 64\nk = 32\n", "")
            .replace("crc = \"0x3\"\n", "")
            .replace("design = \"ebn0:2\"\n", "");
        let cfg_path = dir.path().join("sim.toml");
        std::fs::write(&cfg_path, text).unwrap();
        let cfg = SimConfig::load(&cfg_path).unwrap();
        assert_eq!(cfg.build_code().unwrap(), spec);
    }
}
