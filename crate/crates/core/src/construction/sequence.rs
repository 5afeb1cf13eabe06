//! Reliability-sequence files.
//!
//! ```text
//! polar-seq v1 N=8 metric=mutual-information design=bec:0.5
//! 8
//! 7
//! ...
//! ```
//!
//! The header is followed by every index `1..=N` exactly once, most reliable
//! first. Blank lines and `#` comments are ignored.

use std::fmt;
use std::str::FromStr;

use crate::error::{PolarError, Result};
use crate::polar::log2_exact;

use super::{frozen_from_order, ReliabilityProfile};

const MAGIC: &str = "polar-seq";
const VERSION: &str = "v1";

/// A full reliability order with its header metadata.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceFile {
    pub n: usize,
    pub metric: String,
    pub design: String,
    /// 0-based indices, most reliable first.
    pub order: Vec<usize>,
}

fn parse_err<T>(line: usize, msg: impl Into<String>) -> Result<T> {
    Err(PolarError::Parse {
        line,
        msg: msg.into(),
    })
}

impl SequenceFile {
    pub fn new(order: Vec<usize>, metric: &str, design: &str) -> Result<Self> {
        let seq = SequenceFile {
            n: order.len(),
            metric: metric.to_string(),
            design: design.to_string(),
            order,
        };
        seq.validate()?;
        Ok(seq)
    }

    pub fn from_profile(profile: &ReliabilityProfile) -> Self {
        SequenceFile {
            n: profile.len(),
            metric: profile.metric().to_string(),
            design: profile.design().to_string(),
            order: profile.reliability_order(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        log2_exact(self.n)?;
        for tok in [&self.metric, &self.design] {
            if tok.is_empty() || tok.chars().any(char::is_whitespace) {
                return Err(PolarError::InvalidArgument(format!(
                    "header token {tok:?} must be nonempty without whitespace"
                )));
            }
        }
        if self.order.len() != self.n {
            return Err(PolarError::LengthMismatch {
                expected: self.n,
                got: self.order.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &i in &self.order {
            if i >= self.n || std::mem::replace(&mut seen[i], true) {
                return Err(PolarError::InvalidArgument(format!(
                    "order is not a permutation: index {} repeated or out of range",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Frozen set (0-based, ascending) for `k` information bits.
    pub fn frozen(&self, k: usize) -> Result<Vec<usize>> {
        frozen_from_order(&self.order, k)
    }
}

impl fmt::Display for SequenceFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{MAGIC} {VERSION} N={} metric={} design={}",
            self.n, self.metric, self.design
        )?;
        for &i in &self.order {
            writeln!(f, "{}", i + 1)?;
        }
        Ok(())
    }
}

impl FromStr for SequenceFile {
    type Err = PolarError;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(no, l)| (no + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let Some((hline, header)) = lines.next() else {
            return parse_err(1, "empty sequence file");
        };
        let mut toks = header.split_whitespace();
        if toks.next() != Some(MAGIC) || toks.next() != Some(VERSION) {
            return parse_err(hline, format!("expected header `{MAGIC} {VERSION} ...`"));
        }
        let (mut n, mut metric, mut design) = (None, None, None);
        for tok in toks {
            match tok.split_once('=') {
                Some(("N", v)) => {
                    n = Some(
                        v.parse::<usize>()
                            .or_else(|_| parse_err(hline, format!("bad N {v:?}")))?,
                    )
                }
                Some(("metric", v)) => metric = Some(v.to_string()),
                Some(("design", v)) => design = Some(v.to_string()),
                _ => return parse_err(hline, format!("unexpected header field {tok:?}")),
            }
        }
        let (Some(n), Some(metric), Some(design)) = (n, metric, design) else {
            return parse_err(hline, "header needs N, metric and design");
        };
        let mut order = Vec::with_capacity(n);
        for (no, l) in lines {
            match l.parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => order.push(i - 1),
                _ => return parse_err(no, format!("expected an index in 1..={n}, got {l:?}")),
            }
        }
        let seq = SequenceFile {
            n,
            metric,
            design,
            order,
        };
        seq.validate()?;
        Ok(seq)
    }
}

pub fn write_sequence(seq: &SequenceFile) -> Result<String> {
    seq.validate()?;
    Ok(seq.to_string())
}

pub fn read_sequence(text: &str) -> Result<SequenceFile> {
    text.parse()
}
