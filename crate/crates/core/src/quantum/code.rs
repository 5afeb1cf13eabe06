use std::fmt;
use std::str::FromStr;

use crate::construction::{design_profile, DesignParam, Method, ReliabilityProfile};
use crate::error::{invalid, PolarError, Result};
use crate::polar::log2_exact;
use crate::polar::spec::{parse_index_list, parse_kv_lines};

use super::pauli::check_depolarizing;

/// Assignment of the `N` qubit positions to the four roles of a quantum
/// polar code. All index lists are 0-based and ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantumCodeSpec {
    n: usize,
    info: Vec<usize>,
    frozen_hadamard: Vec<usize>,
    frozen_computational: Vec<usize>,
    ebits: Vec<usize>,
}

impl QuantumCodeSpec {
    /// `info` carries logical qubits, `frozen_hadamard` and
    /// `frozen_computational` carry known states in the Hadamard and
    /// computational basis, `ebits` carry halves of pre-shared Bell pairs.
    pub fn new(
        n: usize,
        mut info: Vec<usize>,
        mut frozen_hadamard: Vec<usize>,
        mut frozen_computational: Vec<usize>,
        mut ebits: Vec<usize>,
    ) -> Result<Self> {
        log2_exact(n)?;
        let mut seen = vec![false; n];
        for set in [
            &mut info,
            &mut frozen_hadamard,
            &mut frozen_computational,
            &mut ebits,
        ] {
            set.sort_unstable();
            for &i in set.iter() {
                if i >= n {
                    return invalid(format!("index {} outside 1..={n}", i + 1));
                }
                if std::mem::replace(&mut seen[i], true) {
                    return invalid(format!("index {} assigned twice", i + 1));
                }
            }
        }
        if let Some(miss) = seen.iter().position(|&s| !s) {
            return invalid(format!("index {} not assigned", miss + 1));
        }
        Ok(QuantumCodeSpec {
            n,
            info,
            frozen_hadamard,
            frozen_computational,
            ebits,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Logical qubits.
    pub fn k(&self) -> usize {
        self.info.len()
    }

    /// Ebits consumed.
    pub fn c(&self) -> usize {
        self.ebits.len()
    }

    pub fn info(&self) -> &[usize] {
        &self.info
    }

    pub fn frozen_hadamard(&self) -> &[usize] {
        &self.frozen_hadamard
    }

    pub fn frozen_computational(&self) -> &[usize] {
        &self.frozen_computational
    }

    pub fn ebits(&self) -> &[usize] {
        &self.ebits
    }

    /// Positions frozen for the bit-flip decoder.
    pub fn bit_frozen(&self) -> Vec<usize> {
        merge(&self.frozen_computational, &self.ebits)
    }

    /// Positions frozen for the phase-flip decoder.
    pub fn phase_frozen(&self) -> Vec<usize> {
        merge(&self.frozen_hadamard, &self.ebits)
    }
}

fn merge(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

fn write_list(f: &mut fmt::Formatter<'_>, key: &str, v: &[usize]) -> fmt::Result {
    let s: Vec<String> = v.iter().map(|i| (i + 1).to_string()).collect();
    writeln!(f, "{key}={}", s.join(","))
}

impl fmt::Display for QuantumCodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "quantum-polar-code v1")?;
        writeln!(f, "N={}", self.n)?;
        write_list(f, "info", &self.info)?;
        write_list(f, "frozen-hadamard", &self.frozen_hadamard)?;
        write_list(f, "frozen-computational", &self.frozen_computational)?;
        write_list(f, "ebits", &self.ebits)
    }
}

impl FromStr for QuantumCodeSpec {
    type Err = PolarError;

    fn from_str(text: &str) -> Result<Self> {
        let mut n = None;
        let mut lists: [Option<Vec<usize>>; 4] = Default::default();
        let mut header = false;
        for (line, key, value) in parse_kv_lines(text) {
            let slot = match key {
                "quantum-polar-code v1" if !header && value.is_empty() => {
                    header = true;
                    continue;
                }
                "N" => {
                    let v = value.parse::<usize>().map_err(|_| PolarError::Parse {
                        line,
                        msg: format!("bad length {value:?}"),
                    })?;
                    n = Some(v);
                    continue;
                }
                "info" => 0,
                "frozen-hadamard" => 1,
                "frozen-computational" => 2,
                "ebits" => 3,
                _ => {
                    return Err(PolarError::Parse {
                        line,
                        msg: format!("unexpected entry {key:?}"),
                    })
                }
            };
            if !header {
                return Err(PolarError::Parse {
                    line,
                    msg: "missing `quantum-polar-code v1` header".into(),
                });
            }
            lists[slot] = Some(parse_index_list(value, line)?);
        }
        let Some(n) = n else {
            return invalid("missing N");
        };
        let [a, b, c, d] = lists.map(Option::unwrap_or_default);
        QuantumCodeSpec::new(n, a, b, c, d)
    }
}

/// How reliable positions are picked on each side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ClassifyRule {
    /// The `k` most reliable positions of each side.
    Rank { k: usize },
    /// Positions whose value is at least as good as the threshold, in the
    /// profile's own metric.
    Threshold(f64),
}

/// Bit-flip reliability profile for depolarizing probability `p`, computed
/// for a BSC with crossover `2p/3`.
pub fn bit_flip_profile(n: usize, p: f64, method: Method) -> Result<ReliabilityProfile> {
    check_depolarizing(p)?;
    design_profile(n, method, DesignParam::Crossover(2.0 * p / 3.0))
}

/// Phase-flip profile: the bit-flip profile read back to front.
pub fn phase_flip_profile(bit: &ReliabilityProfile) -> Result<ReliabilityProfile> {
    let mut v = bit.values().to_vec();
    v.reverse();
    ReliabilityProfile::new(v, bit.metric(), bit.design())
}

/// Splits `[0, N)` into the four position classes.
///
/// A position is reliable for bit flips when picked by `rule` on the
/// bit-flip profile, and position `i` is reliable for phase flips exactly
/// when `N - 1 - i` is reliable for bit flips. Good on both sides gives an
/// information qubit, bit-only a Hadamard-frozen qubit, phase-only a
/// computational-frozen qubit and neither an ebit.
pub fn classify_channels(
    n: usize,
    p: f64,
    method: Method,
    rule: ClassifyRule,
) -> Result<QuantumCodeSpec> {
    let bit = bit_flip_profile(n, p, method)?;
    classify_profile(&bit, rule)
}

pub fn classify_profile(bit: &ReliabilityProfile, rule: ClassifyRule) -> Result<QuantumCodeSpec> {
    let n = bit.len();
    let mut good_bit = vec![false; n];
    match rule {
        ClassifyRule::Rank { k } => {
            if k > n {
                return invalid(format!("k = {k} exceeds N = {n}"));
            }
            for &i in &bit.reliability_order()[..k] {
                good_bit[i] = true;
            }
        }
        ClassifyRule::Threshold(t) => {
            if t.is_nan() {
                return invalid("threshold is NaN");
            }
            let better = bit.metric().higher_is_better();
            for (g, &v) in good_bit.iter_mut().zip(bit.values()) {
                *g = if better { v >= t } else { v <= t };
            }
        }
    }
    let (mut info, mut had, mut comp, mut ebits) = (vec![], vec![], vec![], vec![]);
    for i in 0..n {
        match (good_bit[i], good_bit[n - 1 - i]) {
            (true, true) => info.push(i),
            (true, false) => had.push(i),
            (false, true) => comp.push(i),
            (false, false) => ebits.push(i),
        }
    }
    QuantumCodeSpec::new(n, info, had, comp, ebits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Metric;
    use crate::polar::generator_matrix;
    use rand::{Rng, SeedableRng};

    fn example() -> QuantumCodeSpec {
        QuantumCodeSpec::new(8, vec![], vec![3, 5, 6, 7], vec![0, 1, 2, 4], vec![]).unwrap()
    }

    #[test]
    fn partition_is_enforced() {
        assert!(QuantumCodeSpec::new(4, vec![0], vec![1], vec![2], vec![]).is_err());
        assert!(QuantumCodeSpec::new(4, vec![0, 1], vec![1], vec![2], vec![3]).is_err());
        assert!(QuantumCodeSpec::new(4, vec![0, 4], vec![1], vec![2], vec![3]).is_err());
        let q = example();
        assert_eq!(q.bit_frozen(), vec![0, 1, 2, 4]);
        assert_eq!(q.phase_frozen(), vec![3, 5, 6, 7]);
        assert_eq!((q.k(), q.c()), (0, 0));
    }

    #[test]
    fn text_round_trip() {
        let q = QuantumCodeSpec::new(8, vec![5, 7], vec![3, 6], vec![1, 2], vec![0, 4]).unwrap();
        let text = q.to_string();
        assert_eq!(
            text,
            "quantum-polar-code v1\nN=8\ninfo=6,8\nfrozen-hadamard=4,7\nfrozen-computational=2,3\nebits=1,5\n"
        );
        assert_eq!(text.parse::<QuantumCodeSpec>().unwrap(), q);
        let e = example().to_string();
        assert!(e.contains("info=\n"));
        assert_eq!(e.parse::<QuantumCodeSpec>().unwrap(), example());
        assert!("N=8\ninfo=1\n".parse::<QuantumCodeSpec>().is_err());
        assert!("quantum-polar-code v1\nN=4\ninfo=1,2,3\n"
            .parse::<QuantumCodeSpec>()
            .is_err());
    }

    #[test]
    fn perfect_channel_keeps_everything() {
        for method in [
            Method::BecApprox,
            Method::MonteCarlo {
                rounds: 100,
                seed: 1,
            },
        ] {
            let q = classify_channels(16, 0.0, method, ClassifyRule::Threshold(0.0)).unwrap();
            assert_eq!(q.k(), 16);
            assert_eq!(q.c(), 0);
        }
        assert!(
            classify_channels(16, 0.8, Method::BecApprox, ClassifyRule::Rank { k: 4 }).is_err()
        );
    }

    /// Exact error probability of genie-aided MAP estimation of each `u_i`
    /// for `x = u M` over a BSC, decoding in the given order.
    fn genie_error_probs(m: &[Vec<u8>], order: &[usize], q: f64) -> Vec<f64> {
        let n = m.len();
        let mut out = vec![0.0; n];
        for (step, &i) in order.iter().enumerate() {
            let known = &order[..step];
            // joint[(y, known bits)] -> [P(u_i = 0, ...), P(u_i = 1, ...)]
            let mut joint = std::collections::HashMap::<(u32, u32), [f64; 2]>::new();
            for u in 0u32..1 << n {
                let mut x = 0u32;
                for r in 0..n {
                    if u >> r & 1 == 1 {
                        for c in 0..n {
                            x ^= u32::from(m[r][c]) << c;
                        }
                    }
                }
                let kb = known
                    .iter()
                    .enumerate()
                    .fold(0, |a, (t, &j)| a | (u >> j & 1) << t);
                for e in 0u32..1 << n {
                    let w = e.count_ones() as i32;
                    let pr = q.powi(w) * (1.0 - q).powi(n as i32 - w) / (1u32 << n) as f64;
                    joint.entry((x ^ e, kb)).or_default()[(u >> i & 1) as usize] += pr;
                }
            }
            out[i] = joint.values().map(|p| p[0].min(p[1])).sum();
        }
        out
    }

    #[test]
    fn phase_side_mirrors_bit_side() {
        let g: Vec<Vec<u8>> = generator_matrix(4)
            .unwrap()
            .iter()
            .map(|r| r.to_vec())
            .collect();
        let gt: Vec<Vec<u8>> = (0..4).map(|r| (0..4).map(|c| g[c][r]).collect()).collect();
        let q = 0.1;
        let bit = genie_error_probs(&g, &[0, 1, 2, 3], q);
        let phase = genie_error_probs(&gt, &[3, 2, 1, 0], q);
        for i in 0..4 {
            assert!((phase[3 - i] - bit[i]).abs() < 1e-15, "{bit:?} {phase:?}");
        }
        let prof = bit_flip_profile(
            4,
            0.15,
            Method::MonteCarlo {
                rounds: 1000,
                seed: 5,
            },
        )
        .unwrap();
        let mirrored = phase_flip_profile(&prof).unwrap();
        let a = prof.values();
        let b = mirrored.values();
        assert_eq!(b, &[a[3], a[2], a[1], a[0]]);
        assert_eq!(mirrored.metric(), Metric::BitErrorRate);
    }

    #[test]
    fn partition_identity_on_random_draws() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let n = 1 << rng.gen_range(1..8);
            let p = rng.gen_range(0.0..0.75);
            let rule = if rng.gen() {
                ClassifyRule::Rank {
                    k: rng.gen_range(0..=n),
                }
            } else {
                ClassifyRule::Threshold(rng.gen_range(0.0..1.0))
            };
            let q = classify_channels(n, p, Method::BecApprox, rule).unwrap();
            let total = q.k() + q.c() + q.frozen_hadamard().len() + q.frozen_computational().len();
            assert_eq!(total, n);
            assert_eq!(q.frozen_hadamard().len(), q.frozen_computational().len());
            for &i in q.frozen_hadamard() {
                assert!(q.frozen_computational().contains(&(n - 1 - i)));
            }
        }
    }

    #[test]
    fn ebit_share_grows_with_noise() {
        let mut prev = 0;
        for p in [0.01, 0.02, 0.04, 0.07, 0.1] {
            let q =
                classify_channels(64, p, Method::BecApprox, ClassifyRule::Threshold(0.1)).unwrap();
            assert!(q.c() >= prev, "c dropped at p = {p}");
            prev = q.c();
        }
        assert!(prev > 0);
    }
}
