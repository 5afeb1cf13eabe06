use crate::error::{invalid, Result};
use crate::polar::log2_exact;

use super::{DesignParam, Metric, ReliabilityProfile};

/// One polarization step per level: value `v` of channel `i` spawns the
/// worse channel `2i` and the better channel `2i + 1`.
fn polarize(
    n: usize,
    root: f64,
    worse: impl Fn(f64) -> f64,
    better: impl Fn(f64) -> f64,
) -> Vec<f64> {
    let mut v = Vec::with_capacity(n);
    v.push(root);
    let mut next = Vec::with_capacity(n);
    while v.len() < n {
        next.clear();
        for &x in &v {
            next.push(worse(x));
            next.push(better(x));
        }
        std::mem::swap(&mut v, &mut next);
    }
    v
}

fn check(n: usize, epsilon: f64) -> Result<()> {
    log2_exact(n)?;
    if !(0.0..=1.0).contains(&epsilon) {
        return invalid(format!("erasure probability {epsilon} outside [0, 1]"));
    }
    Ok(())
}

/// Capacities `I(W_i)` of the synthetic channels of a BEC(`epsilon`).
pub fn bec_capacity_profile(n: usize, epsilon: f64) -> Result<ReliabilityProfile> {
    check(n, epsilon)?;
    let v = polarize(n, 1.0 - epsilon, |i| i * i, |i| 2.0 * i - i * i);
    ReliabilityProfile::new(v, Metric::MutualInformation, DesignParam::Erasure(epsilon))
}

/// Bhattacharyya parameters `Z(W_i)` of the synthetic channels of a
/// BEC(`epsilon`).
pub fn bec_bhattacharyya_profile(n: usize, epsilon: f64) -> Result<ReliabilityProfile> {
    check(n, epsilon)?;
    let v = polarize(n, epsilon, |z| 2.0 * z - z * z, |z| z * z);
    ReliabilityProfile::new(v, Metric::Bhattacharyya, DesignParam::Erasure(epsilon))
}
