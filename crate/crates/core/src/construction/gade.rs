//! Gaussian-approximation density evolution.
//!
//! The approximation of `phi` uses three regions:
//!
//! * `0 <= x < c`: `exp(0.0564 x^2 - 0.4856 x)`
//! * `c <= x < 10`: `exp(-0.4527 x^0.86 + 0.0218)`
//! * `x >= 10`: `sqrt(pi/x) exp(-x/4) (1 - 10/(7x))`, capped by the second
//!   region's expression so that `phi` stays continuous and decreasing.
//!
//! with `c = 0.867861`. Everything is evaluated as `ln phi` so that means in
//! the thousands do not underflow.

use crate::error::{invalid, Result};
use crate::polar::log2_exact;
use crate::stats::q_function;

use super::{DesignParam, Metric, ReliabilityProfile};

const C: f64 = 0.867_861;
const A1: f64 = 0.0564;
const B1: f64 = 0.485_60;
const ALPHA: f64 = 0.4527;
const BETA: f64 = 0.0218;
const GAMMA: f64 = 0.86;

/// Upper end of the bisection bracket for `phi^-1`.
pub const PHI_INV_UPPER: f64 = 1e6;

fn ln_region2(x: f64) -> f64 {
    -ALPHA * x.powf(GAMMA) + BETA
}

/// `ln phi(x)` for `x >= 0` (no validation).
pub fn ln_phi(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < C {
        A1 * x * x - B1 * x
    } else if x < 10.0 {
        ln_region2(x)
    } else {
        let tail = 0.5 * (std::f64::consts::PI / x).ln() - x / 4.0 + (-10.0 / (7.0 * x)).ln_1p();
        tail.min(ln_region2(x))
    }
}

pub fn gade_phi(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return invalid(format!("phi is defined for x >= 0, got {x}"));
    }
    Ok(ln_phi(x).exp())
}

/// Inverse of [`ln_phi`] by bisection on `[0, PHI_INV_UPPER]`.
fn ln_phi_inv(ln_y: f64) -> f64 {
    if ln_y >= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, PHI_INV_UPPER);
    if ln_phi(hi) >= ln_y {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ln_phi(mid) > ln_y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}

pub fn gade_phi_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 1.0) {
        return invalid(format!("phi^-1 is defined on (0, 1], got {y}"));
    }
    Ok(ln_phi_inv(y.ln()))
}

/// Mean LLR of every synthetic channel of BPSK over AWGN with noise
/// variance `sigma2`, starting from the channel mean `2 / sigma2`.
pub fn gade_profile(n: usize, sigma2: f64) -> Result<ReliabilityProfile> {
    log2_exact(n)?;
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return invalid(format!("noise variance {sigma2} must be positive"));
    }
    let mut v = vec![2.0 / sigma2];
    while v.len() < n {
        v = v
            .iter()
            .flat_map(|&m| {
                // 1 - (1 - t)^2 = t (2 - t) with t = phi(m)
                let lt = ln_phi(m);
                let worse = ln_phi_inv(lt + (2.0 - lt.exp()).ln());
                [worse, 2.0 * m]
            })
            .collect();
    }
    ReliabilityProfile::new(v, Metric::MeanLlr, DesignParam::NoiseVariance(sigma2))
}

/// Bit error rate `Q(sqrt(mean))` of a channel with Gaussian LLRs.
pub fn mean_to_ber(mean: f64) -> Result<f64> {
    if !(mean >= 0.0) {
        return invalid(format!("mean LLR must be nonnegative, got {mean}"));
    }
    Ok(q_function(mean.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `1 - E[tanh(U/2)]` for `U ~ N(x, 2x)` by composite Simpson quadrature.
    fn phi_quadrature(x: f64) -> f64 {
        let sd = (2.0 * x).sqrt();
        let (a, b) = (x - 40.0 * sd, x + 40.0 * sd);
        let m = 200_000;
        let h = (b - a) / m as f64;
        let f = |u: f64| (u / 2.0).tanh() * (-(u - x).powi(2) / (4.0 * x)).exp();
        let mut s = f(a) + f(b);
        for i in 1..m {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        1.0 - s * h / 3.0 / (4.0 * std::f64::consts::PI * x).sqrt()
    }

    #[test]
    fn phi_anchor_values() {
        assert_eq!(gade_phi(0.0).unwrap(), 1.0);
        let v = gade_phi(0.5).unwrap();
        assert!((v - (0.0564f64 * 0.25 - 0.4856 * 0.5).exp()).abs() < 1e-15);
        let want = (std::f64::consts::PI / 100.0).sqrt() * (-25.0f64).exp() * (1.0 - 10.0 / 700.0);
        assert!((gade_phi(100.0).unwrap() / want - 1.0).abs() < 1e-12);
        assert!(gade_phi(-1.0).is_err());
    }

    #[test]
    fn phi_matches_integral_definition() {
        for &x in &[0.01, 0.1, 0.5, 0.8, 0.9, 1.5, 3.0, 5.0, 8.0, 9.9] {
            let q = phi_quadrature(x);
            let a = gade_phi(x).unwrap();
            assert!((a / q - 1.0).abs() < 0.02, "x={x}: {a} vs {q}");
        }
    }

    #[test]
    fn phi_is_decreasing_and_continuous() {
        let mut prev = 1.0;
        let mut x = 0.0;
        while x < 200.0 {
            x += 0.001;
            let v = gade_phi(x).unwrap();
            assert!(v < prev, "not decreasing at {x}");
            prev = v;
        }
        for b in [C, 10.0] {
            let left = gade_phi(b - 1e-9).unwrap();
            let right = gade_phi(b).unwrap();
            assert!((left / right - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn phi_inverse_round_trips() {
        assert_eq!(gade_phi_inv(1.0).unwrap(), 0.0);
        let x = gade_phi_inv(gade_phi(3.7).unwrap()).unwrap();
        assert!((x - 3.7).abs() < 1e-6);
        for i in 0..1000 {
            let x = 10f64.powf(-4.0 + 7.0 * i as f64 / 999.0);
            let y = gade_phi(x).unwrap();
            let back = gade_phi_inv(y).unwrap();
            assert!((back - x).abs() < 1e-6 * x.max(1.0), "{x} -> {back}");
            assert!((gade_phi(back).unwrap() - y).abs() <= 1e-10);
        }
        assert!(gade_phi_inv(0.0).is_err());
        assert!(gade_phi_inv(1.5).is_err());
    }

    #[test]
    fn profile_examples() {
        let p = gade_profile(2, 1.0).unwrap();
        assert_eq!(p.values()[1], 4.0);
        let t = gade_phi(2.0).unwrap();
        let want = gade_phi_inv(1.0 - (1.0 - t) * (1.0 - t)).unwrap();
        assert!((p.values()[0] - want).abs() < 1e-9);
        let big = gade_profile(1024, 1.0).unwrap();
        assert_eq!(big.values()[1023], 2048.0);
        assert!(gade_profile(8, 0.0).is_err());
        assert!(gade_profile(6, 1.0).is_err());
    }

    #[test]
    fn ber_from_mean() {
        assert_eq!(mean_to_ber(0.0).unwrap(), 0.5);
        assert!((mean_to_ber(4.0).unwrap() / 0.022_750_131_948_179_2 - 1.0).abs() < 1e-9);
        assert!(mean_to_ber(40.0 * 40.0).unwrap() < 1e-300);
        assert!(mean_to_ber(-1.0).is_err());
    }
}
