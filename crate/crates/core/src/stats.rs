//! Small statistics helpers.

use statrs::function::erf::erfc;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Gaussian tail probability `Q(x) = P(N(0,1) > x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Wilson score interval for `successes` out of `trials` at normal quantile
/// `z`. Returns `(0, 1)` when `trials` is zero.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// True when the two 95% Wilson intervals are disjoint and the first lies
/// strictly below the second.
pub fn significantly_below(a: (u64, u64), b: (u64, u64)) -> bool {
    let (_, a_hi) = wilson_interval(a.0, a.1, Z95);
    let (b_lo, _) = wilson_interval(b.0, b.1, Z95);
    a_hi < b_lo
}
