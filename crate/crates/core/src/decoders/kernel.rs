//! LLR-domain arithmetic shared by every decoder.
//!
//! Magnitudes at or above the saturation bound `B` stand for certainty: the
//! check-node combination passes the other operand through unchanged and the
//! saturating sum lets a certain operand dominate.

use crate::scalar::Llr;

/// Check-node evaluation rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Box-plus `2 atanh(tanh(a/2) tanh(b/2))`.
    Exact,
    /// `sign(a) sign(b) min(|a|, |b|)`.
    MinSum,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::MinSum => "minsum",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::error::PolarError;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "exact" | "boxplus" => Ok(Mode::Exact),
            "minsum" | "min-sum" => Ok(Mode::MinSum),
            _ => crate::error::invalid(format!("unknown mode {s:?} (exact|minsum)")),
        }
    }
}

/// Kernel parameters bound to one decoding run.
#[derive(Clone, Copy, Debug)]
pub struct Kernel<T> {
    pub mode: Mode,
    pub bound: T,
}

impl<T: Llr> Kernel<T> {
    pub fn new(mode: Mode, bound: T) -> Self {
        Kernel { mode, bound }
    }

    #[inline]
    pub fn f(&self, a: T, b: T) -> T {
        let (ma, mb) = (a.abs(), b.abs());
        let sign = if (a < T::zero()) != (b < T::zero()) {
            -T::one()
        } else {
            T::one()
        };
        let mag = if ma >= self.bound {
            mb.min(self.bound)
        } else if mb >= self.bound {
            ma
        } else {
            match self.mode {
                Mode::MinSum => ma.min(mb),
                Mode::Exact => boxplus_magnitude(ma, mb),
            }
        };
        sign * mag
    }

    /// `b + (-1)^bit a`.
    #[inline]
    pub fn g(&self, a: T, b: T, bit: u8) -> T {
        if bit == 0 {
            self.add(b, a)
        } else {
            self.add(b, -a)
        }
    }

    /// Saturating sum; a certain operand wins, opposing certainties cancel.
    #[inline]
    pub fn add(&self, a: T, b: T) -> T {
        let bound = self.bound;
        let ca = a.abs() >= bound;
        let cb = b.abs() >= bound;
        if ca || cb {
            let sa = if ca { a.signum() } else { T::zero() };
            let sb = if cb { b.signum() } else { T::zero() };
            let s = sa + sb;
            if s == T::zero() && ca && cb {
                return T::zero();
            }
            let s = if ca { sa } else { sb };
            return s * bound;
        }
        (a + b).max(-bound).min(bound)
    }

    /// Increment of the path metric for deciding `bit` against `llr`.
    #[inline]
    pub fn penalty(&self, llr: T, bit: u8) -> T {
        penalty(llr, bit, self.mode)
    }
}

/// `|a| boxplus |b|` for `0 <= a, b < B`. The tanh form is accurate for small
/// operands, the log form avoids cancellation near one.
#[inline]
fn boxplus_magnitude<T: Llr>(a: T, b: T) -> T {
    let lo = a.min(b);
    if lo < T::one() {
        let two = T::of(2.0);
        let t = (a / two).tanh() * (b / two).tanh();
        two * t.atanh()
    } else {
        let hi = a.max(b);
        lo + (-(a + b)).exp().ln_1p() - (-(hi - lo)).exp().ln_1p()
    }
}

/// Hard decision: `L > 0 -> 0`, `L < 0 -> 1`, `L = 0 -> 0`.
#[inline]
pub fn hard<T: Llr>(llr: T) -> u8 {
    u8::from(llr < T::zero())
}

/// Check-node combination of two LLRs.
pub fn f_op<T: Llr>(a: T, b: T, mode: Mode, bound: T) -> T {
    Kernel::new(mode, bound).f(a, b)
}

/// Variable-node combination `b + (-1)^bit a` with saturation.
pub fn g_op<T: Llr>(a: T, b: T, bit: u8, bound: T) -> T {
    Kernel::new(Mode::MinSum, bound).g(a, b, bit)
}

/// Re-encoding of two sibling bits.
pub fn partial_sum(b_left: u8, b_right: u8) -> (u8, u8) {
    (b_left ^ b_right, b_right)
}

/// `ln(1 + e^{-(1-2 bit) L})` in exact mode; `|L|` on disagreement with
/// the hard decision, else zero, in min-sum mode.
#[inline]
pub fn penalty<T: Llr>(llr: T, bit: u8, mode: Mode) -> T {
    match mode {
        Mode::MinSum => {
            if bit == hard(llr) {
                T::zero()
            } else {
                llr.abs()
            }
        }
        Mode::Exact => {
            let x = if bit == 0 { -llr } else { llr };
            softplus(x)
        }
    }
}

/// Path metric after appending `bit` with leaf LLR `llr`.
pub fn path_metric_update<T: Llr>(phi_prev: T, llr: T, bit: u8, mode: Mode) -> T {
    phi_prev + penalty(llr, bit, mode)
}

#[inline]
fn softplus<T: Llr>(x: T) -> T {
    if x > T::zero() {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}
