//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Complex numbers over a [`Real`] scalar.
pub type Complex<T> = num_complex::Complex<T>;

/// Floating-point scalar the physics is written against (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, rounding to the nearest representable value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    /// Lossy conversion used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    /// `x ln x` with the convention `0 ln 0 = 0`.
    #[inline]
    fn xlnx(self) -> Self {
        if self <= Self::zero() {
            Self::zero()
        } else {
            self * self.ln()
        }
    }

    /// Hyperbolic cosecant.
    #[inline]
    fn csch(self) -> Self {
        self.sinh().recip()
    }

    /// Hyperbolic cotangent.
    #[inline]
    fn coth(self) -> Self {
        self.tanh().recip()
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shannon entropy in bits of a list of probabilities.
pub fn entropy_bits<T: Real>(probs: impl IntoIterator<Item = T>) -> T {
    let nats: T = probs.into_iter().map(|p| -p.xlnx()).sum();
    nats / T::LN_2()
}

/// Returns `true` when all arguments are finite.
pub(crate) fn all_finite<T: Real>(xs: &[T]) -> bool {
    xs.iter().all(|x| x.is_finite())
}

/// `n` points between `lo` and `hi` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / T::of_usize(n - 1);
            (0..n)
                .map(|k| if k + 1 == n { hi } else { lo + step * T::of_usize(k) })
                .collect()
        }
    }
}

/// `n` logarithmically spaced points between positive `lo` and `hi` inclusive.
pub fn logspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    linspace(lo.ln(), hi.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            if k == 0 {
                lo
            } else if k + 1 == n {
                hi
            } else {
                x.exp()
            }
        })
        .collect()
}
