use crate::error::{Error, Result};
use crate::scalar::Real;

pub fn x_tanh_x<T: Real>(x: T) -> T {
    x * x.tanh()
}

/// Inverse of `x tanh(x)` on `x >= 0`.
pub fn x_tanh_x_inverse<T: Real>(y: T) -> Result<T> {
    if !(y > T::zero()) || !y.is_finite() {
        return Err(Error::NonPositiveEntropyProduction { sigma: y.as_f64() });
    }
    // x tanh x >= x - 1 and >= x^2 tanh(1) on [0, 1] bound the root
    let (mut lo, mut hi) = (T::zero(), y + T::one());
    let mut x = if y < T::one() { y.sqrt() } else { y };
    for _ in 0..200 {
        let g = x_tanh_x(x) - y;
        if g > T::zero() {
            hi = x;
        } else {
            lo = x;
        }
        let sech = x.cosh().recip();
        let dg = x.tanh() + x * sech * sech;
        let mut next = x - g / dg;
        if !(next > lo && next < hi) {
            next = T::half() * (lo + hi);
        }
        if (next - x).abs() <= T::epsilon() * x.max(T::epsilon()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}

/// Lower bound `csch(f(sigma))` on the coefficient of variation of the power,
/// with `f` the inverse of `x tanh(x)`.
pub fn tur_bound<T: Real>(sigma_mean: T) -> Result<T> {
    Ok(x_tanh_x_inverse(sigma_mean)?.csch())
}
