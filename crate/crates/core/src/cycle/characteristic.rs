//! Characteristic function `G(u, v) = <exp(-i v q_h - i u w)>` of the joint
//! work/heat distribution and its finite-difference cumulants.
//!
//! With `x_c = beta_cold omega_c`, `x_h = beta_hot omega_h`,
//! `u0 = u(omega_c - omega_h) + v omega_h`, `v0 = u(omega_c + omega_h) - v omega_h`
//! and `r = (1 - phi)/(1 + phi)`:
//!
//! ```text
//! D_c = cosh(x_c - i u0) + r cosh(x_c - i v0) - 2/(1 + phi)
//! D_h = cosh(x_h + i u0) + r cosh(x_h - i v0) - 2/(1 + phi)
//! G   = 4 sinh(x_c/2) sinh(x_h/2) / ((1 + phi) sqrt(D_c) sqrt(D_h))
//! ```

use super::{CycleConfig, CycleInputs};
use crate::error::{Error, Result};
use crate::scalar::{Complex, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicFunction<T> {
    inputs: CycleInputs<T>,
    prefactor: T,
}

impl<T: Real> CharacteristicFunction<T> {
    pub fn new(config: &CycleConfig<T>) -> Result<Self> {
        Self::from_inputs(config.resolve()?)
    }

    pub fn from_inputs(inputs: CycleInputs<T>) -> Result<Self> {
        let xc = inputs.beta_cold * inputs.omega_c;
        let xh = inputs.beta_hot * inputs.omega_h;
        let prefactor = T::lit(4.0) * (xc * T::half()).sinh() * (xh * T::half()).sinh() / (T::one() + inputs.phi);
        let g = Self { inputs, prefactor };
        let g00 = g.principal(T::zero(), T::zero());
        let deviation = (g00 - Complex::new(T::one(), T::zero())).norm();
        if !(deviation < T::lit(1e-12).max(T::epsilon() * T::lit(64.0))) {
            return Err(Error::Normalization {
                deviation: deviation.as_f64(),
            });
        }
        Ok(g)
    }

    pub fn inputs(&self) -> &CycleInputs<T> {
        &self.inputs
    }

    /// `D_c, D_h`. The constants add up to zero, `1 + r - 2/(1 + phi) = 0`,
    /// so each radicand is `2 sinh^2(z1/2) + 2 r sinh^2(z2/2)`, which keeps
    /// its relative accuracy when `x_c` or `x_h` is small.
    fn radicands(&self, u: T, v: T) -> (Complex<T>, Complex<T>) {
        let p = &self.inputs;
        let u0 = u * (p.omega_c - p.omega_h) + v * p.omega_h;
        let v0 = u * (p.omega_c + p.omega_h) - v * p.omega_h;
        let r = (T::one() - p.phi) / (T::one() + p.phi);
        let xc = p.beta_cold * p.omega_c;
        let xh = p.beta_hot * p.omega_h;
        let cosh_m1 = |x: T, y: T| {
            let s = Complex::new(x * T::half(), y * T::half()).sinh();
            s * s * T::two()
        };
        let dc = cosh_m1(xc, -u0) + cosh_m1(xc, -v0) * r;
        let dh = cosh_m1(xh, u0) + cosh_m1(xh, -v0) * r;
        (dc, dh)
    }

    /// `G` with principal square roots, no branch check.
    pub fn principal(&self, u: T, v: T) -> Complex<T> {
        let (dc, dh) = self.radicands(u, v);
        Complex::new(self.prefactor, T::zero()) / (dc.sqrt() * dh.sqrt())
    }

    /// `G(u, v)` continued from the origin along the straight ray; fails when
    /// the continued value differs from the principal one.
    pub fn eval(&self, u: T, v: T) -> Result<Complex<T>> {
        let principal = self.principal(u, v);
        let continued = self.continued(u, v);
        if (principal - continued).norm() > T::lit(1e-9) * continued.norm().max(T::epsilon()) {
            return Err(Error::BranchCut {
                u: u.as_f64(),
                v: v.as_f64(),
            });
        }
        Ok(principal)
    }

    /// `G` with both square roots tracked continuously from the origin.
    pub fn continued(&self, u: T, v: T) -> Complex<T> {
        let p = &self.inputs;
        let span = (u.abs() + v.abs()) * (p.omega_c + p.omega_h);
        let steps = (span / T::lit(0.02)).ceil().to_usize().unwrap_or(1).max(1);
        let (dc0, dh0) = self.radicands(T::zero(), T::zero());
        let (mut sc, mut sh) = (dc0.sqrt(), dh0.sqrt());
        let follow = |prev: Complex<T>, d: Complex<T>| {
            let s = d.sqrt();
            if (s - prev).norm() <= (s + prev).norm() {
                s
            } else {
                -s
            }
        };
        for k in 1..=steps {
            let f = T::of_usize(k) / T::of_usize(steps);
            let (dc, dh) = self.radicands(u * f, v * f);
            sc = follow(sc, dc);
            sh = follow(sh, dh);
        }
        Complex::new(self.prefactor, T::zero()) / (sc * sh)
    }

    pub fn ln(&self, u: T, v: T) -> Result<Complex<T>> {
        Ok(self.eval(u, v)?.ln())
    }

    /// Smallest radius along `directions` equally spaced rays, up to
    /// `r_max`, at which the principal branch stops agreeing with the
    /// continuation.
    pub fn principal_radius(&self, directions: usize, r_max: T, resolution: T) -> T {
        let mut best = r_max;
        for d in 0..directions.max(1) {
            let angle = T::two() * T::PI() * T::of_usize(d) / T::of_usize(directions.max(1));
            let (cu, cv) = (angle.cos(), angle.sin());
            let mut r = resolution;
            while r < best {
                if self.eval(cu * r, cv * r).is_err() {
                    best = r;
                    break;
                }
                r += resolution;
            }
        }
        best
    }
}

/// `G(u, v)` for a configuration.
pub fn characteristic_function<T: Real>(u: T, v: T, config: &CycleConfig<T>) -> Result<Complex<T>> {
    CharacteristicFunction::new(config)?.eval(u, v)
}

/// Cumulants read off `ln G` by central differences, with the discrepancy
/// between steps `h` and `2h` as the error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericCumulants<T> {
    /// `i d lnG/du`
    pub mean_w: T,
    /// `i d lnG/dv`
    pub mean_qh: T,
    /// `-d^2 lnG/du^2`
    pub var_w: T,
    pub mean_w_error: T,
    pub mean_qh_error: T,
    pub var_w_error: T,
    /// Step used for the first derivatives.
    pub step: T,
    /// Step chosen for the second derivative.
    pub var_step: T,
}

fn first<T: Real>(f: &impl Fn(T) -> Result<Complex<T>>, h: T) -> Result<Complex<T>> {
    let c8 = T::lit(8.0);
    Ok((f(-h * T::two())? - f(h * T::two())? + (f(h)? - f(-h)?) * c8) / (T::lit(12.0) * h))
}

fn second<T: Real>(f: &impl Fn(T) -> Result<Complex<T>>, h: T) -> Result<Complex<T>> {
    let c16 = T::lit(16.0);
    let f0 = f(T::zero())?;
    Ok(((f(h)? + f(-h)?) * c16 - f(h * T::two())? - f(-h * T::two())? - f0 * T::lit(30.0)) / (T::lit(12.0) * h * h))
}

/// Fourth-order central differences of `ln G` at the origin,
/// `h = 1e-4 / max(omega_h, 1)`. The second derivative takes the step among
/// `h 2^k` that agrees best with both neighbouring steps.
pub fn numeric_cumulants<T: Real>(g: &CharacteristicFunction<T>) -> Result<NumericCumulants<T>> {
    let h = T::lit(1e-4) / g.inputs.omega_h.max(T::one());
    let along_u = |s: T| g.ln(s, T::zero());
    let along_v = |s: T| g.ln(T::zero(), s);
    let iu = Complex::new(T::zero(), T::one());

    let dw = first(&along_u, h)? * iu;
    let dw2 = first(&along_u, h * T::two())? * iu;
    let dq = first(&along_v, h)? * iu;
    let dq2 = first(&along_v, h * T::two())? * iu;

    let steps: Vec<T> = (0..10).map(|k| h * T::of_usize(1 << k)).collect();
    let d2 = steps
        .iter()
        .map(|&hk| Ok(-second(&along_u, hk)?.re))
        .collect::<Result<Vec<T>>>()?;
    let mut best: Option<(T, T, T)> = None;
    for k in 1..d2.len() - 1 {
        let err = (d2[k] - d2[k - 1]).abs().max((d2[k] - d2[k + 1]).abs());
        if best.map_or(true, |(_, e, _)| err < e) {
            best = Some((d2[k], err, steps[k]));
        }
    }
    let (var_w, var_w_error, var_step) = best.expect("at least one step tried");
    Ok(NumericCumulants {
        mean_w: dw.re,
        mean_qh: dq.re,
        var_w,
        mean_w_error: (dw.re - dw2.re).abs().max(dw.im.abs()),
        mean_qh_error: (dq.re - dq2.re).abs().max(dq.im.abs()),
        var_w_error,
        step: h,
        var_step,
    })
}
