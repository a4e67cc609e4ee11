use std::fmt;

use super::characteristic::{numeric_cumulants, CharacteristicFunction, NumericCumulants};
use super::tur::tur_bound;
use super::{CycleConfig, CycleInputs};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatingMode {
    /// `-<w> > 0`, `<q_h> > 0`, `<q_c> < 0`
    Engine,
    /// `-<w> < 0`, `<q_h> < 0`, `<q_c> > 0`
    Refrigerator,
    /// Work consumed and dumped into the cold bath.
    Heater,
    /// Some mean lies within `1e-12` of zero.
    Boundary,
}

impl OperatingMode {
    pub fn classify<T: Real>(mean_w: T, mean_qh: T, mean_qc: T) -> Self {
        let eps = T::lit(1e-12);
        if mean_w.abs() < eps || mean_qh.abs() < eps || mean_qc.abs() < eps {
            return Self::Boundary;
        }
        let out = -mean_w;
        if out > T::zero() && mean_qh > T::zero() && mean_qc < T::zero() {
            Self::Engine
        } else if out < T::zero() && mean_qh < T::zero() && mean_qc > T::zero() {
            Self::Refrigerator
        } else {
            Self::Heater
        }
    }
}

impl fmt::Display for OperatingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Engine => "engine",
            Self::Refrigerator => "refrigerator",
            Self::Heater => "heater",
            Self::Boundary => "boundary",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleMoments<T> {
    pub inputs: CycleInputs<T>,
    pub mean_w: T,
    /// `-d^2 lnG/du^2` by finite differences.
    pub var_w: T,
    pub var_w_error: T,
    /// Printed closed form, kept for comparison with `var_w`.
    pub var_w_closed_form: T,
    pub mean_qh: T,
    pub mean_qc: T,
    pub w_adi: T,
    pub w_fric: T,
    /// `-<w>/<q_h>`, engine mode only.
    pub eta_th: Option<T>,
    /// `<q_c>/<w>`, refrigerator mode only.
    pub cop: Option<T>,
    /// `1 - beta_hot/beta_cold`
    pub eta_carnot_gen: T,
    pub power: T,
    pub sigma_mean: T,
    pub mode: OperatingMode,
    pub cv_power: T,
    /// `csch(f(<sigma>))`; absent when `<sigma> = 0`.
    pub tur_bound: Option<T>,
    /// Cumulants straight from `ln G`.
    pub numeric: NumericCumulants<T>,
}

/// `<w> = omega_h (phi n_c - n_h) + omega_c (phi n_h - n_c)`.
fn mean_work<T: Real>(p: &CycleInputs<T>) -> T {
    p.omega_h * (p.phi * p.n_c - p.n_h) + p.omega_c * (p.phi * p.n_h - p.n_c)
}

/// `<q_h> = omega_h (n_h - phi n_c)`.
fn mean_heat_hot<T: Real>(p: &CycleInputs<T>) -> T {
    p.omega_h * (p.n_h - p.phi * p.n_c)
}

/// Printed work variance
/// `omega_h^2 [-1/2 + (2 phi^2 - 1) n_c^2 + n_h^2] + omega_c^2 [-1/2 + n_c^2 + (2 phi^2 - 1) n_h^2]
///  + omega_h omega_c phi (1 - 2 n_c^2 - 2 n_h^2)`.
pub fn work_variance_closed_form<T: Real>(p: &CycleInputs<T>) -> T {
    let (nc2, nh2) = (p.n_c * p.n_c, p.n_h * p.n_h);
    let k = T::two() * p.phi * p.phi - T::one();
    let h = T::half();
    p.omega_h * p.omega_h * (-h + k * nc2 + nh2) + p.omega_c * p.omega_c * (-h + nc2 + k * nh2)
        + p.omega_h * p.omega_c * p.phi * (T::one() - T::two() * nc2 - T::two() * nh2)
}

/// `1 - omega_c/omega_h - (omega_c/omega_h)(phi - 1)(n_h + n_c)/(n_h - phi n_c)`.
pub fn efficiency_closed_form<T: Real>(p: &CycleInputs<T>) -> T {
    let ratio = p.omega_c / p.omega_h;
    T::one() - ratio - ratio * (p.phi - T::one()) * (p.n_h + p.n_c) / (p.n_h - p.phi * p.n_c)
}

pub fn cycle_moments<T: Real>(config: &CycleConfig<T>) -> Result<CycleMoments<T>> {
    let p = config.resolve()?;
    let g = CharacteristicFunction::from_inputs(p)?;
    let numeric = numeric_cumulants(&g)?;
    let mean_w = mean_work(&p);
    let mean_qh = mean_heat_hot(&p);
    let mean_qc = -mean_w - mean_qh;
    let mode = OperatingMode::classify(mean_w, mean_qh, mean_qc);
    let sigma_mean = -p.beta_hot * mean_qh - p.beta_cold * mean_qc;
    let var_w = numeric.var_w;
    Ok(CycleMoments {
        inputs: p,
        mean_w,
        var_w,
        var_w_error: numeric.var_w_error,
        var_w_closed_form: work_variance_closed_form(&p),
        mean_qh,
        mean_qc,
        w_adi: (p.omega_h - p.omega_c) * (p.n_h - p.n_c),
        w_fric: (p.phi - T::one()) * (p.omega_h * p.n_c + p.omega_c * p.n_h),
        eta_th: (mode == OperatingMode::Engine).then(|| -mean_w / mean_qh),
        cop: (mode == OperatingMode::Refrigerator).then(|| mean_qc / mean_w),
        eta_carnot_gen: T::one() - p.beta_hot / p.beta_cold,
        power: -mean_w / p.tau_cyc,
        sigma_mean,
        mode,
        cv_power: var_w.max(T::zero()).sqrt() / mean_w.abs(),
        tur_bound: tur_bound(sigma_mean).ok(),
        numeric,
    })
}

/// `-<w>/<q_h>` of an engine.
pub fn efficiency<T: Real>(config: &CycleConfig<T>) -> Result<T> {
    let p = config.resolve()?;
    let (w, q) = (mean_work(&p), mean_heat_hot(&p));
    match OperatingMode::classify(w, q, -w - q) {
        OperatingMode::Engine => Ok(-w / q),
        mode => Err(Error::NotEngine { mode: mode.to_string() }),
    }
}

/// `<q_c>/<w>` of a refrigerator.
pub fn coefficient_of_performance<T: Real>(config: &CycleConfig<T>) -> Result<T> {
    let p = config.resolve()?;
    let (w, q) = (mean_work(&p), mean_heat_hot(&p));
    let qc = -w - q;
    match OperatingMode::classify(w, q, qc) {
        OperatingMode::Refrigerator => Ok(qc / w),
        mode => Err(Error::InvalidParameter {
            name: "mode",
            reason: format!("coefficient of performance needs a refrigerator, machine is a {mode}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laws_hold_at_reference_point() {
        let m = cycle_moments(&CycleConfig::<f64> { xi: 6.0, ..CycleConfig::reference() }).unwrap();
        assert_eq!(m.mean_w + m.mean_qh + m.mean_qc, 0.0);
        assert!(m.sigma_mean >= 0.0);
        assert!((-m.mean_w - (m.w_adi - m.w_fric)).abs() < 1e-12);
        assert_eq!(m.mode, OperatingMode::Engine);
    }

    #[test]
    fn adiabatic_engine_runs_at_otto_efficiency() {
        let c = CycleConfig::<f64> { xi: 8.0, tau_dri: 1e4, ..CycleConfig::reference() };
        let eta = efficiency(&c).unwrap();
        assert!((eta - (1.0 - 2.0 / 6.0)).abs() < 1e-6);
    }

    #[test]
    fn refrigerator_has_no_efficiency() {
        let c = CycleConfig::<f64>::reference();
        assert!(matches!(efficiency(&c), Err(Error::NotEngine { .. })));
        assert!(coefficient_of_performance(&c).unwrap() > 0.0);
    }

    #[test]
    fn classification_edges() {
        assert_eq!(OperatingMode::classify(0.0, 1.0, -1.0), OperatingMode::Boundary);
        assert_eq!(OperatingMode::classify(-1.0, 3.0, -2.0), OperatingMode::Engine);
        assert_eq!(OperatingMode::classify(1.0, -3.0, 2.0), OperatingMode::Refrigerator);
        assert_eq!(OperatingMode::classify(1.0, 0.5, -1.5), OperatingMode::Heater);
        assert_eq!(OperatingMode::classify(1.0, -0.5, -0.5), OperatingMode::Heater);
    }
}
