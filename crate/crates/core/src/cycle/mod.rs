//! Closed-form observables of the four-stroke Otto cycle.
//!
//! Sign conventions: `w` is work done on the cavity, heats are positive when
//! absorbed by it, so the output work is `-<w>` and `<q_c> = -<w> - <q_h>`.

mod characteristic;
mod moments;
mod tur;

pub use characteristic::{characteristic_function, numeric_cumulants, CharacteristicFunction, NumericCumulants};
pub use moments::{
    coefficient_of_performance, cycle_moments, efficiency, efficiency_closed_form, work_variance_closed_form,
    CycleMoments, OperatingMode,
};
pub use tur::{tur_bound, x_tanh_x, x_tanh_x_inverse};

use std::fmt;
use std::str::FromStr;

use crate::correlations::{discord_closed_form, thermal_state, xi_for_discord};
use crate::error::{invalid, Result};
use crate::fock::nonadiabatic_factor_analytic;
use crate::reservoir::{effective_reservoir, mean_excitation, EffectiveReservoir, ReservoirKind, ReservoirSpec};
use crate::scalar::{all_finite, Real};

/// Which bath is the beam of correlated atom pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// One atom of each pair crosses the cavity during the hot isochore; the
    /// cold bath is thermal.
    HotNonthermal,
    /// Both atoms of each pair cross the cavity during the cold isochore; the
    /// hot bath is thermal.
    ColdNonthermal,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::HotNonthermal => "hot-nonthermal",
            Self::ColdNonthermal => "cold-nonthermal",
        })
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim() {
            "hot-nonthermal" => Ok(Self::HotNonthermal),
            "cold-nonthermal" => Ok(Self::ColdNonthermal),
            other => Err(format!("unknown variant `{other}` (expected hot-nonthermal or cold-nonthermal)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig<T> {
    pub omega_c: T,
    pub omega_h: T,
    pub beta_c: T,
    pub beta_h: T,
    /// Pair coupling of the nonthermal bath.
    pub xi: T,
    /// Duration of each unitary stroke.
    pub tau_dri: T,
    pub variant: Variant,
}

impl<T: Real> CycleConfig<T> {
    /// `beta_c = 0.6, beta_h = 0.3, omega_c = 2, omega_h = 6, tau_dri = 0.8`, no coupling.
    pub fn reference() -> Self {
        Self {
            omega_c: T::two(),
            omega_h: T::lit(6.0),
            beta_c: T::lit(0.6),
            beta_h: T::lit(0.3),
            xi: T::zero(),
            tau_dri: T::lit(0.8),
            variant: Variant::HotNonthermal,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let p = [self.omega_c, self.omega_h, self.beta_c, self.beta_h, self.xi, self.tau_dri];
        if !all_finite(&p) {
            return Err(invalid("config", "non-finite parameter"));
        }
        if !(self.omega_c > T::zero()) {
            return Err(invalid("omega_c", format!("must be positive, got {}", self.omega_c)));
        }
        if !(self.omega_h > self.omega_c) {
            return Err(invalid("omega_h", format!("must exceed omega_c = {}, got {}", self.omega_c, self.omega_h)));
        }
        if !(self.beta_h > T::zero()) {
            return Err(invalid("beta_h", format!("must be positive, got {}", self.beta_h)));
        }
        if !(self.beta_c > self.beta_h) {
            return Err(invalid("beta_c", format!("must exceed beta_h = {}, got {}", self.beta_h, self.beta_c)));
        }
        if !(self.tau_dri > T::zero()) {
            return Err(invalid("tau_dri", format!("must be positive, got {}", self.tau_dri)));
        }
        if self.xi < T::zero() {
            return Err(invalid("xi", format!("must be non-negative, got {}", self.xi)));
        }
        Ok(())
    }

    /// `(beta, omega)` of the correlated pairs.
    pub fn pair_parameters(&self) -> (T, T) {
        match self.variant {
            Variant::HotNonthermal => (self.beta_h, self.omega_h),
            Variant::ColdNonthermal => (self.beta_c, self.omega_c),
        }
    }

    /// Discord (bits) of the correlated pairs.
    pub fn discord(&self) -> Result<T> {
        let (beta, omega) = self.pair_parameters();
        Ok(discord_closed_form(&thermal_state(beta, omega, self.xi)?))
    }

    /// Same configuration with `xi` chosen so that the pairs carry `discord` bits.
    pub fn with_discord(&self, discord: T) -> Result<Self> {
        let (beta, omega) = self.pair_parameters();
        let xi = xi_for_discord(discord, beta, omega, T::lit(1e-13))?;
        Ok(Self { xi, ..*self })
    }

    pub fn tau_cyc(&self) -> T {
        T::two() * self.tau_dri
    }

    pub fn nonthermal_reservoir(&self) -> ReservoirSpec<T> {
        let (beta, omega) = self.pair_parameters();
        let kind = match self.variant {
            Variant::HotNonthermal => ReservoirKind::CorrelatedPairOneAtom,
            Variant::ColdNonthermal => ReservoirKind::CorrelatedPairTwoAtoms,
        };
        ReservoirSpec {
            kind,
            beta,
            omega,
            xi: self.xi,
        }
    }

    /// Inverse temperatures, occupations and `phi` entering the closed forms.
    pub fn resolve(&self) -> Result<CycleInputs<T>> {
        self.validate()?;
        let reservoir = effective_reservoir(&self.nonthermal_reservoir())?;
        let (beta_cold, beta_hot) = match self.variant {
            Variant::HotNonthermal => (self.beta_c, reservoir.beta_eff),
            Variant::ColdNonthermal => (reservoir.beta_eff, self.beta_h),
        };
        if !(beta_hot > T::zero()) {
            return Err(invalid("xi", "effective hot inverse temperature is not positive"));
        }
        let phi = nonadiabatic_factor_analytic(self.tau_dri, self.omega_c, self.omega_h)?;
        Ok(CycleInputs {
            omega_c: self.omega_c,
            omega_h: self.omega_h,
            beta_cold,
            beta_hot,
            n_c: mean_excitation(beta_cold * self.omega_c),
            n_h: mean_excitation(beta_hot * self.omega_h),
            phi,
            tau_cyc: self.tau_cyc(),
            reservoir,
        })
    }
}

/// Everything the closed forms need, after the nonthermal bath has been
/// reduced to its effective temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleInputs<T> {
    pub omega_c: T,
    pub omega_h: T,
    /// Inverse temperature the cavity reaches on the cold isochore.
    pub beta_cold: T,
    /// Inverse temperature the cavity reaches on the hot isochore.
    pub beta_hot: T,
    /// `coth(beta_cold omega_c / 2) / 2`
    pub n_c: T,
    /// `coth(beta_hot omega_h / 2) / 2`
    pub n_h: T,
    pub phi: T,
    pub tau_cyc: T,
    pub reservoir: EffectiveReservoir<T>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variant_round_trips_through_text() {
        for v in [Variant::HotNonthermal, Variant::ColdNonthermal] {
            assert_eq!(v.to_string().parse::<Variant>().unwrap(), v);
        }
        assert!("lukewarm".parse::<Variant>().is_err());
    }

    #[test]
    fn invariants_are_enforced() {
        let ok = CycleConfig::<f64>::reference();
        assert!(ok.validate().is_ok());
        assert!(CycleConfig { omega_h: 1.0, ..ok }.validate().is_err());
        assert!(CycleConfig { beta_c: 0.2, ..ok }.validate().is_err());
        assert!(CycleConfig { tau_dri: 0.0, ..ok }.validate().is_err());
        assert!(CycleConfig { xi: -1.0, ..ok }.validate().is_err());
    }

    #[test]
    fn variant_picks_the_nonthermal_side() {
        let hot = CycleConfig::<f64> { xi: 4.0, ..CycleConfig::reference() };
        let inp = hot.resolve().unwrap();
        assert_eq!(inp.beta_cold, 0.6);
        assert!(inp.beta_hot < 0.3);
        let cold = CycleConfig { variant: Variant::ColdNonthermal, ..hot };
        let inp = cold.resolve().unwrap();
        assert_eq!(inp.beta_hot, 0.3);
        assert!(inp.beta_cold > 0.6);
    }

    #[test]
    fn discord_targeting() {
        let c = CycleConfig::<f64>::reference().with_discord(0.3).unwrap();
        assert!((c.discord().unwrap() - 0.3).abs() < 1e-10);
        assert_eq!(CycleConfig::<f64>::reference().with_discord(0.0).unwrap().xi, 0.0);
    }
}
