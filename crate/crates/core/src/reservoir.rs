//! Reservoirs seen by the cavity: a thermal boson bath, or a beam of
//! correlated atom pairs of which one or both atoms cross the cavity.
//!
//! Each reservoir reduces to emission/absorption weights `r1`, `r2` and the
//! effective inverse temperature fixed by detailed balance,
//! `exp(-beta_eff omega) = r1 / r2`.

use std::fmt;

use crate::correlations::thermal_state;
use crate::error::{invalid, Error, Result};
use crate::scalar::{all_finite, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReservoirKind {
    ThermalBoson,
    /// One atom of each pair crosses the cavity.
    CorrelatedPairOneAtom,
    /// Both atoms of each pair cross the cavity.
    CorrelatedPairTwoAtoms,
}

impl fmt::Display for ReservoirKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ThermalBoson => "thermal-boson",
            Self::CorrelatedPairOneAtom => "correlated-pair-one-atom",
            Self::CorrelatedPairTwoAtoms => "correlated-pair-two-atoms",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec<T> {
    pub kind: ReservoirKind,
    pub beta: T,
    /// Cavity frequency during contact.
    pub omega: T,
    /// Pair interaction strength; zero for a thermal bath.
    pub xi: T,
}

impl<T: Real> ReservoirSpec<T> {
    pub fn thermal(beta: T, omega: T) -> Self {
        Self {
            kind: ReservoirKind::ThermalBoson,
            beta,
            omega,
            xi: T::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !all_finite(&[self.beta, self.omega, self.xi]) {
            return Err(invalid("reservoir", "non-finite parameter"));
        }
        if self.beta <= T::zero() {
            return Err(invalid("beta", format!("must be positive, got {}", self.beta)));
        }
        if self.omega <= T::zero() {
            return Err(invalid("omega", format!("must be positive, got {}", self.omega)));
        }
        if self.xi < T::zero() {
            return Err(invalid("xi", format!("must be non-negative, got {}", self.xi)));
        }
        if self.kind == ReservoirKind::ThermalBoson && self.xi != T::zero() {
            return Err(invalid("xi", "a thermal boson reservoir has no pair coupling"));
        }
        Ok(())
    }
}

/// Coarse-grained action of a reservoir on the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveReservoir<T> {
    /// Emission weight (atoms arriving excited).
    pub r1: T,
    /// Absorption weight (atoms arriving in the ground state).
    pub r2: T,
    pub beta_eff: T,
    pub omega: T,
    /// Mean excitation including the zero-point half, `coth(beta_eff omega / 2) / 2`.
    pub n_occ: T,
}

impl<T: Real> EffectiveReservoir<T> {
    /// Bose occupation `1 / (exp(beta_eff omega) - 1)`, i.e. `n_occ - 1/2`.
    pub fn bose_occupation(&self) -> T {
        (self.beta_eff * self.omega).exp_m1().recip()
    }

    /// Ratio `r1 / r2 = exp(-beta_eff omega)`.
    pub fn boltzmann_ratio(&self) -> T {
        self.r1 / self.r2
    }
}

/// Mean excitation `coth(x/2)/2` of a cavity mode with `x = beta omega`.
pub fn mean_excitation<T: Real>(beta_omega: T) -> T {
    (beta_omega * T::half()).coth() * T::half()
}

/// Emission and absorption weights `(r1, r2)` assembled from the pair's
/// density-matrix elements.
pub fn arrival_rates<T: Real>(spec: &ReservoirSpec<T>) -> Result<(T, T)> {
    spec.validate()?;
    Ok(match spec.kind {
        ReservoirKind::ThermalBoson => {
            let q = (-spec.beta * spec.omega).exp();
            (q / (T::one() + q), T::one() / (T::one() + q))
        }
        ReservoirKind::CorrelatedPairOneAtom => {
            let s = thermal_state(spec.beta, spec.omega, spec.xi)?;
            (s.rho_e + s.rho_d, s.rho_g + s.rho_d)
        }
        ReservoirKind::CorrelatedPairTwoAtoms => {
            let s = thermal_state(spec.beta, spec.omega, spec.xi)?;
            let sym = s.symmetric_population();
            (s.rho_e + sym, s.rho_g + sym)
        }
    })
}

/// `r2 - r1`, taken from the populations directly: the `rho_d` and `rho_nd`
/// contributions cancel exactly, which the difference of the sums does not
/// reproduce once `beta xi` is large.
fn rate_gap<T: Real>(spec: &ReservoirSpec<T>) -> Result<T> {
    Ok(match spec.kind {
        ReservoirKind::ThermalBoson => (spec.beta * spec.omega * T::half()).tanh(),
        _ => {
            let s = thermal_state(spec.beta, spec.omega, spec.xi)?;
            T::two() * (spec.beta * spec.omega).sinh() / s.partition
        }
    })
}

/// Maps a reservoir to its rates and detailed-balance inverse temperature.
pub fn effective_reservoir<T: Real>(spec: &ReservoirSpec<T>) -> Result<EffectiveReservoir<T>> {
    let (r1, r2) = arrival_rates(spec)?;
    let gap = rate_gap(spec)?;
    if !(gap > T::zero()) {
        return Err(Error::PopulationInversion {
            r1: r1.as_f64(),
            r2: r2.as_f64(),
        });
    }
    // -ln(r1/r2) = ln(1 + (r2 - r1)/r1)
    let beta_eff = match spec.kind {
        ReservoirKind::ThermalBoson => spec.beta,
        _ => (gap / r1).ln_1p() / spec.omega,
    };
    Ok(EffectiveReservoir {
        r1,
        r2,
        beta_eff,
        omega: spec.omega,
        n_occ: mean_excitation(beta_eff * spec.omega),
    })
}

/// `beta_eff` when one atom of the pair interacts:
/// `beta - ln[(1 + e^{beta omega} cosh(beta xi)) / (e^{beta omega} + cosh(beta xi))] / omega`.
pub fn beta_eff_one_atom<T: Real>(beta: T, omega: T, xi: T) -> T {
    let e = (beta * omega).exp();
    let c = (beta * xi).cosh();
    beta - ((T::one() + e * c) / (e + c)).ln() / omega
}

/// `beta_eff` when both atoms of the pair interact:
/// `beta - ln[(1 + e^{beta (omega - xi)}) / (e^{beta omega} + e^{-beta xi})] / omega`.
pub fn beta_eff_two_atoms<T: Real>(beta: T, omega: T, xi: T) -> T {
    let num = T::one() + (beta * (omega - xi)).exp();
    let den = (beta * omega).exp() + (-beta * xi).exp();
    beta - (num / den).ln() / omega
}
