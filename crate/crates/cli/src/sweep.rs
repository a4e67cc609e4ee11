use std::fmt;
use std::str::FromStr;

use qotto::CycleConfig;

use crate::config::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Xi,
    Discord,
    TauDri,
    OmegaH,
    BetaH,
}

impl SweepVariable {
    pub fn key(self) -> &'static str {
        match self {
            Self::Xi => "xi",
            Self::Discord => "discord",
            Self::TauDri => "tau_dri",
            Self::OmegaH => "omega_h",
            Self::BetaH => "beta_h",
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for SweepVariable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "xi" => Self::Xi,
            "discord" => Self::Discord,
            "tau_dri" => Self::TauDri,
            "omega_h" => Self::OmegaH,
            "beta_h" => Self::BetaH,
            _ => return Err(format!("cannot sweep `{s}` (expected xi, discord, tau_dri, omega_h or beta_h)")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            _ => Err(format!("unknown scale `{s}` (expected linear or log)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub scale: Scale,
}

impl SweepSpec {
    pub fn linear(variable: SweepVariable, lo: f64, hi: f64, points: usize) -> Self {
        Self {
            variable,
            lo,
            hi,
            points,
            scale: Scale::Linear,
        }
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if !(self.lo < self.hi) {
            return Err(UsageError(format!("sweep needs lo < hi, got lo = {}, hi = {}", self.lo, self.hi)));
        }
        if self.points < 2 {
            return Err(UsageError(format!("sweep needs at least 2 points, got {}", self.points)));
        }
        if self.scale == Scale::Log && !(self.lo > 0.0) {
            return Err(UsageError("log sweep needs lo > 0".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        match self.scale {
            Scale::Linear => qotto::scalar::linspace(self.lo, self.hi, self.points),
            Scale::Log => qotto::scalar::logspace(self.lo, self.hi, self.points),
        }
    }

    /// Configuration at sweep value `x`. A fixed `discord` re-solves the
    /// coupling after the swept field is set.
    pub fn config_at(&self, base: &CycleConfig, discord: Option<f64>, x: f64) -> qotto::Result<CycleConfig> {
        let mut c = *base;
        match self.variable {
            SweepVariable::Xi => c.xi = x,
            SweepVariable::Discord => return c.with_discord(x),
            SweepVariable::TauDri => c.tau_dri = x,
            SweepVariable::OmegaH => c.omega_h = x,
            SweepVariable::BetaH => c.beta_h = x,
        }
        match discord {
            Some(q) => c.with_discord(q),
            None => Ok(c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let s = SweepSpec {
            scale: Scale::Log,
            ..SweepSpec::linear(SweepVariable::TauDri, 0.4, 50.0, 7)
        };
        let v = s.values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.4);
        assert!((v[6] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn fixed_discord_tracks_swept_frequency() {
        let s = SweepSpec::linear(SweepVariable::OmegaH, 4.0, 8.0, 3);
        let base = CycleConfig::reference();
        for x in s.values() {
            let c = s.config_at(&base, Some(0.2), x).unwrap();
            assert!((c.discord().unwrap() - 0.2).abs() < 1e-10);
        }
    }
}
