//! Flat `key = value` configuration with `#` comments.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use qotto::{CycleConfig, FockCutoff, Variant};

use crate::sweep::{Scale, SweepSpec, SweepVariable};

pub const KEYS: &[&str] = &[
    "omega_c", "omega_h", "beta_c", "beta_h", "xi", "discord", "tau_dri", "variant", "variable", "lo", "hi", "points",
    "scale", "dim", "guard", "seed", "samples",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

/// Raw key/value layer, later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    values: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, UsageError> {
        let mut out = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("{origin}:{}: expected `key = value`", lineno + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            check_key(k).map_err(|e| usage(format!("{origin}:{}: {e}", lineno + 1)))?;
            if v.is_empty() {
                return Err(usage(format!("{origin}:{}: empty value for `{k}`", lineno + 1)));
            }
            if out.values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(usage(format!("{origin}:{}: duplicate key `{k}`", lineno + 1)));
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<(), UsageError> {
        check_key(key)?;
        self.values.insert(key.to_string(), value.into());
        Ok(())
    }

    /// Parses a `key=value` override.
    pub fn set_pair(&mut self, pair: &str) -> Result<(), UsageError> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| usage(format!("--set expects key=value, got `{pair}`")))?;
        self.set(k.trim(), v.trim())
    }

    pub fn merge(&mut self, other: &RawConfig) {
        for (k, v) in &other.values {
            self.values.insert(k.clone(), v.clone());
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    fn number(&self, key: &str) -> Result<Option<f64>, UsageError> {
        self.get(key)
            .map(|v| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| usage(format!("`{key}` must be a finite number, got `{v}`")))
            })
            .transpose()
    }

    fn integer<I: std::str::FromStr>(&self, key: &str) -> Result<Option<I>, UsageError> {
        self.get(key)
            .map(|v| {
                v.parse::<I>()
                    .map_err(|_| usage(format!("`{key}` must be a non-negative integer, got `{v}`")))
            })
            .transpose()
    }
}

fn check_key(k: &str) -> Result<(), UsageError> {
    if KEYS.contains(&k) {
        Ok(())
    } else {
        Err(usage(format!("unknown key `{k}`")))
    }
}

/// Fully resolved settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub cycle: CycleConfig,
    /// Fixed discord; `xi` is re-solved from it at every point.
    pub discord: Option<f64>,
    pub sweep: Option<SweepSpec>,
    pub cutoff: FockCutoff,
    pub seed: u64,
    pub samples: usize,
}

pub const DEFAULT_SEED: u64 = 20240607;
pub const DEFAULT_SAMPLES: usize = 1_000_000;

impl Settings {
    /// `sweep_default` applies when no sweep key is given at all.
    pub fn from_raw(raw: &RawConfig, sweep_default: Option<SweepSpec>) -> Result<Self, UsageError> {
        let mut cycle = CycleConfig::reference();
        let fields: [(&str, &mut f64); 6] = [
            ("omega_c", &mut cycle.omega_c),
            ("omega_h", &mut cycle.omega_h),
            ("beta_c", &mut cycle.beta_c),
            ("beta_h", &mut cycle.beta_h),
            ("xi", &mut cycle.xi),
            ("tau_dri", &mut cycle.tau_dri),
        ];
        for (k, slot) in fields {
            if let Some(v) = raw.number(k)? {
                *slot = v;
            }
        }
        if let Some(v) = raw.get("variant") {
            cycle.variant = v.parse::<Variant>().map_err(usage)?;
        }
        let discord = raw.number("discord")?;
        if discord.is_some() && raw.contains("xi") {
            return Err(usage("`xi` and `discord` both fix the pair coupling; give only one"));
        }

        let sweep_keys = ["variable", "lo", "hi", "points", "scale"];
        let sweep = if sweep_keys.iter().any(|k| raw.contains(k)) {
            let base = sweep_default.clone();
            let variable = match raw.get("variable") {
                Some(v) => v.parse::<SweepVariable>().map_err(usage)?,
                None => base.as_ref().map(|s| s.variable).ok_or_else(|| usage("sweep needs `variable`"))?,
            };
            let same = base.as_ref().filter(|s| s.variable == variable);
            let lo = raw.number("lo")?.or(same.map(|s| s.lo)).ok_or_else(|| usage("sweep needs `lo`"))?;
            let hi = raw.number("hi")?.or(same.map(|s| s.hi)).ok_or_else(|| usage("sweep needs `hi`"))?;
            let points = raw.integer::<usize>("points")?.or(same.map(|s| s.points)).unwrap_or(51);
            let scale = match raw.get("scale") {
                Some(s) => s.parse::<Scale>().map_err(usage)?,
                None => same.map(|s| s.scale).unwrap_or(Scale::Linear),
            };
            Some(SweepSpec {
                variable,
                lo,
                hi,
                points,
                scale,
            })
        } else {
            sweep_default
        };
        if let Some(s) = &sweep {
            s.validate()?;
            if raw.contains(s.variable.key()) {
                return Err(usage(format!("`{}` is swept and cannot also be fixed", s.variable.key())));
            }
            if s.variable == SweepVariable::Xi && discord.is_some() {
                return Err(usage("`discord` cannot be fixed while sweeping `xi`"));
            }
            if s.variable == SweepVariable::Discord && raw.contains("xi") {
                return Err(usage("`xi` cannot be fixed while sweeping `discord`"));
            }
        }

        let dim = raw.integer::<usize>("dim")?.unwrap_or(FockCutoff::default().dim);
        let guard = raw.integer::<usize>("guard")?.unwrap_or(dim / 4);
        if dim < 4 || guard == 0 || guard >= dim {
            return Err(usage(format!("need dim >= 4 and 0 < guard < dim, got dim = {dim}, guard = {guard}")));
        }
        let samples = raw.integer::<usize>("samples")?.unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(usage("`samples` must be positive"));
        }
        Ok(Self {
            cycle,
            discord,
            sweep,
            cutoff: FockCutoff { dim, guard },
            seed: raw.integer::<u64>("seed")?.unwrap_or(DEFAULT_SEED),
            samples,
        })
    }

    /// The configuration at a single (unswept) point.
    pub fn point(&self) -> Result<CycleConfig, qotto::Error> {
        match self.discord {
            Some(q) => self.cycle.with_discord(q),
            None => Ok(self.cycle),
        }
    }
}
