use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simulated annealing: geometric inverse-temperature schedule.
///
/// `None` picks the scale-aware default: `beta_start = 0.1 / mean|Q|`
/// and `beta_end = 10 / min|Q|` over the nonzero entries.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SaParams {
    pub beta_start: Option<f64>,
    pub beta_end: Option<f64>,
}

/// SimCIM amplitude dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimCimParams {
    pub dt: f64,
    pub pump_start: f64,
    pub pump_end: f64,
    /// Coupling gain before normalization by the largest local force bound.
    pub coupling: f64,
    /// Standard deviation of the per-step Gaussian kick.
    pub noise: f64,
    /// Finish the thresholded spins with 1- and 2-flip descent.
    pub polish: bool,
}

impl Default for SimCimParams {
    fn default() -> Self {
        SimCimParams {
            dt: 0.1,
            pump_start: -1.0,
            pump_end: 1.0,
            coupling: 1.0,
            noise: 0.3,
            polish: true,
        }
    }
}

/// Simulated bifurcation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbParams {
    pub dt: f64,
    /// Detuning `Δ`; the pump `a(t)` ramps linearly from 0 to `Δ`.
    pub detuning: f64,
    /// Coupling gain `c₀` before normalization by the largest local force bound.
    pub coupling: f64,
    /// Half-width of the uniform initial positions and momenta.
    pub init_amplitude: f64,
    /// Couple through `sign(x_j)` instead of `x_j` (the discrete variant).
    pub discrete: bool,
    /// Finish the thresholded spins with 1- and 2-flip descent.
    pub polish: bool,
}

impl Default for SbParams {
    fn default() -> Self {
        SbParams {
            dt: 0.5,
            detuning: 1.0,
            coupling: 1.0,
            init_amplitude: 0.1,
            discrete: true,
            polish: true,
        }
    }
}

/// Settings shared by every solver plus the per-algorithm knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub seed: u64,
    /// Sweeps (SA) or integration steps (SimCIM, SB) per attempt.
    pub iterations: usize,
    pub attempts: usize,
    pub sa: SaParams,
    pub simcim: SimCimParams,
    pub sb: SbParams,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            seed: 0,
            iterations: 1000,
            attempts: 100,
            sa: SaParams::default(),
            simcim: SimCimParams::default(),
            sb: SbParams::default(),
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "auto".to_string(), |x| x.to_string())
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::input("iterations must be at least 1"));
        }
        if self.attempts == 0 {
            return Err(Error::input("attempts must be at least 1"));
        }
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::input(format!("{name} must be positive, got {v}")))
            }
        };
        positive("simcim.dt", self.simcim.dt)?;
        positive("sb.dt", self.sb.dt)?;
        positive("sb.detuning", self.sb.detuning)?;
        if self.simcim.noise < 0.0 || self.sb.init_amplitude < 0.0 {
            return Err(Error::input("noise and initial amplitude must be non-negative"));
        }
        for (name, beta) in [
            ("sa.beta_start", self.sa.beta_start),
            ("sa.beta_end", self.sa.beta_end),
        ] {
            if let Some(b) = beta {
                positive(name, b)?;
            }
        }
        Ok(())
    }

    /// Every setting as `(key, value)` in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("seed", self.seed.to_string()),
            ("iterations", self.iterations.to_string()),
            ("attempts", self.attempts.to_string()),
            ("sa.beta_start", fmt_opt(self.sa.beta_start)),
            ("sa.beta_end", fmt_opt(self.sa.beta_end)),
            ("simcim.dt", self.simcim.dt.to_string()),
            ("simcim.pump_start", self.simcim.pump_start.to_string()),
            ("simcim.pump_end", self.simcim.pump_end.to_string()),
            ("simcim.coupling", self.simcim.coupling.to_string()),
            ("simcim.noise", self.simcim.noise.to_string()),
            ("simcim.polish", self.simcim.polish.to_string()),
            ("sb.dt", self.sb.dt.to_string()),
            ("sb.detuning", self.sb.detuning.to_string()),
            ("sb.coupling", self.sb.coupling.to_string()),
            ("sb.init_amplitude", self.sb.init_amplitude.to_string()),
            ("sb.discrete", self.sb.discrete.to_string()),
            ("sb.polish", self.sb.polish.to_string()),
        ]
    }

    /// Sets one key; `auto` clears an optional setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::input(format!("{key}: cannot parse {value:?}")))
        }
        fn opt(key: &str, value: &str) -> Result<Option<f64>> {
            if value == "auto" {
                Ok(None)
            } else {
                num(key, value).map(Some)
            }
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "iterations" => self.iterations = num(key, value)?,
            "attempts" => self.attempts = num(key, value)?,
            "sa.beta_start" => self.sa.beta_start = opt(key, value)?,
            "sa.beta_end" => self.sa.beta_end = opt(key, value)?,
            "simcim.dt" => self.simcim.dt = num(key, value)?,
            "simcim.pump_start" => self.simcim.pump_start = num(key, value)?,
            "simcim.pump_end" => self.simcim.pump_end = num(key, value)?,
            "simcim.coupling" => self.simcim.coupling = num(key, value)?,
            "simcim.noise" => self.simcim.noise = num(key, value)?,
            "simcim.polish" => self.simcim.polish = num(key, value)?,
            "sb.dt" => self.sb.dt = num(key, value)?,
            "sb.detuning" => self.sb.detuning = num(key, value)?,
            "sb.coupling" => self.sb.coupling = num(key, value)?,
            "sb.init_amplitude" => self.sb.init_amplitude = num(key, value)?,
            "sb.discrete" => self.sb.discrete = num(key, value)?,
            "sb.polish" => self.sb.polish = num(key, value)?,
            _ => return Err(Error::input(format!("unknown solver setting {key:?}"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#` comments are skipped.
    pub fn merge_kv(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::input(format!("line {}: expected key = value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn from_kv(text: &str) -> Result<Self> {
        let mut cfg = SolverConfig::default();
        cfg.merge_kv(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_kv(&text).map_err(|e| Error::parse(path, e))
    }

    pub fn to_kv(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}

impl fmt::Display for SolverConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_kv())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip() {
        let mut cfg = SolverConfig { seed: 42, ..Default::default() };
        cfg.sa.beta_end = Some(3.5);
        cfg.sb.dt = 0.25;
        cfg.sb.discrete = false;
        assert_eq!(SolverConfig::from_kv(&cfg.to_kv()).unwrap(), cfg);
    }

    #[test]
    fn comments_and_auto() {
        let cfg = SolverConfig::from_kv("# tuned\nattempts = 7\nsa.beta_start = auto # default\n").unwrap();
        assert_eq!(cfg.attempts, 7);
        assert_eq!(cfg.sa.beta_start, None);
    }

    #[test]
    fn rejects_bad_settings() {
        assert!(SolverConfig::from_kv("iterations = 0").is_err());
        assert!(SolverConfig::from_kv("attempts = 0").is_err());
        assert!(SolverConfig::from_kv("sb.dt = 0").is_err());
        assert!(SolverConfig::from_kv("simcim.dt = -1").is_err());
        assert!(SolverConfig::from_kv("bogus = 1").is_err());
        assert!(SolverConfig::from_kv("seed 3").is_err());
        assert!(SolverConfig::from_kv("seed = x").is_err());
        assert!(SolverConfig::from_kv("sb.polish = yes").is_err());
    }
}
