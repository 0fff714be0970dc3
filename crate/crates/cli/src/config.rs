//! JSON experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};

use qbatt::engines::{Scenario, MAX_EN_ATOMS};
use qbatt::model::derive_params;
use qbatt::{ModelParams, RawParams};
use serde::Deserialize;

use crate::CliError;

pub const NMAX_OVERRIDE_VAR: &str = "QBATT_NMAX_OVERRIDE";

/// Fock levels kept above the chain length when `n_max` is not given.
pub const DEFAULT_NMAX_MARGIN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ScenarioChoice {
    #[serde(rename = "NC")]
    Uncorrelated,
    #[serde(rename = "CC")]
    ClassicallyCorrelated,
    #[serde(rename = "EN")]
    Entangled,
    #[serde(rename = "all")]
    All,
}

impl ScenarioChoice {
    pub fn scenarios(self) -> Vec<Scenario> {
        match self {
            Self::Uncorrelated => vec![Scenario::Uncorrelated],
            Self::ClassicallyCorrelated => vec![Scenario::ClassicallyCorrelated],
            Self::Entangled => vec![Scenario::Entangled],
            Self::All => Scenario::ALL.to_vec(),
        }
    }
}

/// Model inputs in any consistent frequency unit. Missing keys take the
/// reference values (ω_m/2π = 1 THz, ω_q = 0.99 ω_m, Ω_L/g_q = 30,
/// Δ/2π = 1 MHz, g_q = Δ/600, N = 1).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub omega_m: f64,
    pub omega_q: f64,
    pub drive_ratio: f64,
    pub delta: f64,
    pub g_q: f64,
    pub n_select: u32,
    /// Defaults to `K + 20`.
    pub n_max: Option<usize>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let r = RawParams::reference(1.0, 1);
        Self {
            omega_m: r.omega_m,
            omega_q: r.omega_q,
            drive_ratio: r.drive_ratio,
            delta: r.delta,
            g_q: r.g_q,
            n_select: r.n_select,
            n_max: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioChoice,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "T_bar")]
    pub t_bar: Vec<f64>,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Seed for the randomized parts of `check`.
    #[serde(default)]
    pub seed: u64,
    /// Write a population snapshot every this many collisions (0 = never).
    #[serde(default)]
    pub snapshot_every: usize,
    /// Extra collision indices to snapshot.
    #[serde(default)]
    pub snapshots: Vec<usize>,
}

fn default_output() -> PathBuf {
    PathBuf::from("qbatt-out")
}

/// One scenario at one temperature.
#[derive(Debug, Clone)]
pub struct RunPoint {
    pub scenario: Scenario,
    pub k: usize,
    pub params: ModelParams,
}

impl fmt::Display for RunPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        write!(
            f,
            "scenario={} K={} T_bar={} n_max={} omega_q={} delta={} g_q={} r={} N={}",
            self.scenario,
            self.k,
            p.t_bar(),
            p.n_max(),
            p.omega_q(),
            p.delta(),
            p.g_q(),
            p.r(),
            p.n_select()
        )
    }
}

impl ExperimentConfig {
    /// Five collisions at T̄ = 0.01 with the reference model.
    pub fn desk_default() -> Self {
        Self {
            scenario: ScenarioChoice::All,
            k: 5,
            t_bar: vec![0.01],
            model: ModelConfig::default(),
            output: default_output(),
            seed: 0,
            snapshot_every: 0,
            snapshots: Vec::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.k == 0 {
            return Err(CliError::Config("field `K`: must be at least 1".into()));
        }
        if self.scenario.scenarios().contains(&Scenario::Entangled) && self.k > MAX_EN_ATOMS {
            return Err(CliError::Config(format!(
                "field `K`: the EN scenario supports at most {MAX_EN_ATOMS} atoms, got {}",
                self.k
            )));
        }
        if self.t_bar.is_empty() {
            return Err(CliError::Config("field `T_bar`: needs at least one temperature".into()));
        }
        if let Some(t) = self.t_bar.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(CliError::Config(format!(
                "field `T_bar`: temperatures must be positive, got {t}"
            )));
        }
        if let Some(s) = self.snapshots.iter().find(|&&s| s == 0 || s > self.k) {
            return Err(CliError::Config(format!(
                "field `snapshots`: collision index {s} outside 1..={}",
                self.k
            )));
        }
        Ok(())
    }

    /// Fock cutoff after applying the environment override.
    pub fn n_max(&self) -> Result<usize, CliError> {
        match std::env::var(NMAX_OVERRIDE_VAR) {
            Ok(v) => v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| {
                CliError::Config(format!("{NMAX_OVERRIDE_VAR}: expected a positive integer, got {v:?}"))
            }),
            Err(_) => Ok(self.model.n_max.unwrap_or(self.k + DEFAULT_NMAX_MARGIN)),
        }
    }

    pub fn params(&self, t_bar: f64) -> Result<ModelParams, CliError> {
        let m = &self.model;
        let raw = RawParams {
            omega_m: m.omega_m,
            omega_q: m.omega_q,
            drive_ratio: m.drive_ratio,
            delta: m.delta,
            g_q: m.g_q,
            t_bar,
            n_select: m.n_select,
            n_max: self.n_max()?,
        };
        derive_params(&raw).map_err(|e| CliError::Config(format!("field `model`: {e}")))
    }

    /// Scenario-major list of runs.
    pub fn points(&self) -> Result<Vec<RunPoint>, CliError> {
        let mut out = Vec::new();
        for scenario in self.scenario.scenarios() {
            for &t in &self.t_bar {
                out.push(RunPoint {
                    scenario,
                    k: self.k,
                    params: self.params(t)?,
                });
            }
        }
        Ok(out)
    }

    pub fn snapshot_indices(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = self.snapshots.clone();
        if self.snapshot_every > 0 {
            idx.extend((self.snapshot_every..=self.k).step_by(self.snapshot_every));
        }
        idx.sort_unstable();
        idx.dedup();
        idx
    }
}
