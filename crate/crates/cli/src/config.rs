//! Experiment description read by `simulate`.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use sdof_core::{AntennaConfig, EveDistribution, JammingMode, SweepSettings};

/// JSON schema of a `simulate` run. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub m1: usize,
    pub m2: usize,
    pub n: usize,
    pub ne: usize,
    /// Antennas per eavesdropper; defaults to a single one with `ne`.
    #[serde(default)]
    pub eve_counts: Vec<usize>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_p_grid")]
    pub p_grid: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub eve_mean: f64,
    #[serde(default = "default_variance")]
    pub eve_variance: f64,
    #[serde(default = "default_eve_draws")]
    pub eve_draws: usize,
    #[serde(default = "default_jamming")]
    pub jamming: bool,
}

fn default_alpha() -> f64 {
    0.5
}

pub fn default_p_grid() -> Vec<f64> {
    (3..=9).map(|k| 10f64.powi(k)).collect()
}

fn default_trials() -> usize {
    20
}

fn default_variance() -> f64 {
    1.0
}

fn default_eve_draws() -> usize {
    5
}

fn default_jamming() -> bool {
    true
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        Ok(cfg)
    }

    pub fn antennas(&self) -> AntennaConfig {
        AntennaConfig::new(self.m1, self.m2, self.n, self.ne)
    }

    pub fn validate(&self) -> Result<()> {
        self.antennas().validate()?;
        if self.p_grid.windows(2).any(|w| w[1] <= w[0]) {
            bail!("p_grid must be strictly increasing");
        }
        if self.trials == 0 {
            bail!("trials must be positive");
        }
        if self.eve_draws == 0 {
            bail!("eve_draws must be positive");
        }
        if !(self.eve_variance > 0.0 && self.eve_variance.is_finite() && self.eve_mean.is_finite()) {
            bail!("eavesdropper distribution needs a finite mean and positive variance");
        }
        if let Some(&k) = self.eve_counts.iter().find(|&&k| k > self.ne) {
            bail!("eavesdropper with {k} antennas exceeds ne = {}", self.ne);
        }
        Ok(())
    }

    pub fn settings(&self) -> SweepSettings {
        SweepSettings {
            alpha: self.alpha,
            mode: if self.jamming { JammingMode::Enabled } else { JammingMode::Disabled },
            eve_counts: self.eve_counts.clone(),
            eve_dist: EveDistribution { mean: self.eve_mean, variance: self.eve_variance },
            eve_draws: self.eve_draws,
            ..SweepSettings::default()
        }
    }
}
