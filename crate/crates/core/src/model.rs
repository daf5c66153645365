//! Antenna configurations, channel draws and power bookkeeping for the
//! two-transmitter multiple-access channel with passive eavesdroppers.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matlin::{block_diag, CMatrix};
use crate::rng::{cn_matrix, rng_from_seed};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid antenna configuration: {0}")]
    InvalidConfig(String),
    #[error("eavesdropper with {count} antennas exceeds the bound N_E = {max}")]
    InvalidEveCount { count: usize, max: usize },
    #[error("invalid power policy: {0}")]
    InvalidPower(String),
}

/// Antenna counts `(M1, M2, N, N_E)`: the two transmitters, the legitimate
/// receiver, and the largest eavesdropper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AntennaConfig {
    pub m1: usize,
    pub m2: usize,
    pub n: usize,
    pub ne: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Ok,
    /// `N_E >= M1 + M2`: the eavesdropper can resolve every transmit
    /// dimension and nothing can be kept secret.
    Degenerate,
}

impl AntennaConfig {
    pub const fn new(m1: usize, m2: usize, n: usize, ne: usize) -> Self {
        Self { m1, m2, n, ne }
    }

    /// Total transmit antennas `M = M1 + M2`.
    pub fn m(&self) -> usize {
        self.m1 + self.m2
    }

    pub fn validate(&self) -> Result<Validity, ModelError> {
        if self.m1 == 0 || self.m2 == 0 {
            return Err(ModelError::InvalidConfig(format!(
                "transmitters need at least one antenna, got ({}, {})",
                self.m1, self.m2
            )));
        }
        if self.n == 0 {
            return Err(ModelError::InvalidConfig("receiver needs at least one antenna".into()));
        }
        Ok(if self.is_degenerate() { Validity::Degenerate } else { Validity::Ok })
    }

    pub fn is_degenerate(&self) -> bool {
        self.ne >= self.m()
    }

    pub fn is_canonical(&self) -> bool {
        self.m1 >= self.m2
    }

    /// Relabels the transmitters so that `m1 >= m2`. The second value is
    /// true when a swap happened.
    pub fn canonical(&self) -> (Self, bool) {
        if self.is_canonical() {
            (*self, false)
        } else {
            (Self { m1: self.m2, m2: self.m1, ..*self }, true)
        }
    }
}

impl fmt::Display for AntennaConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m1, self.m2, self.n, self.ne)
    }
}

/// Distribution of eavesdropper channel entries. The scheme never uses
/// eavesdropper CSI, so only continuity of the law matters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveDistribution {
    pub mean: f64,
    pub variance: f64,
}

impl Default for EveDistribution {
    fn default() -> Self {
        Self { mean: 0.0, variance: 1.0 }
    }
}

impl EveDistribution {
    pub fn draw<R: rand::Rng + ?Sized>(&self, rows: usize, cols: usize, rng: &mut R) -> CMatrix {
        cn_matrix(rows, cols, Complex64::new(self.mean, 0.0), self.variance, rng)
    }
}

/// Channels from both transmitters to one eavesdropper.
#[derive(Debug, Clone, PartialEq)]
pub struct EveChannel {
    /// `nej x m1`
    pub g1: CMatrix,
    /// `nej x m2`
    pub g2: CMatrix,
}

impl EveChannel {
    pub fn antennas(&self) -> usize {
        self.g1.nrows()
    }

    /// Draws an eavesdropper channel over `extension` consecutive uses. The
    /// entries are time varying, so each use gets an independent block.
    pub fn draw_extended<R: rand::Rng + ?Sized>(
        cfg: &AntennaConfig,
        antennas: usize,
        extension: usize,
        dist: &EveDistribution,
        rng: &mut R,
    ) -> Self {
        let mut g1s = Vec::with_capacity(extension);
        let mut g2s = Vec::with_capacity(extension);
        for _ in 0..extension {
            g1s.push(dist.draw(antennas, cfg.m1, rng));
            g2s.push(dist.draw(antennas, cfg.m2, rng));
        }
        let r1: Vec<&CMatrix> = g1s.iter().collect();
        let r2: Vec<&CMatrix> = g2s.iter().collect();
        Self { g1: block_diag(&r1), g2: block_diag(&r2) }
    }
}

/// One realization of every channel in the network.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `n x m1`
    pub h1: CMatrix,
    /// `n x m2`
    pub h2: CMatrix,
    pub eves: Vec<EveChannel>,
    pub noise_var: f64,
}

/// Draws i.i.d. `CN(0,1)` legitimate channels and one eavesdropper channel
/// pair per entry of `eve_counts`. Deterministic in `seed`.
pub fn sample_channels(
    cfg: &AntennaConfig,
    eve_counts: &[usize],
    noise_var: f64,
    seed: u64,
) -> Result<ChannelRealization, ModelError> {
    sample_channels_with(cfg, eve_counts, noise_var, &EveDistribution::default(), seed)
}

pub fn sample_channels_with(
    cfg: &AntennaConfig,
    eve_counts: &[usize],
    noise_var: f64,
    dist: &EveDistribution,
    seed: u64,
) -> Result<ChannelRealization, ModelError> {
    cfg.validate()?;
    if let Some(&count) = eve_counts.iter().find(|&&c| c > cfg.ne) {
        return Err(ModelError::InvalidEveCount { count, max: cfg.ne });
    }
    if !(noise_var > 0.0 && noise_var.is_finite()) {
        return Err(ModelError::InvalidPower(format!("noise variance {noise_var}")));
    }
    let mut rng = rng_from_seed(seed);
    let zero = Complex64::new(0.0, 0.0);
    let h1 = cn_matrix(cfg.n, cfg.m1, zero, 1.0, &mut rng);
    let h2 = cn_matrix(cfg.n, cfg.m2, zero, 1.0, &mut rng);
    let eves = eve_counts
        .iter()
        .map(|&k| EveChannel::draw_extended(cfg, k, 1, dist, &mut rng))
        .collect();
    Ok(ChannelRealization { h1, h2, eves, noise_var })
}

/// Per-transmitter power budget `P` and the jamming share `alpha`
/// (`P_J = alpha P`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPolicy {
    pub p: f64,
    pub alpha: f64,
}

impl PowerPolicy {
    pub fn new(p: f64, alpha: f64) -> Result<Self, ModelError> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(ModelError::InvalidPower(format!("P must be positive, got {p}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ModelError::InvalidPower(format!("alpha must lie in (0,1), got {alpha}")));
        }
        Ok(Self { p, alpha })
    }

    pub fn jamming_power(&self) -> f64 {
        self.alpha * self.p
    }

    pub fn legitimate_power(&self) -> f64 {
        (1.0 - self.alpha) * self.p
    }
}
