//! Gaussian mutual information at the receiver and the eavesdroppers,
//! power sweeps, and empirical SDoF by slope fitting.
//!
//! Rates are in bits per channel use. A complex stream carries `log2 P`
//! bits per use at high SNR, so the empirical SDoF is the slope of the
//! secrecy rate against `log2 P`.
//!
//! Power accounting: each transmitter spends `(1 - alpha) P` per use on its
//! legitimate streams and `alpha P` on its jamming columns, split equally.
//! Over an extended block of `e` uses that is `e` times the per-use energy.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matlin::{lift, logdet_hpd, CMatrix, MatError};
use crate::model::{AntennaConfig, ChannelRealization, EveChannel, EveDistribution, ModelError, PowerPolicy};
use crate::precoders::{build_precoders, verify_geometry, GeometryReport, PrecoderError, PrecoderSet};
use crate::regions::{jamming_plan, JammingPlan, RegionError};
use crate::rng::{derive_seed, rng_from_seed, standard_cn};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RateError {
    #[error("precoder geometry not verified: {0:?}")]
    GeometryNotVerified(Box<GeometryReport>),
    #[error("invalid power grid: {0}")]
    InvalidGrid(String),
    #[error("no eavesdropper with index {0}")]
    NoSuchEavesdropper(usize),
    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: Box<RateError> },
    #[error(transparent)]
    Linear(#[from] MatError),
    #[error(transparent)]
    Precoder(#[from] PrecoderError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// How eavesdroppers perceive the jamming columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum JammingMode {
    /// Jamming is noise to every eavesdropper.
    #[default]
    Enabled,
    /// Negative control: the jamming directions carry eavesdropper-visible
    /// symbols, so the full transmit space leaks.
    Disabled,
}

/// `I(S; S + J + noise)` in bits for Gaussian signal covariance `signal`,
/// interference covariance `interference`, white noise of variance
/// `noise_var`.
pub fn gaussian_mi_bits(signal: &CMatrix, interference: &CMatrix, noise_var: f64) -> Result<f64, MatError> {
    let k = signal.nrows();
    if k == 0 {
        return Ok(0.0);
    }
    let base = CMatrix::identity(k, k) * num_complex::Complex64::new(noise_var, 0.0) + interference;
    let total = &base + signal;
    let nats = logdet_hpd(&total)? - logdet_hpd(&base)?;
    Ok((nats / std::f64::consts::LN_2).max(0.0))
}

/// Covariance `A diag(p) A^H` for equal per-column power `p`.
fn covariance(a: &CMatrix, per_column: f64) -> CMatrix {
    let k = a.nrows();
    if a.ncols() == 0 || per_column == 0.0 {
        return CMatrix::zeros(k, k);
    }
    a * a.adjoint() * num_complex::Complex64::new(per_column, 0.0)
}

fn per_column(energy: f64, cols: usize) -> f64 {
    if cols == 0 { 0.0 } else { energy / cols as f64 }
}

/// Per-column powers over one extended block: `(legit_i, jam_i)` for each
/// transmitter.
fn block_powers(plan: &JammingPlan, pol: &PowerPolicy) -> [(f64, f64); 2] {
    let e = plan.extension as f64;
    [1, 2].map(|tx| {
        (
            per_column(e * pol.legitimate_power(), plan.streams(tx)),
            per_column(e * pol.jamming_power(), plan.jam_dims(tx)),
        )
    })
}

/// Receiver sum rate after zero-forcing, skipping the geometry check.
fn receiver_rate_unchecked(
    ps: &PrecoderSet,
    plan: &JammingPlan,
    h1: &CMatrix,
    h2: &CMatrix,
    noise_var: f64,
    pol: &PowerPolicy,
) -> Result<f64, MatError> {
    let e = plan.extension;
    let pw = block_powers(plan, pol);
    let ht = [lift(h1, e), lift(h2, e)];
    let mut signal = CMatrix::zeros(ps.u.nrows(), ps.u.nrows());
    let mut residual = signal.clone();
    for tx in 0..2 {
        let uh = &ps.u * &ht[tx];
        signal += covariance(&(&uh * ps.legit(tx + 1)), pw[tx].0);
        // Whatever jamming survives zero-forcing is treated as noise.
        residual += covariance(&(&uh * ps.jamming(tx + 1)), pw[tx].1);
    }
    Ok(gaussian_mi_bits(&signal, &residual, noise_var)? / e as f64)
}

/// Legitimate sum rate in bits per use, jointly decoding both transmitters'
/// streams after the zero-forcing projection.
pub fn receiver_rate(
    ps: &PrecoderSet,
    plan: &JammingPlan,
    ch: &ChannelRealization,
    pol: &PowerPolicy,
) -> Result<f64, RateError> {
    let report = verify_geometry(ps, &ch.h1, &ch.h2, plan)?;
    if !report.pass {
        return Err(RateError::GeometryNotVerified(Box::new(report)));
    }
    Ok(receiver_rate_unchecked(ps, plan, &ch.h1, &ch.h2, ch.noise_var, pol)?)
}

/// Eavesdropper information rate in bits per use, for a channel already
/// lifted to the plan's extension.
pub fn leakage_extended(
    ps: &PrecoderSet,
    plan: &JammingPlan,
    eve: &EveChannel,
    noise_var: f64,
    pol: &PowerPolicy,
    mode: JammingMode,
) -> Result<f64, MatError> {
    let pw = block_powers(plan, pol);
    let g = [&eve.g1, &eve.g2];
    let k = eve.g1.nrows();
    let mut legit = CMatrix::zeros(k, k);
    let mut jam = CMatrix::zeros(k, k);
    for tx in 0..2 {
        legit += covariance(&(g[tx] * ps.legit(tx + 1)), pw[tx].0);
        jam += covariance(&(g[tx] * ps.jamming(tx + 1)), pw[tx].1);
    }
    let bits = match mode {
        JammingMode::Enabled => gaussian_mi_bits(&legit, &jam, noise_var)?,
        JammingMode::Disabled => gaussian_mi_bits(&(legit + jam), &CMatrix::zeros(k, k), noise_var)?,
    };
    Ok(bits / plan.extension as f64)
}

/// Leakage to eavesdropper `eve_index` of a realization. The per-use
/// eavesdropper channel is held fixed across the extended block. For plans
/// with `extension > 1` this defeats the aligned jamming, so leakage grows
/// with `P`; the sweeps draw a fresh channel per use instead.
pub fn eavesdropper_leakage(
    ps: &PrecoderSet,
    plan: &JammingPlan,
    ch: &ChannelRealization,
    pol: &PowerPolicy,
    eve_index: usize,
    mode: JammingMode,
) -> Result<f64, RateError> {
    let eve = ch.eves.get(eve_index).ok_or(RateError::NoSuchEavesdropper(eve_index))?;
    let e = plan.extension;
    let lifted = EveChannel { g1: lift(&eve.g1, e), g2: lift(&eve.g2, e) };
    Ok(leakage_extended(ps, plan, &lifted, ch.noise_var, pol, mode)?)
}

/// Least-squares fit `r = slope * log2(p) + intercept`.
pub fn fit_slope(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    if points.len() < 2 {
        return (0.0, points.first().map_or(0.0, |p| p.1));
    }
    let xs: Vec<f64> = points.iter().map(|(p, _)| p.log2()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = points.iter().map(|(_, r)| r).sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(points).map(|(x, (_, r))| (x - mx) * (r - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub p: f64,
    /// Mean legitimate sum rate.
    pub rate_rx: f64,
    /// Mean over draws of the worst eavesdropper's leakage.
    pub leak_max: f64,
    /// Mean of `rate_rx - leak_max`.
    pub secrecy: f64,
}

/// Secrecy rate against power with its `log2 P` slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub points: Vec<CurvePoint>,
    pub slope: f64,
    pub intercept: f64,
}

/// Knobs shared by the Monte-Carlo estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub alpha: f64,
    pub mode: JammingMode,
    /// Antenna counts of the eavesdroppers; empty means one with `N_E`.
    pub eve_counts: Vec<usize>,
    pub eve_dist: EveDistribution,
    /// Fresh eavesdropper draws per trial.
    pub eve_draws: usize,
    pub noise_var: f64,
}

impl Default for SweepSettings {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            mode: JammingMode::Enabled,
            eve_counts: Vec::new(),
            eve_dist: EveDistribution::default(),
            eve_draws: 5,
            noise_var: 1.0,
        }
    }
}

impl SweepSettings {
    fn eves_for(&self, cfg: &AntennaConfig) -> Result<Vec<usize>, RateError> {
        if self.eve_counts.is_empty() {
            return Ok(vec![cfg.ne]);
        }
        if let Some(&count) = self.eve_counts.iter().find(|&&c| c > cfg.ne) {
            return Err(ModelError::InvalidEveCount { count, max: cfg.ne }.into());
        }
        Ok(self.eve_counts.clone())
    }
}

/// Rates of one trial at every grid power.
struct TrialRates {
    rate_rx: Vec<f64>,
    /// `leak[k][j]`: mean over draws of eavesdropper `j`'s leakage at power `k`.
    leak: Vec<Vec<f64>>,
    /// Mean over draws of the per-draw worst leakage.
    leak_max: Vec<f64>,
}

/// One Monte-Carlo trial: a legitimate channel draw, the precoders built on
/// it, and `eve_draws` fresh draws of every eavesdropper.
fn run_trial(
    plan: &JammingPlan,
    settings: &SweepSettings,
    eves: &[usize],
    powers: &[f64],
    seed: u64,
) -> Result<TrialRates, RateError> {
    let cfg = plan.config;
    let e = plan.extension;
    let mut rng = rng_from_seed(derive_seed(seed, 10, 0));
    let h1 = standard_cn(cfg.n, cfg.m1, &mut rng);
    let h2 = standard_cn(cfg.n, cfg.m2, &mut rng);
    let ps = build_precoders(plan, &h1, &h2, derive_seed(seed, 11, 0))?;
    let report = verify_geometry(&ps, &h1, &h2, plan)?;
    if !report.pass {
        return Err(RateError::GeometryNotVerified(Box::new(report)));
    }

    let mut eve_rng = rng_from_seed(derive_seed(seed, 12, 0));
    let draws: Vec<Vec<EveChannel>> = (0..settings.eve_draws)
        .map(|_| {
            eves.iter()
                .map(|&k| EveChannel::draw_extended(&cfg, k, e, &settings.eve_dist, &mut eve_rng))
                .collect()
        })
        .collect();

    let mut out = TrialRates { rate_rx: Vec::new(), leak: Vec::new(), leak_max: Vec::new() };
    for &p in powers {
        let pol = PowerPolicy::new(p, settings.alpha)?;
        out.rate_rx.push(receiver_rate_unchecked(&ps, plan, &h1, &h2, settings.noise_var, &pol)?);
        let mut per_eve = vec![0.0; eves.len()];
        let mut worst = 0.0;
        for draw in &draws {
            let mut m: f64 = 0.0;
            for (j, eve) in draw.iter().enumerate() {
                let l = leakage_extended(&ps, plan, eve, settings.noise_var, &pol, settings.mode)?;
                per_eve[j] += l;
                m = m.max(l);
            }
            worst += m;
        }
        let nd = settings.eve_draws.max(1) as f64;
        out.leak.push(per_eve.into_iter().map(|x| x / nd).collect());
        out.leak_max.push(worst / nd);
    }
    Ok(out)
}

/// Runs `trials` independent trials, possibly in parallel, and returns them
/// in trial order.
fn run_trials(
    plan: &JammingPlan,
    settings: &SweepSettings,
    eves: &[usize],
    powers: &[f64],
    trials: usize,
    seed: u64,
) -> Result<Vec<TrialRates>, RateError> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            run_trial(plan, settings, eves, powers, derive_seed(seed, 0, t as u64))
                .map_err(|e| RateError::Trial { trial: t, source: Box::new(e) })
        })
        .collect()
}

fn check_grid(p_grid: &[f64]) -> Result<(), RateError> {
    if p_grid.len() < 4 {
        return Err(RateError::InvalidGrid(format!("need at least 4 powers, got {}", p_grid.len())));
    }
    if p_grid.iter().any(|p| !(*p > 0.0 && p.is_finite())) {
        return Err(RateError::InvalidGrid("powers must be positive and finite".into()));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(RateError::InvalidGrid("powers must be strictly increasing".into()));
    }
    if p_grid[p_grid.len() - 1] / p_grid[0] < 1e4 * (1.0 - 1e-12) {
        return Err(RateError::InvalidGrid("grid must span at least 4 decades".into()));
    }
    Ok(())
}

/// Monte-Carlo secrecy-rate curve over `p_grid` and its slope against
/// `log2 P`. Deterministic in `seed` regardless of thread count.
pub fn sweep(
    cfg: &AntennaConfig,
    settings: &SweepSettings,
    p_grid: &[f64],
    trials: usize,
    seed: u64,
) -> Result<RateCurve, RateError> {
    check_grid(p_grid)?;
    let plan = match jamming_plan(cfg) {
        Ok(p) => p,
        Err(RegionError::DegenerateConfig(_)) => {
            let points = p_grid
                .iter()
                .map(|&p| CurvePoint { p, rate_rx: 0.0, leak_max: 0.0, secrecy: 0.0 })
                .collect();
            return Ok(RateCurve { points, slope: 0.0, intercept: 0.0 });
        }
        Err(e) => return Err(e.into()),
    };
    let eves = settings.eves_for(&plan.config)?;
    let results = run_trials(&plan, settings, &eves, p_grid, trials, seed)?;

    let nt = trials.max(1) as f64;
    let points: Vec<CurvePoint> = p_grid
        .iter()
        .enumerate()
        .map(|(k, &p)| {
            // Summed in trial order so the result does not depend on scheduling.
            let rate_rx = results.iter().map(|r| r.rate_rx[k]).sum::<f64>() / nt;
            let leak_max = results.iter().map(|r| r.leak_max[k]).sum::<f64>() / nt;
            CurvePoint { p, rate_rx, leak_max, secrecy: rate_rx - leak_max }
        })
        .collect();
    let fit: Vec<(f64, f64)> = points.iter().map(|pt| (pt.p, pt.secrecy)).collect();
    let (slope, intercept) = fit_slope(&fit);
    Ok(RateCurve { points, slope, intercept })
}

/// Growth of mean leakage between `p_lo` and `p_hi`, worst eavesdropper.
/// Averages over `trials * settings.eve_draws` eavesdropper draws.
pub fn leakage_saturation(
    cfg: &AntennaConfig,
    settings: &SweepSettings,
    p_lo: f64,
    p_hi: f64,
    trials: usize,
    seed: u64,
) -> Result<f64, RateError> {
    if !(p_lo > 0.0 && p_hi >= 100.0 * p_lo) {
        return Err(RateError::InvalidGrid(format!("need p_hi >= 100 p_lo, got {p_lo}, {p_hi}")));
    }
    let plan = match jamming_plan(cfg) {
        Ok(p) => p,
        Err(RegionError::DegenerateConfig(_)) => return Ok(0.0),
        Err(e) => return Err(e.into()),
    };
    let eves = settings.eves_for(&plan.config)?;
    if eves.iter().all(|&k| k == 0) {
        return Ok(0.0);
    }
    let results = run_trials(&plan, settings, &eves, &[p_lo, p_hi], trials, seed)?;
    let nt = trials.max(1) as f64;
    let delta = (0..eves.len())
        .map(|j| results.iter().map(|r| r.leak[1][j] - r.leak[0][j]).sum::<f64>() / nt)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(delta)
}
