use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use sdof_core::binning::{secrecy_trend, MAX_ENUMERATION_LENGTH};
use sdof_core::rates::{sweep, RateError};
use sdof_core::regions::{
    classify_case, jamming_plan, plan_is_feasible, sum_sdof, upper_bound, upper_bound_terms, verify_plan_arithmetic,
};
use sdof_core::{AntennaConfig, Rational, TrendParams, Validity};

use crate::config::ExperimentConfig;

/// Largest antenna count `grid-verify` accepts.
pub const MAX_GRID: usize = 10;

pub const GRID_HEADER: &str = "m1,m2,n,ne,case,ds_num,ds_den,bound1,bound2,bound3,plan_ok";
pub const RATE_HEADER: &str = "p,rate_rx,leak_max,secrecy";
pub const BINNING_HEADER: &str = "n,seed,equivocation,normalized";

/// How a command ended when it did not hit an input error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    VerificationFailed,
}

/// Overrides shared by the subcommands.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub alpha: Option<f64>,
    pub out: Option<PathBuf>,
    pub no_jamming: bool,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn decimal(r: Rational) -> String {
    format!("{}", *r.numer() as f64 / *r.denom() as f64)
}

pub fn sdof(cfg: AntennaConfig) -> Result<(String, Status)> {
    if cfg.validate()? == Validity::Degenerate {
        return Ok(("D_s = 0 (degenerate: N_E ≥ M)\n".into(), Status::Ok));
    }
    let ds = sum_sdof(&cfg)?;
    let case = classify_case(&cfg)?;
    let (b1, b2, b3) = upper_bound_terms(&cfg)?;
    let plan = jamming_plan(&cfg)?;
    let mut s = format!(
        "D_s = {ds}, case {}, bounds ({}, {}, {})\n",
        case.region(),
        decimal(b1),
        decimal(b2),
        decimal(b3)
    );
    writeln!(
        s,
        "construction {case}, extension {}, streams ({}, {}), receiver jamming dims {}",
        plan.extension, plan.d1, plan.d2, plan.j_s
    )?;
    let status = if ds == upper_bound(&cfg)? { Status::Ok } else { Status::VerificationFailed };
    Ok((s, status))
}

/// One grid row plus whether it is consistent.
fn grid_row(cfg: &AntennaConfig) -> Result<(String, bool)> {
    let ds = sum_sdof(cfg)?;
    let case = classify_case(cfg)?;
    let (b1, b2, b3) = upper_bound_terms(cfg)?;
    let plan = jamming_plan(cfg)?;
    let plan_ok = verify_plan_arithmetic(cfg, &plan) && plan_is_feasible(&plan);
    let ok = plan_ok && ds == b1.min(b2).min(b3);
    let row = format!(
        "{},{},{},{},{case},{},{},{b1},{b2},{b3},{plan_ok}\n",
        cfg.m1,
        cfg.m2,
        cfg.n,
        cfg.ne,
        ds.numer(),
        ds.denom()
    );
    Ok((row, ok))
}

/// Canonical, non-degenerate configurations with every antenna count at
/// most `max`.
pub fn grid_configs(max: usize) -> Vec<AntennaConfig> {
    let mut out = Vec::new();
    for m1 in 1..=max {
        for m2 in 1..=m1 {
            for n in 1..=max {
                for ne in 0..m1 + m2 {
                    out.push(AntennaConfig::new(m1, m2, n, ne));
                }
            }
        }
    }
    out
}

pub fn grid_verify(max: usize, ov: &Overrides) -> Result<Status> {
    if max > MAX_GRID {
        bail!("grid-verify supports at most {MAX_GRID} antennas, got {max}");
    }
    let configs = grid_configs(max);
    let mut csv = format!("{GRID_HEADER}\n");
    let mut violations = Vec::new();
    for cfg in &configs {
        let (row, ok) = grid_row(cfg)?;
        csv.push_str(&row);
        if !ok {
            violations.push(*cfg);
        }
    }
    emit(ov.out.as_deref(), &csv)?;
    if violations.is_empty() {
        eprintln!("all {} configs consistent", configs.len());
        Ok(Status::Ok)
    } else {
        eprintln!("{} of {} configs inconsistent:", violations.len(), configs.len());
        for v in &violations {
            eprintln!("  {v}");
        }
        Ok(Status::VerificationFailed)
    }
}

#[derive(Debug, Serialize)]
pub struct SimulationSummary {
    pub slope: f64,
    pub ds_theory: f64,
    pub abs_error: f64,
    /// Worst-eavesdropper leakage at the largest grid power minus that at
    /// the smallest.
    pub leakage_delta: f64,
}

/// Path of the JSON summary written next to a rate table.
pub fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

pub fn simulate(config_path: &Path, ov: &Overrides) -> Result<Status> {
    let mut exp = ExperimentConfig::load(config_path)?;
    if let Some(s) = ov.seed {
        exp.seed = s;
    }
    if let Some(t) = ov.trials {
        exp.trials = t;
    }
    if let Some(a) = ov.alpha {
        exp.alpha = a;
    }
    if ov.no_jamming {
        exp.jamming = false;
    }
    if let Some(o) = &ov.out {
        exp.output_path = Some(o.clone());
    }
    exp.validate()?;
    let out = exp.output_path.clone().ok_or_else(|| anyhow!("no output_path in config and no --out given"))?;

    let cfg = exp.antennas();
    let curve = match sweep(&cfg, &exp.settings(), &exp.p_grid, exp.trials, exp.seed) {
        Ok(c) => c,
        Err(e @ RateError::GeometryNotVerified(_)) => {
            eprintln!("precoder geometry check failed: {e}");
            return Ok(Status::VerificationFailed);
        }
        Err(RateError::Trial { trial, source }) if matches!(*source, RateError::GeometryNotVerified(_)) => {
            eprintln!("precoder geometry check failed in trial {trial}: {source}");
            return Ok(Status::VerificationFailed);
        }
        Err(e) => return Err(e.into()),
    };

    let mut csv = format!("{RATE_HEADER}\n");
    for pt in &curve.points {
        writeln!(csv, "{},{},{},{}", pt.p, pt.rate_rx, pt.leak_max, pt.secrecy)?;
    }
    let ds = sum_sdof(&cfg)?;
    let ds_theory = *ds.numer() as f64 / *ds.denom() as f64;
    let leakage_delta = match (curve.points.first(), curve.points.last()) {
        (Some(a), Some(b)) => b.leak_max - a.leak_max,
        _ => 0.0,
    };
    let summary = SimulationSummary { slope: curve.slope, ds_theory, abs_error: (curve.slope - ds_theory).abs(), leakage_delta };
    let json = serde_json::to_string_pretty(&summary)? + "\n";

    emit(Some(&out), &csv)?;
    emit(Some(&summary_path(&out)), &json)?;
    emit(None, &json)?;
    Ok(Status::Ok)
}

pub struct BinningArgs {
    pub n_list: Vec<usize>,
    pub delta: f64,
    pub rate_total: f64,
    pub rate_secret: f64,
    pub seeds: usize,
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn binning(args: &BinningArgs, ov: &Overrides) -> Result<Status> {
    if let Some(&n) = args.n_list.iter().find(|&&n| n > MAX_ENUMERATION_LENGTH) {
        bail!("block length {n} exceeds the enumeration budget of {MAX_ENUMERATION_LENGTH}");
    }
    if args.seeds == 0 {
        bail!("need at least one code seed");
    }
    let base = ov.seed.unwrap_or(0);
    let seeds: Vec<u64> = (0..args.seeds as u64).map(|k| base + k).collect();
    let params = TrendParams { rate_total: args.rate_total, rate_secret: args.rate_secret, delta: args.delta };
    let trend = secrecy_trend(&params, &args.n_list, &seeds)?;

    let mut csv = format!("{BINNING_HEADER}\n");
    for entry in &trend {
        for &(seed, h, norm) in &entry.per_seed {
            writeln!(csv, "{},{seed},{h},{}", entry.n, opt(norm))?;
        }
        let mean_h = entry.per_seed.iter().map(|s| s.1).sum::<f64>() / entry.per_seed.len() as f64;
        writeln!(csv, "{},mean,{mean_h},{}", entry.n, opt(entry.mean_normalized))?;
        if let Some(note) = &entry.note {
            eprintln!("n = {}: {note}", entry.n);
        }
    }
    emit(ov.out.as_deref(), &csv)?;
    Ok(Status::Ok)
}
