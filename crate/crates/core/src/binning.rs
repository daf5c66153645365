//! Desk-scale Wyner random-binning wiretap code over bits.
//!
//! The main channel is noiseless and the eavesdropper sees each bit through
//! an erasure channel, so the equivocation `H(W | Z)` can be computed
//! exactly by enumerating erasure patterns.

use std::collections::HashMap;

use rand::seq::index::sample;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::{rng_from_seed, SimRng};

/// Longest block the codebook builder accepts.
pub const MAX_CODE_LENGTH: usize = 16;
/// Longest block for which equivocation is enumerated.
pub const MAX_ENUMERATION_LENGTH: usize = 12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BinningError {
    #[error("code too large: {0}")]
    CodeTooLarge(String),
    #[error("invalid rates: {0}")]
    InvalidRates(String),
    #[error("message {w} out of range (code has {bins} bins)")]
    InvalidMessage { w: usize, bins: usize },
    #[error("received word {0:#b} is not a codeword")]
    DecodeFailure(u32),
    #[error("block length {n} exceeds the enumeration budget of {max}")]
    EnumerationBudgetExceeded { n: usize, max: usize },
    #[error("erasure probability must lie in [0,1], got {0}")]
    InvalidErasure(f64),
}

/// Random-binning codebook: `2^(n R)` bins of `2^(n (Rt - R))` distinct
/// `n`-bit codewords each.
#[derive(Debug, Clone, PartialEq)]
pub struct WiretapCode {
    n: usize,
    secret_bits: usize,
    random_bits: usize,
    bins: Vec<Vec<u32>>,
    lookup: HashMap<u32, (usize, usize)>,
}

fn integral_bits(n: usize, rate: f64, what: &str) -> Result<usize, BinningError> {
    let x = n as f64 * rate;
    let k = x.round();
    if !rate.is_finite() || rate < 0.0 || (x - k).abs() > 1e-9 {
        return Err(BinningError::InvalidRates(format!("n * {what} = {x} is not a nonnegative integer")));
    }
    Ok(k as usize)
}

/// Draws distinct uniformly random codewords and deals them uniformly into
/// bins. Deterministic in `seed`.
pub fn build_code(n: usize, rate_total: f64, rate_secret: f64, seed: u64) -> Result<WiretapCode, BinningError> {
    if n == 0 || n > MAX_CODE_LENGTH {
        return Err(BinningError::CodeTooLarge(format!("block length {n} outside 1..={MAX_CODE_LENGTH}")));
    }
    let total_bits = integral_bits(n, rate_total, "Rt")?;
    let secret_bits = integral_bits(n, rate_secret, "R")?;
    if total_bits > n {
        return Err(BinningError::CodeTooLarge(format!(
            "2^{total_bits} codewords do not fit in {n}-bit words"
        )));
    }
    if secret_bits > total_bits {
        return Err(BinningError::InvalidRates(format!("R = {rate_secret} exceeds Rt = {rate_total}")));
    }
    let random_bits = total_bits - secret_bits;
    let mut rng = rng_from_seed(seed);
    // Sampling without replacement is collision resampling done up front.
    let words = sample(&mut rng, 1usize << n, 1usize << total_bits);
    let per_bin = 1usize << random_bits;
    let mut bins = vec![Vec::with_capacity(per_bin); 1 << secret_bits];
    let mut lookup = HashMap::with_capacity(1 << total_bits);
    for (i, word) in words.into_iter().enumerate() {
        let (w, v) = (i / per_bin, i % per_bin);
        bins[w].push(word as u32);
        lookup.insert(word as u32, (w, v));
    }
    Ok(WiretapCode { n, secret_bits, random_bits, bins, lookup })
}

impl WiretapCode {
    pub fn block_length(&self) -> usize {
        self.n
    }

    /// `n R`
    pub fn secret_bits(&self) -> usize {
        self.secret_bits
    }

    /// `n (Rt - R)`
    pub fn random_bits(&self) -> usize {
        self.random_bits
    }

    pub fn num_bins(&self) -> usize {
        self.bins.len()
    }

    pub fn bin(&self, w: usize) -> Option<&[u32]> {
        self.bins.get(w).map(Vec::as_slice)
    }

    pub fn codewords(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.bins
            .iter()
            .enumerate()
            .flat_map(|(w, b)| b.iter().enumerate().map(move |(v, &c)| (w, v, c)))
    }

    pub fn encode_with(&self, w: usize, rng: &mut SimRng) -> Result<u32, BinningError> {
        let bin = self
            .bins
            .get(w)
            .ok_or(BinningError::InvalidMessage { w, bins: self.bins.len() })?;
        Ok(bin[rng.random_range(0..bin.len())])
    }
}

/// Stochastic encoder: a uniformly chosen codeword of bin `w` (0-based).
pub fn encode(code: &WiretapCode, w: usize, seed: u64) -> Result<u32, BinningError> {
    code.encode_with(w, &mut rng_from_seed(seed))
}

/// Exact lookup decoder for the noiseless main channel; returns `(w, v)`.
pub fn decode_main(code: &WiretapCode, y: u32) -> Result<(usize, usize), BinningError> {
    code.lookup.get(&y).copied().ok_or(BinningError::DecodeFailure(y))
}

/// Memoryless bit-erasure channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EraseChannel {
    delta: f64,
}

impl EraseChannel {
    pub fn new(delta: f64) -> Result<Self, BinningError> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(BinningError::InvalidErasure(delta));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Sum over groups of equal observations of `g log2 g - sum_b c_b log2 c_b`,
/// i.e. `T * H(W | X_S)` for the unerased positions `mask`.
fn weighted_conditional_entropy(keyed: &mut [(u32, u32)], mask: u32) -> f64 {
    keyed.sort_unstable_by_key(|&(word, bin)| (word & mask, bin));
    let xlogx = |c: usize| if c > 1 { c as f64 * (c as f64).log2() } else { 0.0 };
    let mut total = 0.0;
    let mut i = 0;
    while i < keyed.len() {
        let z = keyed[i].0 & mask;
        let mut group = 0;
        let mut inner = 0.0;
        while i < keyed.len() && keyed[i].0 & mask == z {
            let b = keyed[i].1;
            let mut c = 0;
            while i < keyed.len() && keyed[i].0 & mask == z && keyed[i].1 == b {
                c += 1;
                i += 1;
            }
            inner += xlogx(c);
            group += c;
        }
        total += xlogx(group) - inner;
    }
    total
}

/// Exact `H(W | Z)` in bits with `W` uniform over bins, the in-bin index
/// uniform, and `Z` the erasure-channel output (pattern plus surviving bits).
pub fn equivocation_exact(code: &WiretapCode, ch: &EraseChannel) -> Result<f64, BinningError> {
    let n = code.n;
    if n > MAX_ENUMERATION_LENGTH {
        return Err(BinningError::EnumerationBudgetExceeded { n, max: MAX_ENUMERATION_LENGTH });
    }
    let total = code.lookup.len() as f64;
    let base: Vec<(u32, u32)> = code.codewords().map(|(w, _, c)| (c, w as u32)).collect();
    let mut keyed = base.clone();
    let mut h = 0.0;
    for mask in 0u32..(1u32 << n) {
        let seen = mask.count_ones() as i32;
        let weight = (1.0 - ch.delta).powi(seen) * ch.delta.powi(n as i32 - seen);
        if weight == 0.0 {
            continue;
        }
        keyed.copy_from_slice(&base);
        h += weight * weighted_conditional_entropy(&mut keyed, mask) / total;
    }
    Ok(h)
}

/// Rates and channel for a trend run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendParams {
    pub rate_total: f64,
    pub rate_secret: f64,
    pub delta: f64,
}

impl Default for TrendParams {
    fn default() -> Self {
        Self { rate_total: 0.75, rate_secret: 0.25, delta: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendEntry {
    pub n: usize,
    /// `(seed, H(W|Z), H(W|Z) / (n R))` per code seed.
    pub per_seed: Vec<(u64, f64, Option<f64>)>,
    /// Mean normalized equivocation; `None` when `R = 0`.
    pub mean_normalized: Option<f64>,
    pub note: Option<String>,
}

/// Normalized equivocation per block length, averaged over code seeds.
pub fn secrecy_trend(params: &TrendParams, n_list: &[usize], seeds: &[u64]) -> Result<Vec<TrendEntry>, BinningError> {
    let ch = EraseChannel::new(params.delta)?;
    n_list
        .iter()
        .map(|&n| {
            let per_seed: Vec<(u64, f64, Option<f64>)> = seeds
                .par_iter()
                .map(|&seed| {
                    let code = build_code(n, params.rate_total, params.rate_secret, seed)?;
                    let h = equivocation_exact(&code, &ch)?;
                    let k = code.secret_bits();
                    Ok((seed, h, (k > 0).then(|| h / k as f64)))
                })
                .collect::<Result<_, BinningError>>()?;
            let secret = per_seed.first().is_some_and(|s| s.2.is_some());
            let (mean_normalized, note) = if !secret {
                (None, Some("no secret message (R = 0): normalized equivocation undefined".to_string()))
            } else if per_seed.is_empty() {
                (None, Some("no seeds".to_string()))
            } else {
                let sum: f64 = per_seed.iter().filter_map(|s| s.2).sum();
                (Some(sum / per_seed.len() as f64), None)
            };
            Ok(TrendEntry { n, per_seed, mean_normalized, note })
        })
        .collect()
}
