//! Seed derivation and complex Gaussian draws.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matlin::CMatrix;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Mixes a base seed with a stream label and an index (splitmix64 finalizer),
/// so per-trial generators are independent of execution order.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Circularly-symmetric complex Gaussian entries with the given mean and
/// total variance `E|z - mean|^2 = variance`.
pub fn cn_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    mean: Complex64,
    variance: f64,
    rng: &mut R,
) -> CMatrix {
    let sd = (variance / 2.0).sqrt();
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        mean + Complex64::new(sd * re, sd * im)
    })
}

/// `CN(0, 1)` entries.
pub fn standard_cn<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    cn_matrix(rows, cols, Complex64::new(0.0, 0.0), 1.0, rng)
}
