//! Jamming precoders (random, aligned, nullspace), legitimate precoders and
//! the receiver zero-forcing matrix for a plan and a channel draw.
//!
//! Everything operates on the time-extended channel: with extension `e`,
//! `H_i` is lifted to the block-diagonal `e N x e M_i` matrix and precoders
//! are `e M_i` tall.

use thiserror::Error;

use crate::matlin::{
    complement, hstack, intersect, lift, normalize_columns, nullspace, orthonormal_basis,
    orthonormal_basis_abs, rank, solve_consistent, spectral_norm, CMatrix, MatError,
    DEFAULT_RANK_TOL,
};
use crate::model::EveChannel;
use crate::regions::{JamMethod, JammingPlan};
use crate::rng::{derive_seed, rng_from_seed, standard_cn, SimRng};

/// Residual bound for every geometric contract checked by [`verify_geometry`].
pub const GEOMETRY_TOL: f64 = 1e-8;

/// Relative residual accepted when solving for aligned jamming directions.
const SOLVE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrecoderError {
    #[error("alignment infeasible: need {needed} shared dimensions, intersection has {available}")]
    AlignmentInfeasible { needed: usize, available: usize },
    #[error("plan does not match the channel: {0}")]
    PlanMismatch(String),
    #[error(transparent)]
    Linear(#[from] MatError),
}

/// All precoding and post-processing matrices for one extended block.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderSet {
    /// `e M1 x d1`
    pub v1l: CMatrix,
    /// `e M2 x d2`
    pub v2l: CMatrix,
    /// `e M1 x jam1`
    pub v1j: CMatrix,
    /// `e M2 x jam2`
    pub v2j: CMatrix,
    /// `(e N - J_s) x e N`, orthonormal rows.
    pub u: CMatrix,
}

impl PrecoderSet {
    pub fn legit(&self, tx: usize) -> &CMatrix {
        if tx == 1 { &self.v1l } else { &self.v2l }
    }

    pub fn jamming(&self, tx: usize) -> &CMatrix {
        if tx == 1 { &self.v1j } else { &self.v2j }
    }
}

fn check_shapes(plan: &JammingPlan, h1: &CMatrix, h2: &CMatrix) -> Result<(), PrecoderError> {
    let c = plan.config;
    if h1.shape() != (c.n, c.m1) || h2.shape() != (c.n, c.m2) {
        return Err(PrecoderError::PlanMismatch(format!(
            "channels {:?}, {:?} do not fit configuration {c}",
            h1.shape(),
            h2.shape()
        )));
    }
    Ok(())
}

/// Random orthonormal `k`-frame inside the span of `basis`.
fn random_frame(basis: &CMatrix, k: usize, rng: &mut SimRng) -> Result<CMatrix, MatError> {
    if k == 0 {
        return Ok(CMatrix::zeros(basis.nrows(), 0));
    }
    let mix = standard_cn(basis.ncols(), k, rng);
    let q = orthonormal_basis(&mix, DEFAULT_RANK_TOL)?;
    Ok(basis * q.basis())
}

/// Jamming precoders for both transmitters, columns in plan-part order and
/// normalized to unit length.
pub fn build_jamming(
    plan: &JammingPlan,
    h1: &CMatrix,
    h2: &CMatrix,
    seed: u64,
) -> Result<(CMatrix, CMatrix), PrecoderError> {
    check_shapes(plan, h1, h2)?;
    let e = plan.extension;
    let ht = [lift(h1, e), lift(h2, e)];
    let mut rng = rng_from_seed(seed);

    // Shared receive-space directions for the aligned parts.
    let aligned = plan.method_dims(1, JamMethod::Aligned);
    if aligned != plan.method_dims(2, JamMethod::Aligned) {
        return Err(PrecoderError::PlanMismatch("aligned parts differ between transmitters".into()));
    }
    let shared = if aligned > 0 {
        let a1 = orthonormal_basis(&ht[0], DEFAULT_RANK_TOL)?;
        let a2 = orthonormal_basis(&ht[1], DEFAULT_RANK_TOL)?;
        let common = intersect(&a1, &a2, DEFAULT_RANK_TOL)?;
        if common.dim() < aligned {
            return Err(PrecoderError::AlignmentInfeasible {
                needed: aligned,
                available: common.dim(),
            });
        }
        // A random frame rather than the first columns, so time-extended
        // plans spread jamming over every use of the block.
        Some(random_frame(common.basis(), aligned, &mut rng)?)
    } else {
        None
    };

    let mut out = Vec::with_capacity(2);
    for (idx, h) in ht.iter().enumerate() {
        let tx = idx + 1;
        let mut blocks = Vec::new();
        for part in plan.parts(tx) {
            let block = match part.method {
                JamMethod::Random => {
                    let g = standard_cn(h.ncols(), part.dims, &mut rng);
                    orthonormal_basis(&g, DEFAULT_RANK_TOL)?.into_basis()
                }
                JamMethod::Nullspace => {
                    let ns = nullspace(h, DEFAULT_RANK_TOL)?;
                    if ns.dim() < part.dims {
                        return Err(PrecoderError::PlanMismatch(format!(
                            "transmitter {tx} needs {} nullspace dimensions, channel has {}",
                            part.dims,
                            ns.dim()
                        )));
                    }
                    random_frame(ns.basis(), part.dims, &mut rng)?
                }
                JamMethod::Aligned => {
                    let target = shared.as_ref().expect("aligned target computed");
                    solve_consistent(h, target, SOLVE_TOL)?
                }
            };
            blocks.push(block);
        }
        let refs: Vec<&CMatrix> = blocks.iter().collect();
        let mut v = if refs.is_empty() { CMatrix::zeros(h.ncols(), 0) } else { hstack(&refs) };
        normalize_columns(&mut v);
        out.push(v);
    }
    let v2 = out.pop().expect("two transmitters");
    let v1 = out.pop().expect("two transmitters");
    Ok((v1, v2))
}

/// Stacked receiver images of both transmitters' jamming.
fn jamming_image(plan: &JammingPlan, h1: &CMatrix, h2: &CMatrix, v1j: &CMatrix, v2j: &CMatrix) -> CMatrix {
    let e = plan.extension;
    hstack(&[&(lift(h1, e) * v1j), &(lift(h2, e) * v2j)])
}

// Lifting does not change the spectral norm, so the per-use channel serves.
fn channel_norm(h1: &CMatrix, h2: &CMatrix) -> f64 {
    spectral_norm(&hstack(&[h1, h2])).max(f64::MIN_POSITIVE)
}

/// Rows spanning the orthogonal complement of the receiver jamming space.
pub fn build_zero_forcing(
    plan: &JammingPlan,
    h1: &CMatrix,
    h2: &CMatrix,
    v1j: &CMatrix,
    v2j: &CMatrix,
) -> Result<CMatrix, PrecoderError> {
    check_shapes(plan, h1, h2)?;
    let image = jamming_image(plan, h1, h2, v1j, v2j);
    // Absolute cutoff against the channel norm: nullspace images are
    // numerically zero and must not count as occupied dimensions.
    let threshold = DEFAULT_RANK_TOL * channel_norm(h1, h2);
    let jam_space = orthonormal_basis_abs(&image, threshold)?;
    if jam_space.dim() != plan.j_s {
        return Err(PrecoderError::PlanMismatch(format!(
            "jamming occupies {} receiver dimensions, plan expects {}",
            jam_space.dim(),
            plan.j_s
        )));
    }
    Ok(complement(&jam_space).into_basis().adjoint())
}

/// Legitimate precoders: a random orthonormal `d_i`-frame inside the
/// orthogonal complement of each transmitter's jamming span.
pub fn build_legit(
    plan: &JammingPlan,
    v1j: &CMatrix,
    v2j: &CMatrix,
    seed: u64,
) -> Result<(CMatrix, CMatrix), PrecoderError> {
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::with_capacity(2);
    for (tx, vj) in [(1usize, v1j), (2usize, v2j)] {
        let dims = plan.input_dims(tx);
        if vj.nrows() != dims {
            return Err(PrecoderError::PlanMismatch(format!(
                "transmitter {tx} jamming has {} rows, expected {dims}",
                vj.nrows()
            )));
        }
        let free = if vj.ncols() == 0 {
            complement(&crate::matlin::Subspace::zero(dims))
        } else {
            complement(&orthonormal_basis(vj, DEFAULT_RANK_TOL)?)
        };
        let d = plan.streams(tx);
        if d > free.dim() {
            return Err(PrecoderError::PlanMismatch(format!(
                "transmitter {tx} needs {d} streams, only {} free dimensions",
                free.dim()
            )));
        }
        out.push(random_frame(free.basis(), d, &mut rng)?);
    }
    let v2 = out.pop().expect("two transmitters");
    let v1 = out.pop().expect("two transmitters");
    Ok((v1, v2))
}

/// Builds the full precoder set with seeds derived from `seed`.
pub fn build_precoders(
    plan: &JammingPlan,
    h1: &CMatrix,
    h2: &CMatrix,
    seed: u64,
) -> Result<PrecoderSet, PrecoderError> {
    let (v1j, v2j) = build_jamming(plan, h1, h2, derive_seed(seed, 1, 0))?;
    let u = build_zero_forcing(plan, h1, h2, &v1j, &v2j)?;
    let (v1l, v2l) = build_legit(plan, &v1j, &v2j, derive_seed(seed, 2, 0))?;
    Ok(PrecoderSet { v1l, v2l, v1j, v2j, u })
}

/// Machine-checkable summary of the geometric contracts of a precoder set.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryReport {
    /// Span mismatch between the two transmitters' aligned images, relative.
    pub alignment_residual: f64,
    /// `|H_i V_null| / |H_i|`, worst transmitter.
    pub nullspace_residual: f64,
    /// `|U H_i V_ij| / |H|`, worst column.
    pub zf_residual: f64,
    /// Worst deviation from unit column norms and from `V_il` orthonormal
    /// and orthogonal to `V_ij`.
    pub orthogonality_residual: f64,
    pub decodability_rank: usize,
    pub expected_rank: usize,
    pub u_rows: usize,
    pub expected_u_rows: usize,
    pub pass: bool,
}

/// Column offset and width of each part of one transmitter.
fn part_columns(plan: &JammingPlan, tx: usize, method: JamMethod) -> Vec<(usize, usize)> {
    let mut at = 0;
    let mut out = Vec::new();
    for p in plan.parts(tx) {
        if p.method == method {
            out.push((at, p.dims));
        }
        at += p.dims;
    }
    out
}

fn gather(m: &CMatrix, spans: &[(usize, usize)]) -> CMatrix {
    let blocks: Vec<CMatrix> = spans.iter().map(|&(at, w)| m.columns(at, w).into_owned()).collect();
    let refs: Vec<&CMatrix> = blocks.iter().collect();
    if refs.is_empty() {
        CMatrix::zeros(m.nrows(), 0)
    } else {
        hstack(&refs)
    }
}

fn span_mismatch(a: &CMatrix, b: &CMatrix) -> Result<f64, MatError> {
    if a.ncols() == 0 && b.ncols() == 0 {
        return Ok(0.0);
    }
    let qa = orthonormal_basis(a, DEFAULT_RANK_TOL)?;
    let qb = orthonormal_basis(b, DEFAULT_RANK_TOL)?;
    let ra = qb.residual(a) / a.norm().max(f64::MIN_POSITIVE);
    let rb = qa.residual(b) / b.norm().max(f64::MIN_POSITIVE);
    Ok(ra.max(rb))
}

pub fn verify_geometry(
    ps: &PrecoderSet,
    h1: &CMatrix,
    h2: &CMatrix,
    plan: &JammingPlan,
) -> Result<GeometryReport, PrecoderError> {
    check_shapes(plan, h1, h2)?;
    let e = plan.extension;
    let ht = [lift(h1, e), lift(h2, e)];
    let hnorm = channel_norm(h1, h2);

    let shapes_ok = (1..=2).all(|tx| {
        ps.legit(tx).shape() == (plan.input_dims(tx), plan.streams(tx))
            && ps.jamming(tx).shape() == (plan.input_dims(tx), plan.jam_dims(tx))
    }) && ps.u.ncols() == e * plan.config.n;
    if !shapes_ok {
        return Err(PrecoderError::PlanMismatch("precoder shapes do not match the plan".into()));
    }

    let a1 = gather(&ps.v1j, &part_columns(plan, 1, JamMethod::Aligned));
    let a2 = gather(&ps.v2j, &part_columns(plan, 2, JamMethod::Aligned));
    let alignment_residual = span_mismatch(&(&ht[0] * a1), &(&ht[1] * a2))?;

    let mut nullspace_residual: f64 = 0.0;
    for tx in 1..=2 {
        let z = gather(ps.jamming(tx), &part_columns(plan, tx, JamMethod::Nullspace));
        if z.ncols() > 0 {
            let r = (&ht[tx - 1] * &z).norm() / (hnorm * z.norm());
            nullspace_residual = nullspace_residual.max(r);
        }
    }

    let image = hstack(&[&(&ht[0] * &ps.v1j), &(&ht[1] * &ps.v2j)]);
    let zf = &ps.u * &image;
    let zf_residual = zf
        .column_iter()
        .map(|c| c.norm() / hnorm)
        .fold(0.0, f64::max);

    let mut orthogonality_residual: f64 = 0.0;
    for tx in 1..=2 {
        let l = ps.legit(tx);
        let j = ps.jamming(tx);
        let gram = l.adjoint() * l - CMatrix::identity(l.ncols(), l.ncols());
        orthogonality_residual = orthogonality_residual.max(crate::matlin::max_abs(&gram));
        if l.ncols() > 0 && j.ncols() > 0 {
            orthogonality_residual = orthogonality_residual.max(crate::matlin::max_abs(&(l.adjoint() * j)));
        }
        for col in j.column_iter() {
            orthogonality_residual = orthogonality_residual.max((col.norm() - 1.0).abs());
        }
    }
    let u_gram = &ps.u * ps.u.adjoint() - CMatrix::identity(ps.u.nrows(), ps.u.nrows());
    orthogonality_residual = orthogonality_residual.max(crate::matlin::max_abs(&u_gram));

    let legit_image = hstack(&[&(&ht[0] * &ps.v1l), &(&ht[1] * &ps.v2l)]);
    let effective = &ps.u * legit_image;
    let decodability_rank = if effective.ncols() == 0 || effective.nrows() == 0 {
        0
    } else {
        rank(&effective, DEFAULT_RANK_TOL)?
    };
    let expected_rank = plan.total_streams();
    let expected_u_rows = e * plan.config.n - plan.j_s;

    let pass = alignment_residual <= GEOMETRY_TOL
        && nullspace_residual <= GEOMETRY_TOL
        && zf_residual <= GEOMETRY_TOL
        && orthogonality_residual <= GEOMETRY_TOL
        && decodability_rank == expected_rank
        && ps.u.nrows() == expected_u_rows;

    Ok(GeometryReport {
        alignment_residual,
        nullspace_residual,
        zf_residual,
        orthogonality_residual,
        decodability_rank,
        expected_rank,
        u_rows: ps.u.nrows(),
        expected_u_rows,
        pass,
    })
}

/// Rank of the jamming image at an eavesdropper whose channel is already
/// lifted to the plan's extension. Full coverage means this equals the
/// eavesdropper's row count.
pub fn eavesdropper_coverage_rank(ps: &PrecoderSet, eve: &EveChannel) -> Result<usize, MatError> {
    let image = hstack(&[&(&eve.g1 * &ps.v1j), &(&eve.g2 * &ps.v2j)]);
    if image.nrows() == 0 || image.ncols() == 0 {
        return Ok(0);
    }
    rank(&image, DEFAULT_RANK_TOL)
}
