//! Dense complex matrices and subspaces.
//!
//! Everything here works on `DMatrix<Complex64>` and leans on the SVD for
//! rank decisions. Numerical rank is always decided against a threshold
//! relative to the largest singular value unless a function says otherwise.

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use thiserror::Error;

/// Dense, column-major complex matrix.
pub type CMatrix = DMatrix<Complex64>;

/// Relative singular-value cutoff used when a caller has no better idea.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Tolerance on `basis† basis = I` for a [`Subspace`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatError {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("inconsistent system: relative residual {residual:.3e} exceeds {tol:.3e}")]
    InconsistentSystem { residual: f64, tol: f64 },
    #[error("matrix is not Hermitian positive definite: {0}")]
    NotPositiveDefinite(String),
}

/// A linear subspace of `C^ambient`, stored as an orthonormal column basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: CMatrix,
}

impl Subspace {
    /// Wraps a basis after checking that its columns are orthonormal.
    pub fn new(basis: CMatrix) -> Result<Self, MatError> {
        ensure_finite(&basis)?;
        let gram = basis.adjoint() * &basis;
        let err = max_abs(&(gram - CMatrix::identity(basis.ncols(), basis.ncols())));
        if err > ORTHONORMAL_TOL {
            return Err(MatError::InvalidMatrix(format!(
                "basis columns not orthonormal (deviation {err:.3e})"
            )));
        }
        Ok(Self { ambient: basis.nrows(), basis })
    }

    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: CMatrix::zeros(ambient, 0) }
    }

    pub fn full(ambient: usize) -> Self {
        Self { ambient, basis: CMatrix::identity(ambient, ambient) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn into_basis(self) -> CMatrix {
        self.basis
    }

    /// Frobenius norm of the part of `m`'s columns lying outside this subspace.
    pub fn residual(&self, m: &CMatrix) -> f64 {
        let proj = &self.basis * (self.basis.adjoint() * m);
        (m - proj).norm()
    }

    /// Largest distance between the two spans, measured by mutual projection
    /// of the orthonormal bases.
    pub fn span_distance(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.residual(&other.basis).max(other.residual(&self.basis))
    }
}

/// SVD with singular values sorted in descending order and a full right
/// singular basis (`v` is `cols x cols`).
struct FullSvd {
    u: CMatrix,
    s: Vec<f64>,
    v: CMatrix,
}

fn full_svd(m: &CMatrix) -> FullSvd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return FullSvd {
            u: CMatrix::zeros(r, 0),
            s: Vec::new(),
            v: CMatrix::identity(c, c),
        };
    }
    // nalgebra's complex SVD can return a wrong factorization for
    // rank-deficient input, so the decomposition goes through faer.
    let a = faer::Mat::<Complex64>::from_fn(r, c, |i, j| m[(i, j)]);
    let svd = a.svd().expect("svd converged");
    let sv = svd.S().column_vector();
    let k = sv.nrows();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| sv[y].re.total_cmp(&sv[x].re));

    let (fu, fv) = (svd.U(), svd.V());
    let mut u = CMatrix::zeros(r, k);
    let mut s = Vec::with_capacity(k);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..r {
            u[(i, dst)] = fu[(i, src)];
        }
        s.push(sv[src].re);
    }
    // Columns past k span the nullspace and come back in faer's order.
    let mut v = CMatrix::zeros(c, c);
    for (dst, src) in order.iter().copied().chain(k..c).enumerate() {
        for i in 0..c {
            v[(i, dst)] = fv[(i, src)];
        }
    }
    FullSvd { u, s, v }
}

fn ensure_finite(m: &CMatrix) -> Result<(), MatError> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(MatError::InvalidMatrix("non-finite entry".into()))
    }
}

fn rank_at(s: &[f64], threshold: f64) -> usize {
    s.iter().take_while(|&&x| x > threshold).count()
}

fn relative_threshold(s: &[f64], tol: f64) -> f64 {
    s.first().copied().unwrap_or(0.0) * tol
}

/// Numerical rank at relative tolerance `tol`.
pub fn rank(m: &CMatrix, tol: f64) -> Result<usize, MatError> {
    ensure_finite(m)?;
    let svd = full_svd(m);
    let t = relative_threshold(&svd.s, tol);
    Ok(rank_at(&svd.s, t))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    full_svd(m).s
}

/// Largest singular value.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    full_svd(m).s.first().copied().unwrap_or(0.0)
}

/// Orthonormal basis of the column space of `m`; singular values at or
/// below `tol * sigma_max` are treated as zero.
pub fn orthonormal_basis(m: &CMatrix, tol: f64) -> Result<Subspace, MatError> {
    ensure_finite(m)?;
    if m.nrows() == 0 {
        return Err(MatError::InvalidMatrix("empty matrix".into()));
    }
    let svd = full_svd(m);
    let t = relative_threshold(&svd.s, tol);
    Ok(column_space_from(&svd, m.nrows(), t))
}

/// Column space with an absolute singular-value threshold. Used where the
/// matrix may be numerically zero as a whole (e.g. a nullspace image) and a
/// relative cutoff would be meaningless.
pub fn orthonormal_basis_abs(m: &CMatrix, threshold: f64) -> Result<Subspace, MatError> {
    ensure_finite(m)?;
    let svd = full_svd(m);
    Ok(column_space_from(&svd, m.nrows(), threshold))
}

fn column_space_from(svd: &FullSvd, ambient: usize, threshold: f64) -> Subspace {
    let r = rank_at(&svd.s, threshold);
    Subspace { ambient, basis: svd.u.columns(0, r).into_owned() }
}

/// Orthonormal basis of `{x : m x = 0}`.
pub fn nullspace(m: &CMatrix, tol: f64) -> Result<Subspace, MatError> {
    ensure_finite(m)?;
    if m.ncols() == 0 {
        return Err(MatError::InvalidMatrix("empty matrix".into()));
    }
    let svd = full_svd(m);
    let t = relative_threshold(&svd.s, tol);
    let r = rank_at(&svd.s, t);
    let c = m.ncols();
    Ok(Subspace { ambient: c, basis: svd.v.columns(r, c - r).into_owned() })
}

/// Intersection of two subspaces via the nullspace of `[B1 | -B2]`.
pub fn intersect(s1: &Subspace, s2: &Subspace, tol: f64) -> Result<Subspace, MatError> {
    if s1.ambient != s2.ambient {
        return Err(MatError::DimensionMismatch(format!(
            "ambient {} vs {}",
            s1.ambient, s2.ambient
        )));
    }
    if s1.dim() == 0 || s2.dim() == 0 {
        return Ok(Subspace::zero(s1.ambient));
    }
    let stacked = hstack(&[&s1.basis, &(-&s2.basis)]);
    // Both blocks are orthonormal, so sigma_max lies in [1, sqrt 2] and the
    // relative cutoff is effectively absolute.
    let coeffs = nullspace(&stacked, tol)?;
    if coeffs.dim() == 0 {
        return Ok(Subspace::zero(s1.ambient));
    }
    let c1 = coeffs.basis.rows(0, s1.dim()).into_owned();
    let vectors = &s1.basis * c1;
    orthonormal_basis(&vectors, tol)
}

/// Orthogonal complement inside the ambient space.
pub fn complement(s: &Subspace) -> Subspace {
    if s.dim() == 0 {
        return Subspace::full(s.ambient);
    }
    let svd = full_svd(&s.basis.adjoint());
    // Orthonormal columns have unit singular values; anything not near 1 is
    // a genuine null direction.
    let r = rank_at(&svd.s, 0.5);
    let a = s.ambient;
    Subspace { ambient: a, basis: svd.v.columns(r, a - r).into_owned() }
}

/// Least-squares, minimum-norm solution of `a x = b`, rejected when the
/// relative residual `|a x - b| / |b|` exceeds `tol`.
pub fn solve_consistent(a: &CMatrix, b: &CMatrix, tol: f64) -> Result<CMatrix, MatError> {
    ensure_finite(a)?;
    ensure_finite(b)?;
    if a.nrows() != b.nrows() {
        return Err(MatError::DimensionMismatch(format!(
            "a has {} rows, b has {}",
            a.nrows(),
            b.nrows()
        )));
    }
    let svd = full_svd(a);
    let t = relative_threshold(&svd.s, DEFAULT_RANK_TOL);
    let r = rank_at(&svd.s, t);
    let mut x = CMatrix::zeros(a.ncols(), b.ncols());
    if r > 0 {
        let ur = svd.u.columns(0, r);
        let mut coeff = ur.adjoint() * b;
        for (i, mut row) in coeff.row_iter_mut().enumerate() {
            row /= Complex64::new(svd.s[i], 0.0);
        }
        x = svd.v.columns(0, r) * coeff;
    }
    let bnorm = b.norm();
    if bnorm > 0.0 {
        let residual = (a * &x - b).norm() / bnorm;
        if residual > tol {
            return Err(MatError::InconsistentSystem { residual, tol });
        }
    }
    Ok(x)
}

/// Natural log-determinant of a Hermitian positive-definite matrix.
pub fn logdet_hpd(m: &CMatrix) -> Result<f64, MatError> {
    ensure_finite(m)?;
    if !m.is_square() {
        return Err(MatError::NotPositiveDefinite("not square".into()));
    }
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    let scale = max_abs(m).max(1.0);
    let asym = max_abs(&(m - m.adjoint()));
    if asym > HERMITIAN_TOL * scale {
        return Err(MatError::NotPositiveDefinite(format!(
            "not Hermitian (asymmetry {asym:.3e})"
        )));
    }
    // Symmetrize so the factorization sees an exactly Hermitian input.
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let chol = Cholesky::new(h)
        .ok_or_else(|| MatError::NotPositiveDefinite("Cholesky factorization failed".into()))?;
    let l = chol.l_dirty();
    // The complex factorization happily takes square roots of negative
    // pivots, so the diagonal has to be checked by hand.
    let mut acc = 0.0;
    for i in 0..m.nrows() {
        let d = l[(i, i)];
        if d.re.is_nan() || d.re <= 0.0 || d.im.abs() > HERMITIAN_TOL * d.re.max(1.0) {
            return Err(MatError::NotPositiveDefinite(format!("pivot {i} is {d}")));
        }
        acc += 2.0 * d.re.ln();
    }
    Ok(acc)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Horizontal concatenation; all blocks must share a row count.
pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
    let rows = blocks.first().map_or(0, |b| b.nrows());
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let mut at = 0;
    for b in blocks {
        assert_eq!(b.nrows(), rows, "hstack: row count mismatch");
        out.view_mut((0, at), (rows, b.ncols())).copy_from(*b);
        at += b.ncols();
    }
    out
}

/// Block-diagonal matrix from the given blocks.
pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(*b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Block-diagonal repetition of `m`, i.e. a constant channel lifted over
/// `times` consecutive uses.
pub fn lift(m: &CMatrix, times: usize) -> CMatrix {
    let blocks: Vec<&CMatrix> = std::iter::repeat_n(m, times).collect();
    block_diag(&blocks)
}

/// Scales every nonzero column to unit Euclidean norm.
pub fn normalize_columns(m: &mut CMatrix) {
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= Complex64::new(n, 0.0);
        }
    }
}
