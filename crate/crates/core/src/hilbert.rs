//! Complex dense linear algebra substrate: subspaces given by orthonormal
//! frames, partially-defined operators, Hermitian eigendecomposition,
//! ranges, ranks and defect indices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::Error;
use crate::tol::ToleranceConfig;
use crate::Result;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Hermitian part `(M + M^*)/2`.
pub fn hermitian_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// Skew part `(M - M^*)/(2i)`; Hermitian whenever `M` is square.
pub fn skew_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * (c(0.5, 0.0) / c(0.0, 1.0))
}

/// Singular values in descending order (length `min(n, d)`).
///
/// Computed as the top eigenvalues of the Hermitian dilation
/// `[[0, M], [M*, 0]]`, whose spectrum is `{+-sigma_i}` plus zeros. The
/// built-in bidiagonal SVD loses accuracy on some complex inputs, while
/// the Hermitian eigensolver stays at machine precision.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    let (n, d) = (m.nrows(), m.ncols());
    let k = n.min(d);
    if k == 0 {
        return Vec::new();
    }
    let eig = dilation(m).symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    vals.truncate(k);
    vals.iter().map(|&v| v.max(0.0)).collect()
}

fn dilation(m: &CMat) -> CMat {
    let (n, d) = (m.nrows(), m.ncols());
    let mut h = CMat::zeros(n + d, n + d);
    h.view_mut((0, n), (n, d)).copy_from(m);
    h.view_mut((n, 0), (d, n)).copy_from(&m.adjoint());
    h
}

/// Spectral norm (largest singular value).
pub fn spectral_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

/// Smallest singular value; 0 for empty matrices.
pub fn sigma_min(m: &CMat) -> f64 {
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Rank with the relative threshold `tol_rank * sigma_max`.
pub fn rank(m: &CMat, cfg: &ToleranceConfig) -> usize {
    let sv = singular_values(m);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > cfg.tol_rank * smax).count()
}

/// Thin singular triples plus orthonormal null-space bases, all derived
/// from the Hermitian dilation. `s` holds the singular values above the
/// relative cutoff, descending; `u` and `v` the matching left and right
/// singular vectors; `left_null` and `right_null` complete the ranges.
pub(crate) struct SvdParts {
    pub s: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
    pub left_null: CMat,
    pub right_null: CMat,
}

pub(crate) fn svd_robust(m: &CMat, rel_tol: f64) -> SvdParts {
    let (n, d) = (m.nrows(), m.ncols());
    if n == 0 || d == 0 {
        return SvdParts {
            s: Vec::new(),
            u: CMat::zeros(n, 0),
            v: CMat::zeros(d, 0),
            left_null: CMat::identity(n, n),
            right_null: CMat::identity(d, d),
        };
    }
    let eig = dilation(m).symmetric_eigen();
    let nd = n + d;
    let mut idx: Vec<usize> = (0..nd).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let lmax = eig
        .eigenvalues
        .iter()
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let cutoff = rel_tol * lmax;
    let sqrt2 = c(std::f64::consts::SQRT_2, 0.0);
    let mut s = Vec::new();
    let mut u_cols: Vec<CVec> = Vec::new();
    let mut v_cols: Vec<CVec> = Vec::new();
    let mut null_u: Vec<CVec> = Vec::new();
    let mut null_v: Vec<CVec> = Vec::new();
    for &i in &idx {
        let lam = eig.eigenvalues[i];
        let full = eig.eigenvectors.column(i);
        if lam > cutoff {
            s.push(lam);
            u_cols.push(full.rows(0, n).into_owned() * sqrt2);
            v_cols.push(full.rows(n, d).into_owned() * sqrt2);
        } else if lam.abs() <= cutoff {
            null_u.push(full.rows(0, n).into_owned());
            null_v.push(full.rows(n, d).into_owned());
        }
    }
    let r = s.len();
    let u = stack_columns(&u_cols, n);
    let v = stack_columns(&v_cols, d);
    let left_null = null_basis(null_u, &u, n, n - r);
    let right_null = null_basis(null_v, &v, d, d - r);
    SvdParts {
        s,
        u,
        v,
        left_null,
        right_null,
    }
}

fn stack_columns(cols: &[CVec], dim: usize) -> CMat {
    let mut m = CMat::zeros(dim, cols.len());
    for (j, col) in cols.iter().enumerate() {
        m.set_column(j, col);
    }
    m
}

/// Extracts `want` orthonormal vectors orthogonal to `range` from the raw
/// projections, completing against coordinate vectors if needed.
fn null_basis(raw: Vec<CVec>, range: &CMat, dim: usize, want: usize) -> CMat {
    let mut basis: Vec<CVec> = Vec::new();
    let feed = |cand: CVec, basis: &mut Vec<CVec>| {
        if basis.len() == want {
            return;
        }
        let mut w = cand;
        for _ in 0..2 {
            w -= range * (range.adjoint() * &w);
            for q in basis.iter() {
                let coeff = q.dotc(&w);
                w -= q * coeff;
            }
        }
        let norm = w.norm();
        if norm > 1e-7 {
            basis.push(w / c(norm, 0.0));
        }
    };
    for cand in raw {
        feed(cand, &mut basis);
    }
    for j in 0..dim {
        if basis.len() == want {
            break;
        }
        let mut e = CVec::zeros(dim);
        e[j] = c(1.0, 0.0);
        feed(e, &mut basis);
    }
    stack_columns(&basis, dim)
}

/// Orthonormal basis of the column span, rank decided by `tol_rank`.
pub fn column_space(m: &CMat, cfg: &ToleranceConfig) -> CMat {
    svd_robust(m, cfg.tol_rank).u
}

/// Minimum-norm least-squares solve of `A x = b`, singular values below
/// the relative rank threshold treated as zero.
pub fn pseudo_solve(a: &CMat, b: &CMat, cfg: &ToleranceConfig) -> CMat {
    let parts = svd_robust(a, cfg.tol_rank);
    let mut x = CMat::zeros(a.ncols(), b.ncols());
    for (i, &s) in parts.s.iter().enumerate() {
        let ui = parts.u.column(i);
        let vi = parts.v.column(i);
        for j in 0..b.ncols() {
            let coef = ui.dotc(&b.column(j).into_owned()) / c(s, 0.0);
            let mut col = x.column_mut(j);
            col += &vi.into_owned() * coef;
        }
    }
    x
}

/// Eigenvalues of a general complex square matrix via the Schur form.
pub fn complex_eigenvalues(m: &CMat) -> Vec<C64> {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "square matrix required");
    if n == 0 {
        return vec![];
    }
    if let Some(schur) = m.clone().try_schur(1e-14, 20000) {
        let (_, t) = schur.unpack();
        return (0..n).map(|i| t[(i, i)]).collect();
    }
    // Rare non-convergence: retry on a tiny random-free perturbation of the
    // diagonal, which breaks exact symmetry ties deterministically.
    let scale = spectral_norm(m).max(1.0);
    let mut p = m.clone();
    for i in 0..n {
        p[(i, i)] += c(scale * 1e-13 * (i as f64 + 1.0), scale * 0.7e-13);
    }
    let schur = p.schur();
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// Sorted Hermitian eigendecomposition.
///
/// Returns eigenvalues ascending and the unitary matrix of eigenvectors
/// (column `k` belongs to eigenvalue `k`). Fails when the input deviates
/// from Hermitian by more than `tol_eq` relative to its norm.
pub fn hermitian_eig(h: &CMat, cfg: &ToleranceConfig) -> Result<(Vec<f64>, CMat)> {
    let n = h.nrows();
    if n != h.ncols() {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: h.ncols(),
            context: "hermitian_eig requires a square matrix".into(),
        });
    }
    if n == 0 {
        return Ok((vec![], CMat::zeros(0, 0)));
    }
    let scale = spectral_norm(h).max(1.0);
    let dev = spectral_norm(&(h - h.adjoint()));
    if dev > cfg.tol_eq * scale {
        return Err(Error::NonHermitian {
            deviation: dev,
            tol: cfg.tol_eq * scale,
        });
    }
    let sym = hermitian_part(h);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (k, &i) in order.iter().enumerate() {
        vectors.set_column(k, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

/// A subspace of `C^n` represented by an orthonormal frame (n x d).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    frame: CMat,
}

impl Subspace {
    /// Wraps a frame that is already orthonormal within `tol_ortho`.
    pub fn from_frame(frame: CMat, cfg: &ToleranceConfig) -> Result<Self> {
        let d = frame.ncols();
        let gram = frame.adjoint() * &frame;
        let dev = spectral_norm(&(&gram - CMat::identity(d, d)));
        if dev > cfg.tol_ortho.max(1e-12) * 10.0 {
            return Err(Error::InvalidArgument(format!(
                "frame columns not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            ambient_dim: frame.nrows(),
            frame,
        })
    }

    /// The whole space `C^n`.
    pub fn total(n: usize) -> Self {
        Self {
            ambient_dim: n,
            frame: CMat::identity(n, n),
        }
    }

    /// The zero subspace of `C^n`.
    pub fn trivial(n: usize) -> Self {
        Self {
            ambient_dim: n,
            frame: CMat::zeros(n, 0),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &CMat {
        &self.frame
    }

    pub fn is_total(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Orthogonal projection of `v` onto the subspace.
    pub fn project(&self, v: &CVec) -> CVec {
        &self.frame * (self.frame.adjoint() * v)
    }

    /// Coordinates of `v` in the frame; error when `v` is not in the span.
    pub fn coordinates(&self, v: &CVec, cfg: &ToleranceConfig) -> Result<CVec> {
        let coords = self.frame.adjoint() * v;
        let residual = (v - &self.frame * &coords).norm();
        if residual > cfg.tol_rank.max(1e-12) * v.norm().max(1.0) * 100.0 {
            return Err(Error::InvalidArgument(format!(
                "vector not in the subspace (residual {residual:.3e})"
            )));
        }
        Ok(coords)
    }

    /// Whether `v` lies in the subspace within `tol`.
    pub fn contains_vector(&self, v: &CVec, tol: f64) -> bool {
        (v - self.project(v)).norm() <= tol * v.norm().max(1.0)
    }

    /// Orthonormal frame of the orthogonal complement.
    pub fn perp_frame(&self, cfg: &ToleranceConfig) -> CMat {
        let n = self.ambient_dim;
        let d = self.dim();
        if d == n {
            return CMat::zeros(n, 0);
        }
        let _ = n;
        svd_robust(&self.frame, cfg.tol_rank).left_null
    }

    /// Whether `other` is contained in `self` within `tol`.
    pub fn contains_subspace(&self, other: &Subspace, tol: f64) -> bool {
        if other.ambient_dim != self.ambient_dim {
            return false;
        }
        let residual = other.frame() - &self.frame * (self.frame.adjoint() * other.frame());
        spectral_norm(&residual) <= tol
    }
}

/// Modified Gram-Schmidt with a re-orthogonalization pass; vectors whose
/// residual falls below the (relative) rank threshold are dropped.
pub fn orthonormalize(vectors: &[CVec], cfg: &ToleranceConfig) -> Result<Subspace> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument(
            "orthonormalize needs at least one vector to fix the ambient dimension".into(),
        ));
    }
    let n = vectors[0].len();
    for v in vectors {
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
                context: "orthonormalize: mixed ambient dimensions".into(),
            });
        }
    }
    let scale = vectors.iter().map(|v| v.norm()).fold(0.0f64, f64::max).max(1.0);
    let mut basis: Vec<CVec> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.dotc(&w);
                w -= q * coeff;
            }
        }
        let norm = w.norm();
        if norm > cfg.tol_rank * scale {
            basis.push(w / c(norm, 0.0));
        }
    }
    let mut frame = CMat::zeros(n, basis.len());
    for (j, q) in basis.iter().enumerate() {
        frame.set_column(j, q);
    }
    Subspace::from_frame(frame, cfg)
}

/// A linear operator defined on a subspace of `C^n`.
///
/// Column `j` of `action` is the image of column `j` of the domain frame.
/// `ambient_skew`, when present, is the Hermitian matrix playing the role
/// of a bounded imaginary part on the whole space (strip decompositions).
#[derive(Debug, Clone)]
pub struct PartialOperator {
    ambient_dim: usize,
    domain: Subspace,
    action: CMat,
    ambient_skew: Option<CMat>,
}

impl PartialOperator {
    pub fn new(domain: Subspace, action: CMat) -> Result<Self> {
        if action.nrows() != domain.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.ambient_dim(),
                got: action.nrows(),
                context: "action rows must equal the ambient dimension".into(),
            });
        }
        if action.ncols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                got: action.ncols(),
                context: "action columns must equal the domain dimension".into(),
            });
        }
        Ok(Self {
            ambient_dim: domain.ambient_dim(),
            domain,
            action,
            ambient_skew: None,
        })
    }

    /// A total operator given by its n x n matrix.
    pub fn total(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: matrix.ncols(),
                context: "total operator matrix must be square".into(),
            });
        }
        Self::new(Subspace::total(n), matrix)
    }

    pub fn with_ambient_skew(mut self, b: CMat, cfg: &ToleranceConfig) -> Result<Self> {
        let n = self.ambient_dim;
        if b.nrows() != n || b.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.nrows(),
                context: "ambient skew part must be n x n".into(),
            });
        }
        let dev = spectral_norm(&(&b - b.adjoint()));
        if dev > cfg.tol_eq * spectral_norm(&b).max(1.0) {
            return Err(Error::NonHermitian {
                deviation: dev,
                tol: cfg.tol_eq,
            });
        }
        self.ambient_skew = Some(b);
        Ok(self)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn action(&self) -> &CMat {
        &self.action
    }

    pub fn ambient_skew(&self) -> Option<&CMat> {
        self.ambient_skew.as_ref()
    }

    pub fn is_total(&self) -> bool {
        self.domain.is_total()
    }

    /// The n x n matrix of a total operator in ambient coordinates.
    pub fn total_matrix(&self, cfg: &ToleranceConfig) -> Result<CMat> {
        if !self.is_total() {
            return Err(Error::NotTotal);
        }
        // action * frame^{-1}; the frame is unitary, so the inverse is the
        // adjoint, but use a solve to stay robust under loose frames.
        let _ = cfg;
        Ok(&self.action * self.domain.frame().adjoint())
    }

    /// Image of a domain vector given in ambient coordinates.
    pub fn apply(&self, xi: &CVec, cfg: &ToleranceConfig) -> Result<CVec> {
        let coords = self.domain.coordinates(xi, cfg)?;
        Ok(&self.action * coords)
    }

    /// The compression `F^* action`: the d x d matrix with entries
    /// `<T f_j, f_i>` whose quadratic form over unit coordinate vectors is
    /// exactly the numerical range of the operator.
    pub fn compress(&self) -> CMat {
        self.domain.frame().adjoint() * &self.action
    }

    /// Whether `self` extends `other`: the domain contains `other`'s and
    /// the actions agree there.
    pub fn extends(&self, other: &PartialOperator, tol: f64) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        if !self.domain.contains_subspace(&other.domain, tol) {
            return false;
        }
        // Coordinates of other's frame inside self's frame.
        let x = self.domain.frame().adjoint() * other.domain.frame();
        let diff = &self.action * x - other.action();
        spectral_norm(&diff) <= tol * spectral_norm(other.action()).max(1.0)
    }
}

/// Orthonormal basis of the range of `T - lambda I` restricted to the
/// domain, i.e. the column span of `action - lambda * frame`.
pub fn range_subspace(t: &PartialOperator, lambda: C64, cfg: &ToleranceConfig) -> Subspace {
    let shifted = t.action() - t.domain().frame() * lambda;
    let basis = column_space(&shifted, cfg);
    Subspace {
        ambient_dim: t.ambient_dim(),
        frame: basis,
    }
}

/// `dim R(T - lambda I)^perp`; meaningful for `lambda` outside the closed
/// numerical range (the caller checks that through the numrange module).
pub fn defect_index(t: &PartialOperator, lambda: C64, cfg: &ToleranceConfig) -> usize {
    t.ambient_dim() - range_subspace(t, lambda, cfg).dim()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn cv(entries: &[(f64, f64)]) -> CVec {
        CVec::from_iterator(entries.len(), entries.iter().map(|&(re, im)| c(re, im)))
    }

    #[test]
    fn orthonormalize_identity_frame() {
        let s = orthonormalize(&[cv(&[(1.0, 0.0), (0.0, 0.0)]), cv(&[(0.0, 0.0), (1.0, 0.0)])], &cfg())
            .unwrap();
        assert_eq!(s.dim(), 2);
        let dev = spectral_norm(&(s.frame().adjoint() * s.frame() - CMat::identity(2, 2)));
        assert!(dev < 1e-14);
    }

    #[test]
    fn orthonormalize_drops_dependent_vector() {
        let s = orthonormalize(&[cv(&[(1.0, 0.0), (0.0, 0.0)]), cv(&[(2.0, 0.0), (0.0, 0.0)])], &cfg())
            .unwrap();
        assert_eq!(s.dim(), 1);
        assert!((s.frame()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn orthonormalize_gram_schmidt_oracle() {
        // {(1,1),(1,-1)} spans C^2; compare against a plain modified
        // Gram-Schmidt computed by hand here.
        let v1 = cv(&[(1.0, 0.0), (1.0, 0.0)]);
        let v2 = cv(&[(1.0, 0.0), (-1.0, 0.0)]);
        let s = orthonormalize(&[v1.clone(), v2.clone()], &cfg()).unwrap();
        assert_eq!(s.dim(), 2);
        let q = s.frame();
        let dev = spectral_norm(&(q.adjoint() * q - CMat::identity(2, 2)));
        assert!(dev < 1e-12);
        // Oracle: normalize v1; subtract projection from v2; normalize.
        let q1 = &v1 / c(v1.norm(), 0.0);
        let mut w = v2.clone();
        let coeff = q1.dotc(&w);
        w -= &q1 * coeff;
        let q2 = &w / c(w.norm(), 0.0);
        assert!((q.column(0).into_owned() - &q1).norm() < 1e-12);
        assert!((q.column(1).into_owned() - &q2).norm() < 1e-12);
    }

    #[test]
    fn orthonormalize_dimension_mismatch() {
        let r = orthonormalize(&[cv(&[(1.0, 0.0)]), cv(&[(1.0, 0.0), (0.0, 0.0)])], &cfg());
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn orthonormalize_idempotent() {
        let s = orthonormalize(
            &[cv(&[(1.0, 2.0), (0.5, 0.0), (0.0, -1.0)]), cv(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])],
            &cfg(),
        )
        .unwrap();
        let cols: Vec<CVec> = (0..s.dim()).map(|j| s.frame().column(j).into_owned()).collect();
        let s2 = orthonormalize(&cols, &cfg()).unwrap();
        assert_eq!(s.dim(), s2.dim());
        assert!(spectral_norm(&(s.frame() - s2.frame())) < 1e-12);
    }

    /// The operator on C^2 with domain span{e1} and action e1 -> e2.
    fn c2_example() -> PartialOperator {
        let domain = Subspace::from_frame(
            CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]),
            &cfg(),
        )
        .unwrap();
        PartialOperator::new(domain, CMat::from_column_slice(2, 1, &[c(0.0, 0.0), c(1.0, 0.0)]))
            .unwrap()
    }

    #[test]
    fn compress_c2_example_is_zero() {
        let t = c2_example();
        let m = t.compress();
        assert_eq!(m.nrows(), 1);
        assert!(m[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn compress_total_identity() {
        let t = PartialOperator::total(CMat::identity(3, 3)).unwrap();
        assert!(spectral_norm(&(t.compress() - CMat::identity(3, 3))) < 1e-14);
    }

    #[test]
    fn compress_total_is_matrix() {
        let a = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let t = PartialOperator::total(a.clone()).unwrap();
        assert!(spectral_norm(&(t.compress() - a)) < 1e-14);
    }

    #[test]
    fn hermitian_eig_sorted_diag() {
        let h = CMat::from_row_slice(
            3,
            3,
            &[
                c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0),
                c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0),
            ],
        );
        let (vals, _) = hermitian_eig(&h, &cfg()).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12);
        assert!((vals[1] - 2.0).abs() < 1e-12);
        assert!((vals[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn hermitian_eig_pauli_x() {
        let h = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let (vals, vecs) = hermitian_eig(&h, &cfg()).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-12);
        assert!((vals[1] - 1.0).abs() < 1e-12);
        // Eigenvector for -1 proportional to (1,-1)/sqrt(2).
        let v = vecs.column(0);
        assert!((v[0] + v[1]).norm() < 1e-12);
    }

    #[test]
    fn hermitian_eig_reconstruction() {
        // Random Hermitian 6x6 from a fixed seed-free recipe.
        let n = 6;
        let mut raw = CMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let re = ((i * 7 + j * 3 + 1) % 11) as f64 / 11.0 - 0.5;
                let im = ((i * 5 + j * 13 + 2) % 7) as f64 / 7.0 - 0.5;
                raw[(i, j)] = c(re, im);
            }
        }
        let h = hermitian_part(&raw);
        let (vals, v) = hermitian_eig(&h, &cfg()).unwrap();
        let lambda = CMat::from_diagonal(&CVec::from_iterator(n, vals.iter().map(|&x| c(x, 0.0))));
        let rec = &v * lambda * v.adjoint();
        assert!(spectral_norm(&(rec - h)) < 1e-10);
        let unit_dev = spectral_norm(&(v.adjoint() * &v - CMat::identity(n, n)));
        assert!(unit_dev < 1e-10);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let h = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eig(&h, &cfg()), Err(Error::NonHermitian { .. })));
    }

    #[test]
    fn range_c2_example_at_minus_one() {
        let t = c2_example();
        let r = range_subspace(&t, c(-1.0, 0.0), &cfg());
        assert_eq!(r.dim(), 1);
        // Span of (1,1)/sqrt(2).
        let v = cv(&[(1.0, 0.0), (1.0, 0.0)]) / c(2.0f64.sqrt(), 0.0);
        assert!(r.contains_vector(&v, 1e-10));
    }

    #[test]
    fn range_total_invertible_full() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
        let t = PartialOperator::total(a).unwrap();
        assert_eq!(range_subspace(&t, c(5.0, 1.0), &cfg()).dim(), 2);
    }

    #[test]
    fn range_zero_operator_at_zero() {
        let t = PartialOperator::total(CMat::zeros(2, 2)).unwrap();
        assert_eq!(range_subspace(&t, c(0.0, 0.0), &cfg()).dim(), 0);
    }

    #[test]
    fn defect_index_c2_example() {
        let t = c2_example();
        assert_eq!(defect_index(&t, c(-1.0, 0.0), &cfg()), 1);
        // Constant across the connected complement component of the ray.
        assert_eq!(defect_index(&t, c(0.0, 1.0), &cfg()), 1);
        assert_eq!(defect_index(&t, c(-3.0, 0.0), &cfg()), 1);
    }

    #[test]
    fn defect_index_total_hermitian_zero() {
        let a = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let t = PartialOperator::total(a).unwrap();
        assert_eq!(defect_index(&t, c(0.0, 1.0), &cfg()), 0);
    }

    #[test]
    fn extends_detects_restriction() {
        let a = CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0)]);
        let total = PartialOperator::total(a.clone()).unwrap();
        let domain = Subspace::from_frame(
            CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]),
            &cfg(),
        )
        .unwrap();
        let action = CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]);
        let restricted = PartialOperator::new(domain, action).unwrap();
        assert!(total.extends(&restricted, 1e-10));
        assert!(!restricted.extends(&total, 1e-10));
    }

    #[test]
    fn complex_eigenvalues_triangular() {
        let m = CMat::from_row_slice(2, 2, &[c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]);
        let mut ev = complex_eigenvalues(&m);
        ev.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn perp_frame_completes_basis() {
        let s = orthonormalize(&[cv(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])], &cfg()).unwrap();
        let p = s.perp_frame(&cfg());
        assert_eq!(p.ncols(), 2);
        let cross = spectral_norm(&(s.frame().adjoint() * &p));
        assert!(cross < 1e-12);
    }
}
