//! Numerical ranges (fields of values): support functions, boundary
//! polygons, exact polyhedral containment, spectral inclusion and resolvent
//! bound checks.
//!
//! The numerical range of a partially-defined operator equals the field of
//! values of its compression over an orthonormal frame of the domain, so
//! every query here reduces to Hermitian eigenvalue problems on the
//! compressed matrix.

use serde::Serialize;

use crate::error::Error;
use crate::hilbert::{
    self, c, complex_eigenvalues, hermitian_eig, hermitian_part, sigma_min, CMat, CVec,
    PartialOperator, C64,
};
use crate::regions::{ConstraintKind, HalfPlaneConstraint, Region};
use crate::tol::ToleranceConfig;
use crate::Result;

fn rotated_hermitian_part(m: &CMat, phi: f64) -> CMat {
    hermitian_part(&(m * C64::from_polar(1.0, -phi)))
}

/// Support function of the numerical range at angle `phi`:
/// `h(phi) = max { Re(e^{-i phi} <T xi, xi>) : xi in D, ||xi|| = 1 }`,
/// computed as the largest eigenvalue of the rotated Hermitian part of the
/// compression. Also returns a maximizing unit vector in ambient
/// coordinates.
pub fn support_function(
    t: &PartialOperator,
    phi: f64,
    cfg: &ToleranceConfig,
) -> Result<(f64, CVec)> {
    if t.domain().dim() == 0 {
        return Err(Error::EmptyDomain);
    }
    let m = t.compress();
    let h = rotated_hermitian_part(&m, phi);
    let (vals, vecs) = hermitian_eig(&h, cfg)?;
    let d = m.nrows();
    let hmax = vals[d - 1];
    let xi = t.domain().frame() * vecs.column(d - 1).into_owned();
    Ok((hmax, xi))
}

/// Per-constraint evidence of a containment decision.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub phi: f64,
    pub beta: f64,
    pub kind: String,
    /// Minimal eigenvalue of the rotated Hermitian part (inequalities), or
    /// the spectral-norm deviation from `beta I` (equalities).
    pub value: f64,
    pub satisfied: bool,
    pub boundary_tight: bool,
}

/// Exact containment certificate for polyhedral regions.
#[derive(Debug, Clone, Serialize)]
pub struct ContainmentCertificate {
    pub contained: bool,
    /// True when some satisfied constraint holds only within `tol_psd`.
    pub boundary_tight: bool,
    pub checks: Vec<ConstraintCheck>,
}

/// Decides `W(T) subseteq R` exactly: for every inequality constraint
/// `(phi, beta)` the minimal eigenvalue of the rotated Hermitian part of
/// the compression must be `>= beta - tol_psd`; for every line constraint
/// that Hermitian part must equal `beta I` within `tol_eq`.
pub fn contained_in(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<ContainmentCertificate> {
    let m = t.compress();
    let d = m.nrows();
    let mut checks = Vec::new();
    let mut contained = true;
    let mut tight = false;
    for ct in region.constraints() {
        if d == 0 {
            // Empty domain: the numerical range is empty and every
            // constraint holds vacuously.
            checks.push(ConstraintCheck {
                phi: ct.phi,
                beta: ct.beta,
                kind: kind_str(ct),
                value: 0.0,
                satisfied: true,
                boundary_tight: false,
            });
            continue;
        }
        let h = rotated_hermitian_part(&m, ct.phi);
        match ct.kind {
            ConstraintKind::Ineq => {
                let (vals, _) = hermitian_eig(&h, cfg)?;
                let min_eig = vals[0];
                let ok = min_eig >= ct.beta - cfg.tol_psd;
                let this_tight = (min_eig - ct.beta).abs() <= cfg.tol_psd;
                contained &= ok;
                tight |= ok && this_tight;
                checks.push(ConstraintCheck {
                    phi: ct.phi,
                    beta: ct.beta,
                    kind: kind_str(ct),
                    value: min_eig,
                    satisfied: ok,
                    boundary_tight: this_tight,
                });
            }
            ConstraintKind::Eq => {
                let dev = hilbert::spectral_norm(&(&h - CMat::identity(d, d) * c(ct.beta, 0.0)));
                let ok = dev <= cfg.tol_eq;
                contained &= ok;
                checks.push(ConstraintCheck {
                    phi: ct.phi,
                    beta: ct.beta,
                    kind: kind_str(ct),
                    value: dev,
                    satisfied: ok,
                    boundary_tight: ok,
                });
            }
        }
    }
    Ok(ContainmentCertificate {
        contained,
        boundary_tight: tight,
        checks,
    })
}

fn kind_str(ct: &HalfPlaneConstraint) -> String {
    match ct.kind {
        ConstraintKind::Ineq => "ineq".into(),
        ConstraintKind::Eq => "eq".into(),
    }
}

/// Two-sided polygonal approximation of the numerical range: inner points
/// (Rayleigh values of maximizing eigenvectors) and outer supporting lines
/// at `m` uniform angles.
#[derive(Debug, Clone, Serialize)]
pub struct BoundaryPolygon {
    pub angles: Vec<f64>,
    /// Support values `h(phi_k)`.
    pub support: Vec<f64>,
    pub inner_points: Vec<(f64, f64)>,
    /// Max over angles of the support gap between outer intersection and
    /// inner hull.
    pub hausdorff_gap: f64,
}

impl BoundaryPolygon {
    pub fn angle_count(&self) -> usize {
        self.angles.len()
    }

    pub fn inner_points_complex(&self) -> Vec<C64> {
        self.inner_points.iter().map(|&(re, im)| c(re, im)).collect()
    }

    /// Membership in the outer intersection of supporting half-planes.
    pub fn outer_contains(&self, z: C64, tol: f64) -> bool {
        self.angles
            .iter()
            .zip(&self.support)
            .all(|(&phi, &h)| (z * C64::from_polar(1.0, -phi)).re <= h + tol)
    }

    /// The outer approximation as a polyhedral region: `Re(e^{-i phi} z)
    /// <= h(phi)` flips to the canonical `>=` form at angle `phi + pi`.
    pub fn outer_region(&self) -> Result<Region> {
        let constraints = self
            .angles
            .iter()
            .zip(&self.support)
            .map(|(&phi, &h)| HalfPlaneConstraint::ineq(phi + std::f64::consts::PI, -h))
            .collect();
        Region::new(constraints)
    }

    /// Distance to the outer polygon (0 inside).
    pub fn distance_to_outer(&self, z: C64) -> Result<f64> {
        Ok(self.outer_region()?.distance(z))
    }
}

pub fn boundary_polygon(
    t: &PartialOperator,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<BoundaryPolygon> {
    if m < 3 {
        return Err(Error::InvalidArgument(format!(
            "boundary polygon needs at least 3 angles, got {m}"
        )));
    }
    if t.domain().dim() == 0 {
        return Err(Error::EmptyDomain);
    }
    let comp = t.compress();
    let d = comp.nrows();
    let mut angles = Vec::with_capacity(m);
    let mut support = Vec::with_capacity(m);
    let mut inner = Vec::with_capacity(m);
    for k in 0..m {
        let phi = std::f64::consts::TAU * k as f64 / m as f64;
        let h = rotated_hermitian_part(&comp, phi);
        let (vals, vecs) = hermitian_eig(&h, cfg)?;
        let v = vecs.column(d - 1).into_owned();
        let rayleigh = v.dotc(&(&comp * &v));
        angles.push(phi);
        support.push(vals[d - 1]);
        inner.push((rayleigh.re, rayleigh.im));
    }
    // Support gap: how far the inner hull's support falls short of h(phi).
    let mut gap = 0.0f64;
    for k in 0..m {
        let phi = angles[k];
        let u = C64::from_polar(1.0, -phi);
        let inner_support = inner
            .iter()
            .map(|&(re, im)| (c(re, im) * u).re)
            .fold(f64::NEG_INFINITY, f64::max);
        gap = gap.max(support[k] - inner_support);
    }
    Ok(BoundaryPolygon {
        angles,
        support,
        inner_points: inner,
        hausdorff_gap: gap,
    })
}

/// Spectrum-inside-closure report for total operators.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralInclusionReport {
    pub eigenvalues: Vec<(f64, f64)>,
    pub violations: Vec<(f64, f64)>,
}

/// Checks that every eigenvalue of a total operator lies inside the outer
/// polygonal approximation of the numerical range (with slack `tol`).
pub fn spectral_inclusion_check(
    t: &PartialOperator,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<SpectralInclusionReport> {
    if !t.is_total() {
        return Err(Error::NotTotal);
    }
    let a = t.total_matrix(cfg)?;
    let polygon = boundary_polygon(t, m, cfg)?;
    let scale = hilbert::spectral_norm(&a).max(1.0);
    let eigenvalues = complex_eigenvalues(&a);
    let tol = 1e-8 * scale;
    let violations: Vec<(f64, f64)> = eigenvalues
        .iter()
        .filter(|&&ev| !polygon.outer_contains(ev, tol))
        .map(|ev| (ev.re, ev.im))
        .collect();
    Ok(SpectralInclusionReport {
        eigenvalues: eigenvalues.iter().map(|ev| (ev.re, ev.im)).collect(),
        violations,
    })
}

/// Resolvent norm versus the reciprocal distance to the outer polygon.
#[derive(Debug, Clone, Serialize)]
pub struct ResolventBoundReport {
    pub lambda: (f64, f64),
    pub resolvent_norm: f64,
    pub distance_to_outer: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Checks `||(T - lambda I)^{-1}|| <= 1 / dist(lambda, outer polygon)` for
/// `lambda` outside the outer approximation; since the outer polygon
/// contains the closed numerical range, this is a valid consequence of the
/// resolvent inequality along the numerical range.
pub fn resolvent_bound_check(
    t: &PartialOperator,
    lambda: C64,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<ResolventBoundReport> {
    if !t.is_total() {
        return Err(Error::NotTotal);
    }
    let a = t.total_matrix(cfg)?;
    let polygon = boundary_polygon(t, m, cfg)?;
    if polygon.outer_contains(lambda, 0.0) {
        return Err(Error::InvalidArgument(format!(
            "lambda = {lambda} lies inside the outer polygon"
        )));
    }
    let n = a.nrows();
    let shifted = &a - CMat::identity(n, n) * lambda;
    let smin = sigma_min(&shifted);
    if smin == 0.0 {
        return Err(Error::Singular("T - lambda I is singular".into()));
    }
    let resolvent_norm = 1.0 / smin;
    let dist = polygon.distance_to_outer(lambda)?;
    let bound = 1.0 / dist;
    // Relative slack for the pair of numerical computations.
    let holds = resolvent_norm <= bound * (1.0 + 1e-9) + 1e-12;
    Ok(ResolventBoundReport {
        lambda: (lambda.re, lambda.im),
        resolvent_norm,
        distance_to_outer: dist,
        bound,
        holds,
    })
}

/// Uniform random unit vector in `C^d` (test/oracle support).
pub fn random_unit_vector<R: rand::Rng>(d: usize, rng: &mut R) -> CVec {
    use rand_distr::StandardNormal;
    loop {
        let v = CVec::from_iterator(
            d,
            (0..d).map(|_| {
                c(
                    rng.sample::<f64, _>(StandardNormal),
                    rng.sample::<f64, _>(StandardNormal),
                )
            }),
        );
        let norm = v.norm();
        if norm > 1e-6 {
            return v / c(norm, 0.0);
        }
    }
}
