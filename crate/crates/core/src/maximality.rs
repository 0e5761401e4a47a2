//! Omega-maximality: resolvent certificates, the one-dimensional extension
//! search, the implication chain P1 => P2 => P3 => P4, strip
//! decompositions, the strip extension correspondence and positive
//! closability.
//!
//! Soundness contract: `Maximal` is only ever produced from an exact
//! route (a full-range resolvent point, a total operator, or a proved
//! infeasibility of every one-dimensional extension when the domain has
//! codimension one); `NotMaximal` only from a witness that has been
//! re-verified through the exact containment test. Everything else is
//! `Unknown`.

use rand::SeedableRng;

use crate::error::Error;
use crate::hilbert::{
    self, c, defect_index, hermitian_eig, hermitian_part, sigma_min, skew_part, CMat, CVec,
    PartialOperator, C64,
};
use crate::lp;
use crate::numrange::{self, contained_in};
use crate::regions::{ConstraintKind, Region};
use crate::tol::ToleranceConfig;
use crate::Result;

const SAMPLE_SEED: u64 = 0xA1CE;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum MaximalityStatus {
    Maximal,
    NotMaximal,
    Unknown,
}

/// Evidence backing a verdict.
#[derive(Debug, Clone)]
pub enum Certificate {
    /// Exterior point with full range.
    Resolvent { lambda: C64 },
    /// One-dimensional extension keeping the numerical range inside the
    /// region: direction `v` (unit, orthogonal to the domain) and image `w`.
    Extension { v: CVec, w: CVec },
    /// Per-constraint eigen-data showing every admissible extension image
    /// leads to a contradiction.
    Infeasibility { detail: Vec<String> },
    None,
}

#[derive(Debug, Clone)]
pub struct MaximalityVerdict {
    pub status: MaximalityStatus,
    pub certificate: Certificate,
    pub notes: Vec<String>,
}

/// Outcome of the one-dimensional extension search.
#[derive(Debug, Clone)]
pub enum ExtensionOutcome {
    Witness { v: CVec, w: CVec },
    /// Exhaustive: only possible when the domain has codimension one.
    Infeasible { detail: Vec<String> },
    /// Budget exhausted without a witness or a proof.
    NotFound,
}

fn require_contained(t: &PartialOperator, region: &Region, cfg: &ToleranceConfig) -> Result<()> {
    let cert = contained_in(t, region, cfg)?;
    if !cert.contained {
        return Err(Error::ContainmentViolated(
            "numerical range is not contained in the region".into(),
        ));
    }
    Ok(())
}

/// Searches the complement of the region for a point where `T - lambda I`
/// has full range. Such a point certifies maximality (and forces the
/// operator to be total, since the range dimension is capped by the domain
/// dimension).
pub fn resolvent_certificate(
    t: &PartialOperator,
    region: &Region,
    samples_per_component: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<C64>> {
    require_contained(t, region, cfg)?;
    for (idx, comp) in region.complement_components().iter().enumerate() {
        for lambda in region.exterior_samples(comp, samples_per_component, SAMPLE_SEED + idx as u64)
        {
            if defect_index(t, lambda, cfg) == 0 {
                return Ok(Some(lambda));
            }
        }
    }
    Ok(None)
}

/// Per-constraint data for the extension compression
/// `M' = [[M, b], [a, c]]` with `b = F* w` and `c = <w, v>` free.
///
/// For an inequality `(phi, beta)` the rotated Hermitian part of `M'`
/// minus `beta I` is `[[Hm, g], [g*, s]]` with `g = (u b + conj(u) a*)/2`,
/// `u = e^{-i phi}`, `s = Re(u c) - beta`. Positive semidefiniteness splits
/// into: `g` orthogonal to `ker Hm` (complex-affine in `b`), and
/// `s >= g* Hm^+ g` (a convex quadratic lower bound on the slack of `c` in
/// direction `phi`). A line constraint pins `b` completely and fixes the
/// `c`-slack to an equality.
struct ConstraintData {
    phi: f64,
    beta: f64,
    eq: bool,
    /// Rows `D` with `q(b) = ||D g(b)||^2` (whitened positive part).
    whitened: CMat,
    u: C64,
}

struct VSystem {
    /// Affine rows on `b`: `rows * b = rhs` (complex-linear, no conjugates).
    rows: CMat,
    rhs: CVec,
    constraints: Vec<ConstraintData>,
    a_conj: CVec,
}

fn build_v_system(
    m: &CMat,
    a_row: &CMat,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<VSystem> {
    let d = m.nrows();
    let a_conj = CVec::from_iterator(d, (0..d).map(|j| a_row[(0, j)].conj()));
    let mut row_list: Vec<CVec> = Vec::new();
    let mut rhs_list: Vec<C64> = Vec::new();
    let mut constraints = Vec::new();
    for ct in region.constraints() {
        let u = C64::from_polar(1.0, -ct.phi);
        let pin = -u.conj() / u;
        match ct.kind {
            ConstraintKind::Eq => {
                // b = -e^{2 i phi} conj(a)^T, componentwise.
                for j in 0..d {
                    let mut row = CVec::zeros(d);
                    row[j] = c(1.0, 0.0);
                    row_list.push(row);
                    rhs_list.push(pin * a_conj[j]);
                }
                constraints.push(ConstraintData {
                    phi: ct.phi,
                    beta: ct.beta,
                    eq: true,
                    whitened: CMat::zeros(0, d),
                    u,
                });
            }
            ConstraintKind::Ineq => {
                let hm =
                    hermitian_part(&(m * u)) - CMat::identity(d, d) * c(ct.beta, 0.0);
                let (vals, vecs) = hermitian_eig(&hm, cfg)?;
                let scale = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
                let tau = cfg.tol_psd.max(cfg.tol_rank * scale);
                let mut white_rows: Vec<CVec> = Vec::new();
                for (i, &lam) in vals.iter().enumerate() {
                    let nu = vecs.column(i).into_owned();
                    if lam <= tau {
                        // Kernel direction: nu* g(b) = 0.
                        row_list.push(nu.map(|z| z.conj()));
                        let nu_a = nu.dotc(&a_conj);
                        rhs_list.push(pin * nu_a);
                    } else {
                        white_rows.push(nu.map(|z| z.conj()) / c(lam.sqrt(), 0.0));
                    }
                }
                let whitened = if white_rows.is_empty() {
                    CMat::zeros(0, d)
                } else {
                    CMat::from_rows(
                        &white_rows
                            .iter()
                            .map(|r| r.transpose())
                            .collect::<Vec<_>>(),
                    )
                };
                constraints.push(ConstraintData {
                    phi: ct.phi,
                    beta: ct.beta,
                    eq: false,
                    whitened,
                    u,
                });
            }
        }
    }
    let rows = if row_list.is_empty() {
        CMat::zeros(0, d)
    } else {
        CMat::from_rows(&row_list.iter().map(|r| r.transpose()).collect::<Vec<_>>())
    };
    Ok(VSystem {
        rows,
        rhs: CVec::from_vec(rhs_list),
        constraints,
        a_conj,
    })
}

/// Minimum-norm least squares plus an orthonormal nullspace basis.
fn affine_solve(rows: &CMat, rhs: &CVec, d: usize) -> (CVec, CMat, f64) {
    if rows.nrows() == 0 {
        return (CVec::zeros(d), CMat::identity(d, d), 0.0);
    }
    let parts = hilbert::svd_robust(rows, 1e-10);
    let mut b0 = CVec::zeros(d);
    for (i, &s) in parts.s.iter().enumerate() {
        let coef = parts.u.column(i).into_owned().dotc(rhs) / c(s, 0.0);
        b0 += parts.v.column(i).into_owned() * coef;
    }
    let residual = (rows * &b0 - rhs).norm();
    (b0, parts.right_null, residual)
}

fn quad_min(parts: &[(CMat, CVec)]) -> (CVec, f64) {
    // Minimize sum ||A_i z + r_i||^2 exactly by stacked least squares.
    let cols = parts
        .iter()
        .map(|(a, _)| a.ncols())
        .max()
        .unwrap_or(0);
    if cols == 0 {
        let val = parts.iter().map(|(_, r)| r.norm_squared()).sum();
        return (CVec::zeros(0), val);
    }
    let total_rows: usize = parts.iter().map(|(a, _)| a.nrows()).sum();
    if total_rows == 0 {
        return (CVec::zeros(cols), 0.0);
    }
    let mut stacked = CMat::zeros(total_rows, cols);
    let mut stacked_r = CVec::zeros(total_rows);
    let mut at = 0;
    for (a, r) in parts {
        for i in 0..a.nrows() {
            for j in 0..cols {
                stacked[(at, j)] = a[(i, j)];
            }
            stacked_r[at] = r[i];
            at += 1;
        }
    }
    let parts = hilbert::svd_robust(&stacked, 1e-12);
    let mut z = CVec::zeros(cols);
    let target = -&stacked_r;
    for (i, &s) in parts.s.iter().enumerate() {
        let coef = parts.u.column(i).into_owned().dotc(&target) / c(s, 0.0);
        z += parts.v.column(i).into_owned() * coef;
    }
    let val = (stacked * &z + stacked_r).norm_squared();
    (z, val)
}

fn opposite(phi_a: f64, phi_b: f64) -> bool {
    let diff = (phi_a - phi_b).rem_euclid(std::f64::consts::TAU);
    (diff - std::f64::consts::PI).abs() < 1e-9
}

enum VOutcome {
    Witness(CVec),
    Infeasible(Vec<String>),
    Unknown,
}

/// Exact feasibility decision for a fixed extension direction `v`.
fn decide_for_v(
    t: &PartialOperator,
    region: &Region,
    v: &CVec,
    cfg: &ToleranceConfig,
) -> Result<VOutcome> {
    let m = t.compress();
    let d = m.nrows();
    let a_row = v.adjoint() * t.action();
    let sys = build_v_system(&m, &CMat::from_rows(&[a_row.clone()]), region, cfg)?;
    let scale = sys.a_conj.norm().max(1.0);
    let (b0, null, residual) = affine_solve(&sys.rows, &sys.rhs, d);
    if residual > 1e-6 * scale {
        // The kernel-orthogonality and line-pinning requirements on b are
        // mutually contradictory: no image vector can work.
        let mut detail = vec![format!(
            "affine conditions on the extension column are inconsistent \
             (residual {residual:.3e})"
        )];
        for (k, ct) in sys.constraints.iter().enumerate() {
            detail.push(format!(
                "constraint {k}: phi = {:.6}, beta = {:.6}, {}",
                ct.phi,
                ct.beta,
                if ct.eq { "line" } else { "half-plane" }
            ));
        }
        return Ok(VOutcome::Infeasible(detail));
    }
    if residual > 1e-10 * scale {
        return Ok(VOutcome::Unknown);
    }
    // Whitened affine pieces q_k(z) = ||A_k z + r_k||^2.
    let half = |ct: &ConstraintData| {
        let half_u = ct.u * c(0.5, 0.0);
        let pin = ct.u.conj() * c(0.5, 0.0);
        let g0 = &b0 * half_u + &sys.a_conj * pin;
        (&ct.whitened * (&null * half_u), &ct.whitened * g0)
    };
    let pieces: Vec<(CMat, CVec)> = sys.constraints.iter().map(half).collect();
    // Exact global infeasibility over the whole affine set: an opposite
    // pair of directions needs q_i(z) + q_j(z) <= -(beta_i + beta_j); the
    // left side is convex, so its exact minimum decides.
    let mut dir_bounds: Vec<(f64, usize)> = Vec::new();
    for (k, ct) in sys.constraints.iter().enumerate() {
        if !ct.eq {
            dir_bounds.push((ct.phi, k));
        }
    }
    for i in 0..dir_bounds.len() {
        for j in (i + 1)..dir_bounds.len() {
            let (pi_, ki) = dir_bounds[i];
            let (pj, kj) = dir_bounds[j];
            if !opposite(pi_, pj) {
                continue;
            }
            let (ci, cj) = (&sys.constraints[ki], &sys.constraints[kj]);
            let (_, minsum) =
                quad_min(&[pieces[ki].clone(), pieces[kj].clone()]);
            let budget = -(ci.beta + cj.beta);
            if minsum > budget + 1e-7 * scale.max(1.0) {
                return Ok(VOutcome::Infeasible(vec![format!(
                    "opposite half-planes at phi = {:.6} and {:.6}: minimal \
                     combined Schur bound {minsum:.6e} exceeds budget {budget:.6e}",
                    pi_, pj
                )]));
            }
        }
        // Equality constraints also bound the opposite direction of any
        // half-plane: Re(e^{-i phi} c) is pinned to beta_eq.
        for ct in sys.constraints.iter().filter(|ct| ct.eq) {
            let (pi_, ki) = dir_bounds[i];
            if opposite(pi_, ct.phi + std::f64::consts::PI) {
                // Same direction: need beta_eq >= beta_i + q_i.
                let (_, minq) = quad_min(&[pieces[ki].clone()]);
                if minq > ct.beta - sys.constraints[ki].beta + 1e-7 * scale.max(1.0) {
                    return Ok(VOutcome::Infeasible(vec![format!(
                        "line at phi = {:.6} pins the slack below the Schur \
                         bound of the half-plane at phi = {:.6}",
                        ct.phi, pi_
                    )]));
                }
            }
        }
    }
    // Candidate z values, each tested through the exact c-feasibility LP.
    let mut candidates: Vec<CVec> = Vec::new();
    candidates.push(CVec::zeros(null.ncols()));
    let (z_all, _) = quad_min(&pieces);
    candidates.push(z_all);
    for z in candidates {
        let b = &b0 + &null * &z;
        // Planar LP rows for c: half-planes need slack above the Schur
        // bound, lines pin both directions.
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for (k, ct) in sys.constraints.iter().enumerate() {
            if ct.eq {
                rows.push((ct.phi, ct.beta));
                rows.push((ct.phi + std::f64::consts::PI, -ct.beta));
            } else {
                let (a_map, r) = &pieces[k];
                let q = (a_map * &z + r).norm_squared();
                rows.push((ct.phi, ct.beta + q));
            }
        }
        if let Some((x, y)) = lp::feasible_point(&rows) {
            let w = t.domain().frame() * &b + v * c(x, y);
            if let Some(w) = verify_witness(t, region, v, &w, cfg)? {
                return Ok(VOutcome::Witness(w));
            }
        }
    }
    if null.ncols() == 0 {
        // b fully determined and the c-LP is infeasible; the LP decision
        // is exact up to its tolerance.
        let mut rows: Vec<(f64, f64)> = Vec::new();
        for (k, ct) in sys.constraints.iter().enumerate() {
            if ct.eq {
                rows.push((ct.phi, ct.beta));
                rows.push((ct.phi + std::f64::consts::PI, -ct.beta));
            } else {
                let (a_map, r) = &pieces[k];
                let q = (a_map * CVec::zeros(0) + r).norm_squared();
                rows.push((ct.phi, ct.beta + q));
            }
        }
        if lp::feasible_point(&rows).is_none() {
            return Ok(VOutcome::Infeasible(vec![
                "extension column fully pinned by the affine conditions; \
                 the remaining planar slack system for the corner entry is \
                 infeasible"
                    .into(),
            ]));
        }
    }
    Ok(VOutcome::Unknown)
}

fn verify_witness(
    t: &PartialOperator,
    region: &Region,
    v: &CVec,
    w: &CVec,
    cfg: &ToleranceConfig,
) -> Result<Option<CVec>> {
    let t_ext = extend(t, v, w, cfg)?;
    let cert = contained_in(&t_ext, region, cfg)?;
    Ok(if cert.contained { Some(w.clone()) } else { None })
}

/// The extension of `T` by `T' v = w` on `D + span{v}`; `v` must be a unit
/// vector orthogonal to the domain.
pub fn extend(
    t: &PartialOperator,
    v: &CVec,
    w: &CVec,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    let n = t.ambient_dim();
    if v.nrows() != n || w.nrows() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: v.nrows().max(w.nrows()),
            context: "extension vectors".into(),
        });
    }
    if t.domain().project(v).norm() > 1e-8 || (v.norm() - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(
            "extension direction must be a unit vector orthogonal to the domain".into(),
        ));
    }
    let d = t.domain().dim();
    let mut frame = CMat::zeros(n, d + 1);
    let mut action = CMat::zeros(n, d + 1);
    for j in 0..d {
        frame.set_column(j, &t.domain().frame().column(j));
        action.set_column(j, &t.action().column(j));
    }
    frame.set_column(d, v);
    action.set_column(d, w);
    let domain = hilbert::Subspace::from_frame(frame, cfg)?;
    PartialOperator::new(domain, action)
}

/// Searches for a one-dimensional domain enlargement keeping the numerical
/// range inside the region. `budget` bounds the number of random extension
/// directions tried when the domain has codimension above one.
pub fn one_dim_extension_search(
    t: &PartialOperator,
    region: &Region,
    budget: usize,
    cfg: &ToleranceConfig,
) -> Result<ExtensionOutcome> {
    if t.is_total() {
        return Err(Error::AlreadyTotal);
    }
    require_contained(t, region, cfg)?;
    let perp = t.domain().perp_frame(cfg);
    let codim = perp.ncols();
    if codim == 1 {
        let v = perp.column(0).into_owned();
        return Ok(match decide_for_v(t, region, &v, cfg)? {
            VOutcome::Witness(w) => ExtensionOutcome::Witness { v, w },
            VOutcome::Infeasible(detail) => ExtensionOutcome::Infeasible { detail },
            VOutcome::Unknown => ExtensionOutcome::NotFound,
        });
    }
    // Multi-start: the perp frame columns first, then seeded random unit
    // directions in the orthogonal complement.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    for start in 0..budget.max(codim) {
        let v = if start < codim {
            perp.column(start).into_owned()
        } else {
            let z = numrange::random_unit_vector(codim, &mut rng);
            let v = &perp * z;
            let norm = v.norm();
            if norm < 1e-9 {
                continue;
            }
            v / c(norm, 0.0)
        };
        if let VOutcome::Witness(w) = decide_for_v(t, region, &v, cfg)? {
            return Ok(ExtensionOutcome::Witness { v, w });
        }
    }
    Ok(ExtensionOutcome::NotFound)
}

/// Full maximality decision.
pub fn is_maximal(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<MaximalityVerdict> {
    require_contained(t, region, cfg)?;
    if t.is_total() {
        let cert = resolvent_certificate(t, region, 5, cfg)?;
        return Ok(MaximalityVerdict {
            status: MaximalityStatus::Maximal,
            certificate: cert
                .map(|lambda| Certificate::Resolvent { lambda })
                .unwrap_or(Certificate::None),
            notes: vec!["total operator admits no proper extension".into()],
        });
    }
    match one_dim_extension_search(t, region, 64, cfg)? {
        ExtensionOutcome::Witness { v, w } => Ok(MaximalityVerdict {
            status: MaximalityStatus::NotMaximal,
            certificate: Certificate::Extension { v, w },
            notes: vec!["witness extension re-verified by exact containment".into()],
        }),
        ExtensionOutcome::Infeasible { detail } => Ok(MaximalityVerdict {
            status: MaximalityStatus::Maximal,
            certificate: Certificate::Infeasibility { detail },
            notes: vec![
                "domain has codimension one; every admissible image vector is excluded".into(),
            ],
        }),
        ExtensionOutcome::NotFound => Ok(MaximalityVerdict {
            status: MaximalityStatus::Unknown,
            certificate: Certificate::None,
            notes: vec!["extension search budget exhausted without witness or proof".into()],
        }),
    }
}

/// Report for the predicate chain: P1 (some exterior point has full
/// range), P2 (every sampled point of some complement component has defect
/// zero), P3 (maximal and total), P4 (maximal).
#[derive(Debug, Clone, serde::Serialize)]
pub struct ImplicationReport {
    pub p1: bool,
    pub p2: bool,
    pub p3: bool,
    pub p4: bool,
    pub maximal_unknown: bool,
    pub converse_applicable: bool,
    pub violations: Vec<String>,
}

pub fn implication_suite(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<ImplicationReport> {
    require_contained(t, region, cfg)?;
    let components = region.complement_components();
    let mut p1 = false;
    let mut p2 = false;
    for (idx, comp) in components.iter().enumerate() {
        let samples = region.exterior_samples(comp, 5, SAMPLE_SEED + idx as u64);
        let defects: Vec<usize> = samples
            .iter()
            .map(|&l| defect_index(t, l, cfg))
            .collect();
        if defects.iter().any(|&d| d == 0) {
            p1 = true;
        }
        if defects.iter().all(|&d| d == 0) {
            p2 = true;
        }
    }
    let verdict = is_maximal(t, region, cfg)?;
    let p4 = verdict.status == MaximalityStatus::Maximal;
    let p3 = p4 && t.is_total();
    let maximal_unknown = verdict.status == MaximalityStatus::Unknown;
    let mut violations = Vec::new();
    if p1 && !p2 {
        violations.push("P1 holds but P2 fails".into());
    }
    if p2 && !p3 && !maximal_unknown {
        violations.push("P2 holds but P3 fails".into());
    }
    if p3 && !p4 {
        violations.push("P3 holds but P4 fails".into());
    }
    // Sector and strip converse: P3 => P1. At finite dimension the
    // exterior samples sit outside the closed numerical range of a total
    // operator, so the converse is checkable for every region; the flag
    // records where the source criterion actually applies.
    let converse_applicable = region.is_strip() || sector_like(region);
    if converse_applicable && p3 && !p1 {
        violations.push("P3 holds on a sector or strip but P1 fails".into());
    }
    Ok(ImplicationReport {
        p1,
        p2,
        p3,
        p4,
        maximal_unknown,
        converse_applicable,
        violations,
    })
}

fn sector_like(region: &Region) -> bool {
    let cts = region.constraints();
    match cts.len() {
        2 => {
            let eqs = cts.iter().filter(|ct| ct.kind == ConstraintKind::Eq).count();
            // A ray (half-line) or two non-parallel half-planes.
            eqs == 1 || (eqs == 0 && !opposite(cts[0].phi, cts[1].phi))
        }
        _ => false,
    }
}

/// Splitting along a horizontal strip: `T = S + iB` with `S` symmetric on
/// the same domain and `B` Hermitian on the whole space, `||B|| <= alpha`.
#[derive(Debug, Clone)]
pub struct StripDecomposition {
    pub s: PartialOperator,
    pub b: CMat,
    pub alpha: f64,
}

/// Half-width of a canonical (centered, horizontal) strip region.
pub fn strip_half_width(region: &Region) -> Result<f64> {
    if !region.is_strip() && !region.is_line() {
        return Err(Error::BadRegion("not a strip region".into()));
    }
    if region.is_line() {
        let ct = &region.constraints()[0];
        if angle_close(ct.phi, std::f64::consts::FRAC_PI_2) && ct.beta.abs() < 1e-9 {
            return Ok(0.0);
        }
        return Err(Error::BadRegion("line strip must be the real axis".into()));
    }
    let (a, b) = (&region.constraints()[0], &region.constraints()[1]);
    let (up, down) = if angle_close(a.phi, std::f64::consts::FRAC_PI_2) {
        (a, b)
    } else {
        (b, a)
    };
    if !angle_close(up.phi, std::f64::consts::FRAC_PI_2)
        || !angle_close(down.phi, -std::f64::consts::FRAC_PI_2)
    {
        return Err(Error::BadRegion("strip must be horizontal".into()));
    }
    let alpha = -(up.beta + down.beta) / 2.0;
    let center = (up.beta - down.beta) / 2.0;
    if center.abs() > 1e-9 {
        return Err(Error::BadRegion("strip must be centered on the real axis".into()));
    }
    Ok(alpha)
}

fn angle_close(phi: f64, target: f64) -> bool {
    let diff = (phi - target).rem_euclid(std::f64::consts::TAU);
    diff < 1e-9 || diff > std::f64::consts::TAU - 1e-9
}

pub fn strip_decompose(
    t: &PartialOperator,
    strip: &Region,
    cfg: &ToleranceConfig,
) -> Result<StripDecomposition> {
    let alpha = strip_half_width(strip)?;
    require_contained(t, strip, cfg)?;
    let n = t.ambient_dim();
    let f = t.domain().frame();
    let b = match t.ambient_skew() {
        Some(b) => b.clone(),
        None => {
            let im = skew_part(&t.compress());
            f * im * f.adjoint()
        }
    };
    let bnorm = hilbert::spectral_norm(&b);
    if bnorm > alpha + 1e-8 {
        return Err(Error::InvalidArgument(format!(
            "imaginary part norm {bnorm:.6} exceeds strip half-width {alpha:.6}"
        )));
    }
    let s_action = t.action() - (&b * f) * c(0.0, 1.0);
    let s = PartialOperator::new(t.domain().clone(), s_action)?;
    let herm_dev = hilbert::spectral_norm(&skew_part(&s.compress()));
    if herm_dev > 1e-8 * bnorm.max(1.0) {
        return Err(Error::NonHermitian {
            deviation: herm_dev,
            tol: 1e-8,
        });
    }
    let _ = n;
    Ok(StripDecomposition { s, b, alpha })
}

/// Maps a symmetric extension `S'` of the symmetric part to the
/// corresponding extension `T' = S' + iB` with numerical range inside the
/// closed strip of half-width `alpha`.
pub fn strip_extension_map(
    s_prime: &PartialOperator,
    b: &CMat,
    alpha: f64,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    let dev = hilbert::spectral_norm(&skew_part(&s_prime.compress()));
    if dev > 1e-8 {
        return Err(Error::NonHermitian { deviation: dev, tol: 1e-8 });
    }
    let bdev = hilbert::spectral_norm(&(b - b.adjoint()));
    if bdev > 1e-8 {
        return Err(Error::NonHermitian { deviation: bdev, tol: 1e-8 });
    }
    if hilbert::spectral_norm(b) > alpha + 1e-8 {
        return Err(Error::InvalidArgument(
            "imaginary part exceeds the strip half-width".into(),
        ));
    }
    let action = s_prime.action() + (b * s_prime.domain().frame()) * c(0.0, 1.0);
    let t_prime = PartialOperator::new(s_prime.domain().clone(), action)?
        .with_ambient_skew(b.clone(), cfg)?;
    let strip = Region::horizontal_strip(alpha);
    let cert = contained_in(&t_prime, &strip, cfg)?;
    if !cert.contained {
        return Err(Error::ContainmentViolated(
            "mapped extension leaves the closed strip".into(),
        ));
    }
    Ok(t_prime)
}

/// Inverse of the correspondence: recovers `S' = T' - iB`.
pub fn strip_extension_inverse(
    t_prime: &PartialOperator,
    b: &CMat,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    let action = t_prime.action() - (b * t_prime.domain().frame()) * c(0.0, 1.0);
    let s_prime = PartialOperator::new(t_prime.domain().clone(), action)?;
    let dev = hilbert::spectral_norm(&skew_part(&s_prime.compress()));
    if dev > 1e-8 {
        return Err(Error::NonHermitian { deviation: dev, tol: 1e-8 });
    }
    let _ = cfg;
    Ok(s_prime)
}

/// Kernel criterion for positive closability: the quadratic form can only
/// vanish along `ker H` (H the Hermitian part of the compression), so the
/// attainable limits of images are exactly the images of that kernel.
pub fn positively_closable(t: &PartialOperator, cfg: &ToleranceConfig) -> Result<bool> {
    require_contained(t, &Region::positive_ray(), cfg)?;
    let m = t.compress();
    let d = m.nrows();
    if d == 0 {
        return Ok(true);
    }
    let h = hermitian_part(&m);
    let (vals, vecs) = hermitian_eig(&h, cfg)?;
    let scale = vals.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let tau = cfg.tol_psd.max(cfg.tol_rank * scale);
    let act_scale = hilbert::spectral_norm(t.action()).max(1.0);
    for (i, &lam) in vals.iter().enumerate() {
        if lam <= tau {
            let k = vecs.column(i).into_owned();
            if (t.action() * k).norm() > 1e-8 * act_scale {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Report for the domain-adjoint equality criterion on strips.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DomainAdjointReport {
    pub sampled: Vec<(f64, f64)>,
    pub all_invertible: bool,
    pub trivialized_at_finite_dimension: bool,
    pub notes: Vec<String>,
}

/// For a total operator inside a closed strip, checks that sampled points
/// of the strip complement are in the resolvent set. At finite dimension
/// the domain equality with the adjoint holds automatically, so the report
/// records consistency rather than a nontrivial test.
pub fn domain_adjoint_equality_check(
    t: &PartialOperator,
    strip: &Region,
    cfg: &ToleranceConfig,
) -> Result<DomainAdjointReport> {
    if !t.is_total() {
        return Err(Error::NotTotal);
    }
    strip_half_width(strip)?;
    require_contained(t, strip, cfg)?;
    let a = t.total_matrix(cfg)?;
    let n = a.nrows();
    let scale = hilbert::spectral_norm(&a).max(1.0);
    let mut sampled = Vec::new();
    let mut all_invertible = true;
    for (idx, comp) in strip.complement_components().iter().enumerate() {
        for lambda in strip.exterior_samples(comp, 8, SAMPLE_SEED + idx as u64) {
            let smin = sigma_min(&(&a - CMat::identity(n, n) * lambda));
            sampled.push((lambda.re, lambda.im));
            if smin <= 1e-10 * scale {
                all_invertible = false;
            }
        }
    }
    Ok(DomainAdjointReport {
        sampled,
        all_invertible,
        trivialized_at_finite_dimension: true,
        notes: vec![
            "equality of the domain with the adjoint domain is automatic at finite \
             dimension; the exterior-resolvent side is verified concretely"
                .into(),
        ],
    })
}
