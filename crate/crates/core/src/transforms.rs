//! The Phillips/Cayley-type transform `K = (T - I)(T + I)^{-1}`, its
//! inverse, the region condition on transformed operators and the related
//! contraction classes.
//!
//! The transform sends operators with numerical range in the closed right
//! half-plane to contractions defined on the range of `T + I`, preserves
//! extensions in both directions and turns maximality questions about `T`
//! into maximality questions about `K`.

use serde::Serialize;

use crate::error::Error;
use crate::hilbert::{
    self, c, hermitian_eig, hermitian_part, pseudo_solve, rank, sigma_min, spectral_norm, CMat,
    PartialOperator, C64,
};
use crate::regions::{ConstraintKind, Region};
use crate::tol::ToleranceConfig;
use crate::Result;

/// A transformed operator together with the source it came from.
#[derive(Debug, Clone)]
pub struct TransformedOperator {
    pub k: PartialOperator,
    pub source: PartialOperator,
    /// Affine normalization `z -> e^{-i phi0} z - beta0` applied to the
    /// source before transforming; `(0.0, 0.0)` means none.
    pub normalization: (f64, f64),
    /// Smallest singular value of `T + I` on the domain; small values mean
    /// the transform is ill-conditioned.
    pub conditioning: f64,
}

/// `tau(T) = (T - I)(T + I)^{-1}` on `D(K) = R(T + I)`.
///
/// The caller is responsible for the numerical range sitting inside the
/// closed right half-plane (use [`normalized_tau`] for general regions);
/// the construction itself only needs `T + I` injective on the domain.
pub fn tau(t: &PartialOperator, cfg: &ToleranceConfig) -> Result<TransformedOperator> {
    let f = t.domain().frame();
    let d = t.domain().dim();
    let plus = t.action() + f;
    let minus = t.action() - f;
    if rank(&plus, cfg) < d {
        return Err(Error::Singular(
            "T + I is not injective on the domain; -1 meets the numerical range".into(),
        ));
    }
    let conditioning = sigma_min(&plus);
    // Orthonormal frame of R(T + I); K maps (T + I) xi to (T - I) xi.
    let domain_k = span_subspace(&hilbert::column_space(&plus, cfg), cfg)?;
    let coords = pseudo_solve(&plus, domain_k.frame(), cfg);
    let action_k = &minus * coords;
    let k = PartialOperator::new(domain_k, action_k)?;
    let inv_branch = k.domain().frame() - k.action();
    if rank(&inv_branch, cfg) < k.domain().dim() {
        return Err(Error::Singular("I - K is not injective on the transform domain".into()));
    }
    Ok(TransformedOperator {
        k,
        source: t.clone(),
        normalization: (0.0, 0.0),
        conditioning,
    })
}

/// Singular-vector blocks of clustered values come back orthonormal only
/// to the cluster gap; a Gram-Schmidt pass restores frame quality.
fn span_subspace(cols: &CMat, cfg: &ToleranceConfig) -> Result<hilbert::Subspace> {
    let vecs: Vec<crate::hilbert::CVec> =
        (0..cols.ncols()).map(|j| cols.column(j).into_owned()).collect();
    hilbert::orthonormalize(&vecs, cfg)
}

/// Normalizes the source into the closed right half-plane using the first
/// constraint `(phi0, beta0)` of the region (`z -> e^{-i phi0} z - beta0`)
/// and transforms the result. The map is recorded in `normalization`.
pub fn normalized_tau(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<TransformedOperator> {
    let ct = region
        .constraints()
        .first()
        .ok_or_else(|| Error::BadRegion("region without constraints".into()))?;
    let (phi0, beta0) = (ct.phi, ct.beta);
    let rot = C64::from_polar(1.0, -phi0);
    let action = t.action() * rot - t.domain().frame() * c(beta0, 0.0);
    let shifted = PartialOperator::new(t.domain().clone(), action)?;
    let mut out = tau(&shifted, cfg)?;
    out.source = t.clone();
    out.normalization = (phi0, beta0);
    Ok(out)
}

/// `T = (I + K)(I - K)^{-1}` on `D(T) = R(I - K)`.
pub fn inverse_tau(k: &PartialOperator, cfg: &ToleranceConfig) -> Result<PartialOperator> {
    let f = k.domain().frame();
    let d = k.domain().dim();
    let minus = f - k.action();
    let plus = f + k.action();
    if rank(&minus, cfg) < d {
        return Err(Error::Singular("I - K is not injective on the domain".into()));
    }
    let domain_t = span_subspace(&hilbert::column_space(&minus, cfg), cfg)?;
    let coords = pseudo_solve(&minus, domain_t.frame(), cfg);
    let action_t = &plus * coords;
    PartialOperator::new(domain_t, action_t)
}

/// Decides whether `<(I+K) eta, (I-K) eta>` lies in the region for every
/// `eta` in the domain of `K`.
///
/// In compressed coordinates the pairing is the quadratic form of
/// `(F - A)^* (F + A)` (`F` the domain frame, `A` the action), so each
/// half-plane constraint `(phi, beta)` becomes positive semidefiniteness
/// of `Herm(e^{-i phi} (F-A)^*(F+A)) - beta (F-A)^*(F-A)` and each line
/// constraint forces that matrix to vanish. The form is positively
/// homogeneous, so no normalization of `eta` is needed.
pub fn check_region_condition(
    k: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<bool> {
    let f = k.domain().frame();
    let a = k.action();
    let d = k.domain().dim();
    if d == 0 {
        return Ok(true);
    }
    let w = f - a;
    let u = f + a;
    let pairing = w.adjoint() * u;
    let gram = w.adjoint() * w;
    let scale = spectral_norm(&pairing).max(spectral_norm(&gram)).max(1.0);
    for ct in region.constraints() {
        let rot = C64::from_polar(1.0, -ct.phi);
        let h = hermitian_part(&(&pairing * rot)) - &gram * c(ct.beta, 0.0);
        match ct.kind {
            ConstraintKind::Ineq => {
                let (vals, _) = hermitian_eig(&h, cfg)?;
                if vals[0] < -cfg.tol_psd * scale {
                    return Ok(false);
                }
            }
            ConstraintKind::Eq => {
                if spectral_norm(&h) > cfg.tol_eq * scale {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Membership in the class `C(theta)`:
/// `||sin(theta) K + i cos(theta) I|| <= 1` and the same with `-i`.
pub fn class_c_theta(k: &PartialOperator, theta: f64, cfg: &ToleranceConfig) -> Result<bool> {
    if !(0.0..std::f64::consts::FRAC_PI_2).contains(&theta) || theta == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "theta must lie strictly between 0 and pi/2, got {theta}"
        )));
    }
    if !k.is_total() {
        return Err(Error::NotTotal);
    }
    let a = k.total_matrix(cfg)?;
    let n = a.nrows();
    let eye = CMat::identity(n, n);
    let plus = &a * c(theta.sin(), 0.0) + &eye * c(0.0, theta.cos());
    let minus = &a * c(theta.sin(), 0.0) - &eye * c(0.0, theta.cos());
    Ok(spectral_norm(&plus) <= 1.0 + 1e-9 && spectral_norm(&minus) <= 1.0 + 1e-9)
}

/// Summary predicates of a transformed operator.
#[derive(Debug, Clone, Serialize)]
pub struct TransformReport {
    pub contraction: bool,
    pub isometry: bool,
    pub krein: bool,
    pub class_c_theta: Option<ClassCTheta>,
    pub region_condition: bool,
    pub conditioning: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassCTheta {
    pub theta: f64,
    pub holds: bool,
}

pub fn transform_report(
    t: &PartialOperator,
    region: &Region,
    theta: Option<f64>,
    cfg: &ToleranceConfig,
) -> Result<TransformReport> {
    let transformed = normalized_tau(t, region, cfg)?;
    let k = &transformed.k;
    let sv = hilbert::singular_values(k.action());
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    let contraction = smax <= 1.0 + 1e-9;
    let isometry = (smax - 1.0).abs() <= 1e-9 && (smin - 1.0).abs() <= 1e-9;
    let krein = contraction && hilbert::skew_part(&k.compress()).norm() <= 1e-9;
    let class_c_theta = match theta {
        Some(theta) if k.is_total() => Some(ClassCTheta {
            theta,
            holds: class_c_theta_dispatch(k, theta, cfg)?,
        }),
        _ => None,
    };
    let normalized_region = normalize_region(region);
    let region_condition = check_region_condition(k, &normalized_region, cfg)?;
    Ok(TransformReport {
        contraction,
        isometry,
        krein,
        class_c_theta,
        region_condition,
        conditioning: transformed.conditioning,
    })
}

fn class_c_theta_dispatch(k: &PartialOperator, theta: f64, cfg: &ToleranceConfig) -> Result<bool> {
    class_c_theta(k, theta, cfg)
}

/// The image of the region under the normalization recorded by
/// [`normalized_tau`]: each constraint `(phi, beta)` of the source maps to
/// `(phi - phi0, beta - beta0 cos(phi - phi0))`.
fn normalize_region(region: &Region) -> Region {
    let first = &region.constraints()[0];
    let (phi0, beta0) = (first.phi, first.beta);
    let constraints = region
        .constraints()
        .iter()
        .map(|ct| {
            let phi = ct.phi - phi0;
            let beta = ct.beta - beta0 * phi.cos();
            match ct.kind {
                ConstraintKind::Ineq => crate::regions::HalfPlaneConstraint::ineq(phi, beta),
                ConstraintKind::Eq => crate::regions::HalfPlaneConstraint::eq(phi, beta),
            }
        })
        .collect();
    Region::new(constraints).expect("normalized region stays nonempty")
}

/// Extension-pair correspondence report: whether `T subseteq T'` maps to
/// `tau(T) subseteq tau(T')`.
#[derive(Debug, Clone, Serialize)]
pub struct CorrespondenceReport {
    pub extension_found: bool,
    pub source_pair_extends: bool,
    pub transformed_pair_extends: bool,
    pub holds: bool,
}

/// Checks the extension-preservation of the transform on a concrete pair:
/// the operator and, when one exists, the one-dimensional extension found
/// by the maximality search inside the region. Total operators check the
/// trivial self-pair.
pub fn maximality_correspondence_check(
    t: &PartialOperator,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<CorrespondenceReport> {
    let t_prime = if t.is_total() {
        Some(t.clone())
    } else {
        match crate::maximality::one_dim_extension_search(t, region, 64, cfg)? {
            crate::maximality::ExtensionOutcome::Witness { v, w } => {
                Some(crate::maximality::extend(t, &v, &w, cfg)?)
            }
            _ => None,
        }
    };
    let Some(t_prime) = t_prime else {
        return Ok(CorrespondenceReport {
            extension_found: false,
            source_pair_extends: false,
            transformed_pair_extends: false,
            holds: true,
        });
    };
    let source_pair_extends = t_prime.extends(t, 1e-8);
    let tk = normalized_tau(t, region, cfg)?;
    let tk_prime = normalized_tau(&t_prime, region, cfg)?;
    let transformed_pair_extends = tk_prime.k.extends(&tk.k, 1e-7);
    Ok(CorrespondenceReport {
        extension_found: true,
        source_pair_extends,
        transformed_pair_extends,
        holds: source_pair_extends == transformed_pair_extends,
    })
}
