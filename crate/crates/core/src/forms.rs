//! Sesquilinear forms at finite dimension: adjoint and real/imaginary
//! parts, associated operators, q-closedness constants against a
//! domain norm, solvability via bounded perturbations and the strip
//! theorem for forms.
//!
//! A form lives on a subspace through an orthonormal frame and a
//! coefficient matrix: `O(xi, eta) = (coords eta)^* . coeff . (coords xi)`.
//! Its numerical range is the field of values of the coefficient matrix.

use serde::Serialize;

use crate::error::Error;
use crate::hilbert::{
    c, hermitian_eig, hermitian_part, sigma_min, skew_part, spectral_norm, CMat, CVec,
    PartialOperator, Subspace, C64,
};
use crate::maximality::{self, MaximalityStatus};
use crate::numrange::{self, boundary_polygon};
use crate::regions::{ConstraintKind, Region};
use crate::tol::ToleranceConfig;
use crate::{lp, Result};

/// Sesquilinear form on a subspace, optionally carrying a positive-definite
/// Gram matrix `G` modeling the form norm `||xi||_O^2 = x^* G x`.
#[derive(Debug, Clone)]
pub struct Form {
    domain: Subspace,
    coeff: CMat,
    domain_norm: Option<CMat>,
}

impl Form {
    pub fn new(
        domain: Subspace,
        coeff: CMat,
        domain_norm: Option<CMat>,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        let d = domain.dim();
        if coeff.nrows() != d || coeff.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: coeff.nrows().max(coeff.ncols()),
                context: "form coefficient matrix must be d x d".into(),
            });
        }
        if let Some(g) = &domain_norm {
            if g.nrows() != d || g.ncols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: g.nrows().max(g.ncols()),
                    context: "domain norm matrix must be d x d".into(),
                });
            }
            let dev = spectral_norm(&(g - g.adjoint()));
            if dev > cfg.tol_eq {
                return Err(Error::NonHermitian {
                    deviation: dev,
                    tol: cfg.tol_eq,
                });
            }
            let (vals, _) = hermitian_eig(&hermitian_part(g), cfg)?;
            if vals[0] <= cfg.tol_psd {
                return Err(Error::InvalidArgument(format!(
                    "domain norm matrix not positive definite (lambda_min = {:.3e})",
                    vals[0]
                )));
            }
        }
        Ok(Self {
            domain,
            coeff,
            domain_norm,
        })
    }

    /// Form on all of `C^n` with the identity Gram matrix left implicit.
    pub fn total(coeff: CMat, domain_norm: Option<CMat>, cfg: &ToleranceConfig) -> Result<Self> {
        let n = coeff.nrows();
        Self::new(Subspace::total(n), coeff, domain_norm, cfg)
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn coeff(&self) -> &CMat {
        &self.coeff
    }

    pub fn domain_norm(&self) -> Option<&CMat> {
        self.domain_norm.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// `O(xi, eta)` for ambient vectors in the domain.
    pub fn value(&self, xi: &CVec, eta: &CVec, cfg: &ToleranceConfig) -> Result<C64> {
        let x = self.domain.coordinates(xi, cfg)?;
        let y = self.domain.coordinates(eta, cfg)?;
        Ok(y.dotc(&(&self.coeff * x)))
    }

    /// Form norm `||xi||_O` (Gram matrix `G`, identity when absent).
    pub fn form_norm(&self, xi: &CVec, cfg: &ToleranceConfig) -> Result<f64> {
        let x = self.domain.coordinates(xi, cfg)?;
        Ok(match &self.domain_norm {
            Some(g) => x.dotc(&(g * &x)).re.max(0.0).sqrt(),
            None => x.norm(),
        })
    }

    /// Partial operator whose compression is the coefficient matrix; its
    /// numerical range is the numerical range of the form.
    pub fn range_carrier(&self) -> PartialOperator {
        let action = self.domain.frame() * &self.coeff;
        PartialOperator::new(self.domain.clone(), action).expect("frame dimensions agree")
    }
}

/// `O^*(xi, eta) = conj(O(eta, xi))`: conjugate-transposed coefficients.
pub fn adjoint_form(f: &Form) -> Form {
    Form {
        domain: f.domain.clone(),
        coeff: f.coeff.adjoint(),
        domain_norm: f.domain_norm.clone(),
    }
}

/// `Re O = (O + O^*)/2`: Hermitian part of the coefficients.
pub fn real_part(f: &Form) -> Form {
    Form {
        domain: f.domain.clone(),
        coeff: hermitian_part(&f.coeff),
        domain_norm: f.domain_norm.clone(),
    }
}

/// `Im O = (O - O^*)/2i`: skew part of the coefficients.
pub fn imag_part(f: &Form) -> Form {
    Form {
        domain: f.domain.clone(),
        coeff: skew_part(&f.coeff),
        domain_norm: f.domain_norm.clone(),
    }
}

/// The operator representing a total-domain form: `O(xi, eta) =
/// <T xi, eta>` with `T` the coefficient matrix in ambient coordinates.
/// Proper domains are rejected: the representing vector is non-unique
/// there, which is exactly the density failure the infinite-dimensional
/// theory excludes.
pub fn associated_operator(f: &Form, cfg: &ToleranceConfig) -> Result<PartialOperator> {
    if !f.domain.is_total() {
        return Err(Error::NotTotal);
    }
    let frame = f.domain.frame();
    PartialOperator::total(frame * &f.coeff * frame.adjoint()).map(|t| {
        let _ = cfg;
        t
    })
}

/// `G^{-1/2}` of a positive-definite Hermitian Gram matrix.
fn inv_sqrt(g: &CMat, cfg: &ToleranceConfig) -> Result<CMat> {
    let (vals, vecs) = hermitian_eig(&hermitian_part(g), cfg)?;
    let d = g.nrows();
    if vals[0] <= cfg.tol_psd {
        return Err(Error::InvalidArgument(
            "Gram matrix not positive definite".into(),
        ));
    }
    let mut m = CMat::zeros(d, d);
    for i in 0..d {
        let col = vecs.column(i).into_owned();
        m += &col * col.adjoint() * c(1.0 / vals[i].sqrt(), 0.0);
    }
    Ok(m)
}

/// q-closedness constants: `alpha` with `||xi|| <= alpha ||xi||_O`
/// (so `alpha = 1/sqrt(lambda_min(G))`) and `beta` with
/// `|O(xi,eta)| <= beta ||xi||_O ||eta||_O` (the largest singular value of
/// `G^{-1/2} coeff G^{-1/2}`). Reflexivity of the form domain is automatic
/// at finite dimension.
pub fn q_closedness_constants(f: &Form, cfg: &ToleranceConfig) -> Result<(f64, f64)> {
    let g = f
        .domain_norm
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("q-closedness needs a domain norm".into()))?;
    let (vals, _) = hermitian_eig(&hermitian_part(g), cfg)?;
    if vals[0] <= cfg.tol_psd {
        return Err(Error::InvalidArgument(
            "Gram matrix not positive definite".into(),
        ));
    }
    let alpha = 1.0 / vals[0].sqrt();
    let gi = inv_sqrt(g, cfg)?;
    let beta = spectral_norm(&(&gi * &f.coeff * &gi));
    Ok((alpha, beta))
}

/// Membership of `B` in the perturbation class: `T + B` boundedly
/// invertible for the associated operator `T`.
pub fn perturbation_in_p(f: &Form, b: &CMat, cfg: &ToleranceConfig) -> Result<bool> {
    let t = associated_operator(f, cfg)?;
    let m = t.total_matrix(cfg)? + b;
    let scale = spectral_norm(&m).max(1.0);
    Ok(sigma_min(&m) > cfg.tol_rank * scale)
}

/// Three-valued outcome of the region-disjointness test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Disjointness {
    Disjoint,
    Overlaps,
    Inconclusive,
}

/// Emptiness of `(-W(B)) intersect R` via the outer polygon of `-W(B)`:
/// infeasibility of the joint constraint system proves disjointness
/// (the outer polygon contains `-W(B)`); an inner polygon point inside `R`
/// proves overlap; anything else stays inconclusive.
fn negated_range_disjoint(
    b: &CMat,
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<Disjointness> {
    let neg = PartialOperator::total(-b)?;
    let polygon = boundary_polygon(&neg, 64, cfg)?;
    for z in polygon.inner_points_complex() {
        if region.contains(z, cfg.tol_psd) {
            return Ok(Disjointness::Overlaps);
        }
    }
    let mut constraints: Vec<(f64, f64)> = Vec::new();
    for ct in region.constraints() {
        constraints.push((ct.phi, ct.beta));
        if ct.kind == ConstraintKind::Eq {
            constraints.push((ct.phi + std::f64::consts::PI, -ct.beta));
        }
    }
    // Supporting half-planes of -W(B): Re(e^{-i phi} z) <= h(phi).
    for (&phi, &h) in polygon.angles.iter().zip(&polygon.support) {
        constraints.push((phi + std::f64::consts::PI, -h));
    }
    if lp::feasible_point(&constraints).is_none() {
        Ok(Disjointness::Disjoint)
    } else {
        Ok(Disjointness::Inconclusive)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationMaximalityReport {
    /// `T + B` invertible.
    pub perturbation_ok: bool,
    pub disjointness: Disjointness,
    /// Both preconditions held, so maximality was asserted.
    pub asserted: bool,
    pub verdict: Option<MaximalityStatus>,
    /// Preconditions held but the direct verdict was not Maximal. Must
    /// never happen.
    pub discrepancy: bool,
}

/// Solvability-based maximality: if `T + B` is invertible and
/// `(-W_B) intersect R` is empty, the associated operator is R-maximal;
/// the direct maximality decision is run and compared whenever the
/// preconditions certify.
pub fn maximality_from_perturbation(
    f: &Form,
    region: &Region,
    b: &CMat,
    cfg: &ToleranceConfig,
) -> Result<PerturbationMaximalityReport> {
    let t = associated_operator(f, cfg)?;
    let cert = numrange::contained_in(&t, region, cfg)?;
    if !cert.contained {
        return Err(Error::ContainmentViolated(
            "associated operator range not inside the region".into(),
        ));
    }
    let perturbation_ok = perturbation_in_p(f, b, cfg)?;
    let disjointness = negated_range_disjoint(b, region, cfg)?;
    if perturbation_ok && disjointness == Disjointness::Disjoint {
        let verdict = maximality::is_maximal(&t, region, cfg)?;
        let discrepancy = verdict.status != MaximalityStatus::Maximal;
        Ok(PerturbationMaximalityReport {
            perturbation_ok,
            disjointness,
            asserted: true,
            verdict: Some(verdict.status),
            discrepancy,
        })
    } else {
        Ok(PerturbationMaximalityReport {
            perturbation_ok,
            disjointness,
            asserted: false,
            verdict: None,
            discrepancy: false,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StripFormReport {
    /// Strip half-width.
    pub alpha: f64,
    /// `||Im coeff|| <= alpha` within tolerance.
    pub imag_bounded: bool,
    /// Shift `mu` making `Re coeff - mu I` invertible.
    pub real_shift: f64,
    pub real_solvable: bool,
    /// Every sampled exterior point of the outer polygon of `W(T)` is a
    /// resolvent point.
    pub exterior_resolvent: bool,
    pub exterior_samples: Vec<[f64; 2]>,
    pub ok: bool,
}

/// Strip theorem for forms, checked along the decomposition route of its
/// proof: `T = S + iB` with `S` Hermitian and `||B|| <= alpha`, the real
/// part solvable after a shift, and the exterior of the outer polygon of
/// `W(T)` made of resolvent points.
pub fn strip_form_theorem_check(
    f: &Form,
    strip: &Region,
    cfg: &ToleranceConfig,
) -> Result<StripFormReport> {
    let alpha = maximality::strip_half_width(strip)?;
    let t = associated_operator(f, cfg)?;
    let cert = numrange::contained_in(&t, strip, cfg)?;
    if !cert.contained {
        return Err(Error::ContainmentViolated(
            "form numerical range not inside the strip".into(),
        ));
    }
    let s = hermitian_part(&f.coeff);
    let b = skew_part(&f.coeff);
    let imag_bounded = spectral_norm(&b) <= alpha + cfg.tol_psd;
    // Any mu above the top of the spectrum of S is admissible.
    let (s_vals, _) = hermitian_eig(&s, cfg)?;
    let real_shift = s_vals[f.dim() - 1] + 1.0;
    let d = f.dim();
    let shifted = &s - CMat::identity(d, d) * c(real_shift, 0.0);
    let real_solvable = sigma_min(&shifted) > cfg.tol_rank * spectral_norm(&shifted).max(1.0);
    let polygon = boundary_polygon(&t, 64, cfg)?;
    let outer = polygon.outer_region()?;
    let m = t.total_matrix(cfg)?;
    let n = m.nrows();
    let mut exterior_resolvent = true;
    let mut samples = Vec::new();
    for (idx, comp) in outer.complement_components().iter().enumerate() {
        for lambda in outer.exterior_samples(comp, 4, 0xF0E1 + idx as u64) {
            let res = &m - CMat::identity(n, n) * lambda;
            exterior_resolvent &= sigma_min(&res) > cfg.tol_rank * spectral_norm(&res).max(1.0);
            samples.push([lambda.re, lambda.im]);
        }
    }
    Ok(StripFormReport {
        alpha,
        imag_bounded,
        real_shift,
        real_solvable,
        exterior_resolvent,
        exterior_samples: samples,
        ok: imag_bounded && real_solvable && exterior_resolvent,
    })
}

/// Inf-sup constant of the perturbed form against the `G`-norm:
/// `c = sigma_min(G^{-1/2} (coeff + U) G^{-1/2})`, the best constant with
/// `c ||xi||_O <= sup_{||eta||_O = 1} |(O + U)(xi, eta)|`.
pub fn inf_sup_criterion(f: &Form, u: &CMat, cfg: &ToleranceConfig) -> Result<f64> {
    let g = f
        .domain_norm
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("inf-sup criterion needs a domain norm".into()))?;
    let d = f.dim();
    if u.nrows() != d || u.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: u.nrows().max(u.ncols()),
            context: "perturbation coefficient must be d x d".into(),
        });
    }
    let gi = inv_sqrt(g, cfg)?;
    Ok(sigma_min(&(&gi * (&f.coeff + u) * &gi)))
}

/// Finite-dimensional reading of the null-sequence criterion: no nonzero
/// domain vector is killed by both the Hermitian and the skew part of the
/// coefficients, i.e. `ker(Re coeff) intersect ker(Im coeff) = {0}`.
pub fn null_sequence_criterion(f: &Form, cfg: &ToleranceConfig) -> Result<bool> {
    let h = hermitian_part(&f.coeff);
    let k = skew_part(&f.coeff);
    let d = f.dim();
    if d == 0 {
        return Ok(true);
    }
    let stacked = CMat::from_fn(2 * d, d, |i, j| if i < d { h[(i, j)] } else { k[(i - d, j)] });
    let scale = spectral_norm(&stacked).max(1.0);
    Ok(sigma_min(&stacked) > cfg.tol_rank * scale)
}
