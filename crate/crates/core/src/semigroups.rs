//! Matrix-exponential semigroups `S(t) = e^{tA}` and verification of the
//! growth-bound characterizations: two-sided exponential bounds from the
//! real extremes of the numerical range of the generator, the contraction
//! criterion (dissipativity), the derivative identity for `||S(t)xi||^2`
//! and group invertibility with strip-exterior resolvent points.

use rand::SeedableRng;
use serde::Serialize;

use crate::error::Error;
use crate::hilbert::{self, c, sigma_min, spectral_norm, CMat, CVec, PartialOperator, C64};
use crate::numrange::{self, support_function};
use crate::regions::Region;
use crate::tol::ToleranceConfig;
use crate::Result;

/// How `e^{tA}` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpMethod {
    /// Eigendecomposition when the generator is normal (its Schur form is
    /// diagonal), scaling-and-squaring otherwise.
    Auto,
    /// Schur-diagonal eigendecomposition; errors on non-normal generators.
    Eigendecomposition,
    /// Pade scaling-and-squaring.
    ScalingSquaring,
}

const NORMALITY_TOL: f64 = 1e-10;

/// Diagonalization `A = Q D Q^*` of a normal matrix via its Schur form.
fn normal_diagonalization(a: &CMat) -> Option<(CMat, Vec<C64>)> {
    let n = a.nrows();
    let scale = spectral_norm(a).max(1.0);
    let schur = a.clone().try_schur(1e-12, 10_000)?;
    let (q, t) = schur.unpack();
    let mut off = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off = off.max(t[(i, j)].norm());
            }
        }
    }
    if off > NORMALITY_TOL * scale {
        return None;
    }
    let eigs = (0..n).map(|i| t[(i, i)]).collect();
    Some((q, eigs))
}

fn expm_eigen(q: &CMat, eigs: &[C64], t: f64) -> CMat {
    let n = eigs.len();
    let d = CMat::from_fn(n, n, |i, j| {
        if i == j {
            (eigs[i] * c(t, 0.0)).exp()
        } else {
            c(0.0, 0.0)
        }
    });
    q * d * q.adjoint()
}

/// Matrix exponential `e^{tA}` with an explicit method choice.
pub fn expm_with(a: &CMat, t: f64, method: ExpMethod) -> Result<CMat> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: a.ncols(),
            context: "expm requires a square matrix".into(),
        });
    }
    match method {
        ExpMethod::ScalingSquaring => Ok((a * c(t, 0.0)).exp()),
        ExpMethod::Eigendecomposition => match normal_diagonalization(a) {
            Some((q, eigs)) => Ok(expm_eigen(&q, &eigs, t)),
            None => Err(Error::InvalidArgument(
                "eigendecomposition exponential requires a normal generator".into(),
            )),
        },
        ExpMethod::Auto => match normal_diagonalization(a) {
            Some((q, eigs)) => Ok(expm_eigen(&q, &eigs, t)),
            None => Ok((a * c(t, 0.0)).exp()),
        },
    }
}

/// Matrix exponential `e^{tA}` with automatic method selection.
pub fn expm(a: &CMat, t: f64) -> CMat {
    expm_with(a, t, ExpMethod::Auto).expect("square matrix")
}

/// Deviation from the semigroup law at the pair `(t, s)`, relative to the
/// attained growth: `||e^{(t+s)A} - e^{tA} e^{sA}|| / max(1, ||e^{(t+s)A}||)`.
pub fn semigroup_law_defect(a: &CMat, t: f64, s: f64) -> f64 {
    let whole = expm(a, t + s);
    let split = expm(a, t) * expm(a, s);
    spectral_norm(&(whole.clone() - split)) / spectral_norm(&whole).max(1.0)
}

/// A total generator with a fixed evaluation grid and exponential method.
#[derive(Debug, Clone)]
pub struct SemigroupSampler {
    generator: PartialOperator,
    matrix: CMat,
    t_grid: Vec<f64>,
    exp_method: ExpMethod,
    tol_exp: f64,
}

impl SemigroupSampler {
    pub fn new(
        generator: PartialOperator,
        t_grid: Vec<f64>,
        exp_method: ExpMethod,
        tol_exp: f64,
        cfg: &ToleranceConfig,
    ) -> Result<Self> {
        if !generator.is_total() {
            return Err(Error::NotTotal);
        }
        if t_grid.is_empty() || t_grid[0] != 0.0 {
            return Err(Error::InvalidArgument("t_grid must start at 0".into()));
        }
        if t_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "t_grid must be strictly increasing".into(),
            ));
        }
        let matrix = generator.total_matrix(cfg)?;
        let n = matrix.nrows();
        let at_zero = expm_with(&matrix, 0.0, exp_method)?;
        if spectral_norm(&(at_zero - CMat::identity(n, n))) > tol_exp {
            return Err(Error::InvalidArgument(
                "exponential at t = 0 deviates from the identity".into(),
            ));
        }
        Ok(Self {
            generator,
            matrix,
            t_grid,
            exp_method,
            tol_exp,
        })
    }

    /// `0, 0.1, ..., 5.0`.
    pub fn default_grid() -> Vec<f64> {
        (0..=50).map(|k| k as f64 * 0.1).collect()
    }

    pub fn generator(&self) -> &PartialOperator {
        &self.generator
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn tol_exp(&self) -> f64 {
        self.tol_exp
    }

    /// `e^{tA}` with the configured method.
    pub fn sample(&self, t: f64) -> Result<CMat> {
        expm_with(&self.matrix, t, self.exp_method)
    }

    /// Worst relative semigroup-law defect over grid pairs.
    pub fn law_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for &t in &self.t_grid {
            for &s in &self.t_grid {
                worst = worst.max(semigroup_law_defect(&self.matrix, t, s));
            }
        }
        worst
    }
}

/// One grid row of a growth-bound verification; matches the CSV layout
/// `t, norm_min_xi, norm_max_xi, lower_bound, upper_bound`.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthRow {
    pub t: f64,
    pub norm_min_xi: f64,
    pub norm_max_xi: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    /// `min Re W(A)`, from the support function at `phi = pi`.
    pub omega1: f64,
    /// `max Re W(A)`, from the support function at `phi = 0`.
    pub omega2: f64,
    pub rows: Vec<GrowthRow>,
    /// `e^{omega1 t}(1 - tol) <= ||S(t)xi|| <= e^{omega2 t}(1 + tol)` for
    /// every sampled unit `xi` and grid `t`.
    pub bounds_hold: bool,
    /// Slope of the log-linear fit of `min_xi ||S(t)xi||` over the grid.
    pub fit_lower: f64,
    /// Slope of the log-linear fit of `max_xi ||S(t)xi||` over the grid.
    pub fit_upper: f64,
    /// Estimated `M >= 1` in `||S(t)|| <= M e^{omega2 t}`; reported, not
    /// asserted.
    pub overshoot_m: f64,
    pub tol: f64,
}

/// Least-squares slope through the origin of `log y` against `t`.
fn log_linear_slope(ts: &[f64], logs: &[f64]) -> f64 {
    let num: f64 = ts.iter().zip(logs).map(|(&t, &l)| t * l).sum();
    let den: f64 = ts.iter().map(|&t| t * t).sum();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Verifies `e^{omega1 t} ||xi|| <= ||e^{tA} xi|| <= e^{omega2 t} ||xi||`
/// on random unit vectors over the grid, with `[omega1, omega2]` the exact
/// real extremes of `W(A)`. The extremal norms per `t` are the singular
/// values of `e^{tA}`, so the rows also feed the log-linear fit reported
/// for the converse direction.
pub fn growth_bound_check(
    a: &PartialOperator,
    t_grid: &[f64],
    samples: usize,
    seed: u64,
    tol: f64,
    cfg: &ToleranceConfig,
) -> Result<GrowthReport> {
    if !a.is_total() {
        return Err(Error::NotTotal);
    }
    let m = a.total_matrix(cfg)?;
    let n = m.nrows();
    let (h_max, _) = support_function(a, 0.0, cfg)?;
    let (neg_min, _) = support_function(a, std::f64::consts::PI, cfg)?;
    let (omega1, omega2) = (-neg_min, h_max);

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut bounds_hold = true;
    let mut overshoot_m = 1.0f64;
    let mut fit_ts = Vec::new();
    let mut fit_lo = Vec::new();
    let mut fit_hi = Vec::new();
    for &t in t_grid {
        let s = expm(&m, t);
        let svals = hilbert::singular_values(&s);
        let (sig_max, sig_min) = (svals[0], svals[n - 1]);
        let lower = (omega1 * t).exp() * (1.0 - tol);
        let upper = (omega2 * t).exp() * (1.0 + tol);
        for _ in 0..samples {
            let xi = numrange::random_unit_vector(n, &mut rng);
            let norm = (&s * xi).norm();
            bounds_hold &= norm >= lower && norm <= upper;
        }
        // The singular values are the exact extremal norms over unit xi.
        bounds_hold &= sig_min >= lower && sig_max <= upper;
        overshoot_m = overshoot_m.max(sig_max * (-omega2 * t).exp());
        rows.push(GrowthRow {
            t,
            norm_min_xi: sig_min,
            norm_max_xi: sig_max,
            lower_bound: lower,
            upper_bound: upper,
        });
        if t > 0.0 && sig_min > 0.0 {
            fit_ts.push(t);
            fit_lo.push(sig_min.ln());
            fit_hi.push(sig_max.ln());
        }
    }
    Ok(GrowthReport {
        omega1,
        omega2,
        rows,
        bounds_hold,
        fit_lower: log_linear_slope(&fit_ts, &fit_lo),
        fit_upper: log_linear_slope(&fit_ts, &fit_hi),
        overshoot_m,
        tol,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractionReport {
    /// `||e^{tA}|| <= 1 + tol` over the probe grid.
    pub contraction: bool,
    /// `W(A)` contained in the closed left half-plane.
    pub dissipative: bool,
    /// The two sides agree (Lumer-Phillips at finite dimension).
    pub equivalent: bool,
    pub max_norm: f64,
}

/// Contraction-semigroup criterion: `||e^{tA}|| <= 1` for all `t >= 0`
/// if and only if `A` is dissipative. The probe grid includes small times
/// so first-order norm growth of non-dissipative generators is seen.
pub fn contraction_check(a: &PartialOperator, cfg: &ToleranceConfig) -> Result<ContractionReport> {
    if !a.is_total() {
        return Err(Error::NotTotal);
    }
    let m = a.total_matrix(cfg)?;
    let mut grid = vec![1e-4, 1e-3, 1e-2, 0.05];
    grid.extend(SemigroupSampler::default_grid());
    let mut max_norm = 0.0f64;
    for &t in &grid {
        max_norm = max_norm.max(spectral_norm(&expm(&m, t)));
    }
    let contraction = max_norm <= 1.0 + 1e-8;
    let dissipative = numrange::contained_in(a, &Region::left_half_plane(), cfg)?.contained;
    Ok(ContractionReport {
        contraction,
        dissipative,
        equivalent: contraction == dissipative,
        max_norm,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeRow {
    pub t: f64,
    pub central_difference: f64,
    pub identity_value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    pub h: f64,
    pub rows: Vec<DerivativeRow>,
    pub max_error: f64,
    /// Second-order bound `C h^2` with `C` from the third-derivative
    /// estimate `(4/3) ||A||^3 ||xi||^2 e^{2 ||A|| t_max}`.
    pub bound: f64,
    pub ok: bool,
}

/// Central-difference check of
/// `d/dt ||S(t)xi||^2 = 2 Re <A S(t)xi, S(t)xi>`.
pub fn derivative_identity_check(
    a: &PartialOperator,
    xi: &CVec,
    t_grid: &[f64],
    h: f64,
    cfg: &ToleranceConfig,
) -> Result<DerivativeReport> {
    if !a.is_total() {
        return Err(Error::NotTotal);
    }
    if xi.norm() == 0.0 {
        return Err(Error::InvalidArgument("xi must be nonzero".into()));
    }
    if h <= 0.0 {
        return Err(Error::InvalidArgument("step h must be positive".into()));
    }
    let m = a.total_matrix(cfg)?;
    let norm_a = spectral_norm(&m);
    let t_max = t_grid.iter().cloned().fold(0.0f64, f64::max) + h;
    let sq = |t: f64| -> f64 {
        let v = expm(&m, t) * xi;
        v.norm_squared()
    };
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut max_error = 0.0f64;
    for &t in t_grid {
        let diff = (sq(t + h) - sq(t - h)) / (2.0 * h);
        let st_xi = expm(&m, t) * xi;
        let ident = 2.0 * st_xi.dotc(&(&m * &st_xi)).re;
        let error = (diff - ident).abs();
        max_error = max_error.max(error);
        rows.push(DerivativeRow {
            t,
            central_difference: diff,
            identity_value: ident,
            error,
        });
    }
    // |g'''| <= 8 ||A||^3 e^{2||A||t} ||xi||^2 for g(t) = ||S(t)xi||^2;
    // the central difference error is |g'''| h^2 / 6.
    let c3 = (4.0 / 3.0) * norm_a.powi(3) * xi.norm_squared() * (2.0 * norm_a * t_max).exp();
    let bound = (c3 * h * h).max(1e-10);
    Ok(DerivativeReport {
        h,
        rows,
        max_error,
        bound,
        ok: max_error <= bound,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupInvertibilityRow {
    pub t: f64,
    pub sigma_min: f64,
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupInvertibilityReport {
    pub rows: Vec<GroupInvertibilityRow>,
    /// All grid exponentials invertible (always true at finite dimension;
    /// the condition numbers quantify how comfortably).
    pub invertible: bool,
    /// Every sampled exterior point of the strip is a resolvent point.
    pub exterior_resolvent: bool,
    pub exterior_samples: Vec<[f64; 2]>,
}

/// Group invertibility and the strip-exterior resolvent property: each
/// `e^{tA}` is invertible and every sampled `lambda` outside the strip
/// containing `W(A)` makes `A - lambda` full rank.
pub fn group_invertibility_check(
    a: &PartialOperator,
    strip: &Region,
    t_grid: &[f64],
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<GroupInvertibilityReport> {
    if !a.is_total() {
        return Err(Error::NotTotal);
    }
    let cert = numrange::contained_in(a, strip, cfg)?;
    if !cert.contained {
        return Err(Error::ContainmentViolated(
            "generator numerical range not inside the strip".into(),
        ));
    }
    let m = a.total_matrix(cfg)?;
    let n = m.nrows();
    let mut rows = Vec::with_capacity(t_grid.len());
    let mut invertible = true;
    for &t in t_grid {
        let s = expm(&m, t);
        let svals = hilbert::singular_values(&s);
        let (hi, lo) = (svals[0], svals[n - 1]);
        invertible &= lo > 0.0;
        rows.push(GroupInvertibilityRow {
            t,
            sigma_min: lo,
            condition: if lo > 0.0 { hi / lo } else { f64::INFINITY },
        });
    }
    let mut exterior_resolvent = true;
    let mut samples = Vec::new();
    for (idx, comp) in strip.complement_components().iter().enumerate() {
        for lambda in strip.exterior_samples(comp, 4, seed.wrapping_add(idx as u64)) {
            let shifted = &m - CMat::identity(n, n) * lambda;
            exterior_resolvent &= sigma_min(&shifted) > cfg.tol_psd;
            samples.push([lambda.re, lambda.im]);
        }
    }
    Ok(GroupInvertibilityReport {
        rows,
        invertible,
        exterior_resolvent,
        exterior_samples: samples,
    })
}
