//! Concrete operator instances: diagonal multiplication operators, the
//! two-dimensional positive-but-not-closable example, finite-difference
//! discretizations of `f -> i(f' + rf)` and seeded random operators with
//! numerical range inside a prescribed region.

use rand::{Rng, SeedableRng};

use crate::error::Error;
use crate::hilbert::{
    c, hermitian_eig, hermitian_part, orthonormalize, spectral_norm, CMat, CVec, PartialOperator,
    Subspace, C64,
};
use crate::numrange::{self, support_function};
use crate::regions::{ConstraintKind, HalfPlaneConstraint, Region};
use crate::tol::ToleranceConfig;
use crate::Result;

/// Diagonal multiplication operator `xi_k -> alpha_k xi_k`, validated to
/// have every symbol value inside the region (so `W` is their convex
/// hull, also inside).
pub fn multiplication_operator(
    alpha: &[C64],
    region: &Region,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    if alpha.is_empty() {
        return Err(Error::EmptyDomain);
    }
    for (k, &a) in alpha.iter().enumerate() {
        if !region.contains(a, cfg.tol_psd) {
            return Err(Error::ContainmentViolated(format!(
                "symbol value alpha_{k} = {a} lies outside the region"
            )));
        }
    }
    let n = alpha.len();
    let m = CMat::from_fn(n, n, |i, j| if i == j { alpha[i] } else { c(0.0, 0.0) });
    PartialOperator::total(m)
}

/// The fixed `C^2` example: domain `span{e1}`, `T e1 = e2`. Its numerical
/// range is `{0}`, it is maximal for the positive ray but not positively
/// closable.
pub fn c2_positive_example() -> PartialOperator {
    let frame = CMat::from_fn(2, 1, |i, _| c(if i == 0 { 1.0 } else { 0.0 }, 0.0));
    let action = CMat::from_fn(2, 1, |i, _| c(if i == 1 { 1.0 } else { 0.0 }, 0.0));
    let domain = Subspace::from_frame(frame, &ToleranceConfig::default()).expect("e1 frame");
    PartialOperator::new(domain, action).expect("2x1 action")
}

/// Discretization interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval {
    /// `(0, 1)`.
    Unit,
    /// `(0, infinity)` truncated at `l`.
    HalfLine { l: f64 },
    /// `(-l, l)`.
    SymmetricLine { l: f64 },
}

impl Interval {
    pub fn length(&self) -> f64 {
        match *self {
            Interval::Unit => 1.0,
            Interval::HalfLine { l } => l,
            Interval::SymmetricLine { l } => 2.0 * l,
        }
    }
}

/// Endpoint treatment of the central-difference first derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCondition {
    /// Ghost zeros at both endpoints.
    DirichletBoth,
    /// Ghost zero on the left, one-sided difference on the right.
    DirichletLeft,
    /// One-sided differences at both ends.
    Free,
    /// Endpoint coupling with a unit-modulus phase: the wrap-around
    /// entries carry `theta` and `-conj(theta)`, keeping the derivative
    /// part exactly anti-Hermitian.
    Theta(C64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub interval: Interval,
    pub n: usize,
    pub boundary: BoundaryCondition,
}

impl GridSpec {
    pub fn new(interval: Interval, n: usize, boundary: BoundaryCondition) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "grid needs at least 3 points, got {n}"
            )));
        }
        if interval.length() <= 0.0 {
            return Err(Error::InvalidArgument(
                "interval length must be positive".into(),
            ));
        }
        if let BoundaryCondition::Theta(theta) = boundary {
            if (theta.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "theta must have unit modulus, got |theta| = {}",
                    theta.norm()
                )));
            }
        }
        Ok(Self {
            interval,
            n,
            boundary,
        })
    }

    pub fn h(&self) -> f64 {
        self.interval.length() / (self.n as f64 + 1.0)
    }
}

/// Discretization of `f -> i(f' + rf)` with diagnostics.
#[derive(Debug, Clone)]
pub struct DiscretizedDerivative {
    pub operator: PartialOperator,
    /// Central-difference first-derivative matrix (without the `i`).
    pub derivative_part: CMat,
    pub h: f64,
    /// `max |r|`.
    pub m: f64,
    /// `||D + D^*||`: zero exactly for the Dirichlet and theta variants.
    pub skewness: f64,
    /// Largest `|Im|` over the numerical range.
    pub observed_half_width: f64,
    /// Reported constant in the strip half-width `m + C h`; not asserted.
    pub c_reported: f64,
}

/// Matrix `i (D + diag(r))` with `D` the central-difference first
/// derivative for the given boundary treatment. Its numerical range lies
/// in the horizontal strip of half-width `max |r| + C h`, with `C = 0`
/// whenever `D` is exactly anti-Hermitian (Dirichlet and theta variants).
pub fn discretized_derivative(
    spec: &GridSpec,
    r: &[f64],
    cfg: &ToleranceConfig,
) -> Result<DiscretizedDerivative> {
    let n = spec.n;
    if r.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
            context: "potential samples must match the grid".into(),
        });
    }
    let h = spec.h();
    let w = 1.0 / (2.0 * h);
    let mut d = CMat::zeros(n, n);
    for i in 1..n - 1 {
        d[(i, i - 1)] = c(-w, 0.0);
        d[(i, i + 1)] = c(w, 0.0);
    }
    match spec.boundary {
        BoundaryCondition::DirichletBoth => {
            d[(0, 1)] = c(w, 0.0);
            d[(n - 1, n - 2)] = c(-w, 0.0);
        }
        BoundaryCondition::DirichletLeft => {
            d[(0, 1)] = c(w, 0.0);
            d[(n - 1, n - 2)] = c(-1.0 / h, 0.0);
            d[(n - 1, n - 1)] = c(1.0 / h, 0.0);
        }
        BoundaryCondition::Free => {
            d[(0, 0)] = c(-1.0 / h, 0.0);
            d[(0, 1)] = c(1.0 / h, 0.0);
            d[(n - 1, n - 2)] = c(-1.0 / h, 0.0);
            d[(n - 1, n - 1)] = c(1.0 / h, 0.0);
        }
        BoundaryCondition::Theta(theta) => {
            d[(0, 1)] = c(w, 0.0);
            d[(0, n - 1)] = -theta.conj() * c(w, 0.0);
            d[(n - 1, n - 2)] = c(-w, 0.0);
            d[(n - 1, 0)] = theta * c(w, 0.0);
        }
    }
    let skewness = spectral_norm(&(&d + d.adjoint()));
    let m = r.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()));
    let full = CMat::from_fn(n, n, |i, j| {
        let base = d[(i, j)] + if i == j { c(r[i], 0.0) } else { c(0.0, 0.0) };
        base * c(0.0, 1.0)
    });
    let operator = PartialOperator::total(full)?;
    let (im_hi, _) = support_function(&operator, std::f64::consts::FRAC_PI_2, cfg)?;
    let (im_lo_neg, _) = support_function(&operator, -std::f64::consts::FRAC_PI_2, cfg)?;
    let observed_half_width = im_hi.abs().max(im_lo_neg.abs());
    let c_reported = ((observed_half_width - m) / h).max(0.0);
    Ok(DiscretizedDerivative {
        operator,
        derivative_part: d,
        h,
        m,
        skewness,
        observed_half_width,
        c_reported,
    })
}

fn wrap_angle(x: f64) -> f64 {
    let a = x.rem_euclid(std::f64::consts::TAU);
    if a > std::f64::consts::PI {
        a - std::f64::consts::TAU
    } else {
        a
    }
}

fn random_unitary(d: usize, rng: &mut rand_chacha::ChaCha8Rng) -> CMat {
    let cfg = ToleranceConfig::default();
    loop {
        let raw: Vec<CVec> = (0..d)
            .map(|_| {
                CVec::from_fn(d, |_, _| {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                })
            })
            .collect();
        if let Ok(s) = orthonormalize(&raw, &cfg) {
            if s.dim() == d {
                return s.frame().clone();
            }
        }
    }
}

/// Hermitian matrix with eigenvalues sampled strictly inside `[lo, hi]`.
fn hermitian_with_spectrum(
    d: usize,
    lo: f64,
    hi: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CMat {
    let width = (hi - lo).max(0.0);
    let margin = (width / 10.0).min(1e-3);
    let (a, b) = (lo + margin, (hi - margin).max(lo + margin));
    let q = random_unitary(d, rng);
    let diag = CMat::from_fn(d, d, |i, j| {
        if i == j {
            let v = if b > a { rng.gen_range(a..b) } else { a };
            c(v, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    &q * diag * q.adjoint()
}

fn random_hermitian(d: usize, rng: &mut rand_chacha::ChaCha8Rng) -> CMat {
    hermitian_part(&CMat::from_fn(d, d, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }))
}

/// Feasible interval of `t` in the line parametrization
/// `z = e^{i phi0}(s0 + i t)` against the inequality constraints.
fn line_parameter_interval(
    phi0: f64,
    s0: f64,
    constraints: &[HalfPlaneConstraint],
) -> (f64, f64) {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for ct in constraints {
        if ct.kind != ConstraintKind::Ineq {
            continue;
        }
        // Re(e^{-i(phi - phi0)} (s0 + i t)) >= beta.
        let delta = phi0 - ct.phi;
        let a = s0 * delta.cos();
        let s = delta.sin();
        if s.abs() < 1e-12 {
            continue;
        }
        let bound = (a - ct.beta) / s;
        if s > 0.0 {
            hi = hi.min(bound);
        } else {
            lo = lo.max(bound);
        }
    }
    (lo, hi)
}

fn clamp_interval(lo: f64, hi: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.max(-3.0), hi.min(3.0));
    if a > b {
        if hi.is_finite() {
            a = hi - 1.0;
            b = hi;
        } else {
            a = lo;
            b = lo + 1.0;
        }
    }
    (a, b)
}

/// Candidate compression matrix with numerical range inside the region,
/// built per region shape; verified (and retried) by the caller.
fn candidate_compression(
    region: &Region,
    d: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> CMat {
    let cts = region.constraints();
    let eqs: Vec<&HalfPlaneConstraint> = cts.iter().filter(|c| c.kind == ConstraintKind::Eq).collect();
    let ineqs: Vec<HalfPlaneConstraint> =
        cts.iter().filter(|c| c.kind == ConstraintKind::Ineq).cloned().collect();
    let ident = CMat::identity(d, d);

    if let Some(eq) = eqs.first() {
        if eqs.len() == 1 {
            // Line slice: z = e^{i phi}(beta + i t), t in the feasible
            // interval of the remaining constraints.
            let (lo, hi) = line_parameter_interval(eq.phi, eq.beta, &ineqs);
            let (a, b) = clamp_interval(lo, hi);
            let hmat = hermitian_with_spectrum(d, a, b, rng);
            let rot = C64::from_polar(1.0, eq.phi);
            return (&ident * c(eq.beta, 0.0) + hmat * c(0.0, 1.0)) * rot;
        }
    } else if ineqs.len() == 1 {
        // Half-plane: e^{i phi}(S + iB) with spec(S) above beta.
        let ct = &ineqs[0];
        let s = hermitian_with_spectrum(d, ct.beta + 0.05, ct.beta + 3.0, rng);
        let b = random_hermitian(d, rng) * c(rng.gen_range(0.2..2.0), 0.0);
        return (s + b * c(0.0, 1.0)) * C64::from_polar(1.0, ct.phi);
    } else if ineqs.len() == 2 {
        let (c1, c2) = (&ineqs[0], &ineqs[1]);
        let delta = wrap_angle(c1.phi - c2.phi);
        if (delta.abs() - std::f64::consts::PI).abs() < 1e-9 {
            // Strip: Re(e^{-i phi1} z) in [beta1, -beta2], axis free.
            let s = hermitian_with_spectrum(d, c1.beta, -c2.beta, rng);
            let b = random_hermitian(d, rng) * c(rng.gen_range(0.2..2.0), 0.0);
            return (s + b * c(0.0, 1.0)) * C64::from_polar(1.0, c1.phi);
        }
        // Sector: vertex from the two boundary lines, bisector direction
        // and half-opening from the normals.
        let det = c1.phi.cos() * c2.phi.sin() - c1.phi.sin() * c2.phi.cos();
        if det.abs() > 1e-9 {
            let vx = (c1.beta * c2.phi.sin() - c2.beta * c1.phi.sin()) / det;
            let vy = (c1.phi.cos() * c2.beta - c2.phi.cos() * c1.beta) / det;
            let psi = c2.phi + delta / 2.0;
            let half_open = std::f64::consts::FRAC_PI_2 - delta.abs() / 2.0;
            if half_open > 1e-9 {
                // H^{1/2}(I + iY)H^{1/2} with ||Y|| <= 0.9 tan(half_open)
                // opens along the bisector.
                let h_half = {
                    let p = hermitian_with_spectrum(d, 0.0, 2.0, rng);
                    let (vals, vecs) = hermitian_eig(&p, &ToleranceConfig::default())
                        .expect("hermitian by construction");
                    let mut m = CMat::zeros(d, d);
                    for i in 0..d {
                        let col = vecs.column(i).into_owned();
                        m += &col * col.adjoint() * c(vals[i].max(0.0).sqrt(), 0.0);
                    }
                    m
                };
                let y = {
                    let raw = random_hermitian(d, rng);
                    let norm = spectral_norm(&raw).max(1e-9);
                    let cap = (0.9 * half_open.tan()).min(5.0);
                    raw * c(rng.gen_range(0.1..1.0) * cap / norm, 0.0)
                };
                let core = &h_half * (&ident + y * c(0.0, 1.0)) * &h_half;
                return &ident * c(vx, vy) + core * C64::from_polar(1.0, psi);
            }
        }
    }
    // General fallback: a small perturbation of an interior point.
    let w = region.witness_point();
    let dist: f64 = cts
        .iter()
        .map(|ct| ct.margin(w).abs())
        .fold(1.0f64, f64::min)
        .max(1e-3);
    let k = CMat::from_fn(d, d, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let norm = spectral_norm(&k).max(1e-9);
    &ident * w + k * c(0.4 * dist / norm, 0.0)
}

/// Seeded random operator on `C^n` with a `d`-dimensional domain and
/// numerical range inside the region; the compression is constructed per
/// region shape and the containment re-verified (reject-and-retry).
pub fn random_operator_with_range_in(
    region: &Region,
    n: usize,
    d: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<PartialOperator> {
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "domain dimension must satisfy 1 <= d <= n, got d = {d}, n = {n}"
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let retries = 20;
    for _ in 0..retries {
        let m = candidate_compression(region, d, &mut rng);
        let t = if d == n {
            PartialOperator::total(m.clone())?
        } else {
            let frame = {
                let raw: Vec<CVec> = (0..d)
                    .map(|_| {
                        CVec::from_fn(n, |_, _| {
                            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                        })
                    })
                    .collect();
                match orthonormalize(&raw, cfg) {
                    Ok(s) if s.dim() == d => s,
                    _ => continue,
                }
            };
            let f = frame.frame().clone();
            let g = CMat::from_fn(n, d, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            // Action = F M + (I - F F^*) G keeps the compression equal
            // to M while the range leaves the domain.
            let proj_out = CMat::identity(n, n) - &f * f.adjoint();
            PartialOperator::new(frame, &f * &m + proj_out * g)?
        };
        if numrange::contained_in(&t, region, cfg)?.contained {
            return Ok(t);
        }
    }
    Err(Error::RetriesExhausted {
        retries,
        context: "random operator construction kept violating containment".into(),
    })
}
