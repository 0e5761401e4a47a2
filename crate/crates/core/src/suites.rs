//! Seeded fuzz suites over the theorem inventory: implication chain,
//! transform round trips, semigroup growth bounds and form solvability.
//! Each suite is deterministic given `(trials, seed)`; trials run in
//! parallel and the first counterexample is serialized for replay.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Error;
use crate::forms::{self, Form};
use crate::hilbert::{
    c, complex_eigenvalues, hermitian_part, sigma_min, skew_part, spectral_norm, CMat,
    PartialOperator,
};
use crate::io::{self, OperatorJson};
use crate::maximality;
use crate::numrange;
use crate::regions::Region;
use crate::semigroups;
use crate::tol::ToleranceConfig;
use crate::transforms;
use crate::zoo;
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub name: String,
    pub seed: u64,
    pub trials: usize,
    pub passes: usize,
    pub violations: usize,
    /// Messages for the first few violations.
    pub violation_messages: Vec<String>,
    /// Replayable dump of the first violating instance.
    pub first_counterexample: Option<OperatorJson>,
    /// Worst transform round-trip error (transforms suite only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_round_trip_error: Option<f64>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

fn trial_seed(seed: u64, k: usize) -> u64 {
    (seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)).wrapping_add(k as u64)
}

struct TrialOutcome {
    violation: Option<(String, Option<OperatorJson>)>,
    error: f64,
}

fn summarize(
    name: &str,
    seed: u64,
    outcomes: Vec<TrialOutcome>,
    with_error: bool,
) -> SuiteSummary {
    let trials = outcomes.len();
    let mut messages = Vec::new();
    let mut first = None;
    let mut violations = 0;
    let mut max_error = 0.0f64;
    for o in outcomes {
        max_error = max_error.max(o.error);
        if let Some((msg, dump)) = o.violation {
            violations += 1;
            if messages.len() < 5 {
                messages.push(msg);
            }
            if first.is_none() {
                first = dump;
            }
        }
    }
    SuiteSummary {
        name: name.into(),
        seed,
        trials,
        passes: trials - violations,
        violations,
        violation_messages: messages,
        first_counterexample: first,
        max_round_trip_error: if with_error { Some(max_error) } else { None },
    }
}

fn fuzz_regions() -> Vec<Region> {
    vec![
        Region::right_half_plane(),
        Region::half_plane(2.1, -0.5),
        Region::sector(0.0, std::f64::consts::FRAC_PI_4).unwrap(),
        Region::sector(-0.7, std::f64::consts::FRAC_PI_3).unwrap(),
        Region::horizontal_strip(1.0),
        Region::positive_ray(),
        Region::ray(-1.5),
        Region::real_line(),
    ]
}

/// P1 => P2 => P3 => P4 plus the total-operator equivalences and the strip
/// decomposition on mixed random instances.
pub fn implications_suite(trials: usize, seed: u64, cfg: &ToleranceConfig) -> SuiteSummary {
    let regions = fuzz_regions();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let ts = trial_seed(seed, k);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ts);
            let region = &regions[k % regions.len()];
            let n = rng.gen_range(2..=6usize);
            let d = rng.gen_range(1..=n);
            let t = match zoo::random_operator_with_range_in(region, n, d, ts, cfg) {
                Ok(t) => t,
                Err(e) => {
                    return TrialOutcome {
                        violation: Some((format!("trial {k}: construction failed: {e}"), None)),
                        error: 0.0,
                    }
                }
            };
            let dump = || Some(io::operator_to_json(&t));
            let report = match maximality::implication_suite(&t, region, cfg) {
                Ok(r) => r,
                Err(e) => {
                    return TrialOutcome {
                        violation: Some((format!("trial {k}: suite error: {e}"), dump())),
                        error: 0.0,
                    }
                }
            };
            if !report.violations.is_empty() {
                return TrialOutcome {
                    violation: Some((
                        format!("trial {k}: {}", report.violations.join("; ")),
                        dump(),
                    )),
                    error: 0.0,
                };
            }
            // Total operators inside the region are maximal with full
            // exterior resolvent: every predicate must hold.
            if t.is_total() && !(report.p1 && report.p2 && report.p3 && report.p4) {
                return TrialOutcome {
                    violation: Some((
                        format!(
                            "trial {k}: total instance broke the equivalence (P1={} P2={} P3={} P4={})",
                            report.p1, report.p2, report.p3, report.p4
                        ),
                        dump(),
                    )),
                    error: 0.0,
                };
            }
            // Strip regions: T = S + iB must decompose and reconstruct.
            if region.is_strip() || region.is_line() {
                match maximality::strip_decompose(&t, region, cfg) {
                    Ok(dec) => {
                        let rebuilt = dec.s.action()
                            + (&dec.b * t.domain().frame()) * c(0.0, 1.0);
                        let err = spectral_norm(&(rebuilt - t.action()));
                        if err > 1e-8 {
                            return TrialOutcome {
                                violation: Some((
                                    format!("trial {k}: strip reconstruction error {err:.3e}"),
                                    dump(),
                                )),
                                error: 0.0,
                            };
                        }
                    }
                    Err(e) => {
                        return TrialOutcome {
                            violation: Some((
                                format!("trial {k}: strip decomposition failed: {e}"),
                                dump(),
                            )),
                            error: 0.0,
                        }
                    }
                }
            }
            TrialOutcome {
                violation: None,
                error: 0.0,
            }
        })
        .collect();
    summarize("implications", seed, outcomes, false)
}

/// Phillips transform round trips, contraction property and class C(theta)
/// for sector-contained sources.
pub fn transforms_suite(trials: usize, seed: u64, cfg: &ToleranceConfig) -> SuiteSummary {
    let theta = std::f64::consts::FRAC_PI_4;
    let sector = Region::sector(0.0, theta).unwrap();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let ts = trial_seed(seed, k);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ts);
            let n = rng.gen_range(2..=5usize);
            // Alternate between generic accretive and sectorial sources.
            let region = if k % 2 == 0 {
                Region::right_half_plane()
            } else {
                sector.clone()
            };
            let t = match zoo::random_operator_with_range_in(&region, n, n, ts, cfg) {
                Ok(t) => t,
                Err(e) => {
                    return TrialOutcome {
                        violation: Some((format!("trial {k}: construction failed: {e}"), None)),
                        error: 0.0,
                    }
                }
            };
            let dump = || Some(io::operator_to_json(&t));
            let fail = |msg: String| TrialOutcome {
                violation: Some((msg, Some(io::operator_to_json(&t)))),
                error: 0.0,
            };
            let k_op = match transforms::tau(&t, cfg) {
                Ok(k_op) => k_op,
                Err(e) => return fail(format!("trial {k}: tau failed: {e}")),
            };
            let norm = spectral_norm(k_op.k.action());
            if norm > 1.0 + 1e-9 {
                return fail(format!("trial {k}: transform not a contraction ({norm})"));
            }
            let back = match transforms::inverse_tau(&k_op.k, cfg) {
                Ok(b) => b,
                Err(e) => return fail(format!("trial {k}: inverse failed: {e}")),
            };
            let err = match (back.total_matrix(cfg), t.total_matrix(cfg)) {
                (Ok(bm), Ok(tm)) => spectral_norm(&(bm - tm)),
                _ => return fail(format!("trial {k}: round trip lost totality")),
            };
            if err > 1e-8 {
                return fail(format!("trial {k}: round-trip error {err:.3e}"));
            }
            if k % 2 == 1 {
                match transforms::class_c_theta(&k_op.k, theta, cfg) {
                    Ok(true) => {}
                    Ok(false) => {
                        return fail(format!("trial {k}: class C(theta) failed for sectorial source"))
                    }
                    Err(e) => return fail(format!("trial {k}: class C(theta) error: {e}")),
                }
            }
            let _ = dump;
            TrialOutcome {
                violation: None,
                error: err,
            }
        })
        .collect();
    summarize("transforms", seed, outcomes, true)
}

/// Growth bounds, Lumer-Phillips equivalence and the derivative identity
/// on random bounded generators.
pub fn semigroups_suite(trials: usize, seed: u64, cfg: &ToleranceConfig) -> SuiteSummary {
    let grid = semigroups::SemigroupSampler::default_grid();
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let ts = trial_seed(seed, k);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ts);
            let n = rng.gen_range(2..=5usize);
            let m = CMat::from_fn(n, n, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let a = PartialOperator::total(m).expect("square matrix");
            let fail = |msg: String| TrialOutcome {
                violation: Some((msg, Some(io::operator_to_json(&a)))),
                error: 0.0,
            };
            match semigroups::growth_bound_check(&a, &grid, 2, ts, 1e-6, cfg) {
                Ok(r) if r.bounds_hold => {}
                Ok(_) => return fail(format!("trial {k}: growth bounds violated")),
                Err(e) => return fail(format!("trial {k}: growth check error: {e}")),
            }
            match semigroups::contraction_check(&a, cfg) {
                Ok(r) if r.equivalent => {}
                Ok(_) => return fail(format!("trial {k}: contraction equivalence broken")),
                Err(e) => return fail(format!("trial {k}: contraction check error: {e}")),
            }
            let xi = numrange::random_unit_vector(n, &mut rng);
            match semigroups::derivative_identity_check(&a, &xi, &[0.3, 1.1, 2.4], 1e-3, cfg) {
                Ok(r) if r.ok => {}
                Ok(r) => {
                    return fail(format!(
                        "trial {k}: derivative identity error {:.3e} > bound {:.3e}",
                        r.max_error, r.bound
                    ))
                }
                Err(e) => return fail(format!("trial {k}: derivative check error: {e}")),
            }
            TrialOutcome {
                violation: None,
                error: 0.0,
            }
        })
        .collect();
    summarize("semigroups", seed, outcomes, false)
}

/// Perturbation solvability against the eigenvalue oracle, the strip form
/// theorem and the inf-sup invertibility cross-check.
pub fn forms_suite(trials: usize, seed: u64, cfg: &ToleranceConfig) -> SuiteSummary {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let ts = trial_seed(seed, k);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(ts);
            let d = rng.gen_range(2..=5usize);
            let coeff = CMat::from_fn(d, d, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let f = match Form::total(coeff.clone(), None, cfg) {
                Ok(f) => f,
                Err(e) => {
                    return TrialOutcome {
                        violation: Some((format!("trial {k}: form build failed: {e}"), None)),
                        error: 0.0,
                    }
                }
            };
            let fail = |msg: String| TrialOutcome {
                violation: Some((msg, None)),
                error: 0.0,
            };
            // Eigenvalue oracle: B = -lambda I is in P exactly off the
            // spectrum.
            let eigs = complex_eigenvalues(&coeff);
            for &lambda in &eigs {
                let b = CMat::identity(d, d) * (-lambda);
                match forms::perturbation_in_p(&f, &b, cfg) {
                    Ok(false) => {}
                    Ok(true) => {
                        return fail(format!("trial {k}: eigenvalue {lambda} reported solvable"))
                    }
                    Err(e) => return fail(format!("trial {k}: perturbation error: {e}")),
                }
            }
            let off = c(5.0 + rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0));
            if eigs.iter().all(|&e| (e - off).norm() > 1e-3) {
                let b = CMat::identity(d, d) * (-off);
                match forms::perturbation_in_p(&f, &b, cfg) {
                    Ok(true) => {}
                    Ok(false) => {
                        return fail(format!("trial {k}: resolvent point {off} reported singular"))
                    }
                    Err(e) => return fail(format!("trial {k}: perturbation error: {e}")),
                }
            }
            // Strip form: S + iB inside its strip must verify.
            let alpha = rng.gen_range(0.3..1.5);
            let s = hermitian_part(&CMat::from_fn(d, d, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }));
            let b = {
                let raw = hermitian_part(&CMat::from_fn(d, d, |_, _| {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }));
                let norm = spectral_norm(&raw).max(1e-9);
                raw * c(rng.gen_range(0.1..0.9) * alpha / norm, 0.0)
            };
            let strip_form = Form::total(&s + &b * c(0.0, 1.0), None, cfg).expect("total form");
            match forms::strip_form_theorem_check(&strip_form, &Region::horizontal_strip(alpha), cfg)
            {
                Ok(r) if r.ok => {}
                Ok(_) => return fail(format!("trial {k}: strip form theorem violated")),
                Err(e) => return fail(format!("trial {k}: strip form error: {e}")),
            }
            // inf-sup positivity matches invertibility of the perturbed
            // coefficients.
            let g = {
                let raw = CMat::from_fn(d, d, |_, _| {
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                });
                raw.adjoint() * raw + CMat::identity(d, d) * c(0.2, 0.0)
            };
            let fg = Form::total(coeff.clone(), Some(g), cfg).expect("gram validated");
            let u = CMat::from_fn(d, d, |_, _| {
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            match forms::inf_sup_criterion(&fg, &u, cfg) {
                Ok(cval) => {
                    let sum = &coeff + &u;
                    let invertible =
                        sigma_min(&sum) > cfg.tol_rank * spectral_norm(&sum).max(1.0);
                    let positive = cval > 1e-9;
                    if positive != invertible {
                        return fail(format!(
                            "trial {k}: inf-sup {cval:.3e} disagrees with invertibility"
                        ));
                    }
                }
                Err(e) => return fail(format!("trial {k}: inf-sup error: {e}")),
            }
            let _ = skew_part(&coeff);
            TrialOutcome {
                violation: None,
                error: 0.0,
            }
        })
        .collect();
    summarize("forms", seed, outcomes, false)
}

/// Named dispatch used by the CLI; `all` runs every suite.
pub fn run_suite(
    name: &str,
    trials: usize,
    seed: u64,
    cfg: &ToleranceConfig,
) -> Result<Vec<SuiteSummary>> {
    match name {
        "implications" => Ok(vec![implications_suite(trials, seed, cfg)]),
        "transforms" => Ok(vec![transforms_suite(trials, seed, cfg)]),
        "semigroups" => Ok(vec![semigroups_suite(trials, seed, cfg)]),
        "forms" => Ok(vec![forms_suite(trials, seed, cfg)]),
        "all" => Ok(vec![
            implications_suite(trials, seed, cfg),
            transforms_suite(trials, seed, cfg),
            semigroups_suite(trials, seed, cfg),
            forms_suite(trials, seed, cfg),
        ]),
        other => Err(Error::InvalidArgument(format!(
            "unknown suite '{other}' (expected implications | transforms | semigroups | forms | all)"
        ))),
    }
}
