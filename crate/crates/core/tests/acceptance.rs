//! Acceptance gate: ten criteria, one printed pass/fail line each.
//!
//! Every criterion checks library output against an independent oracle
//! (closed forms, brute-force grids, Rayleigh sampling, eigenvalue
//! cross-checks) rather than against the code paths under test.

use std::f64::consts::{FRAC_PI_4, PI};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use omax::hilbert::{
    c, complex_eigenvalues, defect_index, hermitian_eig, hermitian_part, spectral_norm, Subspace,
};
use omax::maximality::{
    extend, is_maximal, one_dim_extension_search, positively_closable, Certificate,
    ExtensionOutcome, MaximalityStatus,
};
use omax::numrange::{
    boundary_polygon, contained_in, random_unit_vector, resolvent_bound_check, support_function,
};
use omax::regions::{ConstraintKind, Region};
use omax::semigroups::{derivative_identity_check, growth_bound_check, SemigroupSampler};
use omax::transforms::{class_c_theta, inverse_tau, tau};
use omax::zoo;
use omax::{forms, suites, CMat, CVec, PartialOperator, ToleranceConfig, C64};

fn cfg() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn random_cmat(n: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(n, n, |_, _| {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn total(m: CMat) -> PartialOperator {
    PartialOperator::total(m).expect("square total")
}

// ---------------------------------------------------------------- criterion 1

/// Worked C^2 example against the ray: Maximal by exact infeasibility,
/// not positively closable, defect 1 across the exterior; under a second.
fn criterion_1() -> Result<String, String> {
    let start = Instant::now();
    let t = zoo::c2_positive_example();
    let region = Region::positive_ray();
    let verdict = is_maximal(&t, &region, &cfg()).map_err(|e| e.to_string())?;
    if verdict.status != MaximalityStatus::Maximal {
        return Err(format!("status {:?}, expected Maximal", verdict.status));
    }
    if !matches!(verdict.certificate, Certificate::Infeasibility { .. }) {
        return Err("expected an exact infeasibility certificate".into());
    }
    if positively_closable(&t, &cfg()).map_err(|e| e.to_string())? {
        return Err("example reported positively closable".into());
    }
    for lambda in [c(-1.0, 0.0), c(0.0, 1.0), c(-3.0, 2.0)] {
        let d = defect_index(&t, lambda, &cfg());
        if d != 1 {
            return Err(format!("defect index {d} at {lambda}, expected 1"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed.as_secs_f64() >= 1.0 {
        return Err(format!("took {elapsed:?}, budget 1 s"));
    }
    Ok(format!("{:.0} ms", elapsed.as_secs_f64() * 1e3))
}

// ---------------------------------------------------------------- criterion 2

/// Jordan block vs the radius-1/2 disk with a 10^5-sample Rayleigh
/// oracle; Hermitian ranges collapse to the spectral interval.
fn criterion_2() -> Result<String, String> {
    let t = total(CMat::from_fn(2, 2, |i, j| {
        c(if i == 0 && j == 1 { 1.0 } else { 0.0 }, 0.0)
    }));
    let polygon = boundary_polygon(&t, 256, &cfg()).map_err(|e| e.to_string())?;
    for (&phi, &h) in polygon.angles.iter().zip(&polygon.support) {
        if (h - 0.5).abs() > 1e-10 {
            return Err(format!("support {h} at angle {phi}, disk wants 0.5"));
        }
    }
    // Rayleigh oracle: z = conj(xi_1) xi_2 over random unit vectors.
    let mut rng = ChaCha8Rng::seed_from_u64(2020);
    let samples: Vec<C64> = (0..100_000)
        .map(|_| {
            let xi = random_unit_vector(2, &mut rng);
            xi[0].conj() * xi[1]
        })
        .collect();
    let max_abs = samples.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    if max_abs > 0.5 + 1e-12 || 0.5 - max_abs > 1e-3 {
        return Err(format!("oracle radius {max_abs}, expected 0.5 within 1e-3"));
    }
    let mut worst = 0.0f64;
    for (&phi, &h) in polygon.angles.iter().zip(&polygon.support) {
        let dir = C64::from_polar(1.0, -phi);
        let oracle = samples
            .iter()
            .map(|&z| (dir * z).re)
            .fold(f64::NEG_INFINITY, f64::max);
        if oracle > h + 1e-9 {
            return Err(format!("oracle exceeds support at angle {phi}"));
        }
        worst = worst.max(h - oracle);
    }
    if worst > 1e-3 {
        return Err(format!("max radial gap {worst:.2e} against the oracle"));
    }
    // Hermitian collapse.
    let mut rng = ChaCha8Rng::seed_from_u64(2021);
    let h_mat = hermitian_part(&random_cmat(4, &mut rng));
    let (eigs, _) = hermitian_eig(&h_mat, &cfg()).map_err(|e| e.to_string())?;
    let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
    let th = total(h_mat);
    let poly_h = boundary_polygon(&th, 64, &cfg()).map_err(|e| e.to_string())?;
    for &(re, im) in &poly_h.inner_points {
        if im.abs() > 1e-10 || re > hi + 1e-10 || re < lo - 1e-10 {
            return Err(format!("Hermitian range point ({re}, {im}) off [{lo}, {hi}]"));
        }
    }
    let (h0, _) = support_function(&th, 0.0, &cfg()).map_err(|e| e.to_string())?;
    let (hpi, _) = support_function(&th, PI, &cfg()).map_err(|e| e.to_string())?;
    if (h0 - hi).abs() > 1e-10 || (hpi + lo).abs() > 1e-10 {
        return Err("Hermitian support mismatch with eigenvalue extremes".into());
    }
    Ok(format!("max radial gap {worst:.1e}"))
}

// ---------------------------------------------------------------- criterion 3

/// 1000-instance implication / sector / strip equivalence fuzz, under
/// a minute.
fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let summary = suites::implications_suite(1000, 31, &cfg());
    let elapsed = start.elapsed();
    if !summary.ok() {
        return Err(format!(
            "{} violations, first: {:?}",
            summary.violations,
            summary.violation_messages.first()
        ));
    }
    if elapsed.as_secs_f64() >= 60.0 {
        return Err(format!("took {elapsed:?}, budget 60 s"));
    }
    Ok(format!(
        "{} trials in {:.1} s",
        summary.trials,
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------- criterion 4

/// Pitch-0.25 grid over the relevant coordinates of an image vector `w`:
/// only the components of `w` along `D + span{v}` enter the compression,
/// so the grid runs over those `d + 1` complex coordinates exactly.
/// Returns true when no grid point yields a contained extension.
fn grid_refutes(
    t: &PartialOperator,
    region: &Region,
    v: &CVec,
    cfg: &ToleranceConfig,
) -> Result<bool, String> {
    let frame = t.domain().frame().clone();
    let d = frame.ncols();
    // Fixed row of the extended compression: r_j = <T f_j, v>.
    let r: Vec<C64> = (0..d)
        .map(|j| v.dotc(&t.action().column(j).into_owned()))
        .collect();
    let m = t.compress();
    struct Screen {
        dir: C64,
        beta: f64,
        eq: bool,
        rot_r: Vec<C64>,
        h_fixed: CMat,
    }
    let screens: Vec<Screen> = region
        .constraints()
        .iter()
        .map(|ct| {
            let dir = C64::from_polar(1.0, -ct.phi);
            Screen {
                dir,
                beta: ct.beta,
                eq: ct.kind == ConstraintKind::Eq,
                rot_r: r.iter().map(|&z| (dir * z).conj()).collect(),
                h_fixed: hermitian_part(&(&m * dir)),
            }
        })
        .collect();
    const SLACK: f64 = 0.3;
    let coords = 2 * (d + 1);
    let mut idx = vec![0usize; coords];
    let val = |k: usize| -2.0 + 0.25 * k as f64;
    let mut x = vec![c(0.0, 0.0); d];
    loop {
        for j in 0..d {
            x[j] = c(val(idx[2 * j]), val(idx[2 * j + 1]));
        }
        let e = c(val(idx[2 * d]), val(idx[2 * d + 1]));
        // Stage 1: necessary entrywise conditions, cheap.
        let mut alive = true;
        for s in &screens {
            let corner = (s.dir * e).re;
            if s.eq {
                if (corner - s.beta).abs() > SLACK {
                    alive = false;
                    break;
                }
                for j in 0..d {
                    if ((s.dir * x[j] + s.rot_r[j]) * c(0.5, 0.0)).norm() > SLACK {
                        alive = false;
                        break;
                    }
                }
                if !alive {
                    break;
                }
            } else if corner < s.beta - SLACK {
                alive = false;
                break;
            }
        }
        // Stage 2: lambda_min of the extended Hermitian parts, still with
        // slack, so every exactly feasible point survives.
        if alive {
            for s in &screens {
                if s.eq {
                    continue;
                }
                let q = CMat::from_fn(d + 1, d + 1, |i, j| match (i == d, j == d) {
                    (false, false) => s.h_fixed[(i, j)],
                    (false, true) => (s.dir * x[i] + s.rot_r[i]) * c(0.5, 0.0),
                    (true, false) => ((s.dir * x[j] + s.rot_r[j]) * c(0.5, 0.0)).conj(),
                    (true, true) => c((s.dir * e).re, 0.0),
                });
                let (vals, _) = hermitian_eig(&q, cfg).map_err(|e| e.to_string())?;
                if vals[0] < s.beta - SLACK {
                    alive = false;
                    break;
                }
            }
        }
        // Stage 3: exact PSD re-verification of the surviving candidate.
        if alive {
            let w = &frame * CVec::from_column_slice(&x) + v * e;
            let t_ext = extend(t, v, &w, cfg).map_err(|e| e.to_string())?;
            if contained_in(&t_ext, region, cfg)
                .map_err(|e| e.to_string())?
                .contained
            {
                return Ok(false);
            }
        }
        // Odometer.
        let mut pos = 0;
        loop {
            if pos == coords {
                return Ok(true);
            }
            idx[pos] += 1;
            if idx[pos] < 17 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// A codimension-one instance in C^n known to be ray-maximal: domain
/// spanned by e_1..e_{n-1}, acting diagonally except the last domain
/// vector which maps onto e_n with weight `beta`.
fn known_maximal_case(n: usize, alpha: f64, beta: f64) -> PartialOperator {
    let d = n - 1;
    let frame = CMat::from_fn(n, d, |i, j| c(if i == j { 1.0 } else { 0.0 }, 0.0));
    let action = CMat::from_fn(n, d, |i, j| {
        if j < d - 1 {
            c(if i == j { alpha } else { 0.0 }, 0.0)
        } else {
            c(if i == n - 1 { beta } else { 0.0 }, 0.0)
        }
    });
    PartialOperator::new(Subspace::from_frame(frame, &cfg()).unwrap(), action).unwrap()
}

/// Extension search vs pitch-0.25 brute force on a 200-case corpus.
fn criterion_4() -> Result<String, String> {
    let cfg = cfg();
    let regions: Vec<Region> = vec![
        Region::right_half_plane(),
        Region::positive_ray(),
        Region::real_line(),
        Region::sector(0.0, FRAC_PI_4).unwrap(),
        Region::horizontal_strip(0.8),
    ];
    let mut cases: Vec<(PartialOperator, Region)> = Vec::new();
    // Deterministic maximal instances exercise the refutation grids.
    for k in 0..10 {
        cases.push((
            known_maximal_case(2, 0.0, 0.4 + 0.2 * k as f64),
            Region::positive_ray(),
        ));
    }
    for k in 0..5 {
        cases.push((
            known_maximal_case(3, 0.3 + 0.3 * k as f64, 0.5 + 0.25 * k as f64),
            Region::positive_ray(),
        ));
    }
    let mut k = 0u64;
    while cases.len() < 200 {
        let n = 2 + (k % 2) as usize;
        let d_choices: &[usize] = if n == 2 { &[1] } else { &[1, 2] };
        let d = d_choices[(k as usize / 2) % d_choices.len()];
        let region = regions[k as usize % regions.len()].clone();
        match zoo::random_operator_with_range_in(&region, n, d, 9000 + k, &cfg) {
            Ok(t) => cases.push((t, region)),
            Err(_) => {}
        }
        k += 1;
    }
    let (mut witnesses, mut refuted, mut unknown) = (0usize, 0usize, 0usize);
    for (i, (t, region)) in cases.iter().enumerate() {
        match one_dim_extension_search(t, region, 64, &cfg).map_err(|e| e.to_string())? {
            ExtensionOutcome::Witness { v, w } => {
                let t_ext = extend(t, &v, &w, &cfg).map_err(|e| e.to_string())?;
                let cert = contained_in(&t_ext, region, &cfg).map_err(|e| e.to_string())?;
                if !cert.contained {
                    return Err(format!("case {i}: invalid witness extension"));
                }
                witnesses += 1;
            }
            ExtensionOutcome::Infeasible { .. } => {
                let v = t.domain().perp_frame(&cfg).column(0).into_owned();
                if !grid_refutes(t, region, &v, &cfg)? {
                    return Err(format!("case {i}: grid oracle contradicts Maximal"));
                }
                refuted += 1;
            }
            ExtensionOutcome::NotFound => unknown += 1,
        }
    }
    if refuted < 15 {
        return Err(format!("only {refuted} maximal cases exercised the grid"));
    }
    Ok(format!(
        "{witnesses} witnesses verified, {refuted} maximal verdicts grid-refuted, {unknown} open"
    ))
}

// ---------------------------------------------------------------- criterion 5

/// Transform round trips, contraction outputs, class C(theta) images.
fn criterion_5() -> Result<String, String> {
    let cfg = cfg();
    let mut max_rt = 0.0f64;
    for k in 0..500u64 {
        let n = 2 + (k % 4) as usize;
        let t = zoo::random_operator_with_range_in(&Region::right_half_plane(), n, n, 500 + k, &cfg)
            .map_err(|e| format!("trial {k}: {e}"))?;
        let tr = tau(&t, &cfg).map_err(|e| format!("trial {k}: tau: {e}"))?;
        let k_mat = tr.k.total_matrix(&cfg).map_err(|e| e.to_string())?;
        let smax = spectral_norm(&k_mat);
        if smax > 1.0 + 1e-9 {
            return Err(format!("trial {k}: tau output has sigma_max {smax}"));
        }
        let back = inverse_tau(&tr.k, &cfg).map_err(|e| format!("trial {k}: inverse: {e}"))?;
        let err = spectral_norm(
            &(back.total_matrix(&cfg).map_err(|e| e.to_string())?
                - t.total_matrix(&cfg).map_err(|e| e.to_string())?),
        );
        max_rt = max_rt.max(err);
        if err > 1e-8 {
            return Err(format!("trial {k}: round trip error {err:.2e}"));
        }
    }
    let sector = Region::sector(0.0, FRAC_PI_4).unwrap();
    for k in 0..200u64 {
        let n = 2 + (k % 3) as usize;
        let t = zoo::random_operator_with_range_in(&sector, n, n, 800 + k, &cfg)
            .map_err(|e| format!("sector trial {k}: {e}"))?;
        let tr = tau(&t, &cfg).map_err(|e| e.to_string())?;
        if !class_c_theta(&tr.k, FRAC_PI_4, &cfg).map_err(|e| e.to_string())? {
            return Err(format!("sector trial {k}: image not in C(pi/4)"));
        }
    }
    Ok(format!("max round trip {max_rt:.1e}"))
}

// ---------------------------------------------------------------- criterion 6

/// Growth bounds from the Re-extremes of W(A); second-order derivative
/// identity via a Richardson ratio.
fn criterion_6() -> Result<String, String> {
    let cfg = cfg();
    let grid = SemigroupSampler::default_grid();
    let mut ratios: Vec<f64> = Vec::new();
    for k in 0..200u64 {
        let n = 2 + (k % 4) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(600 + k);
        let a = total(random_cmat(n, &mut rng));
        let report = growth_bound_check(&a, &grid, 5, 600 + k, 1e-6, &cfg)
            .map_err(|e| format!("trial {k}: {e}"))?;
        if !report.bounds_hold {
            return Err(format!(
                "trial {k}: growth bounds [{}, {}] violated by {:.2e}",
                report.omega1, report.omega2, report.overshoot_m
            ));
        }
        if k % 20 == 0 {
            let xi = random_unit_vector(n, &mut rng);
            let t_grid = [0.3, 0.8, 1.4, 2.1];
            let coarse = derivative_identity_check(&a, &xi, &t_grid, 1e-2, &cfg)
                .map_err(|e| e.to_string())?;
            let fine = derivative_identity_check(&a, &xi, &t_grid, 1e-3, &cfg)
                .map_err(|e| e.to_string())?;
            let sum = |r: &omax::semigroups::DerivativeReport| {
                r.rows.iter().map(|row| row.error).sum::<f64>()
            };
            let ratio = sum(&coarse) / sum(&fine).max(1e-300);
            if !(80.0..=120.0).contains(&ratio) {
                return Err(format!("trial {k}: Richardson ratio {ratio:.1}"));
            }
            ratios.push(ratio);
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    Ok(format!("200 generators, mean Richardson ratio {mean:.1}"))
}

// ---------------------------------------------------------------- criterion 7

/// Resolvent bound at exterior points against the outer polygon distance.
fn criterion_7() -> Result<String, String> {
    let cfg = cfg();
    for k in 0..500u64 {
        let n = 2 + (k % 5) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(700 + k);
        let t = total(random_cmat(n, &mut rng));
        // Polygon angle grid point, pushed outward by a positive distance.
        let phi = 2.0 * PI * ((k % 64) as f64) / 64.0;
        let (h, _) = support_function(&t, phi, &cfg).map_err(|e| e.to_string())?;
        let dist = 0.3 + 0.5 * ((k % 7) as f64);
        let lambda = C64::from_polar(1.0, phi) * c(h + dist, 0.0);
        let report =
            resolvent_bound_check(&t, lambda, 64, &cfg).map_err(|e| format!("trial {k}: {e}"))?;
        if !report.holds {
            return Err(format!(
                "trial {k}: ||R|| = {:.3e} exceeds 1/dist = {:.3e}",
                report.resolvent_norm, report.bound
            ));
        }
    }
    Ok("500 exterior points, zero violations".into())
}

// ---------------------------------------------------------------- criterion 8

fn sampled_inf_sup(m: &CMat, rng: &mut ChaCha8Rng) -> f64 {
    let d = m.ncols();
    let mut best = f64::INFINITY;
    let mut best_vec = random_unit_vector(d, rng);
    for _ in 0..10_000 {
        let xi = random_unit_vector(d, rng);
        let r = (m * &xi).norm();
        if r < best {
            best = r;
            best_vec = xi;
        }
    }
    // Shrinking-radius polish around the sampled minimizer.
    let mut radius = 0.5;
    for _ in 0..2000 {
        let jitter = random_unit_vector(d, rng);
        let cand = &best_vec + jitter * c(radius, 0.0);
        let cand = &cand / c(cand.norm(), 0.0);
        let r = (m * &cand).norm();
        if r < best {
            best = r;
            best_vec = cand;
        }
        radius = (radius * 0.996).max(1e-4);
    }
    best
}

/// Forms: perturbation class vs eigenvalue oracle, strip-form theorem,
/// inf-sup vs sampling.
fn criterion_8() -> Result<String, String> {
    let cfg = cfg();
    for k in 0..300u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + k);
        let d = 2 + (k % 4) as usize;
        let coeff = random_cmat(d, &mut rng);
        let f = forms::Form::total(coeff.clone(), None, &cfg).map_err(|e| e.to_string())?;
        let eigs = complex_eigenvalues(&coeff);
        for &lambda in &eigs {
            let b = CMat::identity(d, d) * (-lambda);
            if forms::perturbation_in_p(&f, &b, &cfg).map_err(|e| e.to_string())? {
                return Err(format!("trial {k}: eigenvalue {lambda} reported solvable"));
            }
        }
        let off = c(5.0 + rng.gen_range(0.0..1.0), rng.gen_range(-1.0..1.0));
        if eigs.iter().all(|&e| (e - off).norm() > 1e-3) {
            let b = CMat::identity(d, d) * (-off);
            if !forms::perturbation_in_p(&f, &b, &cfg).map_err(|e| e.to_string())? {
                return Err(format!("trial {k}: resolvent point reported singular"));
            }
        }
    }
    for k in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(850 + k);
        let d = 2 + (k % 4) as usize;
        let alpha = rng.gen_range(0.3..1.5);
        let s = hermitian_part(&random_cmat(d, &mut rng));
        let b_raw = hermitian_part(&random_cmat(d, &mut rng));
        let b = &b_raw * c(rng.gen_range(0.1..0.9) * alpha / spectral_norm(&b_raw).max(1e-9), 0.0);
        let f = forms::Form::total(&s + &b * c(0.0, 1.0), None, &cfg).map_err(|e| e.to_string())?;
        let report = forms::strip_form_theorem_check(&f, &Region::horizontal_strip(alpha), &cfg)
            .map_err(|e| e.to_string())?;
        if !report.ok {
            return Err(format!("strip trial {k}: theorem check failed"));
        }
    }
    let mut worst_gap = 0.0f64;
    for k in 0..12u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(880 + k);
        let d = 3;
        let coeff = random_cmat(d, &mut rng);
        let u = hermitian_part(&random_cmat(d, &mut rng));
        // Diagonal G: the G-norm inf-sup reduces, via xi = G^{-1/2} x, to
        // the Euclidean sigma_min of G^{-1/2} (coeff + U) G^{-1/2}, which
        // the test can form without the library's matrix square root.
        let weights: Vec<f64> = (0..d).map(|_| rng.gen_range(0.5..3.0)).collect();
        let g = CMat::from_fn(d, d, |i, j| c(if i == j { weights[i] } else { 0.0 }, 0.0));
        let gi = CMat::from_fn(d, d, |i, j| {
            c(if i == j { 1.0 / weights[i].sqrt() } else { 0.0 }, 0.0)
        });
        let f = forms::Form::total(coeff.clone(), Some(g), &cfg).map_err(|e| e.to_string())?;
        let val = forms::inf_sup_criterion(&f, &u, &cfg).map_err(|e| e.to_string())?;
        let oracle = sampled_inf_sup(&(&gi * (&coeff + &u) * &gi), &mut rng);
        if oracle < val - 1e-9 {
            return Err(format!("inf-sup trial {k}: oracle below sigma_min"));
        }
        let gap = oracle - val;
        worst_gap = worst_gap.max(gap);
        if gap > 1e-2 {
            return Err(format!("inf-sup trial {k}: sampling gap {gap:.2e}"));
        }
    }
    Ok(format!("inf-sup worst sampling gap {worst_gap:.1e}"))
}

// ---------------------------------------------------------------- criterion 9

/// n = 200 discretized derivative: strip half-width m + C h, with the
/// theta coupling achieving exactly m and exact anti-Hermitian skewness.
fn criterion_9() -> Result<String, String> {
    let cfg = cfg();
    let n = 200;
    let r: Vec<f64> = (0..n)
        .map(|j| 1.5 * (PI * (j + 1) as f64 / (n + 1) as f64).sin())
        .collect();
    let dirichlet = zoo::discretized_derivative(
        &zoo::GridSpec::new(zoo::Interval::Unit, n, zoo::BoundaryCondition::DirichletBoth)
            .map_err(|e| e.to_string())?,
        &r,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    if dirichlet.skewness > 1e-12 {
        return Err(format!("Dirichlet skewness {:.2e}", dirichlet.skewness));
    }
    if dirichlet.observed_half_width > dirichlet.m + dirichlet.c_reported * dirichlet.h + 1e-9 {
        return Err("Dirichlet half-width exceeds m + C h".into());
    }
    if dirichlet.c_reported > 50.0 {
        return Err(format!("Dirichlet C = {:.2}", dirichlet.c_reported));
    }
    let theta = zoo::discretized_derivative(
        &zoo::GridSpec::new(
            zoo::Interval::Unit,
            n,
            zoo::BoundaryCondition::Theta(C64::from_polar(1.0, 0.7)),
        )
        .map_err(|e| e.to_string())?,
        &r,
        &cfg,
    )
    .map_err(|e| e.to_string())?;
    if theta.skewness > 1e-12 {
        return Err(format!("theta skewness {:.2e}", theta.skewness));
    }
    if (theta.observed_half_width - theta.m).abs() > 1e-9 {
        return Err(format!(
            "theta half-width {} differs from m = {}",
            theta.observed_half_width, theta.m
        ));
    }
    Ok(format!(
        "m = {:.4}, Dirichlet C = {:.3}, theta exact",
        theta.m, dirichlet.c_reported
    ))
}

// --------------------------------------------------------------- criterion 10

/// Suite replay determinism: identical seed, byte-identical report.
fn criterion_10() -> Result<String, String> {
    let cfg = cfg();
    let run = || {
        suites::run_suite("all", 25, 13, &cfg)
            .map_err(|e| e.to_string())
            .and_then(|s| serde_json::to_string(&s).map_err(|e| e.to_string()))
    };
    let first = run()?;
    let second = run()?;
    if first != second {
        return Err("re-run with the same seed produced a different report".into());
    }
    Ok(format!("{} report bytes, identical", first.len()))
}

// -------------------------------------------------------------------- harness

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> Result<String, String>)> = vec![
        ("01 worked example reproduction", criterion_1),
        ("02 numerical-range oracle", criterion_2),
        ("03 implication suite x1000", criterion_3),
        ("04 extension search vs brute force", criterion_4),
        ("05 transform round trips", criterion_5),
        ("06 semigroup growth bounds", criterion_6),
        ("07 resolvent bound", criterion_7),
        ("08 forms", criterion_8),
        ("09 discretized derivative", criterion_9),
        ("10 replay determinism", criterion_10),
    ];
    let mut failures = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("criterion {name}: pass ({detail})"),
            Err(reason) => {
                println!("criterion {name}: FAIL ({reason})");
                failures.push(format!("{name}: {reason}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
