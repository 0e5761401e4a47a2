//! Tiny max-slack linear program in the plane.
//!
//! Maximizes `delta` subject to `x*cos(phi_k) + y*sin(phi_k) - delta >= t_k`.
//! This is all the linear programming the crate needs: deciding whether a
//! finite intersection of half-planes is nonempty (and how deep a point can
//! sit inside it). Solved exactly by KKT candidate enumeration: a bounded
//! optimum has either three tight constraints whose normals contain 0 in
//! their convex hull, or a tight opposite pair.

const ANGLE_TOL: f64 = 1e-12;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy)]
pub(crate) struct SlackSolution {
    /// Best achievable slack; `f64::INFINITY` when unbounded.
    pub delta: f64,
    pub point: (f64, f64),
}

fn normalize_angle(phi: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut a = phi % two_pi;
    if a < 0.0 {
        a += two_pi;
    }
    a
}

fn slack_at(x: f64, y: f64, constraints: &[(f64, f64)]) -> f64 {
    constraints
        .iter()
        .map(|&(phi, t)| x * phi.cos() + y * phi.sin() - t)
        .fold(f64::INFINITY, f64::min)
}

/// Direction in whose open half-plane all constraint normals lie, if any.
/// Its existence is equivalent to the LP being unbounded.
fn open_halfplane_direction(constraints: &[(f64, f64)]) -> Option<(f64, f64)> {
    if constraints.is_empty() {
        return Some((1.0, 0.0));
    }
    let mut angles: Vec<f64> = constraints.iter().map(|&(phi, _)| normalize_angle(phi)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    angles.dedup_by(|a, b| (*a - *b).abs() < ANGLE_TOL);
    let two_pi = std::f64::consts::TAU;
    let m = angles.len();
    let mut best_gap = 0.0;
    let mut best_mid = 0.0;
    for i in 0..m {
        let next = if i + 1 == m { angles[0] + two_pi } else { angles[i + 1] };
        let gap = next - angles[i];
        if gap > best_gap {
            best_gap = gap;
            best_mid = angles[i] + gap / 2.0;
        }
    }
    if best_gap > std::f64::consts::PI + 1e-10 {
        // The direction opposite the widest empty arc sees every normal at
        // an angle strictly below pi/2.
        let u = best_mid + std::f64::consts::PI;
        Some((u.cos(), u.sin()))
    } else {
        None
    }
}

/// Exact max-slack solve. `constraints` are `(phi, t)` pairs.
pub(crate) fn max_slack(constraints: &[(f64, f64)]) -> SlackSolution {
    if let Some((ux, uy)) = open_halfplane_direction(constraints) {
        // Unbounded: walk along the witness direction just far enough for
        // a comfortable slack.
        let rate = constraints
            .iter()
            .map(|&(phi, _)| ux * phi.cos() + uy * phi.sin())
            .fold(1.0f64, f64::min)
            .max(1e-9);
        let worst = constraints
            .iter()
            .map(|&(_, t)| t)
            .fold(0.0f64, f64::max);
        let reach = ((worst + 2.0) / rate).min(1e9);
        let (x, y) = (ux * reach, uy * reach);
        return SlackSolution {
            delta: f64::INFINITY,
            point: (x, y),
        };
    }
    let k = constraints.len();
    let mut best: Option<SlackSolution> = None;
    let mut consider = |x: f64, y: f64| {
        let delta = slack_at(x, y, constraints);
        if best.map_or(true, |b| delta > b.delta) {
            best = Some(SlackSolution { delta, point: (x, y) });
        }
    };
    // Opposite pairs: delta = -(t_i + t_j)/2 on a line; take the point on
    // that line maximizing the slack of the remaining constraints.
    for i in 0..k {
        for j in (i + 1)..k {
            let (pi_, ti) = constraints[i];
            let (pj, tj) = constraints[j];
            let diff = normalize_angle(pi_ - pj);
            if (diff - std::f64::consts::PI).abs() < 1e-9 {
                let delta = -(ti + tj) / 2.0;
                let (nx, ny) = (pi_.cos(), pi_.sin());
                let base = (nx * (ti + delta), ny * (ti + delta));
                // Tangential sweep: coarse then refined golden-section is
                // overkill; the remaining slack is piecewise linear in s, so
                // its breakpoints are at the other constraints.
                let (tx, ty) = (-ny, nx);
                let mut s_candidates = vec![0.0];
                for (l, &(pl, tl)) in constraints.iter().enumerate() {
                    if l == i || l == j {
                        continue;
                    }
                    let num = tl + delta - (base.0 * pl.cos() + base.1 * pl.sin());
                    let den = tx * pl.cos() + ty * pl.sin();
                    if den.abs() > 1e-14 {
                        s_candidates.push(num / den);
                    }
                }
                // Pairwise intersections of the 1-D constraints.
                let mut extended = s_candidates.clone();
                for a in 0..s_candidates.len() {
                    for b in (a + 1)..s_candidates.len() {
                        extended.push((s_candidates[a] + s_candidates[b]) / 2.0);
                    }
                }
                for s in extended {
                    consider(base.0 + s * tx, base.1 + s * ty);
                }
            }
        }
    }
    // Triples of tight constraints.
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                if let Some((x, y, _d)) = solve_triple(constraints[i], constraints[j], constraints[l]) {
                    consider(x, y);
                }
            }
        }
    }
    // Fallbacks for degenerate inputs (e.g. a single constraint can only
    // happen here if the unboundedness test was fooled by ties).
    consider(0.0, 0.0);
    for &(phi, t) in constraints {
        consider(phi.cos() * t, phi.sin() * t);
    }
    best.expect("at least one candidate considered")
}

fn solve_triple(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> Option<(f64, f64, f64)> {
    // x cos + y sin - delta = t for each of the three.
    let m = [
        [a.0.cos(), a.0.sin(), -1.0],
        [b.0.cos(), b.0.sin(), -1.0],
        [c.0.cos(), c.0.sin(), -1.0],
    ];
    let rhs = [a.1, b.1, c.1];
    let det = det3(&m);
    if det.abs() < 1e-13 {
        return None;
    }
    let mut cols = [[0.0; 3]; 3];
    for v in 0..3 {
        let mut mm = m;
        for r in 0..3 {
            mm[r][v] = rhs[r];
        }
        cols[0][v] = det3(&mm) / det;
    }
    Some((cols[0][0], cols[0][1], cols[0][2]))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Feasibility of the system with zero slack required.
pub(crate) fn feasible_point(constraints: &[(f64, f64)]) -> Option<(f64, f64)> {
    let sol = max_slack(constraints);
    if sol.delta >= -FEAS_TOL {
        Some(sol.point)
    } else {
        None
    }
}
