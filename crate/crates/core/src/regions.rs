//! Proper closed convex subsets of the plane in canonical polyhedral form:
//! finite intersections of closed half-planes and lines.
//!
//! A constraint `(phi, beta, Ineq)` encodes `{z : Re(e^{-i phi} z) >= beta}`;
//! with kind `Eq` it encodes the boundary line `{z : Re(e^{-i phi} z) = beta}`.
//! Every region instantiated by the underlying theory (half-planes, sectors,
//! strips, rays, lines, quadrants) is of this shape, and membership of a
//! numerical range then reduces to finitely many Hermitian PSD conditions.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hilbert::{c, C64};
use crate::lp;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintKind {
    Ineq,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlaneConstraint {
    pub phi: f64,
    pub beta: f64,
    pub kind: ConstraintKind,
}

impl HalfPlaneConstraint {
    pub fn ineq(phi: f64, beta: f64) -> Self {
        Self {
            phi,
            beta,
            kind: ConstraintKind::Ineq,
        }
    }

    pub fn eq(phi: f64, beta: f64) -> Self {
        Self {
            phi,
            beta,
            kind: ConstraintKind::Eq,
        }
    }

    /// Signed margin `Re(e^{-i phi} z) - beta`.
    pub fn margin(&self, z: C64) -> f64 {
        (z * C64::from_polar(1.0, -self.phi)).re - self.beta
    }

    pub fn satisfied(&self, z: C64, tol: f64) -> bool {
        match self.kind {
            ConstraintKind::Ineq => self.margin(z) >= -tol,
            ConstraintKind::Eq => self.margin(z).abs() <= tol,
        }
    }

    /// Projection of `z` onto the constraint set.
    fn project(&self, z: C64) -> C64 {
        let m = self.margin(z);
        let move_by = match self.kind {
            ConstraintKind::Ineq => {
                if m >= 0.0 {
                    return z;
                }
                -m
            }
            ConstraintKind::Eq => -m,
        };
        z + C64::from_polar(1.0, self.phi) * move_by
    }

    /// The same constraint set as inequality pairs `(phi, t)` for the LP.
    fn lp_rows(&self) -> Vec<(f64, f64)> {
        match self.kind {
            ConstraintKind::Ineq => vec![(self.phi, self.beta)],
            ConstraintKind::Eq => vec![
                (self.phi, self.beta),
                (self.phi + std::f64::consts::PI, -self.beta),
            ],
        }
    }
}

/// A connected component of the complement, with a representative point at
/// distance at least 1 from the region.
#[derive(Debug, Clone)]
pub struct ComplementComponent {
    pub sample: C64,
    /// Indices of the region constraints violated on this component.
    pub constraint_indices: Vec<usize>,
}

/// Proper closed convex polyhedral subset of the plane.
#[derive(Debug, Clone)]
pub struct Region {
    constraints: Vec<HalfPlaneConstraint>,
    interior_point: C64,
}

impl Region {
    /// Builds a region, verifying that the intersection is nonempty.
    /// Properness (nonempty complement) is automatic: any half-plane or
    /// line constraint excludes points.
    pub fn new(constraints: Vec<HalfPlaneConstraint>) -> Result<Self> {
        if constraints.is_empty() {
            return Err(Error::BadRegion("no constraints".into()));
        }
        let rows: Vec<(f64, f64)> = constraints.iter().flat_map(|ct| ct.lp_rows()).collect();
        let point = lp::feasible_point(&rows)
            .ok_or_else(|| Error::BadRegion("constraint intersection is empty".into()))?;
        Ok(Self {
            constraints,
            interior_point: c(point.0, point.1),
        })
    }

    pub fn constraints(&self) -> &[HalfPlaneConstraint] {
        &self.constraints
    }

    /// A point of the region found at construction time.
    pub fn witness_point(&self) -> C64 {
        self.interior_point
    }

    /// Closed half-plane `{Re(e^{-i phi} z) >= beta}`.
    pub fn half_plane(phi: f64, beta: f64) -> Self {
        Self::new(vec![HalfPlaneConstraint::ineq(phi, beta)]).expect("half-plane is nonempty")
    }

    /// `{Re z >= 0}`.
    pub fn right_half_plane() -> Self {
        Self::half_plane(0.0, 0.0)
    }

    /// `{Re z <= 0}`.
    pub fn left_half_plane() -> Self {
        Self::half_plane(std::f64::consts::PI, 0.0)
    }

    /// Sector `{|arg(z - gamma)| <= theta}` opening along the positive real
    /// axis from the vertex `gamma`. The degenerate `theta = 0` is the ray
    /// `[gamma, +inf)`: the half-plane `Re z >= gamma` plus the line `Im z = 0`.
    pub fn sector(gamma: f64, theta: f64) -> Result<Self> {
        use std::f64::consts::FRAC_PI_2;
        if !(0.0..FRAC_PI_2).contains(&theta) {
            return Err(Error::InvalidArgument(format!(
                "sector half-angle must satisfy 0 <= theta < pi/2, got {theta}"
            )));
        }
        if theta == 0.0 {
            return Self::new(vec![
                HalfPlaneConstraint::ineq(0.0, gamma),
                HalfPlaneConstraint::eq(FRAC_PI_2, 0.0),
            ]);
        }
        // Supporting half-planes through the boundary rays at angles
        // +-theta: normals e^{i phi} with phi = -(pi/2 - theta) and
        // +(pi/2 - theta).
        let phi_upper = theta - FRAC_PI_2;
        let phi_lower = FRAC_PI_2 - theta;
        let vertex = c(gamma, 0.0);
        let beta_upper = (vertex * C64::from_polar(1.0, -phi_upper)).re;
        let beta_lower = (vertex * C64::from_polar(1.0, -phi_lower)).re;
        Self::new(vec![
            HalfPlaneConstraint::ineq(phi_upper, beta_upper),
            HalfPlaneConstraint::ineq(phi_lower, beta_lower),
        ])
    }

    /// The ray `[gamma, +inf)` on the real axis.
    pub fn ray(gamma: f64) -> Self {
        Self::sector(gamma, 0.0).expect("theta = 0 is valid")
    }

    /// The positive ray `[0, +inf)`.
    pub fn positive_ray() -> Self {
        Self::ray(0.0)
    }

    /// Image of the horizontal strip `{|Im z| <= alpha}` under
    /// `z -> a z + b`; `alpha = 0` gives a line.
    pub fn strip(a: C64, b: f64, alpha: f64) -> Result<Self> {
        use std::f64::consts::FRAC_PI_2;
        if a.norm() == 0.0 {
            return Err(Error::InvalidArgument("strip scale a must be nonzero".into()));
        }
        if alpha < 0.0 {
            return Err(Error::InvalidArgument("strip half-width must be nonnegative".into()));
        }
        let arg_a = a.arg();
        let shift = c(b, 0.0);
        // Im((w - b)/a) >= -alpha and <= alpha.
        let phi1 = FRAC_PI_2 + arg_a;
        let phi2 = -FRAC_PI_2 + arg_a;
        let beta1 = -alpha * a.norm() + (shift * C64::from_polar(1.0, -phi1)).re;
        let beta2 = -alpha * a.norm() + (shift * C64::from_polar(1.0, -phi2)).re;
        Self::new(vec![
            HalfPlaneConstraint::ineq(phi1, beta1),
            HalfPlaneConstraint::ineq(phi2, beta2),
        ])
    }

    /// Horizontal strip `{|Im z| <= alpha}`.
    pub fn horizontal_strip(alpha: f64) -> Self {
        Self::strip(c(1.0, 0.0), 0.0, alpha).expect("valid strip")
    }

    /// The real axis as a region (degenerate strip).
    pub fn real_line() -> Self {
        Self::horizontal_strip(0.0)
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.constraints.iter().all(|ct| ct.satisfied(z, tol))
    }

    /// Euclidean distance to the region, by cyclic Dykstra projections
    /// (exact in one pass for a single constraint, geometrically convergent
    /// in general).
    pub fn distance(&self, z: C64) -> f64 {
        if self.contains(z, 0.0) {
            return 0.0;
        }
        if self.constraints.len() == 1 {
            return (z - self.constraints[0].project(z)).norm();
        }
        let mut x = z;
        let mut increments = vec![c(0.0, 0.0); self.constraints.len()];
        let mut last = x;
        for iter in 0..2000 {
            for (k, ct) in self.constraints.iter().enumerate() {
                let y = x + increments[k];
                let p = ct.project(y);
                increments[k] = y - p;
                x = p;
            }
            if iter % 8 == 7 {
                if (x - last).norm() < 1e-14 * (1.0 + z.norm()) {
                    break;
                }
                last = x;
            }
        }
        (z - x).norm()
    }

    /// Whether the region is syntactically a full strip: exactly two
    /// inequality constraints with directions differing by pi, and nothing
    /// else.
    pub fn is_strip(&self) -> bool {
        if self.constraints.len() != 2 {
            return false;
        }
        let (a, b) = (&self.constraints[0], &self.constraints[1]);
        if a.kind != ConstraintKind::Ineq || b.kind != ConstraintKind::Ineq {
            return false;
        }
        let diff = (a.phi - b.phi).rem_euclid(std::f64::consts::TAU);
        (diff - std::f64::consts::PI).abs() < 1e-9
    }

    /// Whether the region is a single line.
    pub fn is_line(&self) -> bool {
        self.constraints.len() == 1 && self.constraints[0].kind == ConstraintKind::Eq
    }

    /// Connected components of the complement: two for strips and lines,
    /// one otherwise. Each component carries a sample at distance >= 1.
    pub fn complement_components(&self) -> Vec<ComplementComponent> {
        let sample_for = |ct: &HalfPlaneConstraint, side: f64| -> C64 {
            // A point violating the constraint by 2 in the outward normal
            // direction; its distance to the region is at least 2.
            C64::from_polar(1.0, ct.phi) * (ct.beta - 2.0 * side)
        };
        if self.is_strip() {
            return vec![
                ComplementComponent {
                    sample: sample_for(&self.constraints[0], 1.0),
                    constraint_indices: vec![0],
                },
                ComplementComponent {
                    sample: sample_for(&self.constraints[1], 1.0),
                    constraint_indices: vec![1],
                },
            ];
        }
        if self.is_line() {
            let ct = &self.constraints[0];
            let up = C64::from_polar(1.0, ct.phi) * (ct.beta + 2.0);
            let down = C64::from_polar(1.0, ct.phi) * (ct.beta - 2.0);
            return vec![
                ComplementComponent {
                    sample: up,
                    constraint_indices: vec![0],
                },
                ComplementComponent {
                    sample: down,
                    constraint_indices: vec![0],
                },
            ];
        }
        vec![ComplementComponent {
            sample: sample_for(&self.constraints[0], 1.0),
            constraint_indices: vec![0],
        }]
    }

    /// Seeded pseudo-random exterior points in a given complement
    /// component, each at distance >= 1 from the region.
    pub fn exterior_samples(
        &self,
        component: &ComplementComponent,
        count: usize,
        seed: u64,
    ) -> Vec<C64> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let mut guard = 0;
        while out.len() < count && guard < count * 200 {
            guard += 1;
            let base = component.sample;
            let jitter = c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            let z = base + jitter;
            if self.distance(z) >= 1.0 {
                out.push(z);
            }
        }
        while out.len() < count {
            out.push(component.sample);
        }
        out
    }
}
