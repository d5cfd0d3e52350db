//! Ground-truth simulation: scenes with unknown obstacles, range readings
//! against the free region at time `t`, and the seeded generators used by
//! the experiment harness.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{
    segments_intersect, Containment, Point2, Polygon, Pose, RigidMotion, Violation, EPS_GEOM,
};
use crate::preimage::MeasurementSpec;

/// Rejections allowed per obstacle in [`random_obstacles`].
pub const OBSTACLE_ATTEMPTS: usize = 10_000;
/// Rejections allowed in [`sample_free_pose`].
pub const POSE_ATTEMPTS: usize = 100_000;
/// Probe rays used for the clearance test in [`sample_free_pose`].
pub const CLEARANCE_PROBES: usize = 64;
/// Default obstacle circumradius range, as fractions of the workspace
/// diameter.
pub const DEFAULT_OBSTACLE_SIZE: (f64, f64) = (0.02, 0.08);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("pose-in-obstacle-or-outside: ({x}, {y}) is not in the free region")]
    PoseNotFree { x: f64, y: f64 },
    #[error("workspace-too-crowded: could not place obstacle {index}")]
    WorkspaceTooCrowded { index: usize },
    #[error("no free pose found after {0} attempts")]
    NoFreePose(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(#[from] Violation),
}

/// World placement of an obstacle as a function of time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Trajectory {
    /// The obstacle stays put.
    Static(RigidMotion),
    /// Constant world-frame velocity and spin from `start` at `t = 0`.
    ConstantVelocity {
        start: RigidMotion,
        velocity: Point2,
        spin: f64,
    },
}

impl Trajectory {
    pub fn at(&self, t: f64) -> RigidMotion {
        match *self {
            Trajectory::Static(g) => g,
            Trajectory::ConstantVelocity { start, velocity, spin } => RigidMotion {
                translation: start.translation + velocity * t,
                rotation: crate::geometry::wrap_angle(start.rotation + spin * t),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    /// Body-frame shape.
    pub shape: Polygon,
    pub trajectory: Trajectory,
}

impl Obstacle {
    pub fn fixed(shape: Polygon, placement: RigidMotion) -> Self {
        Self {
            shape,
            trajectory: Trajectory::Static(placement),
        }
    }

    /// World-frame shape at time `t`.
    pub fn placed(&self, t: f64) -> Polygon {
        self.shape.transformed(&self.trajectory.at(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub workspace: Polygon,
    pub obstacles: Vec<Obstacle>,
}

impl Scene {
    pub fn new(workspace: Polygon) -> Self {
        Self {
            workspace,
            obstacles: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), Violation> {
        self.workspace.validate()?;
        self.obstacles.iter().try_for_each(|o| o.shape.validate())
    }

    /// Obstacle shapes placed at time `t`.
    pub fn placed_obstacles(&self, t: f64) -> Vec<Polygon> {
        self.obstacles.iter().map(|o| o.placed(t)).collect()
    }
}

/// Scene frozen at one instant; avoids re-placing obstacles per ray.
struct Snapshot<'a> {
    workspace: &'a Polygon,
    obstacles: Vec<Polygon>,
}

impl<'a> Snapshot<'a> {
    fn new(scene: &'a Scene, t: f64) -> Self {
        Self {
            workspace: &scene.workspace,
            obstacles: scene.placed_obstacles(t),
        }
    }

    fn is_free(&self, p: Point2) -> bool {
        self.workspace.contains(p) == Containment::Inside
            && self.obstacles.iter().all(|o| o.contains(p) == Containment::Outside)
    }

    /// `(distance, hit_static)`; ties go to the static map.
    fn measure(&self, origin: Point2, theta: f64) -> Option<(f64, bool)> {
        let stat = self.workspace.ray_hit(origin, theta);
        let dynamic = self
            .obstacles
            .iter()
            .filter_map(|o| o.ray_hit(origin, theta))
            .min_by(f64::total_cmp);
        match (stat, dynamic) {
            (Some(s), Some(d)) if d < s - EPS_GEOM => Some((d, false)),
            (Some(s), _) => Some((s, true)),
            (None, Some(d)) => Some((d, false)),
            (None, None) => None,
        }
    }
}

/// Distance reading against the free region at time `t`, and whether the
/// ray ended on the static map.
pub fn measure_dynamic(scene: &Scene, t: f64, q: &Pose) -> Result<(f64, bool), SimError> {
    let snap = Snapshot::new(scene, t);
    let blocked = SimError::PoseNotFree {
        x: q.position.x,
        y: q.position.y,
    };
    if !snap.is_free(q.position) {
        return Err(blocked);
    }
    snap.measure(q.position, q.theta).ok_or(blocked)
}

/// One simulated measurement batch with its ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSetup {
    pub scene: Scene,
    pub ground_truth: Pose,
    pub measurements: Vec<MeasurementSpec>,
    pub static_flags: Vec<bool>,
    pub sparsity: usize,
}

/// `k` readings from `q_star`, rotating by `2π/k` between readings, all at
/// time `t0`. Sparsity is recorded, not enforced.
pub fn make_trial(scene: &Scene, q_star: &Pose, k: usize, t0: f64) -> Result<TrialSetup, SimError> {
    let snap = Snapshot::new(scene, t0);
    if !snap.is_free(q_star.position) {
        return Err(SimError::PoseNotFree {
            x: q_star.position.x,
            y: q_star.position.y,
        });
    }
    let mut measurements = Vec::with_capacity(k);
    let mut static_flags = Vec::with_capacity(k);
    for i in 0..k {
        let g = RigidMotion::rotation(TAU * i as f64 / k as f64);
        let s = q_star.compose(&g);
        let (d, hit_static) = snap.measure(s.position, s.theta).ok_or(SimError::PoseNotFree {
            x: s.position.x,
            y: s.position.y,
        })?;
        measurements.push(MeasurementSpec {
            g,
            d,
            t: t0,
            eps_meas: 0.0,
        });
        static_flags.push(hit_static);
    }
    let sparsity = static_flags.iter().filter(|&&f| f).count();
    Ok(TrialSetup {
        scene: scene.clone(),
        ground_truth: *q_star,
        measurements,
        static_flags,
        sparsity,
    })
}

/// Sorted angles in `[0, 2π)` with every gap (including the wrap-around)
/// below π, so the origin is strictly inside the resulting star polygon.
fn star_angles(rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..count).map(|_| rng.random_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let wrap = a[0] + TAU - a[count - 1];
        let max_gap = a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
        let min_gap = a.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::min);
        if max_gap < std::f64::consts::PI - 1e-6 && min_gap > 1e-6 {
            return a;
        }
    }
}

/// Star-shaped simple polygon around the origin: sorted random angles,
/// radii `radius · (1 ± jitter)`.
pub fn random_polygon(seed: u64, vertices: usize, radius: f64, jitter: f64) -> Result<Polygon, SimError> {
    if vertices < 3 {
        return Err(SimError::InvalidParameter("a polygon needs at least 3 vertices"));
    }
    if !(0.0..1.0).contains(&jitter) {
        return Err(SimError::InvalidParameter("jitter must be in [0, 1)"));
    }
    if radius.is_nan() || radius <= 0.0 {
        return Err(SimError::InvalidParameter("radius must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let angles = star_angles(&mut rng, vertices);
    let outer = angles
        .into_iter()
        .map(|a| {
            let r = radius * (1.0 + jitter * rng.random_range(-1.0..=1.0));
            Point2::from_angle(a) * r
        })
        .collect();
    Ok(Polygon::new(outer, Vec::new()))
}

/// Whether `inner` lies strictly inside `w`: vertices inside, no boundary
/// crossings, and no hole of `w` swallowed.
fn strictly_within(w: &Polygon, inner: &Polygon) -> bool {
    inner.vertices().all(|p| w.contains(p) == Containment::Inside)
        && !inner
            .edges()
            .any(|(a, b)| w.edges().any(|(c, d)| segments_intersect(a, b, c, d)))
        && w.holes
            .iter()
            .all(|h| inner.contains(h[0]) == Containment::Outside)
}

/// `m` convex obstacles (4–8 vertices on a circle of random radius) placed
/// wholly inside `w` with static trajectories. Obstacles may overlap.
pub fn random_obstacles(
    seed: u64,
    w: &Polygon,
    m: usize,
    size_range: (f64, f64),
) -> Result<Vec<Obstacle>, SimError> {
    let (lo, hi) = size_range;
    if !(lo > 0.0 && lo <= hi) {
        return Err(SimError::InvalidParameter("size range must satisfy 0 < lo <= hi"));
    }
    let bounds = w.aabb();
    let diam = bounds.diameter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(m);
    for index in 0..m {
        let sides = rng.random_range(4..=8);
        let r = diam * rng.random_range(lo..=hi);
        let shape = Polygon::new(
            star_angles(&mut rng, sides)
                .into_iter()
                .map(|a| Point2::from_angle(a) * r)
                .collect(),
            Vec::new(),
        );
        let mut placed = None;
        for _ in 0..OBSTACLE_ATTEMPTS {
            let g = RigidMotion::new(
                rng.random_range(bounds.min.x..bounds.max.x),
                rng.random_range(bounds.min.y..bounds.max.y),
                rng.random_range(0.0..TAU),
            );
            if strictly_within(w, &shape.transformed(&g)) {
                placed = Some(g);
                break;
            }
        }
        let g = placed.ok_or(SimError::WorkspaceTooCrowded { index })?;
        out.push(Obstacle::fixed(shape.clone(), g));
    }
    Ok(out)
}

/// Uniform rejection sample of a pose whose position is free at time `t`
/// and at least `clearance` from every boundary along a fan of probe rays.
pub fn sample_free_pose(seed: u64, scene: &Scene, t: f64, clearance: f64) -> Result<Pose, SimError> {
    if clearance.is_nan() || clearance < 0.0 {
        return Err(SimError::InvalidParameter("clearance must be non-negative"));
    }
    let snap = Snapshot::new(scene, t);
    let bounds = scene.workspace.aabb();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..POSE_ATTEMPTS {
        let p = Point2::new(
            rng.random_range(bounds.min.x..bounds.max.x),
            rng.random_range(bounds.min.y..bounds.max.y),
        );
        let theta = rng.random_range(0.0..TAU);
        if !snap.is_free(p) {
            continue;
        }
        let clear = (0..CLEARANCE_PROBES).all(|j| {
            let a = TAU * j as f64 / CLEARANCE_PROBES as f64;
            snap.measure(p, a).is_some_and(|(d, _)| d >= clearance)
        });
        if clear {
            return Ok(Pose::from_parts(p, theta));
        }
    }
    Err(SimError::NoFreePose(POSE_ATTEMPTS))
}
