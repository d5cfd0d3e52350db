//! Conservative voxel approximation of a measurement preimage: the set of
//! poses from which the static map would report distance `d` after the
//! relative motion `g`.
//!
//! Each heading slice is handled at its midpoint angle in two stages:
//!
//! 1. *Candidates.* Every boundary edge is translated back along the
//!    measurement ray by `d` (and by the rotated body offset of `g`), then
//!    dilated into a capsule of radius [`slice_slack`]. Cells whose center
//!    falls in some capsule become candidates. This stage never drops a
//!    pose whose ray really ends on that edge.
//! 2. *Visibility.* A ray is cast from each candidate's center. The cell is
//!    dropped when the measurement origin leaves the workspace, or when the
//!    distance misses `d` by more than `slack · (1 + slope_bound / sin α)`
//!    (α the incidence angle at the hit edge) *and* no map vertex lies
//!    near the center ray, followed to `max(d, r) + slack`. "Near" is
//!    `slack` up to distance `d` and grows by `dθ/2` per unit beyond.
//!
//! Within a voxel the ray origin moves by at most the slack and the range
//! to a fixed edge changes by at most `slack / sin α`, so the threshold only
//! removes poses whose ray sees a different edge than the center ray does.
//! That switch needs a vertex between the two rays, which the vertex test
//! keeps. What remains unsound is measure-small and is reported by
//! [`near_visibility_event`].

use rayon::prelude::*;

use crate::geometry::{
    point_segment_distance, ray_first_hit, Containment, Point2, Polygon, Pose, RigidMotion,
};
use crate::voxelgrid::{GridSpec, VoxelMask};

/// One range reading: relative motion from the unknown pose, measured
/// distance, timestamp and sensor tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSpec {
    pub g: RigidMotion,
    pub d: f64,
    pub t: f64,
    pub eps_meas: f64,
}

impl MeasurementSpec {
    pub fn new(g: RigidMotion, d: f64) -> Self {
        Self {
            g,
            d,
            t: 0.0,
            eps_meas: 0.0,
        }
    }

    /// Sensor pose after applying `g` to `q`.
    pub fn sensor_pose(&self, q: &Pose) -> Pose {
        q.compose(&self.g)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreimageParams {
    /// Extra margin added to every slice's slack, meters.
    pub slack_extra: f64,
    /// Stage-2 removal threshold is `slack · (1 + slope_bound / sin α)`;
    /// `2 · slack` at normal incidence with the default of 1.
    pub slope_bound: f64,
}

impl Default for PreimageParams {
    fn default() -> Self {
        Self {
            slack_extra: 0.0,
            slope_bound: 1.0,
        }
    }
}

/// Worst-case displacement, within one voxel, of the measurement origin
/// and of the translated boundary, plus sensor tolerance and user margin.
pub fn slice_slack(spec: &GridSpec, m: &MeasurementSpec, params: &PreimageParams) -> f64 {
    0.5 * spec.xy_diagonal()
        + (m.d + m.g.translation.norm()) * (spec.cell_dtheta * 0.5)
        + m.eps_meas
        + params.slack_extra
}

/// `|h_W(q ∘ g) − d|`, or `None` when the sensor origin leaves the
/// workspace or its ray escapes.
pub fn agreement_residual(w: &Polygon, q: &Pose, m: &MeasurementSpec) -> Option<f64> {
    let s = m.sensor_pose(q);
    if w.contains(s.position) == Containment::Outside {
        return None;
    }
    w.ray_hit(s.position, s.theta).map(|r| (r - m.d).abs())
}

/// Builds the voxel cloud of one measurement over `spec`.
///
/// Returns an empty mask when `d` exceeds the bounding-box diameter plus the
/// slack, since no pose can produce it.
pub fn compute_preimage(
    w: &Polygon,
    m: &MeasurementSpec,
    spec: &GridSpec,
    params: &PreimageParams,
) -> VoxelMask {
    let slack = slice_slack(spec, m, params);
    if m.d > spec.bounds().diameter() + slack {
        return VoxelMask::empty(*spec);
    }
    let edges: Vec<(Point2, Point2)> = w.edges().collect();
    let vertices: Vec<Point2> = w.vertices().collect();
    let slices: Vec<(usize, Vec<usize>)> = (0..spec.n)
        .into_par_iter()
        .map(|it| {
            let ctx = SliceContext {
                w,
                edges: &edges,
                vertices: &vertices,
                m,
                spec,
                params,
                slack,
            };
            (it, ctx.cells(it))
        })
        .collect();
    VoxelMask::from_slices(*spec, slices)
}

/// Smallest `sin α` used in the incidence-aware threshold.
const MIN_INCIDENCE_SIN: f64 = 1e-3;

struct SliceContext<'a> {
    w: &'a Polygon,
    edges: &'a [(Point2, Point2)],
    vertices: &'a [Point2],
    m: &'a MeasurementSpec,
    spec: &'a GridSpec,
    params: &'a PreimageParams,
    slack: f64,
}

impl SliceContext<'_> {
    /// Set xy cells (`iy * n + ix`) of one heading slice, ascending.
    fn cells(&self, itheta: usize) -> Vec<usize> {
        let (spec, m) = (self.spec, self.m);
        let n = spec.n;
        let theta_c = spec.theta_center(itheta);
        let u = Point2::from_angle(theta_c + m.g.rotation);
        let body = m.g.translation.rotated(theta_c);
        // pose position = boundary point − d·u − body offset
        let shift = -(u * m.d) - body;

        let mut candidate = vec![false; n * n];
        for &(a, b) in self.edges {
            rasterize_capsule(spec, a + shift, b + shift, self.slack, &mut candidate);
        }

        let mut kept = Vec::new();
        for (cell, _) in candidate.iter().enumerate().filter(|(_, &c)| c) {
            let center = Point2::new(spec.x_center(cell % n), spec.y_center(cell / n));
            if self.visible(center + body, u) {
                kept.push(cell);
            }
        }
        kept
    }

    fn visible(&self, origin: Point2, u: Point2) -> bool {
        if self.w.contains(origin) == Containment::Outside {
            return false;
        }
        let Some((r, edge)) = ray_first_hit(self.edges.iter().copied(), origin, u) else {
            return false;
        };
        let (a, b) = self.edges[edge];
        let e = b - a;
        let sin = (u.cross(e) / e.norm()).abs().max(MIN_INCIDENCE_SIN);
        let threshold = self.slack * (1.0 + self.params.slope_bound / sin);
        if (r - self.m.d).abs() <= threshold {
            return true;
        }
        // Rays from poses in the voxel stay within `slack` of the center ray
        // up to distance d, widening by dθ/2 per unit beyond it.
        let far = self.m.d.max(r);
        let radius = self.slack + (far - self.m.d) * self.spec.cell_dtheta / 2.0;
        let end = origin + u * (far + self.slack);
        self.vertices
            .iter()
            .any(|&v| point_segment_distance(v, origin, end) <= radius)
    }
}

/// Marks every cell whose center lies within `radius` of segment `[a, b]`.
fn rasterize_capsule(spec: &GridSpec, a: Point2, b: Point2, radius: f64, out: &mut [bool]) {
    let n = spec.n as isize;
    let y_lo = a.y.min(b.y) - radius;
    let y_hi = a.y.max(b.y) + radius;
    let iy_lo = (((y_lo - spec.origin.y) / spec.cell_dy - 0.5).ceil() as isize).max(0);
    let iy_hi = (((y_hi - spec.origin.y) / spec.cell_dy - 0.5).floor() as isize).min(n - 1);
    for iy in iy_lo..=iy_hi {
        let y = spec.y_center(iy as usize);
        let Some((x_lo, x_hi)) = capsule_row(a, b, radius, y) else {
            continue;
        };
        let ix_lo = (((x_lo - spec.origin.x) / spec.cell_dx - 0.5).ceil() as isize).max(0);
        let ix_hi = (((x_hi - spec.origin.x) / spec.cell_dx - 0.5).floor() as isize).min(n - 1);
        let row = iy as usize * spec.n;
        for ix in ix_lo..=ix_hi {
            out[row + ix as usize] = true;
        }
    }
}

/// Intersection of the capsule around `[a, b]` with the line `Y = y`.
fn capsule_row(a: Point2, b: Point2, radius: f64, y: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for p in [a, b] {
        let dy = y - p.y;
        if dy.abs() <= radius {
            let h = (radius * radius - dy * dy).sqrt();
            lo = lo.min(p.x - h);
            hi = hi.max(p.x + h);
        }
    }
    let e = b - a;
    let len = e.norm();
    if len > 0.0 {
        // projection onto the segment in [0, len²], offset from its line in
        // [−r·len, r·len]; both are affine in x
        let dy = y - a.y;
        let mut iv = (f64::NEG_INFINITY, f64::INFINITY);
        let along = clamp_affine(e.x, -a.x * e.x + dy * e.y, 0.0, len * len);
        let across = clamp_affine(-e.y, a.x * e.y + dy * e.x, -radius * len, radius * len);
        for c in [along, across] {
            iv = match (iv, c) {
                (_, None) => (1.0, 0.0),
                ((l, h), Some((cl, ch))) => (l.max(cl), h.min(ch)),
            };
        }
        if iv.0 <= iv.1 {
            lo = lo.min(iv.0);
            hi = hi.max(iv.1);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Solution set of `lo <= alpha·x + beta <= hi`.
fn clamp_affine(alpha: f64, beta: f64, lo: f64, hi: f64) -> Option<(f64, f64)> {
    if alpha == 0.0 {
        return (lo..=hi).contains(&beta).then_some((f64::NEG_INFINITY, f64::INFINITY));
    }
    let x1 = (lo - beta) / alpha;
    let x2 = (hi - beta) / alpha;
    Some((x1.min(x2), x1.max(x2)))
}

/// Whether the measurement from `q` sits within `slack` of a visibility
/// discontinuity: a workspace vertex passes within `slack` of the ray, or
/// the sensor origin is within `slack` of the boundary. These are the only
/// places where the visibility stage may drop a true pose.
pub fn near_visibility_event(w: &Polygon, q: &Pose, m: &MeasurementSpec, slack: f64) -> bool {
    let s = m.sensor_pose(q);
    let o = s.position;
    if w.contains(o) != Containment::Inside
        || w.edges().any(|(a, b)| point_segment_distance(o, a, b) <= slack)
    {
        return true;
    }
    let end = o + s.heading() * (m.d + 2.0 * slack);
    w.vertices().any(|v| point_segment_distance(v, o, end) <= slack)
}
