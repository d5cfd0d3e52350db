//! Planar primitives: points, SE(2) poses and rigid motions, polygons with
//! holes, point containment and ray casting.
//!
//! All predicates use a single absolute tolerance, [`EPS_GEOM`], in meters.
//! Rings are stored open: the closing edge from the last vertex back to the
//! first is implicit.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

/// Absolute tolerance (meters) for on-boundary and degeneracy tests.
pub const EPS_GEOM: f64 = 1e-9;

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Shortest distance between two headings on the circle, in `[0, π]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(TAU - d)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector at heading `theta`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: c, y: s }
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn rotated(self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let e = b - a;
    let len2 = e.dot(e);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(e) / len2).clamp(0.0, 1.0);
    p.distance(a + e * t)
}

/// A planar sensor pose; `theta` is kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Point2,
    pub theta: f64,
}

impl Pose {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self::from_parts(Point2::new(x, y), theta)
    }

    pub fn from_parts(position: Point2, theta: f64) -> Self {
        debug_assert!(position.is_finite() && theta.is_finite());
        Self {
            position,
            theta: wrap_angle(theta),
        }
    }

    /// Body-frame composition: the pose reached by applying `g` relative to
    /// this pose (odometry semantics).
    pub fn compose(&self, g: &RigidMotion) -> Pose {
        Pose::from_parts(
            self.position + g.translation.rotated(self.theta),
            self.theta + g.rotation,
        )
    }

    /// Unit heading vector.
    pub fn heading(&self) -> Point2 {
        Point2::from_angle(self.theta)
    }
}

/// Free-function form of [`Pose::compose`].
pub fn compose(q: &Pose, g: &RigidMotion) -> Pose {
    q.compose(g)
}

/// A rigid motion expressed in the body frame of the pose it acts on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidMotion {
    pub translation: Point2,
    pub rotation: f64,
}

impl RigidMotion {
    pub const IDENTITY: RigidMotion = RigidMotion {
        translation: Point2::ORIGIN,
        rotation: 0.0,
    };

    pub fn new(tx: f64, ty: f64, rotation: f64) -> Self {
        Self {
            translation: Point2::new(tx, ty),
            rotation: wrap_angle(rotation),
        }
    }

    pub fn rotation(rotation: f64) -> Self {
        Self::new(0.0, 0.0, rotation)
    }

    /// `self` followed by `next`, both in body frame:
    /// `q.compose(&a.then(&b)) == q.compose(&a).compose(&b)`.
    pub fn then(&self, next: &RigidMotion) -> RigidMotion {
        RigidMotion {
            translation: self.translation + next.translation.rotated(self.rotation),
            rotation: wrap_angle(self.rotation + next.rotation),
        }
    }

    /// Maps a point from this motion's local frame into the parent frame.
    pub fn apply(&self, p: Point2) -> Point2 {
        self.translation + p.rotated(self.rotation)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Point2,
    pub max: Point2,
}

impl Aabb {
    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingId {
    Outer,
    Hole(usize),
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingId::Outer => write!(f, "outer ring"),
            RingId::Hole(i) => write!(f, "hole {i}"),
        }
    }
}

/// First polygon invariant found to be broken by [`Polygon::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("{ring}: {count} vertices, at least 3 required")]
    TooFewVertices { ring: RingId, count: usize },
    #[error("{ring}: vertex {vertex} is not finite")]
    NonFinite { ring: RingId, vertex: usize },
    #[error("{ring}: edge {edge} has zero length")]
    DegenerateEdge { ring: RingId, edge: usize },
    #[error("{ring}: edges {edge_a} and {edge_b} intersect")]
    SelfIntersection {
        ring: RingId,
        edge_a: usize,
        edge_b: usize,
    },
    #[error("{ring}: wrong orientation (outer must be counterclockwise, holes clockwise)")]
    Orientation { ring: RingId },
    #[error("hole {hole} is not strictly inside the outer ring (at hole vertex/edge {index})")]
    HoleNotInside { hole: usize, index: usize },
    #[error("holes {a} and {b} overlap")]
    HolesOverlap { a: usize, b: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Containment {
    Inside,
    OnBoundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("origin-outside: ray origin ({x}, {y}) lies outside the polygon")]
    OriginOutside { x: f64, y: f64 },
}

/// A polygon with holes. The outer ring is counterclockwise, holes are
/// clockwise; see [`Polygon::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub outer: Vec<Point2>,
    pub holes: Vec<Vec<Point2>>,
}

fn ring_edges(ring: &[Point2]) -> impl Iterator<Item = (Point2, Point2)> + '_ {
    ring.iter()
        .copied()
        .zip(ring.iter().copied().cycle().skip(1))
        .take(ring.len())
}

/// Twice the signed area of a ring; positive for counterclockwise.
pub fn ring_signed_area2(ring: &[Point2]) -> f64 {
    ring_edges(ring).map(|(a, b)| a.cross(b)).sum()
}

/// Orientation of `c` relative to the directed line `a -> b`:
/// +1 left, -1 right, 0 within [`EPS_GEOM`] of the line.
fn orient(a: Point2, b: Point2, c: Point2) -> i8 {
    let e = b - a;
    let cr = e.cross(c - a);
    let len = e.norm();
    if cr.abs() <= EPS_GEOM * len {
        0
    } else if cr > 0.0 {
        1
    } else {
        -1
    }
}

/// Whether `p` lies on the closed segment `[a, b]`, within tolerance.
fn on_segment(p: Point2, a: Point2, b: Point2) -> bool {
    point_segment_distance(p, a, b) <= EPS_GEOM
}

/// Closed-segment intersection test (touching counts).
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let o1 = orient(p1, p2, q1);
    let o2 = orient(p1, p2, q2);
    let o3 = orient(q1, q2, p1);
    let o4 = orient(q1, q2, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    on_segment(q1, p1, p2) || on_segment(q2, p1, p2) || on_segment(p1, q1, q2) || on_segment(p2, q1, q2)
}

/// Finds the first pair of intersecting edges in a ring, if any. Adjacent
/// edges may only share their common vertex.
fn ring_self_intersection(ring: &[Point2]) -> Option<(usize, usize)> {
    let n = ring.len();
    let edge = |i: usize| (ring[i], ring[(i + 1) % n]);
    for i in 0..n {
        let (a1, a2) = edge(i);
        for j in (i + 1)..n {
            let (b1, b2) = edge(j);
            let adjacent_fwd = j == i + 1;
            let adjacent_wrap = i == 0 && j == n - 1;
            if adjacent_fwd {
                // shared vertex a2 == b1: fold-back if either far endpoint
                // lies on the other edge
                if on_segment(b2, a1, a2) || on_segment(a1, b1, b2) {
                    return Some((i, j));
                }
            } else if adjacent_wrap {
                // shared vertex a1 == b2
                if on_segment(b1, a1, a2) || on_segment(a2, b1, b2) {
                    return Some((i, j));
                }
            } else if segments_intersect(a1, a2, b1, b2) {
                return Some((i, j));
            }
        }
    }
    None
}

fn crossing_parity(ring: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    for (a, b) in ring_edges(ring) {
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

impl Polygon {
    pub fn new(outer: Vec<Point2>, holes: Vec<Vec<Point2>>) -> Self {
        Self { outer, holes }
    }

    /// Builds a polygon without holes from `(x, y)` pairs.
    pub fn from_coords(coords: &[(f64, f64)]) -> Self {
        Self::new(coords.iter().map(|&(x, y)| Point2::new(x, y)).collect(), Vec::new())
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`, counterclockwise.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Self::from_coords(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    /// Clockwise rectangle, suitable as a hole ring.
    pub fn rectangle_hole(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point2> {
        [(x0, y0), (x0, y1), (x1, y1), (x1, y0)]
            .iter()
            .map(|&(x, y)| Point2::new(x, y))
            .collect()
    }

    pub fn rings(&self) -> impl Iterator<Item = (RingId, &[Point2])> {
        std::iter::once((RingId::Outer, self.outer.as_slice()))
            .chain(self.holes.iter().enumerate().map(|(i, h)| (RingId::Hole(i), h.as_slice())))
    }

    /// All boundary edges, outer ring first.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.rings().flat_map(|(_, r)| ring_edges(r))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point2> + '_ {
        self.rings().flat_map(|(_, r)| r.iter().copied())
    }

    pub fn edge_count(&self) -> usize {
        self.rings().map(|(_, r)| r.len()).sum()
    }

    /// Area enclosed by the outer ring minus the holes.
    pub fn area(&self) -> f64 {
        self.rings().map(|(_, r)| ring_signed_area2(r)).sum::<f64>() * 0.5
    }

    /// Checks every structural invariant and reports the first violation.
    pub fn validate(&self) -> Result<(), Violation> {
        for (id, ring) in self.rings() {
            if ring.len() < 3 {
                return Err(Violation::TooFewVertices { ring: id, count: ring.len() });
            }
            if let Some(vertex) = ring.iter().position(|p| !p.is_finite()) {
                return Err(Violation::NonFinite { ring: id, vertex });
            }
            if let Some(edge) = ring_edges(ring).position(|(a, b)| a.distance(b) <= EPS_GEOM) {
                return Err(Violation::DegenerateEdge { ring: id, edge });
            }
            if let Some((edge_a, edge_b)) = ring_self_intersection(ring) {
                return Err(Violation::SelfIntersection { ring: id, edge_a, edge_b });
            }
            let area2 = ring_signed_area2(ring);
            let ok = match id {
                RingId::Outer => area2 > 0.0,
                RingId::Hole(_) => area2 < 0.0,
            };
            if !ok {
                return Err(Violation::Orientation { ring: id });
            }
        }
        let outer = Polygon::new(self.outer.clone(), Vec::new());
        for (h, hole) in self.holes.iter().enumerate() {
            if let Some(index) = hole.iter().position(|&p| outer.contains(p) != Containment::Inside) {
                return Err(Violation::HoleNotInside { hole: h, index });
            }
            for (index, (a, b)) in ring_edges(hole).enumerate() {
                if ring_edges(&self.outer).any(|(c, d)| segments_intersect(a, b, c, d)) {
                    return Err(Violation::HoleNotInside { hole: h, index });
                }
            }
        }
        for a in 0..self.holes.len() {
            for b in (a + 1)..self.holes.len() {
                let (ha, hb) = (&self.holes[a], &self.holes[b]);
                let crossing = ring_edges(ha)
                    .any(|(p, q)| ring_edges(hb).any(|(r, s)| segments_intersect(p, q, r, s)));
                let nested = crossing_parity(ha, hb[0]) || crossing_parity(hb, ha[0]);
                if crossing || nested {
                    return Err(Violation::HolesOverlap { a, b });
                }
            }
        }
        Ok(())
    }

    /// Classifies `p` against the region; boundary within [`EPS_GEOM`].
    pub fn contains(&self, p: Point2) -> Containment {
        if self.edges().any(|(a, b)| point_segment_distance(p, a, b) <= EPS_GEOM) {
            return Containment::OnBoundary;
        }
        let inside = self.rings().fold(false, |acc, (_, r)| acc ^ crossing_parity(r, p));
        if inside {
            Containment::Inside
        } else {
            Containment::Outside
        }
    }

    /// Distance along the ray to the first boundary edge, with no
    /// precondition on where `origin` lies. `None` when nothing is hit.
    pub fn ray_hit(&self, origin: Point2, theta: f64) -> Option<f64> {
        ray_hit_edges(self.edges(), origin, Point2::from_angle(theta))
    }

    /// First boundary intersection of a ray whose origin lies inside the
    /// region or on its boundary.
    pub fn ray_cast(&self, origin: Point2, theta: f64) -> Result<Option<f64>, GeometryError> {
        if self.contains(origin) == Containment::Outside {
            return Err(GeometryError::OriginOutside { x: origin.x, y: origin.y });
        }
        Ok(self.ray_hit(origin, theta))
    }

    /// Tight bounding box of the outer ring.
    pub fn aabb(&self) -> Aabb {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in &self.outer {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Aabb { min, max }
    }

    /// The polygon mapped through `g` (local frame to parent frame).
    pub fn transformed(&self, g: &RigidMotion) -> Polygon {
        let map = |r: &Vec<Point2>| r.iter().map(|&p| g.apply(p)).collect::<Vec<_>>();
        Polygon::new(map(&self.outer), self.holes.iter().map(map).collect())
    }
}

/// Ray parameter of the first hit of `o + t·u` (`t > EPS_GEOM`) against a set
/// of segments. Vertex hits are counted once by taking the minimum; a
/// collinear overlap reports its nearest endpoint ahead of the origin.
pub fn ray_hit_edges(
    edges: impl IntoIterator<Item = (Point2, Point2)>,
    o: Point2,
    u: Point2,
) -> Option<f64> {
    ray_first_hit(edges, o, u).map(|(t, _)| t)
}

/// Like [`ray_hit_edges`], also returning the index of the edge hit first.
pub fn ray_first_hit(
    edges: impl IntoIterator<Item = (Point2, Point2)>,
    o: Point2,
    u: Point2,
) -> Option<(f64, usize)> {
    let mut best: Option<(f64, usize)> = None;
    for (i, (a, b)) in edges.into_iter().enumerate() {
        if let Some(t) = ray_segment(o, u, a, b) {
            if best.is_none_or(|(bt, _)| t < bt) {
                best = Some((t, i));
            }
        }
    }
    best
}

#[inline]
fn ray_segment(o: Point2, u: Point2, a: Point2, b: Point2) -> Option<f64> {
    let e = b - a;
    let len = e.norm();
    let w = a - o;
    let denom = u.cross(e);
    if denom.abs() > 1e-12 * len {
        let t = w.cross(e) / denom;
        // signed offset along the edge, in meters
        let s = w.cross(u) / denom * len;
        if t > EPS_GEOM && s >= -EPS_GEOM && s <= len + EPS_GEOM {
            return Some(t);
        }
        return None;
    }
    // parallel: only a collinear edge can be hit
    if w.cross(u).abs() > EPS_GEOM {
        return None;
    }
    let ta = w.dot(u);
    let tb = (b - o).dot(u);
    [ta, tb]
        .into_iter()
        .filter(|&t| t > EPS_GEOM)
        .min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    fn square() -> Polygon {
        Polygon::rectangle(0.0, 0.0, 10.0, 10.0)
    }

    #[test]
    fn unit_square_is_valid() {
        assert_eq!(Polygon::rectangle(0.0, 0.0, 1.0, 1.0).validate(), Ok(()));
    }

    #[test]
    fn clockwise_outer_is_rejected() {
        let p = Polygon::from_coords(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)]);
        assert_eq!(p.validate(), Err(Violation::Orientation { ring: RingId::Outer }));
    }

    #[test]
    fn crossing_hole_is_rejected() {
        let mut p = square();
        p.holes.push(Polygon::rectangle_hole(8.0, 4.0, 12.0, 6.0));
        assert!(matches!(p.validate(), Err(Violation::HoleNotInside { hole: 0, .. })));
    }

    #[test]
    fn bowtie_is_self_intersecting() {
        let p = Polygon::from_coords(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(
            p.validate(),
            Err(Violation::SelfIntersection { ring: RingId::Outer, .. })
        ));
    }

    #[test]
    fn ring_problems() {
        let p = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(
            p.validate(),
            Err(Violation::TooFewVertices { ring: RingId::Outer, count: 2 })
        );
        let p = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        assert!(matches!(p.validate(), Err(Violation::DegenerateEdge { .. })));
        let p = Polygon::from_coords(&[(0.0, 0.0), (f64::NAN, 0.0), (0.0, 1.0)]);
        assert!(matches!(p.validate(), Err(Violation::NonFinite { vertex: 1, .. })));
        // spike folding back along itself
        let p = Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(matches!(p.validate(), Err(Violation::SelfIntersection { .. })));
    }

    #[test]
    fn hole_orientation_and_overlap() {
        let mut p = square();
        p.holes.push(Polygon::rectangle(2.0, 2.0, 3.0, 3.0).outer);
        assert_eq!(p.validate(), Err(Violation::Orientation { ring: RingId::Hole(0) }));

        let mut p = square();
        p.holes.push(Polygon::rectangle_hole(2.0, 2.0, 5.0, 5.0));
        p.holes.push(Polygon::rectangle_hole(4.0, 4.0, 6.0, 6.0));
        assert_eq!(p.validate(), Err(Violation::HolesOverlap { a: 0, b: 1 }));

        let mut p = square();
        p.holes.push(Polygon::rectangle_hole(2.0, 2.0, 8.0, 8.0));
        p.holes.push(Polygon::rectangle_hole(4.0, 4.0, 6.0, 6.0));
        assert_eq!(p.validate(), Err(Violation::HolesOverlap { a: 0, b: 1 }));
    }

    #[test]
    fn containment_examples() {
        let sq = square();
        assert_eq!(sq.contains(Point2::new(5.0, 5.0)), Containment::Inside);
        assert_eq!(sq.contains(Point2::new(0.0, 5.0)), Containment::OnBoundary);
        assert_eq!(sq.contains(Point2::new(11.0, 5.0)), Containment::Outside);
        let mut holed = square();
        holed.holes.push(Polygon::rectangle_hole(4.0, 4.0, 6.0, 6.0));
        assert_eq!(holed.validate(), Ok(()));
        assert_eq!(holed.contains(Point2::new(5.0, 5.0)), Containment::Outside);
        assert_eq!(holed.contains(Point2::new(4.0, 5.0)), Containment::OnBoundary);
    }

    #[test]
    fn ray_cast_examples() {
        let sq = square();
        let c = Point2::new(5.0, 5.0);
        assert_relative_eq!(sq.ray_cast(c, 0.0).unwrap().unwrap(), 5.0, epsilon = 1e-12);
        assert_relative_eq!(
            sq.ray_cast(c, FRAC_PI_4).unwrap().unwrap(),
            5.0 * 2f64.sqrt(),
            max_relative = 1e-12
        );
        assert!(matches!(
            sq.ray_cast(Point2::new(-1.0, 5.0), 0.0),
            Err(GeometryError::OriginOutside { .. })
        ));
        // from the boundary, pointing inward
        assert_relative_eq!(
            sq.ray_cast(Point2::new(0.0, 5.0), 0.0).unwrap().unwrap(),
            10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ray_through_vertex_and_collinear_edge() {
        let sq = square();
        // exactly through the corner (10, 10)
        let d = sq.ray_hit(Point2::new(5.0, 5.0), FRAC_PI_4).unwrap();
        assert_relative_eq!(d, 50f64.sqrt(), max_relative = 1e-12);
        // ray running along the bottom edge from outside the square
        let d = sq.ray_hit(Point2::new(-3.0, 0.0), 0.0).unwrap();
        assert_relative_eq!(d, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn ray_hits_hole_first() {
        let mut p = square();
        p.holes.push(Polygon::rectangle_hole(6.0, 4.0, 7.0, 6.0));
        assert_relative_eq!(p.ray_hit(Point2::new(2.0, 5.0), 0.0).unwrap(), 4.0, epsilon = 1e-12);
        assert_relative_eq!(p.ray_hit(Point2::new(2.0, 5.0), PI).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn compose_examples() {
        let q = Pose::new(0.0, 0.0, 0.0).compose(&RigidMotion::new(1.0, 0.0, 0.0));
        assert_relative_eq!(q.position.x, 1.0);
        assert_relative_eq!(q.position.y, 0.0);
        assert_relative_eq!(q.theta, 0.0);

        let q = Pose::new(0.0, 0.0, FRAC_PI_2).compose(&RigidMotion::new(1.0, 0.0, 0.0));
        assert_relative_eq!(q.position.x, 0.0, epsilon = 1e-15);
        assert_relative_eq!(q.position.y, 1.0);
        assert_relative_eq!(q.theta, FRAC_PI_2);

        let q = Pose::new(2.0, 3.0, FRAC_PI_6).compose(&RigidMotion::new(1.0, 2.0, FRAC_PI_4));
        // rotation matrix [[c, -s], [s, c]] applied to (1, 2)
        let (s, c) = (0.5, 3f64.sqrt() / 2.0);
        assert_relative_eq!(q.position.x, 2.0 + c - 2.0 * s, max_relative = 1e-14);
        assert_relative_eq!(q.position.y, 3.0 + s + 2.0 * c, max_relative = 1e-14);
        assert_relative_eq!(q.theta, 5.0 * PI / 12.0, max_relative = 1e-14);
    }

    #[test]
    fn aabb_examples() {
        let b = square().aabb();
        assert_eq!((b.min, b.max), (Point2::new(0.0, 0.0), Point2::new(10.0, 10.0)));
        let t = Polygon::from_coords(&[(0.0, 0.0), (4.0, 0.0), (0.0, 3.0)]).aabb();
        assert_eq!((t.min, t.max), (Point2::new(0.0, 0.0), Point2::new(4.0, 3.0)));
    }

    #[test]
    fn wrap_angle_stays_in_range() {
        assert_eq!(wrap_angle(-1e-18), 0.0);
        assert_relative_eq!(wrap_angle(-FRAC_PI_2), 3.0 * FRAC_PI_2);
        assert_relative_eq!(wrap_angle(5.0 * PI), PI, max_relative = 1e-15);
        assert_relative_eq!(angle_distance(0.1, TAU - 0.1), 0.2, epsilon = 1e-12);
    }
}
