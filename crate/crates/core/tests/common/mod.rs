//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparseloc::{random_polygon, GridSpec, Point2, Polygon, VoxelMask};

/// Flat `(ax, ay, bx, by)` edge list, built without the library's iterators.
pub fn edge_list(w: &Polygon) -> Vec<(f64, f64, f64, f64)> {
    let mut out = Vec::new();
    let mut push_ring = |r: &[Point2]| {
        for i in 0..r.len() {
            let a = r[i];
            let b = r[(i + 1) % r.len()];
            out.push((a.x, a.y, b.x, b.y));
        }
    };
    push_ring(&w.outer);
    for h in &w.holes {
        push_ring(h);
    }
    out
}

/// First positive hit of the ray over all edges, solving each
/// ray/segment system by Cramer's rule.
pub fn oracle_ray(w: &Polygon, ox: f64, oy: f64, theta: f64) -> Option<f64> {
    let (ux, uy) = (theta.cos(), theta.sin());
    let mut best: Option<f64> = None;
    for (ax, ay, bx, by) in edge_list(w) {
        let (ex, ey) = (bx - ax, by - ay);
        // [ux  -ex] [t]   [ax - ox]
        // [uy  -ey] [s] = [ay - oy]
        let det = ux * (-ey) - (-ex) * uy;
        if det.abs() < 1e-12 {
            continue;
        }
        let (rx, ry) = (ax - ox, ay - oy);
        let t = (rx * (-ey) - (-ex) * ry) / det;
        let s = (ux * ry - uy * rx) / det;
        if t > 1e-9 && (0.0..=1.0).contains(&s) {
            best = Some(best.map_or(t, |b| b.min(t)));
        }
    }
    best
}

fn winding(ring: &[Point2], px: f64, py: f64) -> f64 {
    let mut total = 0.0;
    for i in 0..ring.len() {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let a1 = (a.y - py).atan2(a.x - px);
        let a2 = (b.y - py).atan2(b.x - px);
        let mut d = a2 - a1;
        while d > std::f64::consts::PI {
            d -= std::f64::consts::TAU;
        }
        while d < -std::f64::consts::PI {
            d += std::f64::consts::TAU;
        }
        total += d;
    }
    total / std::f64::consts::TAU
}

/// Inside test by winding numbers: inside the outer ring and outside
/// every hole.
pub fn oracle_inside(w: &Polygon, px: f64, py: f64) -> bool {
    winding(&w.outer, px, py).abs() > 0.5 && w.holes.iter().all(|h| winding(h, px, py).abs() < 0.5)
}

pub fn boundary_distance(w: &Polygon, px: f64, py: f64) -> f64 {
    edge_list(w)
        .into_iter()
        .map(|(ax, ay, bx, by)| {
            let (ex, ey) = (bx - ax, by - ay);
            let len2 = ex * ex + ey * ey;
            let t = (((px - ax) * ex + (py - ay) * ey) / len2).clamp(0.0, 1.0);
            ((ax + t * ex - px).powi(2) + (ay + t * ey - py).powi(2)).sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Star-shaped random polygon, with a square hole near its center on odd
/// seeds.
pub fn random_scene(seed: u64) -> Polygon {
    let mut w = random_polygon(seed, 12 + (seed % 9) as usize, 5.0, 0.4).unwrap();
    if seed % 2 == 1 {
        w.holes.push(Polygon::rectangle_hole(-0.8, -0.6, 0.7, 0.9));
    }
    w.validate().unwrap();
    w
}

/// Uniform random point strictly inside `w`.
pub fn interior_point(rng: &mut ChaCha8Rng, w: &Polygon) -> (f64, f64) {
    let b = w.aabb();
    loop {
        let x = rng.random_range(b.min.x..b.max.x);
        let y = rng.random_range(b.min.y..b.max.y);
        if oracle_inside(w, x, y) && boundary_distance(w, x, y) > 1e-6 {
            return (x, y);
        }
    }
}

pub fn random_masks(seed: u64, spec: GridSpec, k: usize, density: f64) -> Vec<VoxelMask> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let mut m = VoxelMask::empty(spec);
            for i in 0..spec.voxel_count() {
                if rng.random_bool(density) {
                    m.set_linear(i, true);
                }
            }
            m
        })
        .collect()
}

/// Union over all size-`k_prime` subsets of the subset intersections.
pub fn oracle_consensus(masks: &[VoxelMask], k_prime: usize) -> Vec<bool> {
    let k = masks.len();
    let cells = masks[0].spec().voxel_count();
    let mut out = vec![false; cells];
    for subset in 0u32..(1 << k) {
        if subset.count_ones() as usize != k_prime {
            continue;
        }
        for (i, o) in out.iter_mut().enumerate() {
            if (0..k).filter(|j| subset >> j & 1 == 1).all(|j| masks[j].get_linear(i)) {
                *o = true;
            }
        }
    }
    out
}
