mod common;

use std::f64::consts::TAU;

use common::{boundary_distance, interior_point, oracle_inside, oracle_ray, random_scene};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparseloc::{compose, Containment, Point2, Pose, RigidMotion};

#[test]
fn ray_cast_matches_all_edges_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..10_000u64 {
        let w = random_scene(case % 40);
        let (x, y) = interior_point(&mut rng, &w);
        let theta = rng.random_range(0.0..TAU);
        let got = w.ray_cast(Point2::new(x, y), theta).unwrap().unwrap();
        let want = oracle_ray(&w, x, y, theta).unwrap();
        assert!(
            (got - want).abs() <= 1e-9 * want.max(1.0),
            "case {case}: {got} vs {want}"
        );
    }
}

#[test]
fn contains_matches_winding_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut checked = 0;
    for case in 0..10_000u64 {
        let w = random_scene(case % 40);
        let b = w.aabb();
        let (x, y) = (rng.random_range(b.min.x..b.max.x), rng.random_range(b.min.y..b.max.y));
        if boundary_distance(&w, x, y) <= 1e-6 {
            continue;
        }
        let expect = if oracle_inside(&w, x, y) { Containment::Inside } else { Containment::Outside };
        assert_eq!(w.contains(Point2::new(x, y)), expect, "case {case} at ({x}, {y})");
        checked += 1;
    }
    assert!(checked > 9_900);
}

#[test]
fn on_boundary_points_are_reported() {
    let w = random_scene(3);
    for (a, b) in w.edges() {
        let mid = (a + b) * 0.5;
        assert_eq!(w.contains(mid), Containment::OnBoundary);
        assert_eq!(w.contains(a), Containment::OnBoundary);
    }
}

fn motion() -> impl Strategy<Value = RigidMotion> {
    (-10.0..10.0f64, -10.0..10.0f64, -7.0..7.0f64).prop_map(|(x, y, r)| RigidMotion::new(x, y, r))
}

fn pose() -> impl Strategy<Value = Pose> {
    (-10.0..10.0f64, -10.0..10.0f64, -7.0..7.0f64).prop_map(|(x, y, t)| Pose::new(x, y, t))
}

fn close(a: &Pose, b: &Pose) -> bool {
    a.position.distance(b.position) < 1e-9 && sparseloc::geometry::angle_distance(a.theta, b.theta) < 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn compose_identity(q in pose()) {
        prop_assert!(close(&compose(&q, &RigidMotion::IDENTITY), &q));
    }

    #[test]
    fn compose_is_associative(q in pose(), g in motion(), h in motion()) {
        let stepwise = compose(&compose(&q, &g), &h);
        let joined = compose(&q, &g.then(&h));
        prop_assert!(close(&stepwise, &joined), "{stepwise:?} vs {joined:?}");
    }

    #[test]
    fn compose_keeps_heading_in_range(q in pose(), g in motion()) {
        let t = compose(&q, &g).theta;
        prop_assert!((0.0..TAU).contains(&t));
    }

    #[test]
    fn ray_cast_is_rigid_invariant(seed in 0u64..40, pick in any::<u64>(), theta in 0.0..TAU, g in motion()) {
        let w = random_scene(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let (x, y) = interior_point(&mut rng, &w);
        let o = Point2::new(x, y);
        let d = w.ray_cast(o, theta).unwrap().unwrap();
        let hit = o + Point2::from_angle(theta) * d;
        // a vertex graze may legitimately flip under rounding
        prop_assume!(w.vertices().all(|v| v.distance(hit) > 1e-6));
        let moved = w.transformed(&g);
        let d2 = moved.ray_cast(g.apply(o), theta + g.rotation).unwrap().unwrap();
        prop_assert!((d - d2).abs() <= 1e-9 * d.max(1.0), "{d} vs {d2}");
    }

    #[test]
    fn ray_hit_lies_on_boundary(seed in 0u64..40, pick in any::<u64>(), theta in 0.0..TAU) {
        let w = random_scene(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let (x, y) = interior_point(&mut rng, &w);
        let d = w.ray_cast(Point2::new(x, y), theta).unwrap().unwrap();
        let (hx, hy) = (x + d * theta.cos(), y + d * theta.sin());
        prop_assert!(boundary_distance(&w, hx, hy) <= 1e-9 * d.max(1.0));
        // nothing closer along the ray
        let probe = d * 0.999;
        let (px, py) = (x + probe * theta.cos(), y + probe * theta.sin());
        prop_assert!(oracle_inside(&w, px, py) || boundary_distance(&w, px, py) < 1e-6);
    }
}
