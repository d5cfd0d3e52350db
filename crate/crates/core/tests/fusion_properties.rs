mod common;

use std::f64::consts::TAU;

use common::{oracle_consensus, random_masks, random_scene};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparseloc::fusion::agreement_count;
use sparseloc::geometry::angle_distance;
use sparseloc::{
    accumulate, connected_components, consensus_mask, localize, make_spec, make_trial,
    sample_free_pose, Aabb, FusionConfig, GridSpec, MeasurementSpec, Point2, PreimageParams,
    PreimageSet, RigidMotion, Scene, VoxelIndex, VoxelMask,
};

fn spec(n: usize) -> GridSpec {
    make_spec(Aabb { min: Point2::ORIGIN, max: Point2::new(4.0, 3.0) }, n).unwrap()
}

#[test]
fn consensus_equals_subset_enumeration() {
    for seed in 0..20u64 {
        let k = 2 + (seed % 5) as usize;
        let masks = random_masks(seed, spec(8), k, 0.4);
        for kp in 1..=k {
            let got = consensus_mask(&masks, kp).unwrap();
            let want = oracle_consensus(&masks, kp);
            for (i, &w) in want.iter().enumerate() {
                assert_eq!(got.get_linear(i), w, "seed {seed} k {k} k' {kp} voxel {i}");
            }
        }
    }
}

fn shift_theta(m: &VoxelMask, by: usize) -> VoxelMask {
    let s = *m.spec();
    let mut out = VoxelMask::empty(s);
    for i in m.iter_set() {
        let v = s.unlinear(i);
        out.set(VoxelIndex { itheta: (v.itheta + by) % s.n, ..v }, true);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn consensus_is_monotone_in_k_prime(seed in any::<u64>(), k in 2usize..7) {
        let masks = random_masks(seed, spec(6), k, 0.5);
        for kp in 1..k {
            let lo = consensus_mask(&masks, kp).unwrap();
            let hi = consensus_mask(&masks, kp + 1).unwrap();
            prop_assert!(hi.is_subset_of(&lo));
        }
    }

    #[test]
    fn accumulate_ignores_order(seed in any::<u64>(), k in 1usize..6, rot in 0usize..6) {
        let masks = random_masks(seed, spec(6), k, 0.3);
        let mut rotated = masks.clone();
        rotated.rotate_left(rot % k);
        rotated.reverse();
        let a = accumulate(&masks).unwrap();
        let b = accumulate(&rotated).unwrap();
        prop_assert_eq!(a.counts(), b.counts());
    }

    #[test]
    fn theta_shift_permutes_components(seed in any::<u64>(), by in 0usize..8) {
        let masks = random_masks(seed, spec(8), 1, 0.25);
        let m = &masks[0];
        let shifted = shift_theta(m, by);
        let s = *m.spec();
        let mut a: Vec<Vec<usize>> = connected_components(m)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c
                    .voxels
                    .iter()
                    .map(|x| s.linear(VoxelIndex { itheta: (x.itheta + by) % s.n, ..*x }))
                    .collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut b: Vec<Vec<usize>> = connected_components(&shifted)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.voxels.iter().map(|x| s.linear(*x)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }
}

fn clean_trial(seed: u64, n: usize) -> (sparseloc::TrialSetup, GridSpec) {
    let scene = Scene::new(random_scene(seed));
    let spec = make_spec(scene.workspace.aabb(), n).unwrap();
    let q = sample_free_pose(seed, &scene, 0.0, 2.0 * spec.xy_diagonal()).unwrap();
    (make_trial(&scene, &q, 10, 0.0).unwrap(), spec)
}

/// The generating pose survives consensus, so the nearest consensus voxel
/// is within one voxel of it.
#[test]
fn clean_trials_keep_the_truth_in_consensus() {
    let prep = PreimageParams::default();
    for seed in 0..200u64 {
        let (t, spec) = clean_trial(seed, 32);
        let w = &t.scene.workspace;
        let set = PreimageSet::build(w, &t.measurements, spec.n, &prep).unwrap();
        let cons = consensus_mask(&set.masks, 10).unwrap();
        let v = spec.locate(&t.ground_truth).unwrap();
        assert!(cons.get(v), "seed {seed}");
        let q = t.ground_truth;
        let nearest = cons
            .iter_set()
            .map(|i| spec.voxel_center(spec.unlinear(i)).unwrap())
            .filter(|c| angle_distance(c.theta, q.theta) <= spec.cell_dtheta / 2.0 + 1e-12)
            .map(|c| c.position.distance(q.position))
            .fold(f64::INFINITY, f64::min);
        assert!(nearest <= spec.xy_diagonal() / 2.0 + 1e-12, "seed {seed}: {nearest}");
    }
}

#[test]
fn candidates_are_sound() {
    let prep = PreimageParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for seed in 0..30u64 {
        let (mut t, spec) = clean_trial(seed, 24);
        // corrupt a few readings so that k' < k matters
        for _ in 0..3 {
            let i = rng.random_range(0..t.measurements.len());
            t.measurements[i].d *= rng.random_range(0.3..0.9);
        }
        let w = &t.scene.workspace;
        let cfg = FusionConfig::new(6);
        let r = localize(w, &t.measurements, spec.n, &cfg, &prep).unwrap();
        let p = r.params;
        for c in &r.candidates {
            assert!(agreement_count(w, &c.pose, &t.measurements, p.epsilon) >= 6);
            assert!(c.agreement_count >= 6);
        }
        for (i, a) in r.candidates.iter().enumerate() {
            for b in &r.candidates[i + 1..] {
                let separate = a.pose.position.distance(b.pose.position) >= p.delta_pos
                    || angle_distance(a.pose.theta, b.pose.theta) >= p.delta_theta;
                assert!(separate, "seed {seed}");
            }
        }
    }
}

#[test]
fn localize_is_deterministic() {
    let (t, _) = clean_trial(9, 32);
    let w = &t.scene.workspace;
    let prep = PreimageParams::default();
    let a = localize(w, &t.measurements, 32, &FusionConfig::new(6), &prep).unwrap();
    let b = localize(w, &t.measurements, 32, &FusionConfig::new(6), &prep).unwrap();
    assert_eq!(a.candidates, b.candidates);
    assert_eq!(a.masks_set_voxels, b.masks_set_voxels);
}

#[test]
fn translated_motions_still_contain_truth() {
    let prep = PreimageParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for seed in 0..100u64 {
        let w = random_scene(seed);
        let scene = Scene::new(w.clone());
        let spec = make_spec(w.aabb(), 32).unwrap();
        let q = sample_free_pose(seed, &scene, 0.0, 1.0).unwrap();
        let g = RigidMotion::new(
            rng.random_range(-0.5..0.5),
            rng.random_range(-0.5..0.5),
            rng.random_range(0.0..TAU),
        );
        let s = q.compose(&g);
        let Some(d) = w.ray_cast(s.position, s.theta).ok().flatten() else { continue };
        let m = MeasurementSpec::new(g, d);
        let mask = sparseloc::compute_preimage(&w, &m, &spec, &prep);
        assert!(mask.get(spec.locate(&q).unwrap()), "seed {seed}");
    }
}
