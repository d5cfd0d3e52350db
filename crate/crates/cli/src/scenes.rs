//! Built-in scenes shipped with the harness.

use sparseloc::{Point2, Polygon, Scene};

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: [&str; 4] = ["square-room", "lab-lidar-like", "floor-plan-like", "random"];

/// Parameters of the `random` scene family.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RandomSceneParams {
    pub vertices: usize,
    pub radius: f64,
    pub jitter: f64,
}

impl Default for RandomSceneParams {
    fn default() -> Self {
        Self {
            vertices: 16,
            radius: 5.0,
            jitter: 0.4,
        }
    }
}

/// 40-vertex nonconvex room with alcoves and slightly ragged walls, in the
/// style of a cleaned-up laser scan.
const LAB_LIDAR_LIKE: [(f64, f64); 40] = [
    (0.0, 0.0),
    (1.197, -0.095),
    (2.479, -0.083),
    (3.663, -0.024),
    (5.0, 0.0),
    (5.0, -0.8),
    (6.334, -0.728),
    (7.5, -0.8),
    (7.5, 0.0),
    (8.673, -0.067),
    (9.757, -0.054),
    (10.816, -0.095),
    (12.0, 0.0),
    (11.897, 1.431),
    (12.0, 3.0),
    (11.2, 3.0),
    (11.126, 4.053),
    (11.2, 5.0),
    (12.0, 5.0),
    (12.074, 6.572),
    (12.0, 8.0),
    (10.707, 7.97),
    (9.284, 7.915),
    (8.0, 8.0),
    (8.0, 6.8),
    (6.5, 6.8),
    (6.5, 8.0),
    (5.121, 8.099),
    (3.878, 7.959),
    (2.599, 8.077),
    (1.305, 8.099),
    (0.0, 8.0),
    (0.088, 6.663),
    (0.0, 5.5),
    (0.9, 5.5),
    (0.852, 4.492),
    (0.9, 3.5),
    (0.0, 3.5),
    (0.017, 2.257),
    (0.084, 1.095),
];

pub fn square_room() -> Polygon {
    Polygon::rectangle(0.0, 0.0, 10.0, 10.0)
}

pub fn lab_lidar_like() -> Polygon {
    Polygon::from_coords(&LAB_LIDAR_LIKE)
}

/// L-shaped floor with interior walls (door gaps at their ends) and a
/// pillar, all as holes.
pub fn floor_plan_like() -> Polygon {
    let outer = [
        (0.0, 0.0),
        (20.0, 0.0),
        (20.0, 12.0),
        (8.0, 12.0),
        (8.0, 10.0),
        (0.0, 10.0),
    ]
    .iter()
    .map(|&(x, y)| Point2::new(x, y))
    .collect();
    let holes = vec![
        Polygon::rectangle_hole(7.0, 1.5, 7.2, 8.5),
        Polygon::rectangle_hole(8.5, 6.0, 15.0, 6.2),
        Polygon::rectangle_hole(14.0, 0.8, 14.2, 5.0),
        Polygon::rectangle_hole(14.0, 7.5, 14.2, 11.2),
        Polygon::rectangle_hole(17.0, 9.0, 17.6, 9.6),
    ];
    Polygon::new(outer, holes)
}

/// A named built-in scene without obstacles. `random` uses `seed` and the
/// default [`RandomSceneParams`].
pub fn builtin(name: &str, seed: u64) -> Option<Scene> {
    let w = match name {
        "square-room" => square_room(),
        "lab-lidar-like" => lab_lidar_like(),
        "floor-plan-like" => floor_plan_like(),
        "random" => random_workspace(seed, &RandomSceneParams::default()).ok()?,
        _ => return None,
    };
    Some(Scene::new(w))
}

pub fn random_workspace(seed: u64, p: &RandomSceneParams) -> Result<Polygon, sparseloc::SimError> {
    sparseloc::random_polygon(seed, p.vertices, p.radius, p.jitter)
}
