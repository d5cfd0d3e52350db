//! JSON scene files and `tx,ty,rot,d` measurement files.
//!
//! Scene layout:
//!
//! ```json
//! {
//!   "workspace": {"outer": [[0, 0], [10, 0], [10, 10], [0, 10]], "holes": []},
//!   "obstacles": [{"shape": {"outer": [...]}, "placement": [tx, ty, rot]}]
//! }
//! ```
//!
//! Rings are open, the outer ring counterclockwise and holes clockwise.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sparseloc::{
    MeasurementSpec, Obstacle, Point2, Polygon, RigidMotion, Scene, Trajectory, Violation,
};
use thiserror::Error;

use crate::scenes;

#[derive(Debug, Error)]
pub enum SceneIoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {what}: {violation}")]
    Invalid {
        path: PathBuf,
        what: String,
        violation: Violation,
    },
    #[error("obstacle {0} has a moving trajectory, which scene files cannot store")]
    MovingObstacle(usize),
    #[error("{path}: line {line}: {message}")]
    Measurement {
        path: PathBuf,
        line: u64,
        message: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolygonFile {
    outer: Vec<[f64; 2]>,
    #[serde(default)]
    holes: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleFile {
    shape: PolygonFile,
    placement: [f64; 3],
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SceneFile {
    workspace: PolygonFile,
    #[serde(default)]
    obstacles: Vec<ObstacleFile>,
}

fn ring_from(r: &[[f64; 2]]) -> Vec<Point2> {
    r.iter().map(|&[x, y]| Point2::new(x, y)).collect()
}

fn ring_to(r: &[Point2]) -> Vec<[f64; 2]> {
    r.iter().map(|p| [p.x, p.y]).collect()
}

impl From<&PolygonFile> for Polygon {
    fn from(p: &PolygonFile) -> Self {
        Polygon::new(ring_from(&p.outer), p.holes.iter().map(|h| ring_from(h)).collect())
    }
}

impl From<&Polygon> for PolygonFile {
    fn from(p: &Polygon) -> Self {
        PolygonFile {
            outer: ring_to(&p.outer),
            holes: p.holes.iter().map(|h| ring_to(h)).collect(),
        }
    }
}

/// Parses and validates a scene document; `path` is used for messages.
pub fn parse_scene(text: &str, path: &Path) -> Result<Scene, SceneIoError> {
    let file: SceneFile = serde_json::from_str(text).map_err(|e| SceneIoError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let invalid = |what: String, violation| SceneIoError::Invalid {
        path: path.to_path_buf(),
        what,
        violation,
    };
    let workspace = Polygon::from(&file.workspace);
    workspace
        .validate()
        .map_err(|v| invalid("workspace".into(), v))?;
    let mut obstacles = Vec::with_capacity(file.obstacles.len());
    for (i, o) in file.obstacles.iter().enumerate() {
        let shape = Polygon::from(&o.shape);
        shape.validate().map_err(|v| invalid(format!("obstacle {i}"), v))?;
        let [tx, ty, rot] = o.placement;
        obstacles.push(Obstacle::fixed(shape, RigidMotion::new(tx, ty, rot)));
    }
    Ok(Scene { workspace, obstacles })
}

pub fn load_scene(path: &Path) -> Result<Scene, SceneIoError> {
    let text = fs::read_to_string(path).map_err(|source| SceneIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scene(&text, path)
}

pub fn scene_to_json(scene: &Scene) -> Result<String, SceneIoError> {
    let obstacles = scene
        .obstacles
        .iter()
        .enumerate()
        .map(|(i, o)| match o.trajectory {
            Trajectory::Static(g) => Ok(ObstacleFile {
                shape: PolygonFile::from(&o.shape),
                placement: [g.translation.x, g.translation.y, g.rotation],
            }),
            Trajectory::ConstantVelocity { .. } => Err(SceneIoError::MovingObstacle(i)),
        })
        .collect::<Result<_, _>>()?;
    let file = SceneFile {
        workspace: PolygonFile::from(&scene.workspace),
        obstacles,
    };
    let mut s = serde_json::to_string_pretty(&file).expect("scene serialization cannot fail");
    s.push('\n');
    Ok(s)
}

pub fn save_scene(scene: &Scene, path: &Path) -> Result<(), SceneIoError> {
    fs::write(path, scene_to_json(scene)?).map_err(|source| SceneIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// A built-in scene name, or else a path to a scene file.
pub fn resolve_scene(name_or_path: &str, seed: u64) -> Result<Scene, SceneIoError> {
    match scenes::builtin(name_or_path, seed) {
        Some(s) => Ok(s),
        None => load_scene(Path::new(name_or_path)),
    }
}

/// Reads `tx,ty,rot,d` rows (body-frame motion and distance). Blank lines
/// and `#` comments are skipped.
pub fn load_measurements(path: &Path) -> Result<Vec<MeasurementSpec>, SceneIoError> {
    let text = fs::read_to_string(path).map_err(|source| SceneIoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_measurements(&text, path)
}

pub fn parse_measurements(text: &str, path: &Path) -> Result<Vec<MeasurementSpec>, SceneIoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let err = |line: u64, message: String| SceneIoError::Measurement {
            path: path.to_path_buf(),
            line,
            message,
        };
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        if rec.len() != 4 {
            return Err(err(line, format!("expected 4 fields tx,ty,rot,d, found {}", rec.len())));
        }
        let mut v = [0.0; 4];
        for (i, (field, name)) in rec.iter().zip(["tx", "ty", "rot", "d"]).enumerate() {
            v[i] = field
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| err(line, format!("field `{name}`: `{field}` is not a finite number")))?;
        }
        if v[3] < 0.0 {
            return Err(err(line, "field `d`: distance must be non-negative".into()));
        }
        out.push(MeasurementSpec::new(RigidMotion::new(v[0], v[1], v[2]), v[3]));
    }
    Ok(out)
}
