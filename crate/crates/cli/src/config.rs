//! Experiment configuration, loadable from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sparseloc::{FusionConfig, PreimageParams};
use thiserror::Error;

use crate::scenes::{RandomSceneParams, BUILTIN_NAMES};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Where trial workspaces come from.
#[derive(Debug, Clone, PartialEq)]
pub enum SceneSource {
    Builtin(String),
    File(PathBuf),
    /// A fresh random workspace per trial.
    Random(RandomSceneParams),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Built-in scene name; `random` draws a new workspace per trial.
    pub scene: String,
    /// Scene file; takes precedence over `scene`.
    pub scene_file: Option<PathBuf>,
    pub random: RandomSceneParams,
    /// Obstacle count per trial.
    pub m: usize,
    pub k: usize,
    pub k_prime: usize,
    pub n_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    /// Success radius in voxel xy diagonals.
    pub success_pos_tol: f64,
    /// Success heading tolerance in heading cells.
    pub success_theta_tol: f64,
    pub epsilon: Option<f64>,
    pub delta_pos: Option<f64>,
    pub delta_theta: Option<f64>,
    pub min_component: usize,
    pub slack_extra: f64,
    pub slope_bound: f64,
    /// Obstacle circumradius range, fractions of the workspace diameter.
    pub obstacle_size: [f64; 2],
    /// Sensor clearance in voxel xy diagonals at each resolution.
    pub clearance_diagonals: f64,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    /// Fill the timing columns. Timings vary between runs, so they are off
    /// by default to keep outputs reproducible.
    pub record_timings: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scene: "random".into(),
            scene_file: None,
            random: RandomSceneParams::default(),
            m: 10,
            k: 10,
            k_prime: 6,
            n_values: vec![64],
            trials: 50,
            seed: 1,
            success_pos_tol: 2.0,
            success_theta_tol: 2.0,
            epsilon: None,
            delta_pos: None,
            delta_theta: None,
            min_component: 1,
            slack_extra: 0.0,
            slope_bound: 1.0,
            obstacle_size: [
                sparseloc::simworld::DEFAULT_OBSTACLE_SIZE.0,
                sparseloc::simworld::DEFAULT_OBSTACLE_SIZE.1,
            ],
            clearance_diagonals: 2.0,
            workers: None,
            record_timings: false,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|e| ConfigError::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialization cannot fail")
    }

    pub fn source(&self) -> SceneSource {
        match &self.scene_file {
            Some(p) => SceneSource::File(p.clone()),
            None if self.scene == "random" => SceneSource::Random(self.random),
            None => SceneSource::Builtin(self.scene.clone()),
        }
    }

    /// Scene identifier written to reports.
    pub fn scene_id(&self) -> String {
        match self.source() {
            SceneSource::File(p) => p.display().to_string(),
            SceneSource::Builtin(s) => s,
            SceneSource::Random(_) => "random".into(),
        }
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            k_prime: self.k_prime,
            epsilon: self.epsilon,
            delta_pos: self.delta_pos,
            delta_theta: self.delta_theta,
            min_component: self.min_component,
        }
    }

    pub fn preimage(&self) -> PreimageParams {
        PreimageParams {
            slack_extra: self.slack_extra,
            slope_bound: self.slope_bound,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: &str| Err(ConfigError::Invalid(m.into()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.k < sparseloc::fusion::MIN_MEASUREMENTS {
            return bad("k must be at least 4");
        }
        if !(3..=self.k).contains(&self.k_prime) {
            return bad("k_prime must satisfy 3 <= k_prime <= k");
        }
        if self.n_values.is_empty() || self.n_values.iter().any(|&n| n < 2) {
            return bad("n_values must be non-empty with every n >= 2");
        }
        if self.scene_file.is_none() && !BUILTIN_NAMES.contains(&self.scene.as_str()) {
            return Err(ConfigError::Invalid(format!(
                "unknown scene `{}` (expected one of {})",
                self.scene,
                BUILTIN_NAMES.join(", ")
            )));
        }
        if !(self.success_pos_tol > 0.0 && self.success_theta_tol > 0.0) {
            return bad("success tolerances must be positive");
        }
        let [lo, hi] = self.obstacle_size;
        if !(lo > 0.0 && lo <= hi) {
            return bad("obstacle_size must satisfy 0 < lo <= hi");
        }
        if !(self.slack_extra >= 0.0 && self.slope_bound >= 0.0 && self.clearance_diagonals >= 0.0) {
            return bad("slack_extra, slope_bound and clearance_diagonals must be non-negative");
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1");
        }
        Ok(())
    }
}
