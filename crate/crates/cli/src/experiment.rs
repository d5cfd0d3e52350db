//! Monte-Carlo trials comparing robust fusion with the plain intersection
//! baseline.

use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use sparseloc::{
    geometry::angle_distance, make_spec, make_trial, random_obstacles, sample_free_pose, CandidatePose,
    FusionError, GridSpec, LocalizationResult, Pose, PreimageSet, Scene, SimError, TrialSetup,
};
use thiserror::Error;

use crate::config::{ConfigError, ExperimentConfig, SceneSource};
use crate::scene_io::{self, SceneIoError};
use crate::scenes;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Scene(#[from] SceneIoError),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("writing report: {0}")]
    Csv(#[from] csv::Error),
    #[error("writing report: {0}")]
    Io(#[from] std::io::Error),
}

/// Why a trial produced no records.
#[derive(Debug, Error)]
pub enum SkipReason {
    #[error("scene generation: {0}")]
    Sim(#[from] SimError),
    #[error("localization: {0}")]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Scene(#[from] SceneIoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Robust,
    Baseline,
}

/// One row of the per-trial CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub k_prime: usize,
    pub sparsity: usize,
    pub success: bool,
    pub pos_error: Option<f64>,
    pub theta_error: Option<f64>,
    pub candidates: usize,
    pub preimage_ms: Option<f64>,
    pub fusion_ms: Option<f64>,
    pub total_ms: Option<f64>,
}

pub const TRIAL_HEADER: &str = "trial,seed,method,n,m,k,k_prime,sparsity,success,pos_error,theta_error,candidates,preimage_ms,fusion_ms,total_ms";

/// Everything produced by one trial at one resolution.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub setup: TrialSetup,
    pub robust: LocalizationResult,
    pub baseline: LocalizationResult,
}

#[derive(Debug)]
pub struct SkippedTrial {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub reason: SkipReason,
}

/// Error of the candidate closest to the truth, measured in units of the
/// success tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestError {
    pub index: usize,
    pub pos_error: f64,
    pub theta_error: f64,
}

pub fn best_candidate(
    candidates: &[CandidatePose],
    truth: &Pose,
    spec: &GridSpec,
    pos_tol: f64,
    theta_tol: f64,
) -> Option<BestError> {
    let scale_p = pos_tol * spec.xy_diagonal();
    let scale_t = theta_tol * spec.cell_dtheta;
    candidates
        .iter()
        .enumerate()
        .map(|(index, c)| BestError {
            index,
            pos_error: c.pose.position.distance(truth.position),
            theta_error: angle_distance(c.pose.theta, truth.theta),
        })
        .min_by(|a, b| {
            let ka = (a.pos_error / scale_p).max(a.theta_error / scale_t);
            let kb = (b.pos_error / scale_p).max(b.theta_error / scale_t);
            ka.total_cmp(&kb).then(a.index.cmp(&b.index))
        })
}

pub fn is_success(best: Option<BestError>, spec: &GridSpec, pos_tol: f64, theta_tol: f64) -> bool {
    best.is_some_and(|b| {
        b.pos_error <= pos_tol * spec.xy_diagonal() && b.theta_error <= theta_tol * spec.cell_dtheta
    })
}

/// Seed recorded for trial `index`; the trial is fully determined by it and
/// the configuration.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index as u64);
    rng.random()
}

/// Builds the scene and ground truth for one trial. The pose clearance uses
/// the coarsest resolution in the config, so all resolutions see the same
/// trial.
pub fn build_trial(cfg: &ExperimentConfig, seed: u64) -> Result<TrialSetup, SkipReason> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (scene_seed, obstacle_seed, pose_seed): (u64, u64, u64) =
        (rng.random(), rng.random(), rng.random());
    let mut scene = match cfg.source() {
        SceneSource::Random(p) => Scene::new(scenes::random_workspace(scene_seed, &p)?),
        SceneSource::Builtin(name) => {
            scenes::builtin(&name, scene_seed).expect("validated builtin name")
        }
        SceneSource::File(path) => scene_io::load_scene(&path)?,
    };
    let size = (cfg.obstacle_size[0], cfg.obstacle_size[1]);
    scene
        .obstacles
        .extend(random_obstacles(obstacle_seed, &scene.workspace, cfg.m, size)?);
    let coarsest = cfg.n_values.iter().copied().min().expect("validated n_values");
    let spec = make_spec(scene.workspace.aabb(), coarsest).map_err(FusionError::from)?;
    let clearance = cfg.clearance_diagonals * spec.xy_diagonal();
    let q = sample_free_pose(pose_seed, &scene, 0.0, clearance)?;
    Ok(make_trial(&scene, &q, cfg.k, 0.0)?)
}

/// Runs trial `index` at resolution `n`, sharing one set of voxel clouds
/// between the robust and baseline fusions.
pub fn run_trial(cfg: &ExperimentConfig, index: usize, n: usize) -> Result<TrialOutcome, SkippedTrial> {
    let seed = trial_seed(cfg.seed, index);
    let run = || -> Result<_, SkipReason> {
        let setup = build_trial(cfg, seed)?;
        let w = &setup.scene.workspace;
        let ms = &setup.measurements;
        let prep = cfg.preimage();
        let set = PreimageSet::build(w, ms, n, &prep)?;
        let robust = set.fuse(w, ms, &cfg.fusion(), &prep)?;
        let baseline = set.fuse_baseline(w, ms, &prep)?;
        Ok((setup, robust, baseline))
    };
    match run() {
        Ok((setup, robust, baseline)) => Ok(TrialOutcome {
            trial: index,
            seed,
            n,
            setup,
            robust,
            baseline,
        }),
        Err(reason) => Err(SkippedTrial {
            trial: index,
            seed,
            n,
            reason,
        }),
    }
}

impl TrialOutcome {
    pub fn result(&self, method: Method) -> &LocalizationResult {
        match method {
            Method::Robust => &self.robust,
            Method::Baseline => &self.baseline,
        }
    }

    pub fn record(&self, method: Method, cfg: &ExperimentConfig) -> TrialRecord {
        let r = self.result(method);
        let best = best_candidate(
            &r.candidates,
            &self.setup.ground_truth,
            &r.grid,
            cfg.success_pos_tol,
            cfg.success_theta_tol,
        );
        let timed = |v: f64| cfg.record_timings.then_some(v);
        TrialRecord {
            trial: self.trial,
            seed: self.seed,
            method,
            n: self.n,
            m: cfg.m,
            k: self.setup.measurements.len(),
            k_prime: r.params.k_prime,
            sparsity: self.setup.sparsity,
            success: is_success(best, &r.grid, cfg.success_pos_tol, cfg.success_theta_tol),
            pos_error: best.map(|b| b.pos_error),
            theta_error: best.map(|b| b.theta_error),
            candidates: r.candidates.len(),
            preimage_ms: timed(r.timings.preimage_ms),
            fusion_ms: timed(r.timings.fusion_ms()),
            total_ms: timed(r.timings.total_ms()),
        }
    }
}

/// Summary over the trials of one (method, n, m) group.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateRow {
    pub method: Method,
    pub n: usize,
    pub m: usize,
    pub trials: usize,
    pub skipped: usize,
    pub successes: usize,
    /// Percent of completed trials.
    pub success_rate: f64,
    /// Over trials with at least one candidate.
    pub mean_pos_error: Option<f64>,
    pub mean_theta_error: Option<f64>,
    pub mean_candidates: f64,
    pub mean_sparsity: f64,
    pub mean_total_ms: Option<f64>,
}

#[derive(Debug)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub outcomes: Vec<TrialOutcome>,
    pub skipped: Vec<SkippedTrial>,
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, c) = v.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (c > 0).then(|| s / c as f64)
}

impl ExperimentReport {
    /// Per-trial rows ordered by resolution, trial, then method.
    pub fn records(&self) -> Vec<TrialRecord> {
        self.outcomes
            .iter()
            .flat_map(|o| {
                [Method::Robust, Method::Baseline].map(|m| o.record(m, &self.config))
            })
            .collect()
    }

    pub fn aggregates(&self) -> Vec<AggregateRow> {
        let records = self.records();
        let mut rows = Vec::new();
        for method in [Method::Robust, Method::Baseline] {
            for &n in &self.config.n_values {
                let group: Vec<&TrialRecord> =
                    records.iter().filter(|r| r.method == method && r.n == n).collect();
                let done = group.len();
                let successes = group.iter().filter(|r| r.success).count();
                rows.push(AggregateRow {
                    method,
                    n,
                    m: self.config.m,
                    trials: done,
                    skipped: self.skipped.iter().filter(|s| s.n == n).count(),
                    successes,
                    success_rate: if done == 0 { 0.0 } else { 100.0 * successes as f64 / done as f64 },
                    mean_pos_error: mean(group.iter().filter_map(|r| r.pos_error)),
                    mean_theta_error: mean(group.iter().filter_map(|r| r.theta_error)),
                    mean_candidates: mean(group.iter().map(|r| r.candidates as f64)).unwrap_or(0.0),
                    mean_sparsity: mean(group.iter().map(|r| r.sparsity as f64)).unwrap_or(0.0),
                    mean_total_ms: mean(group.iter().filter_map(|r| r.total_ms)),
                });
            }
        }
        rows
    }

    pub fn aggregate(&self, method: Method, n: usize) -> Option<AggregateRow> {
        self.aggregates().into_iter().find(|r| r.method == method && r.n == n)
    }

    pub fn write_trials_csv<W: Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(out);
        for r in self.records() {
            w.serialize(r)?;
        }
        if self.outcomes.is_empty() {
            w.write_record(TRIAL_HEADER.split(','))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_aggregate_csv<W: Write>(&self, out: W) -> Result<(), ExperimentError> {
        let mut w = csv::Writer::from_writer(out);
        for r in self.aggregates() {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes `trials.csv` and `aggregate.csv` into `dir`.
    pub fn write_to_dir(&self, dir: &Path) -> Result<(), ExperimentError> {
        std::fs::create_dir_all(dir)?;
        self.write_trials_csv(std::fs::File::create(dir.join("trials.csv"))?)?;
        self.write_aggregate_csv(std::fs::File::create(dir.join("aggregate.csv"))?)?;
        Ok(())
    }
}

/// Runs `trials` trials at every resolution. Output order does not depend
/// on the worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    if let SceneSource::File(p) = cfg.source() {
        scene_io::load_scene(&p)?;
    }
    let jobs: Vec<(usize, usize)> = cfg
        .n_values
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let work = || -> Vec<_> { jobs.par_iter().map(|&(n, t)| run_trial(cfg, t, n)).collect() };
    let results = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w).build()?.install(work),
        None => work(),
    };
    let mut outcomes = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(s) => skipped.push(s),
        }
    }
    Ok(ExperimentReport {
        config: cfg.clone(),
        outcomes,
        skipped,
    })
}
