//! k'-of-k consensus over measurement voxel clouds, pose extraction and
//! candidate filtering.

use std::cmp::Ordering;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{angle_distance, Polygon, Pose};
use crate::preimage::{agreement_residual, compute_preimage, slice_slack, MeasurementSpec, PreimageParams};
use crate::voxelgrid::{accumulate, connected_components, make_spec, GridError, GridSpec, VoxelMask};

/// Smallest batch the pipeline accepts.
pub const MIN_MEASUREMENTS: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FusionError {
    #[error("need at least {MIN_MEASUREMENTS} measurements, got {0}")]
    TooFewMeasurements(usize),
    #[error("k' = {k_prime} out of range for k = {k}")]
    KPrimeOutOfRange { k_prime: usize, k: usize },
    #[error("invalid fusion parameter: {0}")]
    InvalidParameter(&'static str),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// User-facing fusion settings; unset tolerances take resolution-dependent
/// defaults in [`FusionConfig::resolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    pub k_prime: usize,
    pub epsilon: Option<f64>,
    pub delta_pos: Option<f64>,
    pub delta_theta: Option<f64>,
    pub min_component: usize,
}

impl FusionConfig {
    pub fn new(k_prime: usize) -> Self {
        Self {
            k_prime,
            epsilon: None,
            delta_pos: None,
            delta_theta: None,
            min_component: 1,
        }
    }

    /// Fills in defaults: `epsilon` is the slack of the longest reading,
    /// `delta_pos` two xy diagonals, `delta_theta` two heading cells.
    pub fn resolve(
        &self,
        spec: &GridSpec,
        ms: &[MeasurementSpec],
        prep: &PreimageParams,
    ) -> Result<FusionParams, FusionError> {
        let k = ms.len();
        if !(3..=k).contains(&self.k_prime) {
            return Err(FusionError::KPrimeOutOfRange { k_prime: self.k_prime, k });
        }
        let epsilon = self.epsilon.unwrap_or_else(|| {
            ms.iter()
                .map(|m| slice_slack(spec, m, prep))
                .fold(0.0, f64::max)
        });
        let p = FusionParams {
            k_prime: self.k_prime,
            epsilon,
            delta_pos: self.delta_pos.unwrap_or(2.0 * spec.xy_diagonal()),
            delta_theta: self.delta_theta.unwrap_or(2.0 * spec.cell_dtheta),
            min_component: self.min_component,
        };
        p.check()?;
        Ok(p)
    }
}

/// Fully resolved filter parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionParams {
    pub k_prime: usize,
    /// Agreement tolerance, meters.
    pub epsilon: f64,
    pub delta_pos: f64,
    pub delta_theta: f64,
    pub min_component: usize,
}

impl FusionParams {
    fn check(&self) -> Result<(), FusionError> {
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(FusionError::InvalidParameter("epsilon must be positive"));
        }
        if !(self.delta_pos >= 0.0 && self.delta_theta >= 0.0) {
            return Err(FusionError::InvalidParameter("delta must be non-negative"));
        }
        if self.min_component == 0 {
            return Err(FusionError::InvalidParameter("min_component must be at least 1"));
        }
        Ok(())
    }

    /// Split uniqueness metric: two poses are duplicates when they are close
    /// in position *and* in heading.
    pub fn too_close(&self, a: &Pose, b: &Pose) -> bool {
        a.position.distance(b.position) < self.delta_pos
            && angle_distance(a.theta, b.theta) < self.delta_theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CandidatePose {
    pub pose: Pose,
    /// Measurements whose static-map residual at `pose` is below epsilon.
    pub agreement_count: usize,
    pub component_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StageTimings {
    pub preimage_ms: f64,
    pub consensus_ms: f64,
    pub extraction_ms: f64,
}

impl StageTimings {
    pub fn fusion_ms(&self) -> f64 {
        self.consensus_ms + self.extraction_ms
    }

    pub fn total_ms(&self) -> f64 {
        self.preimage_ms + self.fusion_ms()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    /// Best first; see [`rank_candidates`].
    pub candidates: Vec<CandidatePose>,
    pub grid: GridSpec,
    pub params: FusionParams,
    pub timings: StageTimings,
    pub masks_set_voxels: Vec<usize>,
    pub consensus_set_voxels: usize,
}

impl LocalizationResult {
    pub fn grid_n(&self) -> usize {
        self.grid.n
    }
}

/// Voxels set in at least `k_prime` masks. Equal to the union, over all
/// `k_prime`-subsets, of the subset intersections.
pub fn consensus_mask(masks: &[VoxelMask], k_prime: usize) -> Result<VoxelMask, FusionError> {
    if k_prime == 0 || k_prime > masks.len() {
        return Err(FusionError::KPrimeOutOfRange { k_prime, k: masks.len() });
    }
    Ok(accumulate(masks)?.at_least(k_prime))
}

/// Candidate ordering: more agreeing measurements, then larger component,
/// then lexicographic pose.
pub fn rank_candidates(a: &CandidatePose, b: &CandidatePose) -> Ordering {
    b.agreement_count
        .cmp(&a.agreement_count)
        .then(b.component_size.cmp(&a.component_size))
        .then(a.pose.position.x.total_cmp(&b.pose.position.x))
        .then(a.pose.position.y.total_cmp(&b.pose.position.y))
        .then(a.pose.theta.total_cmp(&b.pose.theta))
}

/// Number of measurements `q` epsilon-agrees with.
pub fn agreement_count(w: &Polygon, q: &Pose, ms: &[MeasurementSpec], epsilon: f64) -> usize {
    ms.iter()
        .filter(|m| agreement_residual(w, q, m).is_some_and(|r| r < epsilon))
        .count()
}

/// Component centroids that agree with at least `k_prime` measurements,
/// ranked and greedily thinned so that survivors are pairwise separated.
pub fn extract_candidates(
    mask: &VoxelMask,
    w: &Polygon,
    ms: &[MeasurementSpec],
    p: &FusionParams,
) -> Vec<CandidatePose> {
    let mut cands: Vec<CandidatePose> = connected_components(mask)
        .into_iter()
        .filter(|c| c.size() >= p.min_component)
        .filter_map(|c| {
            let agreement_count = agreement_count(w, &c.centroid, ms, p.epsilon);
            (agreement_count >= p.k_prime).then_some(CandidatePose {
                pose: c.centroid,
                agreement_count,
                component_size: c.size(),
            })
        })
        .collect();
    cands.sort_by(rank_candidates);
    let mut kept: Vec<CandidatePose> = Vec::with_capacity(cands.len());
    for c in cands {
        if !kept.iter().any(|k| p.too_close(&k.pose, &c.pose)) {
            kept.push(c);
        }
    }
    kept
}

/// Voxel clouds of a measurement batch over one grid; reusable across
/// fusion settings.
#[derive(Debug, Clone)]
pub struct PreimageSet {
    pub spec: GridSpec,
    pub masks: Vec<VoxelMask>,
    pub elapsed_ms: f64,
}

impl PreimageSet {
    pub fn build(
        w: &Polygon,
        ms: &[MeasurementSpec],
        n: usize,
        prep: &PreimageParams,
    ) -> Result<Self, FusionError> {
        if ms.len() < MIN_MEASUREMENTS {
            return Err(FusionError::TooFewMeasurements(ms.len()));
        }
        let spec = make_spec(w.aabb(), n)?;
        let start = Instant::now();
        let masks = ms
            .par_iter()
            .map(|m| compute_preimage(w, m, &spec, prep))
            .collect();
        Ok(Self {
            spec,
            masks,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        })
    }

    /// Runs consensus and extraction on the stored clouds.
    pub fn fuse(
        &self,
        w: &Polygon,
        ms: &[MeasurementSpec],
        cfg: &FusionConfig,
        prep: &PreimageParams,
    ) -> Result<LocalizationResult, FusionError> {
        let params = cfg.resolve(&self.spec, ms, prep)?;
        let t0 = Instant::now();
        let consensus = consensus_mask(&self.masks, params.k_prime)?;
        let t1 = Instant::now();
        let candidates = extract_candidates(&consensus, w, ms, &params);
        let t2 = Instant::now();
        Ok(LocalizationResult {
            candidates,
            grid: self.spec,
            params,
            timings: StageTimings {
                preimage_ms: self.elapsed_ms,
                consensus_ms: (t1 - t0).as_secs_f64() * 1e3,
                extraction_ms: (t2 - t1).as_secs_f64() * 1e3,
            },
            masks_set_voxels: self.masks.iter().map(VoxelMask::count).collect(),
            consensus_set_voxels: consensus.count(),
        })
    }

    /// Plain intersection of all clouds with agreement required on every
    /// measurement.
    pub fn fuse_baseline(
        &self,
        w: &Polygon,
        ms: &[MeasurementSpec],
        prep: &PreimageParams,
    ) -> Result<LocalizationResult, FusionError> {
        self.fuse(w, ms, &FusionConfig::new(ms.len()), prep)
    }
}

/// End-to-end robust localization at resolution `n`.
pub fn localize(
    w: &Polygon,
    ms: &[MeasurementSpec],
    n: usize,
    cfg: &FusionConfig,
    prep: &PreimageParams,
) -> Result<LocalizationResult, FusionError> {
    if ms.len() < MIN_MEASUREMENTS {
        return Err(FusionError::TooFewMeasurements(ms.len()));
    }
    // reject bad k' before paying for the clouds
    if !(3..=ms.len()).contains(&cfg.k_prime) {
        return Err(FusionError::KPrimeOutOfRange { k_prime: cfg.k_prime, k: ms.len() });
    }
    PreimageSet::build(w, ms, n, prep)?.fuse(w, ms, cfg, prep)
}

/// The non-robust baseline: `k' = k`.
pub fn baseline_localize(
    w: &Polygon,
    ms: &[MeasurementSpec],
    n: usize,
    prep: &PreimageParams,
) -> Result<LocalizationResult, FusionError> {
    localize(w, ms, n, &FusionConfig::new(ms.len()), prep)
}
