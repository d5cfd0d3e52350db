//! Localization of a range sensor in a known polygonal map from a handful of
//! distance readings, tolerant to unknown obstacles.
//!
//! Each reading is inverted into a conservative voxel cloud over
//! `AABB(W) × [0, 2π)`. Poses supported by at least `k'` of the `k` clouds
//! form the consensus set; centers of its connected components are filtered
//! by agreement with the static map and by mutual separation.

pub mod fusion;
pub mod geometry;
pub mod preimage;
pub mod simworld;
pub mod voxelgrid;

pub use fusion::{
    baseline_localize, consensus_mask, extract_candidates, localize, CandidatePose, FusionConfig,
    FusionError, FusionParams, LocalizationResult, PreimageSet, StageTimings,
};
pub use geometry::{
    compose, Aabb, Containment, GeometryError, Point2, Polygon, Pose, RigidMotion, RingId,
    Violation, EPS_GEOM,
};
pub use preimage::{
    agreement_residual, compute_preimage, slice_slack, MeasurementSpec, PreimageParams,
};
pub use voxelgrid::{
    accumulate, connected_components, make_spec, Component, CountGrid, GridError, GridSpec,
    VoxelIndex, VoxelMask,
};
pub use simworld::{
    make_trial, measure_dynamic, random_obstacles, random_polygon, sample_free_pose, Obstacle,
    Scene, SimError, Trajectory, TrialSetup,
};
