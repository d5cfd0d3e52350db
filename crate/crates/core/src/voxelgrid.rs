//! Dense `n × n × n` discretization of `AABB(W) × [0, 2π)`.
//!
//! Linear voxel order is `(itheta * n + iy) * n + ix`, so every heading slice
//! is a contiguous run of `n²` voxels. The heading axis is cyclic.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use thiserror::Error;

use crate::geometry::{wrap_angle, Aabb, Point2, Pose};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GridError {
    #[error("degenerate bounding box: {width} × {height}")]
    DegenerateBox { width: f64, height: f64 },
    #[error("resolution {0} is below the minimum of 2")]
    ResolutionTooSmall(usize),
    #[error("voxel index ({ix}, {iy}, {itheta}) out of range for n = {n}")]
    IndexOutOfRange {
        ix: usize,
        iy: usize,
        itheta: usize,
        n: usize,
    },
    #[error("voxel grids have different specs")]
    SpecMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub origin: Point2,
    pub cell_dx: f64,
    pub cell_dy: f64,
    pub cell_dtheta: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VoxelIndex {
    pub ix: usize,
    pub iy: usize,
    pub itheta: usize,
}

impl VoxelIndex {
    pub const fn new(ix: usize, iy: usize, itheta: usize) -> Self {
        Self { ix, iy, itheta }
    }
}

impl GridSpec {
    /// Grid over `bounds × [0, 2π)` with `n` cells per axis.
    pub fn new(bounds: Aabb, n: usize) -> Result<Self, GridError> {
        let (width, height) = (bounds.width(), bounds.height());
        if !(width > 0.0 && height > 0.0) || !width.is_finite() || !height.is_finite() {
            return Err(GridError::DegenerateBox { width, height });
        }
        if n < 2 {
            return Err(GridError::ResolutionTooSmall(n));
        }
        Ok(Self {
            origin: bounds.min,
            cell_dx: width / n as f64,
            cell_dy: height / n as f64,
            cell_dtheta: TAU / n as f64,
            n,
        })
    }

    pub fn voxel_count(&self) -> usize {
        self.n * self.n * self.n
    }

    /// Length of a cell's xy diagonal.
    pub fn xy_diagonal(&self) -> f64 {
        self.cell_dx.hypot(self.cell_dy)
    }

    pub fn bounds(&self) -> Aabb {
        Aabb {
            min: self.origin,
            max: Point2::new(
                self.origin.x + self.cell_dx * self.n as f64,
                self.origin.y + self.cell_dy * self.n as f64,
            ),
        }
    }

    pub fn linear(&self, v: VoxelIndex) -> usize {
        (v.itheta * self.n + v.iy) * self.n + v.ix
    }

    pub fn unlinear(&self, i: usize) -> VoxelIndex {
        let n = self.n;
        VoxelIndex::new(i % n, (i / n) % n, i / (n * n))
    }

    pub fn check(&self, v: VoxelIndex) -> Result<(), GridError> {
        if v.ix < self.n && v.iy < self.n && v.itheta < self.n {
            Ok(())
        } else {
            Err(GridError::IndexOutOfRange {
                ix: v.ix,
                iy: v.iy,
                itheta: v.itheta,
                n: self.n,
            })
        }
    }

    pub fn x_center(&self, ix: usize) -> f64 {
        self.origin.x + (ix as f64 + 0.5) * self.cell_dx
    }

    pub fn y_center(&self, iy: usize) -> f64 {
        self.origin.y + (iy as f64 + 0.5) * self.cell_dy
    }

    pub fn theta_center(&self, itheta: usize) -> f64 {
        (itheta as f64 + 0.5) * self.cell_dtheta
    }

    /// Center pose of a voxel.
    pub fn voxel_center(&self, v: VoxelIndex) -> Result<Pose, GridError> {
        self.check(v)?;
        Ok(self.center_unchecked(v))
    }

    pub(crate) fn center_unchecked(&self, v: VoxelIndex) -> Pose {
        Pose {
            position: Point2::new(self.x_center(v.ix), self.y_center(v.iy)),
            theta: self.theta_center(v.itheta),
        }
    }

    /// The voxel holding `q`, or `None` when its position lies outside the
    /// grid's bounding box.
    pub fn locate(&self, q: &Pose) -> Option<VoxelIndex> {
        let fx = ((q.position.x - self.origin.x) / self.cell_dx).floor();
        let fy = ((q.position.y - self.origin.y) / self.cell_dy).floor();
        let n = self.n as f64;
        if !(0.0..n).contains(&fx) || !(0.0..n).contains(&fy) {
            return None;
        }
        let it = ((wrap_angle(q.theta) / self.cell_dtheta).floor() as usize).min(self.n - 1);
        Some(VoxelIndex::new(fx as usize, fy as usize, it))
    }
}

/// Grid over `bounds × [0, 2π)`; see [`GridSpec::new`].
pub fn make_spec(bounds: Aabb, n: usize) -> Result<GridSpec, GridError> {
    GridSpec::new(bounds, n)
}

/// Bit-packed boolean voxel set.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelMask {
    spec: GridSpec,
    words: Vec<u64>,
}

impl VoxelMask {
    pub fn empty(spec: GridSpec) -> Self {
        Self {
            spec,
            words: vec![0; spec.voxel_count().div_ceil(64)],
        }
    }

    pub fn full(spec: GridSpec) -> Self {
        let mut m = Self::empty(spec);
        for i in 0..spec.voxel_count() {
            m.set_linear(i, true);
        }
        m
    }

    /// Assembles a mask from per-slice lists of set xy cells (`iy * n + ix`).
    pub fn from_slices<I>(spec: GridSpec, slices: I) -> Self
    where
        I: IntoIterator<Item = (usize, Vec<usize>)>,
    {
        let mut m = Self::empty(spec);
        let plane = spec.n * spec.n;
        for (itheta, cells) in slices {
            for c in cells {
                m.set_linear(itheta * plane + c, true);
            }
        }
        m
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    #[inline]
    pub fn get_linear(&self, i: usize) -> bool {
        self.words[i >> 6] & (1u64 << (i & 63)) != 0
    }

    #[inline]
    pub fn set_linear(&mut self, i: usize, value: bool) {
        let bit = 1u64 << (i & 63);
        if value {
            self.words[i >> 6] |= bit;
        } else {
            self.words[i >> 6] &= !bit;
        }
    }

    pub fn get(&self, v: VoxelIndex) -> bool {
        self.get_linear(self.spec.linear(v))
    }

    pub fn set(&mut self, v: VoxelIndex, value: bool) {
        let i = self.spec.linear(v);
        self.set_linear(i, value);
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Linear indices of set voxels, ascending.
    pub fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(wi * 64 + b)
            })
        })
    }

    /// True when every voxel set here is also set in `other`.
    pub fn is_subset_of(&self, other: &VoxelMask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersect_with(&mut self, other: &VoxelMask) -> Result<(), GridError> {
        self.check_spec(other)?;
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a &= b);
        Ok(())
    }

    pub fn union_with(&mut self, other: &VoxelMask) -> Result<(), GridError> {
        self.check_spec(other)?;
        self.words.iter_mut().zip(&other.words).for_each(|(a, b)| *a |= b);
        Ok(())
    }

    fn check_spec(&self, other: &VoxelMask) -> Result<(), GridError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(GridError::SpecMismatch)
        }
    }
}

/// Per-voxel count of how many masks contain each voxel.
#[derive(Debug, Clone, PartialEq)]
pub struct CountGrid {
    spec: GridSpec,
    counts: Vec<u16>,
    layers: usize,
}

impl CountGrid {
    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// Number of masks accumulated.
    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn counts(&self) -> &[u16] {
        &self.counts
    }

    pub fn get(&self, v: VoxelIndex) -> u16 {
        self.counts[self.spec.linear(v)]
    }

    /// Voxels whose count reaches `min_count`.
    pub fn at_least(&self, min_count: usize) -> VoxelMask {
        let mut m = VoxelMask::empty(self.spec);
        for (i, &c) in self.counts.iter().enumerate() {
            if c as usize >= min_count {
                m.set_linear(i, true);
            }
        }
        m
    }
}

/// Sums masks voxel-wise. All masks must share one spec.
pub fn accumulate(masks: &[VoxelMask]) -> Result<CountGrid, GridError> {
    let Some(first) = masks.first() else {
        return Err(GridError::SpecMismatch);
    };
    let spec = first.spec;
    if masks.iter().any(|m| m.spec != spec) {
        return Err(GridError::SpecMismatch);
    }
    let mut counts = vec![0u16; spec.voxel_count()];
    for m in masks {
        for i in m.iter_set() {
            counts[i] += 1;
        }
    }
    Ok(CountGrid {
        spec,
        counts,
        layers: masks.len(),
    })
}

/// A 6-connected set of voxels with its circular-mean center of mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub voxels: Vec<VoxelIndex>,
    pub centroid: Pose,
}

impl Component {
    pub fn size(&self) -> usize {
        self.voxels.len()
    }
}

/// Partitions the set voxels under 6-adjacency, wrapping on the heading axis
/// only. Components are ordered by their lowest linear index.
pub fn connected_components(mask: &VoxelMask) -> Vec<Component> {
    let spec = *mask.spec();
    let n = spec.n;
    let mut seen = VoxelMask::empty(spec);
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for start in mask.iter_set() {
        if seen.get_linear(start) {
            continue;
        }
        seen.set_linear(start, true);
        queue.push_back(start);
        let mut voxels = Vec::new();
        while let Some(i) = queue.pop_front() {
            let v = spec.unlinear(i);
            voxels.push(v);
            let mut visit = |w: VoxelIndex| {
                let j = spec.linear(w);
                if mask.get_linear(j) && !seen.get_linear(j) {
                    seen.set_linear(j, true);
                    queue.push_back(j);
                }
            };
            if v.ix > 0 {
                visit(VoxelIndex::new(v.ix - 1, v.iy, v.itheta));
            }
            if v.ix + 1 < n {
                visit(VoxelIndex::new(v.ix + 1, v.iy, v.itheta));
            }
            if v.iy > 0 {
                visit(VoxelIndex::new(v.ix, v.iy - 1, v.itheta));
            }
            if v.iy + 1 < n {
                visit(VoxelIndex::new(v.ix, v.iy + 1, v.itheta));
            }
            visit(VoxelIndex::new(v.ix, v.iy, (v.itheta + n - 1) % n));
            visit(VoxelIndex::new(v.ix, v.iy, (v.itheta + 1) % n));
        }
        voxels.sort_unstable_by_key(|&v| spec.linear(v));
        let centroid = circular_centroid(&spec, &voxels);
        out.push(Component { voxels, centroid });
    }
    out
}

fn circular_centroid(spec: &GridSpec, voxels: &[VoxelIndex]) -> Pose {
    let (mut sx, mut sy, mut ss, mut sc) = (0.0, 0.0, 0.0, 0.0);
    for &v in voxels {
        let c = spec.center_unchecked(v);
        sx += c.position.x;
        sy += c.position.y;
        let (s, co) = c.theta.sin_cos();
        ss += s;
        sc += co;
    }
    let k = voxels.len() as f64;
    let theta = if ss.hypot(sc) / k < 1e-12 {
        // antipodal headings cancel; fall back to the first voxel
        spec.theta_center(voxels[0].itheta)
    } else {
        ss.atan2(sc)
    };
    Pose::from_parts(Point2::new(sx / k, sy / k), theta)
}
