//! Contour-to-mask conversion.
//!
//! The pipeline starts from an all-background volume on the source grid,
//! splits every contour into triangles, restricts work to the bounding box
//! of all contours, and marks each voxel whose center lies inside (boundary
//! included) a triangle on its slice. Inclusion is decided in index space.

use std::collections::BTreeMap;
use std::sync::Mutex;

use rayon::prelude::*;

use crate::contour::{Contour, ContourSet};
use crate::error::{GeometryError, RasterError};
use crate::geometry::Mask;
use crate::meta::MetaDescriptor;
use crate::triangulate::{triangulate, Triangle2D, BOUNDARY_TOLERANCE};

/// Receives percent-complete reports. Reports arrive serialized, in
/// nondecreasing order, and finish at 100.
pub trait ProgressSink: Sync {
    fn report(&self, percent: u8);
}

impl<F: Fn(u8) + Sync> ProgressSink for F {
    fn report(&self, percent: u8) {
        self(percent)
    }
}

/// Sink that drops every report.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoProgress;

impl ProgressSink for NoProgress {
    fn report(&self, _percent: u8) {}
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterOptions {
    /// Fill self-intersecting contours with even-odd instead of failing.
    pub lenient: bool,
    pub foreground: u8,
    /// Skip voxels outside the contours' bounding box.
    pub bbox_precheck: bool,
    pub parallel: bool,
}

impl Default for RasterOptions {
    fn default() -> Self {
        Self {
            lenient: false,
            foreground: Mask::DEFAULT_FOREGROUND,
            bbox_precheck: true,
            parallel: true,
        }
    }
}

/// Axis-aligned box in continuous index space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

impl BoundingBox {
    pub fn contains(&self, p: [f64; 3]) -> bool {
        (0..3).all(|a| {
            p[a] >= self.min[a] - BOUNDARY_TOLERANCE && p[a] <= self.max[a] + BOUNDARY_TOLERANCE
        })
    }

    /// Integer voxel centers inside the box along `axis`, clipped to `0..size`.
    fn index_range(&self, axis: usize, size: usize) -> std::ops::Range<usize> {
        let lo = (self.min[axis] - BOUNDARY_TOLERANCE).ceil().max(0.0);
        let hi = (self.max[axis] + BOUNDARY_TOLERANCE).floor();
        if hi < 0.0 || lo >= size as f64 || lo > hi {
            return 0..0;
        }
        lo as usize..(hi as usize + 1).min(size)
    }
}

/// Tight box around every contour point; the `k` extent comes from slices.
pub fn compute_bounding_box(set: &ContourSet) -> Result<BoundingBox, RasterError> {
    if set.is_empty() {
        return Err(RasterError::EmptySet);
    }
    let mut min = [f64::INFINITY; 3];
    let mut max = [f64::NEG_INFINITY; 3];
    for c in set.contours() {
        let k = c.slice() as f64;
        for &[i, j] in c.points() {
            for (a, v) in [i, j, k].into_iter().enumerate() {
                min[a] = min[a].min(v);
                max[a] = max[a].max(v);
            }
        }
    }
    Ok(BoundingBox { min, max })
}

/// All-background mask with the descriptor's grid.
pub fn build_blank_volume(meta: &MetaDescriptor) -> Result<Mask, GeometryError> {
    Mask::empty(meta.to_geometry()?, Mask::DEFAULT_FOREGROUND)
}

/// Even-odd inclusion of `p` in the raw polygon, with points within
/// `BOUNDARY_TOLERANCE` of an edge counted as inside.
pub fn point_in_polygon(p: [f64; 2], contour: &Contour) -> bool {
    let mut inside = false;
    for (a, b) in contour.edges() {
        if segment_distance(p, a, b) <= BOUNDARY_TOLERANCE {
            return true;
        }
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let len2 = dx * dx + dy * dy;
    let t = if len2 > 0.0 {
        (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    (p[0] - (a[0] + t * dx)).hypot(p[1] - (a[1] + t * dy))
}

enum Shape {
    Triangle(Triangle2D, [f64; 2], [f64; 2]),
    // lenient fallback for contours that could not be triangulated
    EvenOdd(Contour),
}

impl Shape {
    #[inline]
    fn contains(&self, p: [f64; 2]) -> bool {
        match self {
            Shape::Triangle(t, lo, hi) => {
                p[0] >= lo[0] - BOUNDARY_TOLERANCE
                    && p[0] <= hi[0] + BOUNDARY_TOLERANCE
                    && p[1] >= lo[1] - BOUNDARY_TOLERANCE
                    && p[1] <= hi[1] + BOUNDARY_TOLERANCE
                    && t.contains(p)
            }
            Shape::EvenOdd(c) => point_in_polygon(p, c),
        }
    }
}

fn shapes_by_slice(
    set: &ContourSet,
    lenient: bool,
) -> Result<BTreeMap<usize, Vec<Shape>>, RasterError> {
    let mut by_slice: BTreeMap<usize, Vec<Shape>> = BTreeMap::new();
    for contour in set.contours() {
        let shapes = by_slice.entry(contour.slice()).or_default();
        match triangulate(contour) {
            Ok(tris) => shapes.extend(tris.into_iter().map(|t| {
                let (lo, hi) = t.bounds();
                Shape::Triangle(t, lo, hi)
            })),
            Err(RasterError::SelfIntersecting { .. }) if lenient => {
                shapes.push(Shape::EvenOdd(contour.clone()))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(by_slice)
}

/// Fill a mask from contours on the set's grid.
pub fn rasterize(
    set: &ContourSet,
    progress: &dyn ProgressSink,
    options: &RasterOptions,
) -> Result<Mask, RasterError> {
    let geometry = set.geometry().clone();
    let [nx, ny, nz] = geometry.sizes();
    let mut mask = Mask::empty(geometry, options.foreground)?;
    progress.report(0);
    if set.is_empty() {
        progress.report(100);
        return Ok(mask);
    }
    if let Some(c) = set.contours().iter().find(|c| c.slice() >= nz) {
        return Err(RasterError::OutOfGrid {
            slice: c.slice(),
            depth: nz,
        });
    }

    let shapes = shapes_by_slice(set, options.lenient)?;
    let full = BoundingBox {
        min: [0.0; 3],
        max: [(nx - 1) as f64, (ny - 1) as f64, (nz - 1) as f64],
    };
    let bbox = if options.bbox_precheck {
        compute_bounding_box(set)?
    } else {
        full
    };
    let (irange, jrange, krange) = (
        bbox.index_range(0, nx),
        bbox.index_range(1, ny),
        bbox.index_range(2, nz),
    );
    let total = krange.len();
    let counter = Mutex::new(0usize);
    let foreground = options.foreground;
    let no_shapes: Vec<Shape> = Vec::new();

    let fill_slice = |k: usize, voxels: &mut [u8]| {
        let slice_shapes = shapes.get(&k).unwrap_or(&no_shapes);
        for j in jrange.clone() {
            let row = &mut voxels[j * nx..(j + 1) * nx];
            for i in irange.clone() {
                let p = [i as f64, j as f64];
                if slice_shapes.iter().any(|s| s.contains(p)) {
                    row[i] = foreground;
                }
            }
        }
        let mut done = counter.lock().unwrap_or_else(|e| e.into_inner());
        *done += 1;
        progress.report((*done * 100 / total) as u8);
    };

    let slices = mask.slices_mut().enumerate().skip(krange.start).take(total);
    if options.parallel {
        slices
            .collect::<Vec<_>>()
            .into_par_iter()
            .for_each(|(k, voxels)| fill_slice(k, voxels));
    } else {
        slices.for_each(|(k, voxels)| fill_slice(k, voxels));
    }
    Ok(mask)
}

/// Rasterize against an explicit descriptor; the contours' indices are
/// reinterpreted on the descriptor's grid.
pub fn rasterize_with_meta(
    set: &ContourSet,
    meta: &MetaDescriptor,
    progress: &dyn ProgressSink,
    options: &RasterOptions,
) -> Result<Mask, crate::Error> {
    let geometry = meta.to_geometry()?;
    let set = set.with_geometry(geometry)?;
    Ok(rasterize(&set, progress, options)?)
}
