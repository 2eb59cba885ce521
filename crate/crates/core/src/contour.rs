//! Closed planar contours drawn on axial slices, in continuous index space.

use crate::error::PolyDataError;
use crate::geometry::VolumeGeometry;

/// Consecutive points closer than this are merged.
pub const DUPLICATE_TOLERANCE: f64 = 1e-9;

/// A closed polygon on axial slice `slice`. Points are `(i, j)` index
/// coordinates; the last point connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct Contour {
    slice: usize,
    points: Vec<[f64; 2]>,
}

impl Contour {
    /// Build a contour, dropping consecutive duplicates (including a
    /// repeated closing point).
    pub fn new(slice: usize, points: Vec<[f64; 2]>) -> Result<Self, PolyDataError> {
        let mut deduped: Vec<[f64; 2]> = Vec::with_capacity(points.len());
        for p in points {
            if deduped
                .last()
                .is_none_or(|q| distance(*q, p) >= DUPLICATE_TOLERANCE)
            {
                deduped.push(p);
            }
        }
        while deduped.len() > 1
            && distance(deduped[0], *deduped.last().unwrap()) < DUPLICATE_TOLERANCE
        {
            deduped.pop();
        }
        if deduped.len() < 3 {
            return Err(PolyDataError::TooFewPoints(deduped.len()));
        }
        Ok(Self {
            slice,
            points: deduped,
        })
    }

    pub fn slice(&self) -> usize {
        self.slice
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Shoelace area, positive for counter-clockwise winding.
    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Edges as `(start, end)` pairs, closing edge included.
    pub fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.points.len();
        (0..n).map(move |a| (self.points[a], self.points[(a + 1) % n]))
    }
}

pub(crate) fn signed_area(points: &[[f64; 2]]) -> f64 {
    let n = points.len();
    let twice: f64 = (0..n)
        .map(|a| {
            let p = points[a];
            let q = points[(a + 1) % n];
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    twice / 2.0
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Contours drawn on one volume, with the grid their indices refer to.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    geometry: VolumeGeometry,
    contours: Vec<Contour>,
}

impl ContourSet {
    pub fn new(geometry: VolumeGeometry) -> Self {
        Self {
            geometry,
            contours: Vec::new(),
        }
    }

    pub fn from_contours(
        geometry: VolumeGeometry,
        contours: impl IntoIterator<Item = Contour>,
    ) -> Result<Self, PolyDataError> {
        let mut set = Self::new(geometry);
        for c in contours {
            set.push(c)?;
        }
        Ok(set)
    }

    pub fn push(&mut self, contour: Contour) -> Result<(), PolyDataError> {
        let depth = self.geometry.sizes()[2];
        if contour.slice >= depth {
            return Err(PolyDataError::OutOfGrid {
                polygon: self.contours.len(),
                slice: contour.slice as i64,
                depth,
            });
        }
        self.contours.push(contour);
        Ok(())
    }

    pub fn geometry(&self) -> &VolumeGeometry {
        &self.geometry
    }

    pub fn contours(&self) -> &[Contour] {
        &self.contours
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    pub fn len(&self) -> usize {
        self.contours.len()
    }

    /// Same contours on another grid of equal depth.
    pub fn with_geometry(&self, geometry: VolumeGeometry) -> Result<Self, PolyDataError> {
        Self::from_contours(geometry, self.contours.iter().cloned())
    }
}
