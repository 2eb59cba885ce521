//! Ear-clipping triangulation of simple contours.

use crate::contour::Contour;
use crate::error::RasterError;

/// Triangles with less area than this are treated as degenerate.
pub const MIN_TRIANGLE_AREA: f64 = 1e-12;

/// Distance (index units) within which a point counts as on an edge.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// A counter-clockwise triangle on one axial slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triangle2D {
    pub slice: usize,
    pub vertices: [[f64; 2]; 3],
}

impl Triangle2D {
    pub fn area(&self) -> f64 {
        let [a, b, c] = self.vertices;
        cross(a, b, c) / 2.0
    }

    /// Axis-aligned extent as `(min, max)`.
    pub fn bounds(&self) -> ([f64; 2], [f64; 2]) {
        let [a, b, c] = self.vertices;
        (
            [a[0].min(b[0]).min(c[0]), a[1].min(b[1]).min(c[1])],
            [a[0].max(b[0]).max(c[0]), a[1].max(b[1]).max(c[1])],
        )
    }

    /// Inclusive containment: points within `BOUNDARY_TOLERANCE` of an edge
    /// are inside.
    #[inline]
    pub fn contains(&self, p: [f64; 2]) -> bool {
        let [a, b, c] = self.vertices;
        edge_side(a, b, p) && edge_side(b, c, p) && edge_side(c, a, p)
    }
}

// p is left of (or within tolerance of) the directed line a->b
#[inline]
fn edge_side(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    let c = cross(a, b, p);
    if c >= 0.0 {
        return true;
    }
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    c >= -BOUNDARY_TOLERANCE * len
}

/// Twice the signed area of `(a, b, c)`; positive when counter-clockwise.
#[inline]
pub(crate) fn cross(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

/// Split a simple contour into `n - 2` counter-clockwise triangles.
pub fn triangulate(contour: &Contour) -> Result<Vec<Triangle2D>, RasterError> {
    let slice = contour.slice();
    let pts = contour.points();
    let fail = || RasterError::SelfIntersecting { slice };

    if contour.signed_area().abs() <= MIN_TRIANGLE_AREA || !is_simple(pts) {
        return Err(fail());
    }

    let mut ring: Vec<usize> = (0..pts.len()).collect();
    if contour.signed_area() < 0.0 {
        ring.reverse();
    }

    let mut triangles = Vec::with_capacity(pts.len() - 2);
    let mut start = 0;
    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m)
            .map(|step| (start + step) % m)
            .find(|&pos| is_ear(pts, &ring, pos))
            .ok_or_else(fail)?;
        let prev = ring[(ear + m - 1) % m];
        let next = ring[(ear + 1) % m];
        triangles.push(Triangle2D {
            slice,
            vertices: [pts[prev], pts[ring[ear]], pts[next]],
        });
        ring.remove(ear);
        // resume next to the clipped vertex so ears spread around the ring
        start = ear % ring.len();
    }
    let last = Triangle2D {
        slice,
        vertices: [pts[ring[0]], pts[ring[1]], pts[ring[2]]],
    };
    if last.area() <= MIN_TRIANGLE_AREA {
        return Err(fail());
    }
    triangles.push(last);
    Ok(triangles)
}

fn is_ear(pts: &[[f64; 2]], ring: &[usize], pos: usize) -> bool {
    let m = ring.len();
    let (ia, ib, ic) = (ring[(pos + m - 1) % m], ring[pos], ring[(pos + 1) % m]);
    let (a, b, c) = (pts[ia], pts[ib], pts[ic]);
    if cross(a, b, c) <= 2.0 * MIN_TRIANGLE_AREA {
        return false;
    }
    // no remaining vertex may touch the closed triangle
    ring.iter()
        .filter(|&&r| r != ia && r != ib && r != ic)
        .all(|&r| {
            let p = pts[r];
            !(cross(a, b, p) >= 0.0 && cross(b, c, p) >= 0.0 && cross(c, a, p) >= 0.0)
        })
}

/// Whether the closed polygon has no touching or crossing edges.
pub fn is_simple(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for e in 0..n {
        let (a, b) = (pts[e], pts[(e + 1) % n]);
        for f in e + 1..n {
            let (c, d) = (pts[f], pts[(f + 1) % n]);
            let adjacent = f == e + 1 || (e == 0 && f == n - 1);
            if adjacent {
                // shared vertex; only a fold back along the same line is bad
                let (shared, other_e, other_f) = if f == e + 1 { (b, a, d) } else { (a, b, c) };
                if cross(other_e, shared, other_f) == 0.0 && dot_sub(other_e, shared, other_f) > 0.0
                {
                    return false;
                }
            } else if segments_touch(a, b, c, d) {
                return false;
            }
        }
    }
    true
}

// (p - s) · (q - s) > 0 means p and q lie on the same side of s
fn dot_sub(p: [f64; 2], s: [f64; 2], q: [f64; 2]) -> f64 {
    (p[0] - s[0]) * (q[0] - s[0]) + (p[1] - s[1]) * (q[1] - s[1])
}

fn segments_touch(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

// p is collinear with (s, e); check it lies within the segment's box
fn on_segment(s: [f64; 2], e: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= s[0].min(e[0])
        && p[0] <= s[0].max(e[0])
        && p[1] >= s[1].min(e[1])
        && p[1] <= s[1].max(e[1])
}
