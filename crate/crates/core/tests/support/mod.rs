//! Test-only generators and brute-force oracles.
//!
//! Nothing here calls into the triangulation or rasterization code; the
//! oracles work directly on raw vertex lists.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use segstudio::{Contour, ContourSet, Mask, VolumeGeometry};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

fn orient(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn within_box(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> bool {
    p[0] >= a[0].min(b[0])
        && p[0] <= a[0].max(b[0])
        && p[1] >= a[1].min(b[1])
        && p[1] <= a[1].max(b[1])
}

fn segments_meet(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> bool {
    let o1 = orient(a, b, c).signum();
    let o2 = orient(a, b, d).signum();
    let o3 = orient(c, d, a).signum();
    let o4 = orient(c, d, b).signum();
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        return true;
    }
    (o1 == 0.0 && within_box(a, b, c))
        || (o2 == 0.0 && within_box(a, b, d))
        || (o3 == 0.0 && within_box(c, d, a))
        || (o4 == 0.0 && within_box(c, d, b))
}

/// Simple polygon: distinct vertices, non-adjacent edges disjoint, no
/// zero-angle folds, nonzero area.
pub fn oracle_is_simple(pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    for a in 0..n {
        for b in a + 1..n {
            if pts[a] == pts[b] {
                return false;
            }
        }
    }
    let edge = |e: usize| (pts[e], pts[(e + 1) % n]);
    for e in 0..n {
        // fold: next vertex doubles back along the incoming edge
        let (p, q, r) = (pts[e], pts[(e + 1) % n], pts[(e + 2) % n]);
        if orient(p, q, r) == 0.0
            && (p[0] - q[0]) * (r[0] - q[0]) + (p[1] - q[1]) * (r[1] - q[1]) > 0.0
        {
            return false;
        }
        for f in e + 2..n {
            if e == 0 && f == n - 1 {
                continue;
            }
            let (a, b) = edge(e);
            let (c, d) = edge(f);
            if segments_meet(a, b, c, d) {
                return false;
            }
        }
    }
    let twice: f64 = (0..n)
        .map(|a| {
            let (p, q) = (pts[a], pts[(a + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum();
    twice.abs() > 1e-9
}

/// Crossing-number inclusion with an inclusive boundary.
pub fn oracle_inside(p: [f64; 2], pts: &[[f64; 2]]) -> bool {
    let n = pts.len();
    let mut crossings = 0;
    for e in 0..n {
        let (a, b) = (pts[e], pts[(e + 1) % n]);
        // on-edge test by distance to the segment
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let len2 = dx * dx + dy * dy;
        let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2).clamp(0.0, 1.0);
        let (cx, cy) = (a[0] + t * dx, a[1] + t * dy);
        if ((p[0] - cx).powi(2) + (p[1] - cy).powi(2)).sqrt() <= 1e-9 {
            return true;
        }
        let (lo, hi) = if a[1] <= b[1] { (a, b) } else { (b, a) };
        if p[1] >= lo[1] && p[1] < hi[1] {
            let x = lo[0] + (p[1] - lo[1]) / (hi[1] - lo[1]) * (hi[0] - lo[0]);
            if x > p[0] {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

/// Every voxel center tested against every contour on its slice.
pub fn oracle_mask(set: &ContourSet) -> Vec<bool> {
    let [nx, ny, nz] = set.geometry().sizes();
    let mut out = vec![false; nx * ny * nz];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let p = [i as f64, j as f64];
                out[i + nx * (j + ny * k)] = set
                    .contours()
                    .iter()
                    .any(|c| c.slice() == k && oracle_inside(p, c.points()));
            }
        }
    }
    out
}

pub fn mask_bits(mask: &Mask) -> Vec<bool> {
    mask.voxels().iter().map(|&v| v != 0).collect()
}

fn half_grid(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo..hi) * 2.0).round() / 2.0
}

/// Star-shaped polygon around a random center, vertices on a half-voxel
/// lattice so many voxel centers land exactly on edges and vertices.
pub fn star_polygon(rng: &mut StdRng, nx: usize, ny: usize) -> Vec<[f64; 2]> {
    loop {
        let n = rng.random_range(3..=14);
        let cx = rng.random_range(0.0..nx as f64);
        let cy = rng.random_range(0.0..ny as f64);
        let rmax = (nx.max(ny) as f64 / 2.0).max(2.0);
        let mut angles: Vec<f64> = (0..n)
            .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pts: Vec<[f64; 2]> = angles
            .iter()
            .map(|&t| {
                let r = rng.random_range(0.5..rmax);
                [
                    half_grid(rng, cx + r * t.cos() - 0.25, cx + r * t.cos() + 0.25),
                    half_grid(rng, cy + r * t.sin() - 0.25, cy + r * t.sin() + 0.25),
                ]
            })
            .collect();
        if oracle_is_simple(&pts) {
            return pts;
        }
    }
}

/// Random points untangled by 2-opt moves into a (usually non-star)
/// simple polygon.
pub fn two_opt_polygon(rng: &mut StdRng, nx: usize, ny: usize) -> Vec<[f64; 2]> {
    'outer: loop {
        let n = rng.random_range(4..=12);
        let mut pts: Vec<[f64; 2]> = (0..n)
            .map(|_| {
                [
                    half_grid(rng, -1.0, nx as f64 + 1.0),
                    half_grid(rng, -1.0, ny as f64 + 1.0),
                ]
            })
            .collect();
        for _ in 0..500 {
            let mut changed = false;
            'search: for e in 0..n {
                for f in e + 2..n {
                    if e == 0 && f == n - 1 {
                        continue;
                    }
                    let (a, b) = (pts[e], pts[(e + 1) % n]);
                    let (c, d) = (pts[f], pts[(f + 1) % n]);
                    if segments_meet(a, b, c, d) {
                        pts[e + 1..=f].reverse();
                        changed = true;
                        break 'search;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if oracle_is_simple(&pts) {
            return pts;
        }
        continue 'outer;
    }
}

/// A random contour set on a grid no larger than `max`³.
pub fn random_set(rng: &mut StdRng, max: usize) -> ContourSet {
    let nx = rng.random_range(4..=max);
    let ny = rng.random_range(4..=max);
    let nz = rng.random_range(1..=max);
    let geometry = VolumeGeometry::identity([nx, ny, nz]).unwrap();
    let count = rng.random_range(1..=3);
    let contours = (0..count).map(|_| {
        let pts = if rng.random_bool(0.5) {
            star_polygon(rng, nx, ny)
        } else {
            two_opt_polygon(rng, nx, ny)
        };
        Contour::new(rng.random_range(0..nz), pts).unwrap()
    });
    ContourSet::from_contours(geometry, contours.collect::<Vec<_>>()).unwrap()
}

/// Exhaustive directed-distance Hausdorff over two point lists.
pub fn oracle_hausdorff(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let directed = |x: &[[f64; 3]], y: &[[f64; 3]]| {
        x.iter()
            .map(|p| {
                y.iter()
                    .map(|q| {
                        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2))
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

/// Boundary voxels by counting foreground 6-neighbors inside the grid.
pub fn oracle_boundary(mask: &Mask) -> Vec<[usize; 3]> {
    let [nx, ny, nz] = mask.geometry().sizes();
    let on = |i: i64, j: i64, k: i64| {
        i >= 0
            && j >= 0
            && k >= 0
            && (i as usize) < nx
            && (j as usize) < ny
            && (k as usize) < nz
            && mask.voxels()[i as usize + nx * (j as usize + ny * k as usize)] != 0
    };
    let mut out = Vec::new();
    for k in 0..nz as i64 {
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                if !on(i, j, k) {
                    continue;
                }
                let filled = [
                    (1, 0, 0),
                    (-1, 0, 0),
                    (0, 1, 0),
                    (0, -1, 0),
                    (0, 0, 1),
                    (0, 0, -1),
                ]
                .iter()
                .filter(|(a, b, c)| on(i + a, j + b, k + c))
                .count();
                if filled < 6 {
                    out.push([i as usize, j as usize, k as usize]);
                }
            }
        }
    }
    out
}

/// Random mask with a few filled boxes.
pub fn random_mask(rng: &mut StdRng, geometry: &VolumeGeometry) -> Mask {
    let [nx, ny, nz] = geometry.sizes();
    let mut m = Mask::empty(geometry.clone(), 1).unwrap();
    for _ in 0..rng.random_range(1..=3) {
        let lo = [
            rng.random_range(0..nx),
            rng.random_range(0..ny),
            rng.random_range(0..nz),
        ];
        let hi = [
            rng.random_range(lo[0]..nx) + 1,
            rng.random_range(lo[1]..ny) + 1,
            rng.random_range(lo[2]..nz) + 1,
        ];
        for k in lo[2]..hi[2] {
            for j in lo[1]..hi[1] {
                for i in lo[0]..hi[0] {
                    m.set(i, j, k, true);
                }
            }
        }
    }
    // sprinkle isolated voxels
    for _ in 0..rng.random_range(0..5) {
        m.set(
            rng.random_range(0..nx),
            rng.random_range(0..ny),
            rng.random_range(0..nz),
            true,
        );
    }
    m
}
