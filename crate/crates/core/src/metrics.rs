//! Overlap and surface-distance comparison of two masks.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::MetricsError;
use crate::geometry::Mask;

/// Origin and directions may differ by this much between comparable masks.
pub const GEOMETRY_TOLERANCE: f64 = 1e-6;

pub const WARN_BASIS_LABELS: &str = "masks carry different basis labels; compared as the same grid";

fn check_geometry(a: &Mask, b: &Mask) -> Result<(), MetricsError> {
    let (ga, gb) = (a.geometry(), b.geometry());
    // basis is a labeling of the same numbers, only compare the grid
    let same = ga.sizes() == gb.sizes()
        && ga
            .origin()
            .iter()
            .zip(gb.origin())
            .all(|(x, y)| (x - y).abs() <= GEOMETRY_TOLERANCE)
        && ga
            .directions()
            .iter()
            .flatten()
            .zip(gb.directions().iter().flatten())
            .all(|(x, y)| (x - y).abs() <= GEOMETRY_TOLERANCE);
    if same {
        Ok(())
    } else {
        Err(MetricsError::GeometryMismatch)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlapCounts {
    pub a: usize,
    pub b: usize,
    pub intersection: usize,
}

impl OverlapCounts {
    /// The case where dice is defined rather than computed.
    pub fn both_empty(&self) -> bool {
        self.a + self.b == 0
    }
}

pub fn overlap_counts(a: &Mask, b: &Mask) -> Result<OverlapCounts, MetricsError> {
    check_geometry(a, b)?;
    let mut counts = OverlapCounts {
        a: 0,
        b: 0,
        intersection: 0,
    };
    for (&x, &y) in a.voxels().iter().zip(b.voxels()) {
        let (x, y) = (x != 0, y != 0);
        counts.a += usize::from(x);
        counts.b += usize::from(y);
        counts.intersection += usize::from(x && y);
    }
    Ok(counts)
}

fn dice_from(c: OverlapCounts) -> f64 {
    if c.both_empty() {
        1.0
    } else {
        2.0 * c.intersection as f64 / (c.a + c.b) as f64
    }
}

/// `2|A∩B| / (|A|+|B|)`; two empty masks score 1.0, flagged by
/// [`OverlapCounts::both_empty`].
pub fn dice(a: &Mask, b: &Mask) -> Result<f64, MetricsError> {
    overlap_counts(a, b).map(dice_from)
}

const NEIGHBORS: [[i64; 3]; 6] = [
    [-1, 0, 0],
    [1, 0, 0],
    [0, -1, 0],
    [0, 1, 0],
    [0, 0, -1],
    [0, 0, 1],
];

/// Foreground voxels with a background or out-of-grid 6-neighbor.
pub fn boundary_voxels(mask: &Mask) -> Vec<[usize; 3]> {
    let g = mask.geometry();
    mask.foreground_indices()
        .into_iter()
        .filter(|&[i, j, k]| {
            NEIGHBORS.iter().any(|d| {
                let (ni, nj, nk) = (i as i64 + d[0], j as i64 + d[1], k as i64 + d[2]);
                !g.contains_index(ni, nj, nk) || !mask.get(ni as usize, nj as usize, nk as usize)
            })
        })
        .collect()
}

fn boundary_points(mask: &Mask) -> Vec<[f64; 3]> {
    let g = mask.geometry();
    boundary_voxels(mask)
        .into_iter()
        .map(|v| g.index_to_world(v.map(|x| x as f64)))
        .collect()
}

#[inline]
fn dist2(p: &[f64; 3], q: &[f64; 3]) -> f64 {
    let (dx, dy, dz) = (p[0] - q[0], p[1] - q[1], p[2] - q[2]);
    dx * dx + dy * dy + dz * dz
}

/// Directed squared distance `max_x min_y |x - y|²`.
///
/// Stops scanning `to` as soon as a point closer than the running maximum
/// is found, since that `x` can no longer raise the maximum. The result is
/// the same value an exhaustive double loop produces.
fn directed_sq(from: &[[f64; 3]], to: &[[f64; 3]]) -> f64 {
    let mut worst = 0.0f64;
    for p in from {
        let mut nearest = f64::INFINITY;
        for q in to {
            let d = dist2(p, q);
            if d < nearest {
                nearest = d;
                if nearest <= worst {
                    break;
                }
            }
        }
        if nearest > worst {
            worst = nearest;
        }
    }
    worst
}

/// Symmetric Hausdorff distance in millimetres between the boundary voxel
/// centers of two masks.
pub fn hausdorff(a: &Mask, b: &Mask) -> Result<f64, MetricsError> {
    check_geometry(a, b)?;
    let pa = boundary_points(a);
    let pb = boundary_points(b);
    if pa.is_empty() || pb.is_empty() {
        return Err(MetricsError::EmptyMask);
    }
    let (ab, ba) = rayon::join(|| directed_sq(&pa, &pb), || directed_sq(&pb, &pa));
    Ok(ab.max(ba).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub sizes: [usize; 3],
    pub spacing_mm: [f64; 3],
    pub origin: [f64; 3],
}

/// Dice and Hausdorff for one pair of masks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub dice: f64,
    pub hausdorff_mm: f64,
    pub voxels_a: usize,
    pub voxels_b: usize,
    pub voxels_intersection: usize,
    pub warnings: Vec<String>,
    pub geometry: GeometrySummary,
    /// Seconds since the Unix epoch.
    pub computed_at: u64,
}

pub fn build_report(a: &Mask, b: &Mask) -> Result<MetricReport, MetricsError> {
    let counts = overlap_counts(a, b)?;
    let mut warnings = Vec::new();
    if a.geometry().basis() != b.geometry().basis() {
        warnings.push(WARN_BASIS_LABELS.to_string());
    }
    let hausdorff_mm = hausdorff(a, b)?;
    let g = a.geometry();
    Ok(MetricReport {
        dice: dice_from(counts),
        hausdorff_mm,
        voxels_a: counts.a,
        voxels_b: counts.b,
        voxels_intersection: counts.intersection,
        warnings,
        geometry: GeometrySummary {
            sizes: g.sizes(),
            spacing_mm: g.spacing(),
            origin: g.origin(),
        },
        computed_at: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Text,
}

pub fn render_report(report: &MetricReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            serde_json::to_string_pretty(report).expect("report is always serializable")
        }
        ReportFormat::Text => {
            let mut out = format!(
                "dice {:.4}\nhausdorff_mm {:.4}\nvoxels_a {}\nvoxels_b {}\nvoxels_intersection {}\n",
                report.dice,
                report.hausdorff_mm,
                report.voxels_a,
                report.voxels_b,
                report.voxels_intersection
            );
            for w in &report.warnings {
                out.push_str(&format!("warning {w}\n"));
            }
            out
        }
    }
}

/// JSON error body for a failed comparison.
pub fn render_error(err: &MetricsError) -> String {
    serde_json::json!({"error": {"code": err.code(), "message": err.to_string()}}).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Basis, VolumeGeometry};

    fn mask_with(sizes: [usize; 3], on: &[[usize; 3]]) -> Mask {
        let mut m = Mask::empty(VolumeGeometry::identity(sizes).unwrap(), 1).unwrap();
        for &[i, j, k] in on {
            m.set(i, j, k, true);
        }
        m
    }

    fn boxed(sizes: [usize; 3], lo: [usize; 3], hi: [usize; 3]) -> Mask {
        let mut on = Vec::new();
        for k in lo[2]..hi[2] {
            for j in lo[1]..hi[1] {
                for i in lo[0]..hi[0] {
                    on.push([i, j, k]);
                }
            }
        }
        mask_with(sizes, &on)
    }

    #[test]
    fn dice_identity_and_disjoint() {
        let a = boxed([8, 8, 8], [1, 1, 1], [4, 4, 4]);
        assert_eq!(dice(&a, &a).unwrap(), 1.0);
        let b = boxed([8, 8, 8], [5, 5, 5], [7, 7, 7]);
        assert_eq!(dice(&a, &b).unwrap(), 0.0);
    }

    #[test]
    fn dice_half_overlap() {
        // two 4x4x4 boxes on a 12x4x4 grid shifted by 2 along i
        let a = boxed([12, 4, 4], [0, 0, 0], [4, 4, 4]);
        let b = boxed([12, 4, 4], [2, 0, 0], [6, 4, 4]);
        let c = overlap_counts(&a, &b).unwrap();
        assert_eq!((c.a, c.b, c.intersection), (64, 64, 32));
        assert_eq!(dice(&a, &b).unwrap(), 0.5);
    }

    #[test]
    fn both_empty_is_one_with_warning() {
        let e = mask_with([4, 4, 4], &[]);
        assert_eq!(dice(&e, &e).unwrap(), 1.0);
        assert!(overlap_counts(&e, &e).unwrap().both_empty());
        let full = mask_with([4, 4, 4], &[[0, 0, 0]]);
        assert_eq!(dice(&e, &full).unwrap(), 0.0);
        assert_eq!(build_report(&e, &e).unwrap_err(), MetricsError::EmptyMask);
    }

    #[test]
    fn basis_label_difference_is_a_warning() {
        let a = mask_with([4, 4, 4], &[[1, 1, 1]]);
        let lps = VolumeGeometry::new(
            [4, 4, 4],
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            [0.0; 3],
            Basis::Lps,
        )
        .unwrap();
        let mut b = Mask::empty(lps, 1).unwrap();
        b.set(1, 1, 1, true);
        let report = build_report(&a, &b).unwrap();
        assert_eq!(report.dice, 1.0);
        assert_eq!(report.warnings, vec![WARN_BASIS_LABELS.to_string()]);
        assert!(build_report(&a, &a).unwrap().warnings.is_empty());
    }

    #[test]
    fn geometry_mismatch() {
        let a = mask_with([4, 4, 4], &[[0, 0, 0]]);
        let b = mask_with([4, 4, 5], &[[0, 0, 0]]);
        assert_eq!(dice(&a, &b).unwrap_err(), MetricsError::GeometryMismatch);
        assert_eq!(
            hausdorff(&a, &b).unwrap_err(),
            MetricsError::GeometryMismatch
        );
        let err = build_report(&a, &b).unwrap_err();
        assert!(render_error(&err).contains("\"code\":\"GEOMETRY_MISMATCH\""));
    }

    #[test]
    fn boundary_cases() {
        let single = mask_with([5, 5, 5], &[[2, 2, 2]]);
        assert_eq!(boundary_voxels(&single), vec![[2, 2, 2]]);
        let block = boxed([5, 5, 5], [1, 1, 1], [4, 4, 4]);
        let boundary = boundary_voxels(&block);
        assert_eq!(boundary.len(), 26);
        assert!(!boundary.contains(&[2, 2, 2]));
        assert!(boundary_voxels(&mask_with([3, 3, 3], &[])).is_empty());
        // a block touching the grid edge is boundary there too
        let edge = boxed([3, 3, 3], [0, 0, 0], [3, 3, 3]);
        assert_eq!(boundary_voxels(&edge).len(), 26);
    }

    #[test]
    fn hausdorff_three_four_five() {
        let a = mask_with([8, 8, 1], &[[0, 0, 0]]);
        let b = mask_with([8, 8, 1], &[[3, 4, 0]]);
        assert_eq!(hausdorff(&a, &b).unwrap(), 5.0);
        assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);

        let g = VolumeGeometry::with_spacing([8, 8, 1], [2.0; 3], [0.0; 3], Basis::Ras).unwrap();
        let mut a2 = Mask::empty(g.clone(), 1).unwrap();
        let mut b2 = Mask::empty(g, 1).unwrap();
        a2.set(0, 0, 0, true);
        b2.set(3, 4, 0, true);
        assert_eq!(hausdorff(&a2, &b2).unwrap(), 10.0);
    }

    #[test]
    fn hausdorff_needs_nonempty_masks() {
        let a = mask_with([4, 4, 4], &[[1, 1, 1]]);
        let e = mask_with([4, 4, 4], &[]);
        assert_eq!(hausdorff(&a, &e).unwrap_err(), MetricsError::EmptyMask);
    }

    #[test]
    fn report_rendering() {
        let a = boxed([12, 4, 4], [0, 0, 0], [4, 4, 4]);
        let b = boxed([12, 4, 4], [2, 0, 0], [6, 4, 4]);
        let r = build_report(&a, &b).unwrap();
        let json = render_report(&r, ReportFormat::Json);
        assert!(json.contains("\"dice\": 0.5"), "{json}");
        assert!(json.contains("\"voxels_intersection\": 32"));
        let text = render_report(&r, ReportFormat::Text);
        assert!(
            text.starts_with("dice 0.5000\nhausdorff_mm 2.0000\n"),
            "{text}"
        );

        let same = build_report(&a, &a).unwrap();
        let json = render_report(&same, ReportFormat::Json);
        assert!(json.contains("\"dice\": 1.0") && json.contains("\"hausdorff_mm\": 0.0"));
    }
}
