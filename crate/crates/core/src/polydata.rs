//! Legacy ASCII VTK polydata for contour interchange.
//!
//! Files look like:
//!
//! ```text
//! # vtk DataFile Version 3.0
//! segstudio contours mode=index_space
//! ASCII
//! DATASET POLYDATA
//! POINTS 3 float
//! 0 0 0
//! 4 0 0
//! 0 4 0
//! POLYGONS 1 4
//! 3 0 1 2
//! ```
//!
//! The title line records whether the points are index coordinates
//! `(i, j, k)` or world millimetres.

use std::fmt::Write as _;

use crate::contour::{Contour, ContourSet};
use crate::error::PolyDataError;
use crate::geometry::VolumeGeometry;

/// Coordinate frame of the points in a contour file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoordinateMode {
    #[default]
    IndexSpace,
    WorldSpace,
}

impl CoordinateMode {
    pub fn name(self) -> &'static str {
        match self {
            CoordinateMode::IndexSpace => "index_space",
            CoordinateMode::WorldSpace => "world_space",
        }
    }
}

impl std::str::FromStr for CoordinateMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "index_space" | "index" => Ok(CoordinateMode::IndexSpace),
            "world_space" | "world" => Ok(CoordinateMode::WorldSpace),
            other => Err(format!("unknown coordinate mode {other:?}")),
        }
    }
}

/// Flat point list plus polygon connectivity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PolyData {
    pub points: Vec<[f64; 3]>,
    pub polygons: Vec<Vec<usize>>,
    /// Mode recorded in the file title, when present.
    pub mode: Option<CoordinateMode>,
}

impl PolyData {
    fn validate(&self) -> Result<(), PolyDataError> {
        for (n, poly) in self.polygons.iter().enumerate() {
            if poly.len() < 3 {
                return Err(PolyDataError::Malformed(format!(
                    "polygon {n} has {} vertices, need at least 3",
                    poly.len()
                )));
            }
            if let Some(&bad) = poly.iter().find(|&&idx| idx >= self.points.len()) {
                return Err(PolyDataError::Malformed(format!(
                    "polygon {n} references point {bad} of {}",
                    self.points.len()
                )));
            }
        }
        Ok(())
    }
}

/// Flatten contours into polydata, transforming through the set's grid in
/// world mode.
pub fn contours_to_polydata(set: &ContourSet, mode: CoordinateMode) -> PolyData {
    let geometry = set.geometry();
    let mut points = Vec::new();
    let mut polygons = Vec::with_capacity(set.len());
    for contour in set.contours() {
        let k = contour.slice() as f64;
        let start = points.len();
        points.extend(contour.points().iter().map(|&[i, j]| match mode {
            CoordinateMode::IndexSpace => [i, j, k],
            CoordinateMode::WorldSpace => geometry.index_to_world([i, j, k]),
        }));
        polygons.push((start..points.len()).collect());
    }
    PolyData {
        points,
        polygons,
        mode: Some(mode),
    }
}

/// Render a contour set as a legacy ASCII VTK file.
pub fn write_polydata(set: &ContourSet, mode: CoordinateMode) -> String {
    write_vtk(&contours_to_polydata(set, mode), mode)
}

/// Render polydata with a title naming `mode`.
pub fn write_vtk(data: &PolyData, mode: CoordinateMode) -> String {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(out, "segstudio contours mode={}", mode.name());
    out.push_str("ASCII\nDATASET POLYDATA\n");
    let _ = writeln!(out, "POINTS {} float", data.points.len());
    for p in &data.points {
        let _ = writeln!(out, "{} {} {}", coord(p[0]), coord(p[1]), coord(p[2]));
    }
    let total: usize = data.polygons.iter().map(|p| p.len() + 1).sum();
    let _ = writeln!(out, "POLYGONS {} {}", data.polygons.len(), total);
    for poly in &data.polygons {
        out.push_str(&poly.len().to_string());
        for idx in poly {
            let _ = write!(out, " {idx}");
        }
        out.push('\n');
    }
    out
}

/// Significant digits kept for point coordinates.
pub const COORD_DIGITS: usize = 9;

// Round to COORD_DIGITS significant digits, then print the shortest form.
fn coord(x: f64) -> String {
    let rounded: f64 = format!("{:.*e}", COORD_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses");
    format!("{}", rounded + 0.0)
}

/// Parse a legacy ASCII VTK polydata file.
pub fn parse_polydata(text: &str) -> Result<PolyData, PolyDataError> {
    let malformed = |m: String| PolyDataError::Malformed(m);
    let mut lines = text.lines();

    let version = lines.next().unwrap_or_default();
    if !version.trim_start().starts_with("# vtk DataFile") {
        return Err(malformed("missing `# vtk DataFile` version line".into()));
    }
    let title = lines.next().unwrap_or_default();
    let mode = title
        .split_whitespace()
        .find_map(|w| w.strip_prefix("mode="))
        .and_then(|m| m.parse().ok());

    let format = lines.next().unwrap_or_default().trim();
    if !format.eq_ignore_ascii_case("ASCII") {
        return Err(malformed(format!(
            "only ASCII files are supported, got {format:?}"
        )));
    }

    let body: String = lines.collect::<Vec<_>>().join("\n");
    let mut tokens = body.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| malformed(format!("unexpected end of file, expected {what}")))
    };

    let dataset = next("DATASET")?;
    let kind = next("dataset type")?;
    if !dataset.eq_ignore_ascii_case("DATASET") || !kind.eq_ignore_ascii_case("POLYDATA") {
        return Err(malformed(format!(
            "expected `DATASET POLYDATA`, got `{dataset} {kind}`"
        )));
    }

    let mut data = PolyData {
        mode,
        ..PolyData::default()
    };
    let mut seen_points = false;
    let mut seen_polygons = false;
    while let Ok(keyword) = next("section") {
        match keyword.to_ascii_uppercase().as_str() {
            "POINTS" if !seen_points => {
                seen_points = true;
                let n: usize = parse_token(next("point count")?, "point count")?;
                let _dtype = next("point type")?;
                data.points.reserve(n.min(1 << 20));
                for _ in 0..n {
                    let mut p = [0.0; 3];
                    for c in &mut p {
                        *c = parse_token(next("coordinate")?, "coordinate")?;
                    }
                    data.points.push(p);
                }
            }
            "POLYGONS" if !seen_polygons => {
                seen_polygons = true;
                let m: usize = parse_token(next("polygon count")?, "polygon count")?;
                let size: usize = parse_token(next("polygon size")?, "polygon size")?;
                let mut consumed = 0usize;
                for _ in 0..m {
                    let count: usize = parse_token(next("vertex count")?, "vertex count")?;
                    consumed += count + 1;
                    if consumed > size {
                        return Err(malformed(format!(
                            "POLYGONS declares {size} integers but entries need more"
                        )));
                    }
                    let poly = (0..count)
                        .map(|_| parse_token(next("point index")?, "point index"))
                        .collect::<Result<Vec<usize>, _>>()?;
                    data.polygons.push(poly);
                }
                if consumed != size {
                    return Err(malformed(format!(
                        "POLYGONS declares {size} integers, entries hold {consumed}"
                    )));
                }
            }
            other => {
                return Err(malformed(format!(
                    "unsupported or repeated section {other}"
                )))
            }
        }
    }
    if !seen_points {
        return Err(malformed("no POINTS section".into()));
    }
    data.validate()?;
    Ok(data)
}

fn parse_token<T: std::str::FromStr>(tok: &str, what: &str) -> Result<T, PolyDataError> {
    tok.parse()
        .map_err(|_| PolyDataError::Malformed(format!("bad {what} {tok:?}")))
}

/// Half-width of the slab a polygon's `k` coordinates must stay within.
pub const SLICE_TOLERANCE: f64 = 0.5;

/// Rebuild index-space contours from polydata.
///
/// World-space points are mapped back through `geometry`. Every polygon must
/// sit on one axial slice: each point's `k` is within 0.5 of the rounded
/// mean `k`, which becomes the contour's slice.
pub fn contours_from_polydata(
    data: &PolyData,
    geometry: &VolumeGeometry,
    mode: CoordinateMode,
) -> Result<ContourSet, PolyDataError> {
    data.validate()?;
    let depth = geometry.sizes()[2];
    let mut set = ContourSet::new(geometry.clone());
    for (n, poly) in data.polygons.iter().enumerate() {
        let pts: Vec<[f64; 3]> = poly
            .iter()
            .map(|&idx| {
                let p = data.points[idx];
                match mode {
                    CoordinateMode::IndexSpace => p,
                    CoordinateMode::WorldSpace => geometry.world_to_index(p),
                }
            })
            .collect();
        let mean_k = pts.iter().map(|p| p[2]).sum::<f64>() / pts.len() as f64;
        let slice = mean_k.round();
        let deviation = pts.iter().map(|p| (p[2] - slice).abs()).fold(0.0, f64::max);
        if deviation.is_nan() || deviation > SLICE_TOLERANCE {
            return Err(PolyDataError::NotPlanar {
                polygon: n,
                deviation,
            });
        }
        if slice < 0.0 || slice >= depth as f64 {
            return Err(PolyDataError::OutOfGrid {
                polygon: n,
                slice: slice as i64,
                depth,
            });
        }
        let contour = Contour::new(slice as usize, pts.iter().map(|p| [p[0], p[1]]).collect())?;
        set.push(contour)?;
    }
    Ok(set)
}

/// Parse a contour file and normalize it to index space, honoring the mode
/// recorded in its title (index space when absent).
pub fn read_contours(text: &str, geometry: &VolumeGeometry) -> Result<ContourSet, PolyDataError> {
    let data = parse_polydata(text)?;
    let mode = data.mode.unwrap_or_default();
    contours_from_polydata(&data, geometry, mode)
}
