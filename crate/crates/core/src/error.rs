use thiserror::Error;

use crate::geometry::ScalarType;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("every axis needs at least one voxel, got sizes {0:?}")]
    EmptyAxis([usize; 3]),
    #[error("grid {0:?} exceeds the supported voxel count")]
    TooLarge([usize; 3]),
    #[error("direction matrix is singular (det = {0:e})")]
    Singular(f64),
    #[error("geometry contains non-finite values")]
    NonFinite,
    #[error("unknown anatomical basis {0:?}")]
    UnknownBasis(String),
    #[error("voxel buffer has {actual} elements, grid needs {expected}")]
    BufferLength { expected: usize, actual: usize },
    #[error("mask volumes must be uint8, got {}", .0.name())]
    NotAMask(ScalarType),
    #[error("foreground value must be nonzero")]
    ZeroForeground,
}

impl GeometryError {
    pub fn code(&self) -> &'static str {
        match self {
            GeometryError::Singular(_) => "SINGULAR_GEOMETRY",
            GeometryError::UnknownBasis(_) => "UNKNOWN_BASIS",
            GeometryError::NotAMask(_) => "NOT_A_MASK",
            _ => "INVALID_GEOMETRY",
        }
    }
}

#[derive(Debug, Error)]
pub enum NrrdError {
    #[error("missing NRRD magic line")]
    BadMagic,
    #[error("unsupported {field}: {value}")]
    UnsupportedField { field: &'static str, value: String },
    #[error("malformed header line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("required header field `{0}` is missing")]
    MissingField(&'static str),
    #[error("payload holds {actual} bytes, header implies {expected}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("gzip payload could not be decoded: {0}")]
    Decompress(#[source] std::io::Error),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl NrrdError {
    pub fn code(&self) -> &'static str {
        match self {
            NrrdError::BadMagic => "BAD_MAGIC",
            NrrdError::UnsupportedField { .. } => "UNSUPPORTED_FIELD",
            NrrdError::Malformed { .. } | NrrdError::MissingField(_) => "MALFORMED",
            NrrdError::SizeMismatch { .. } | NrrdError::Decompress(_) => "SIZE_MISMATCH",
            NrrdError::Geometry(GeometryError::UnknownBasis(_)) => "UNSUPPORTED_FIELD",
            NrrdError::Geometry(e) => e.code(),
        }
    }
}

#[derive(Debug, Error)]
pub enum PolyDataError {
    #[error("malformed VTK file: {0}")]
    Malformed(String),
    #[error("malformed metadata: {0}")]
    MalformedMeta(String),
    #[error("polygon {polygon} spans index slices (deviation {deviation:.3} > 0.5)")]
    NotPlanar { polygon: usize, deviation: f64 },
    #[error("polygon {polygon} lies on slice {slice}, outside 0..{depth}")]
    OutOfGrid {
        polygon: usize,
        slice: i64,
        depth: usize,
    },
    #[error("contour needs at least 3 distinct points, got {0}")]
    TooFewPoints(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl PolyDataError {
    pub fn code(&self) -> &'static str {
        match self {
            PolyDataError::Malformed(_) | PolyDataError::MalformedMeta(_) => "MALFORMED",
            PolyDataError::NotPlanar { .. } => "NOT_PLANAR",
            PolyDataError::OutOfGrid { .. } => "OUT_OF_GRID",
            PolyDataError::TooFewPoints(_) => "MALFORMED",
            PolyDataError::Geometry(e) => e.code(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("contour on slice {slice} is self-intersecting")]
    SelfIntersecting { slice: usize },
    #[error("contour slice {slice} is outside the grid depth {depth}")]
    OutOfGrid { slice: usize, depth: usize },
    #[error("contour set is empty")]
    EmptySet,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl RasterError {
    pub fn code(&self) -> &'static str {
        match self {
            RasterError::SelfIntersecting { .. } => "SELF_INTERSECTING",
            RasterError::OutOfGrid { .. } => "OUT_OF_GRID",
            RasterError::EmptySet => "EMPTY_SET",
            RasterError::Geometry(e) => e.code(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("masks live on different grids")]
    GeometryMismatch,
    #[error("hausdorff distance needs two nonempty masks")]
    EmptyMask,
}

impl MetricsError {
    pub fn code(&self) -> &'static str {
        match self {
            MetricsError::GeometryMismatch => "GEOMETRY_MISMATCH",
            MetricsError::EmptyMask => "EMPTY_MASK",
        }
    }
}

/// Any failure of the contour-to-mask pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Nrrd(#[from] NrrdError),
    #[error(transparent)]
    PolyData(#[from] PolyDataError),
    #[error(transparent)]
    Raster(#[from] RasterError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Geometry(e) => e.code(),
            Error::Nrrd(e) => e.code(),
            Error::PolyData(e) => e.code(),
            Error::Raster(e) => e.code(),
            Error::Metrics(e) => e.code(),
        }
    }
}
