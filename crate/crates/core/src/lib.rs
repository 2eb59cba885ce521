//! segstudio: manual segmentation toolkit.
//!
//! Contours drawn slice by slice in index space are exchanged as legacy VTK
//! polydata, filled into binary masks on the source volume's grid, written
//! as NRRD, and compared with Dice and Hausdorff metrics.
//!
//! ```
//! use segstudio::{Contour, ContourSet, NoProgress, RasterOptions, VolumeGeometry, rasterize};
//!
//! let grid = VolumeGeometry::identity([20, 20, 10]).unwrap();
//! let square = Contour::new(5, vec![[2.0, 2.0], [12.0, 2.0], [12.0, 12.0], [2.0, 12.0]]).unwrap();
//! let set = ContourSet::from_contours(grid, [square]).unwrap();
//! let mask = rasterize(&set, &NoProgress, &RasterOptions::default()).unwrap();
//! assert_eq!(mask.count(), 121);
//! ```

pub mod contour;
pub mod error;
pub mod geometry;
pub mod meta;
pub mod metrics;
pub mod nrrd;
pub mod pipeline;
pub mod polydata;
pub mod raster;
pub mod triangulate;

pub use contour::{Contour, ContourSet};
pub use error::{Error, GeometryError, MetricsError, NrrdError, PolyDataError, RasterError};
pub use geometry::{Basis, Mask, ScalarType, Volume, VolumeGeometry, VoxelData};
pub use meta::{extract_meta, parse_meta_json, write_meta_json, MetaDescriptor};
pub use metrics::{
    boundary_voxels, build_report, dice, hausdorff, render_report, MetricReport, ReportFormat,
};
pub use nrrd::{parse_nrrd, read_nrrd, write_nrrd, Encoding};
pub use polydata::{
    contours_from_polydata, parse_polydata, read_contours, write_polydata, CoordinateMode, PolyData,
};
pub use raster::{
    build_blank_volume, compute_bounding_box, point_in_polygon, rasterize, BoundingBox, NoProgress,
    ProgressSink, RasterOptions,
};
pub use triangulate::{triangulate, Triangle2D};
