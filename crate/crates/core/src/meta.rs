//! The grid descriptor uploaded alongside contours so a mask can be built
//! without the source voxels.
//!
//! JSON layout:
//!
//! ```json
//! {"sizes":[2,2,2],"space_origin":[0,0,0],
//!  "space_directions":[[1,0,0],[0,1,0],[0,0,1]],
//!  "space":"right-anterior-superior"}
//! ```
//!
//! Row `a` of `space_directions` is the world direction of index axis `a`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, PolyDataError};
use crate::geometry::{Basis, Volume, VolumeGeometry};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaDescriptor {
    pub sizes: [usize; 3],
    pub space_origin: [f64; 3],
    pub space_directions: [[f64; 3]; 3],
    pub space: String,
}

impl MetaDescriptor {
    pub fn from_geometry(geometry: &VolumeGeometry) -> Self {
        Self {
            sizes: geometry.sizes(),
            space_origin: geometry.origin(),
            space_directions: geometry.directions(),
            space: geometry.basis().space_name().to_string(),
        }
    }

    /// Validate and build the grid this descriptor names.
    pub fn to_geometry(&self) -> Result<VolumeGeometry, GeometryError> {
        let basis: Basis = self.space.parse()?;
        VolumeGeometry::new(self.sizes, self.space_directions, self.space_origin, basis)
    }
}

/// Grid descriptor of a loaded volume.
pub fn extract_meta(volume: &Volume) -> MetaDescriptor {
    MetaDescriptor::from_geometry(volume.geometry())
}

pub fn parse_meta_json(text: &str) -> Result<MetaDescriptor, PolyDataError> {
    let meta: MetaDescriptor =
        serde_json::from_str(text).map_err(|e| PolyDataError::MalformedMeta(e.to_string()))?;
    // catch zero sizes and singular directions at the boundary
    meta.to_geometry()?;
    Ok(meta)
}

pub fn write_meta_json(meta: &MetaDescriptor) -> String {
    serde_json::to_string(meta).expect("descriptor is always serializable")
}
