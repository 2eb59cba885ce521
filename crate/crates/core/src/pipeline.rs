//! File-level entry points shared by the command line and the job service,
//! so both produce byte-identical outputs for identical inputs.

use crate::contour::ContourSet;
use crate::error::{Error, NrrdError};
use crate::geometry::Mask;
use crate::meta::{parse_meta_json, MetaDescriptor};
use crate::nrrd::{parse_nrrd, read_nrrd, write_nrrd, Encoding};
use crate::polydata::read_contours;
use crate::raster::{rasterize, ProgressSink, RasterOptions};

/// Parse a contour file against its metadata sidecar.
pub fn load_contours(
    vtk_text: &str,
    meta_json: &str,
) -> Result<(MetaDescriptor, ContourSet), Error> {
    let meta = parse_meta_json(meta_json)?;
    let geometry = meta.to_geometry()?;
    let set = read_contours(vtk_text, &geometry)?;
    Ok((meta, set))
}

/// Contours plus metadata to a filled mask.
pub fn mask_from_sources(
    vtk_text: &str,
    meta_json: &str,
    progress: &dyn ProgressSink,
    options: &RasterOptions,
) -> Result<Mask, Error> {
    let (_, set) = load_contours(vtk_text, meta_json)?;
    Ok(rasterize(&set, progress, options)?)
}

/// Encode a mask the way every front end ships it: gzip NRRD.
pub fn encode_mask(mask: &Mask) -> Vec<u8> {
    write_nrrd(&mask.to_volume(), Encoding::Gzip)
}

/// Reorient an NRRD volume to RAS and re-encode it.
pub fn convert_to_ras(bytes: &[u8], encoding: Encoding) -> Result<Vec<u8>, NrrdError> {
    let volume = parse_nrrd(bytes)?;
    Ok(write_nrrd(&volume.reorient_to_ras(), encoding))
}

/// Reorient to RAS, keeping the input file's encoding.
pub fn reorient_file(bytes: &[u8]) -> Result<Vec<u8>, NrrdError> {
    let doc = read_nrrd(bytes)?;
    Ok(write_nrrd(
        &doc.volume.reorient_to_ras(),
        doc.header.encoding,
    ))
}

/// Parse an NRRD file that should hold a label mask.
pub fn load_mask(bytes: &[u8]) -> Result<Mask, Error> {
    let volume = parse_nrrd(bytes)?;
    Ok(Mask::from_volume(volume)?)
}
