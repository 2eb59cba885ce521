//! Volume grid model: geometry, voxel storage and the index/world affine.
//!
//! Index space is continuous; voxel `(i, j, k)` has its center at the
//! integer index `(i, j, k)`. World coordinates are millimetres in the
//! anatomical frame named by [`Basis`].

use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};

use crate::error::GeometryError;

/// Smallest determinant magnitude accepted for the direction matrix.
pub const MIN_DETERMINANT: f64 = 1e-12;

/// Largest grid accepted, in voxels.
pub const MAX_VOXELS: usize = 1 << 31;

/// Anatomical frame the world coordinates are expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Ras,
    Lps,
}

impl Basis {
    /// The NRRD `space` string for this basis.
    pub fn space_name(self) -> &'static str {
        match self {
            Basis::Ras => "right-anterior-superior",
            Basis::Lps => "left-posterior-superior",
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Basis::Ras => "RAS",
            Basis::Lps => "LPS",
        }
    }
}

impl FromStr for Basis {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "right-anterior-superior" | "ras" => Ok(Basis::Ras),
            "left-posterior-superior" | "lps" => Ok(Basis::Lps),
            other => Err(GeometryError::UnknownBasis(other.to_string())),
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Grid size, orientation and position of a volume.
///
/// `directions[a]` is the world displacement (mm) of one step along index
/// axis `a`, so the column norms carry the voxel spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct VolumeGeometry {
    sizes: [usize; 3],
    directions: [[f64; 3]; 3],
    origin: [f64; 3],
    basis: Basis,
    inverse: Matrix3<f64>,
}

impl VolumeGeometry {
    pub fn new(
        sizes: [usize; 3],
        directions: [[f64; 3]; 3],
        origin: [f64; 3],
        basis: Basis,
    ) -> Result<Self, GeometryError> {
        if sizes.contains(&0) {
            return Err(GeometryError::EmptyAxis(sizes));
        }
        let count = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
        if count.is_none_or(|c| c > MAX_VOXELS) {
            return Err(GeometryError::TooLarge(sizes));
        }
        if directions
            .iter()
            .flatten()
            .chain(origin.iter())
            .any(|v| !v.is_finite())
        {
            return Err(GeometryError::NonFinite);
        }
        let matrix = direction_matrix(&directions);
        let det = matrix.determinant();
        if det.abs() <= MIN_DETERMINANT {
            return Err(GeometryError::Singular(det));
        }
        let inverse = matrix.try_inverse().ok_or(GeometryError::Singular(det))?;
        Ok(Self {
            sizes,
            directions,
            origin,
            basis,
            inverse,
        })
    }

    /// Axis-aligned geometry with the given spacing.
    pub fn with_spacing(
        sizes: [usize; 3],
        spacing: [f64; 3],
        origin: [f64; 3],
        basis: Basis,
    ) -> Result<Self, GeometryError> {
        let directions = [
            [spacing[0], 0.0, 0.0],
            [0.0, spacing[1], 0.0],
            [0.0, 0.0, spacing[2]],
        ];
        Self::new(sizes, directions, origin, basis)
    }

    /// Unit spacing, zero origin, RAS.
    pub fn identity(sizes: [usize; 3]) -> Result<Self, GeometryError> {
        Self::with_spacing(sizes, [1.0; 3], [0.0; 3], Basis::Ras)
    }

    pub fn sizes(&self) -> [usize; 3] {
        self.sizes
    }

    pub fn directions(&self) -> [[f64; 3]; 3] {
        self.directions
    }

    pub fn origin(&self) -> [f64; 3] {
        self.origin
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn voxel_count(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Voxel spacing along each index axis (norm of each direction).
    pub fn spacing(&self) -> [f64; 3] {
        self.directions
            .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
    }

    /// Linear buffer offset of an integer index, first axis fastest.
    #[inline]
    pub fn linear_index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.sizes[0] * (j + self.sizes[1] * k)
    }

    pub fn contains_index(&self, i: i64, j: i64, k: i64) -> bool {
        [i, j, k]
            .iter()
            .zip(self.sizes)
            .all(|(&v, s)| v >= 0 && (v as usize) < s)
    }

    /// `origin + directions · index`.
    pub fn index_to_world(&self, index: [f64; 3]) -> [f64; 3] {
        let d = &self.directions;
        let mut out = self.origin;
        for (axis, &t) in index.iter().enumerate() {
            for row in 0..3 {
                out[row] += d[axis][row] * t;
            }
        }
        out
    }

    /// Inverse of [`index_to_world`](Self::index_to_world).
    pub fn world_to_index(&self, world: [f64; 3]) -> [f64; 3] {
        let rel = Vector3::new(
            world[0] - self.origin[0],
            world[1] - self.origin[1],
            world[2] - self.origin[2],
        );
        let idx = self.inverse * rel;
        [idx[0], idx[1], idx[2]]
    }

    /// The same grid expressed in RAS coordinates.
    ///
    /// LPS to RAS negates the first two world components of the origin and
    /// of every direction column; index space is untouched.
    pub fn to_ras(&self) -> VolumeGeometry {
        match self.basis {
            Basis::Ras => self.clone(),
            Basis::Lps => {
                let flip = |v: [f64; 3]| [-v[0], -v[1], v[2]];
                let directions = self.directions.map(flip);
                let matrix = direction_matrix(&directions);
                VolumeGeometry {
                    sizes: self.sizes,
                    directions,
                    origin: flip(self.origin),
                    basis: Basis::Ras,
                    // flipping rows of an invertible matrix keeps it invertible
                    inverse: matrix.try_inverse().expect("flip preserves invertibility"),
                }
            }
        }
    }

    /// Same sizes exactly, origin and directions within `tol`, same basis.
    pub fn approx_eq(&self, other: &VolumeGeometry, tol: f64) -> bool {
        self.sizes == other.sizes
            && self.basis == other.basis
            && close(&self.origin, &other.origin, tol)
            && self
                .directions
                .iter()
                .zip(&other.directions)
                .all(|(a, b)| close(a, b, tol))
    }
}

fn close(a: &[f64; 3], b: &[f64; 3], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn direction_matrix(directions: &[[f64; 3]; 3]) -> Matrix3<f64> {
    // column j = direction of index axis j
    Matrix3::from_fn(|row, col| directions[col][row])
}

/// Scalar type of a voxel buffer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarType {
    U8,
    I16,
    U16,
    F32,
}

impl ScalarType {
    pub fn byte_size(self) -> usize {
        match self {
            ScalarType::U8 => 1,
            ScalarType::I16 | ScalarType::U16 => 2,
            ScalarType::F32 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ScalarType::U8 => "uint8",
            ScalarType::I16 => "int16",
            ScalarType::U16 => "uint16",
            ScalarType::F32 => "float32",
        }
    }
}

/// Typed voxel storage, first index axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub enum VoxelData {
    U8(Vec<u8>),
    I16(Vec<i16>),
    U16(Vec<u16>),
    F32(Vec<f32>),
}

impl VoxelData {
    pub fn zeros(scalar_type: ScalarType, len: usize) -> Self {
        match scalar_type {
            ScalarType::U8 => VoxelData::U8(vec![0; len]),
            ScalarType::I16 => VoxelData::I16(vec![0; len]),
            ScalarType::U16 => VoxelData::U16(vec![0; len]),
            ScalarType::F32 => VoxelData::F32(vec![0.0; len]),
        }
    }

    pub fn scalar_type(&self) -> ScalarType {
        match self {
            VoxelData::U8(_) => ScalarType::U8,
            VoxelData::I16(_) => ScalarType::I16,
            VoxelData::U16(_) => ScalarType::U16,
            VoxelData::F32(_) => ScalarType::F32,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            VoxelData::U8(v) => v.len(),
            VoxelData::I16(v) => v.len(),
            VoxelData::U16(v) => v.len(),
            VoxelData::F32(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Little-endian byte image of the buffer.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        match self {
            VoxelData::U8(v) => v.clone(),
            VoxelData::I16(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
            VoxelData::U16(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
            VoxelData::F32(v) => v.iter().flat_map(|x| x.to_le_bytes()).collect(),
        }
    }

    /// Decode a buffer whose length has already been checked.
    pub(crate) fn from_bytes(scalar_type: ScalarType, bytes: &[u8], big_endian: bool) -> Self {
        macro_rules! decode {
            ($t:ty, $n:expr) => {
                bytes
                    .chunks_exact($n)
                    .map(|c| {
                        let arr: [u8; $n] = c.try_into().unwrap();
                        if big_endian {
                            <$t>::from_be_bytes(arr)
                        } else {
                            <$t>::from_le_bytes(arr)
                        }
                    })
                    .collect()
            };
        }
        match scalar_type {
            ScalarType::U8 => VoxelData::U8(bytes.to_vec()),
            ScalarType::I16 => VoxelData::I16(decode!(i16, 2)),
            ScalarType::U16 => VoxelData::U16(decode!(u16, 2)),
            ScalarType::F32 => VoxelData::F32(decode!(f32, 4)),
        }
    }

    /// Whether the voxel at `idx` is nonzero.
    pub fn is_nonzero(&self, idx: usize) -> bool {
        match self {
            VoxelData::U8(v) => v[idx] != 0,
            VoxelData::I16(v) => v[idx] != 0,
            VoxelData::U16(v) => v[idx] != 0,
            VoxelData::F32(v) => v[idx] != 0.0,
        }
    }
}

/// Geometry plus a voxel buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Volume {
    geometry: VolumeGeometry,
    data: VoxelData,
}

impl Volume {
    pub fn new(geometry: VolumeGeometry, data: VoxelData) -> Result<Self, GeometryError> {
        let expected = geometry.voxel_count();
        if data.len() != expected {
            return Err(GeometryError::BufferLength {
                expected,
                actual: data.len(),
            });
        }
        Ok(Self { geometry, data })
    }

    pub fn zeros(geometry: VolumeGeometry, scalar_type: ScalarType) -> Self {
        let data = VoxelData::zeros(scalar_type, geometry.voxel_count());
        Self { geometry, data }
    }

    pub fn geometry(&self) -> &VolumeGeometry {
        &self.geometry
    }

    pub fn data(&self) -> &VoxelData {
        &self.data
    }

    pub fn scalar_type(&self) -> ScalarType {
        self.data.scalar_type()
    }

    pub fn into_parts(self) -> (VolumeGeometry, VoxelData) {
        (self.geometry, self.data)
    }

    /// Express the volume in RAS. The voxel buffer is carried over untouched.
    pub fn reorient_to_ras(&self) -> Volume {
        Volume {
            geometry: self.geometry.to_ras(),
            data: self.data.clone(),
        }
    }
}

/// Binary `uint8` label volume: every voxel is `0` or `foreground`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    geometry: VolumeGeometry,
    voxels: Vec<u8>,
    foreground: u8,
}

impl Mask {
    pub const DEFAULT_FOREGROUND: u8 = 1;

    /// All-background mask on `geometry`.
    pub fn empty(geometry: VolumeGeometry, foreground: u8) -> Result<Self, GeometryError> {
        if foreground == 0 {
            return Err(GeometryError::ZeroForeground);
        }
        let voxels = vec![0; geometry.voxel_count()];
        Ok(Self {
            geometry,
            voxels,
            foreground,
        })
    }

    /// Binarize a `uint8` volume. Any nonzero voxel becomes foreground; the
    /// foreground value is the largest label present (1 when empty).
    pub fn from_volume(volume: Volume) -> Result<Self, GeometryError> {
        let (geometry, data) = volume.into_parts();
        let VoxelData::U8(mut voxels) = data else {
            return Err(GeometryError::NotAMask(data.scalar_type()));
        };
        let foreground = voxels.iter().copied().max().filter(|&m| m > 0).unwrap_or(1);
        for v in voxels.iter_mut().filter(|v| **v != 0) {
            *v = foreground;
        }
        Ok(Self {
            geometry,
            voxels,
            foreground,
        })
    }

    pub fn geometry(&self) -> &VolumeGeometry {
        &self.geometry
    }

    pub fn foreground(&self) -> u8 {
        self.foreground
    }

    pub fn voxels(&self) -> &[u8] {
        &self.voxels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> bool {
        self.voxels[self.geometry.linear_index(i, j, k)] != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, on: bool) {
        let idx = self.geometry.linear_index(i, j, k);
        self.voxels[idx] = if on { self.foreground } else { 0 };
    }

    pub fn count(&self) -> usize {
        self.voxels.iter().filter(|&&v| v != 0).count()
    }

    /// Indices of every foreground voxel in buffer order.
    pub fn foreground_indices(&self) -> Vec<[usize; 3]> {
        let [nx, ny, _] = self.geometry.sizes();
        self.voxels
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(n, _)| [n % nx, (n / nx) % ny, n / (nx * ny)])
            .collect()
    }

    /// Mutable view of one axial slice.
    pub(crate) fn slices_mut(&mut self) -> std::slice::ChunksExactMut<'_, u8> {
        let [nx, ny, _] = self.geometry.sizes();
        self.voxels.chunks_exact_mut(nx * ny)
    }

    pub fn to_volume(&self) -> Volume {
        Volume {
            geometry: self.geometry.clone(),
            data: VoxelData::U8(self.voxels.clone()),
        }
    }

    pub fn into_volume(self) -> Volume {
        Volume {
            geometry: self.geometry,
            data: VoxelData::U8(self.voxels),
        }
    }
}
