//! NRRD volume files with attached headers.
//!
//! Reading accepts magic versions 1 through 5, `raw` and `gzip` encodings,
//! and the `uchar`/`short`/`ushort`/`float` scalar types. Writing always
//! emits `NRRD0004` with a fixed field order so output is byte-reproducible.

use std::io::{Read, Write};

use flate2::read::MultiGzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::NrrdError;
use crate::geometry::{Basis, ScalarType, Volume, VolumeGeometry, VoxelData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    Raw,
    #[default]
    Gzip,
}

impl Encoding {
    pub fn name(self) -> &'static str {
        match self {
            Encoding::Raw => "raw",
            Encoding::Gzip => "gzip",
        }
    }
}

impl std::str::FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "raw" => Ok(Encoding::Raw),
            "gzip" | "gz" => Ok(Encoding::Gzip),
            other => Err(format!("unknown encoding {other:?} (expected raw or gzip)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endian {
    Little,
    Big,
}

/// The header fields the volume model depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct NrrdHeader {
    pub version: u8,
    pub dimension: usize,
    pub type_name: String,
    pub scalar_type: ScalarType,
    pub sizes: [usize; 3],
    pub space: Basis,
    /// One row per index axis.
    pub space_directions: [[f64; 3]; 3],
    pub space_origin: [f64; 3],
    pub encoding: Encoding,
    pub endian: Endian,
}

/// A parsed file: header, decoded volume and notes about ignored fields.
#[derive(Debug, Clone)]
pub struct NrrdDocument {
    pub header: NrrdHeader,
    pub volume: Volume,
    pub diagnostics: Vec<String>,
}

/// Parse an attached-header NRRD file into a [`Volume`].
pub fn parse_nrrd(bytes: &[u8]) -> Result<Volume, NrrdError> {
    read_nrrd(bytes).map(|doc| doc.volume)
}

/// Parse an NRRD file, keeping the header and diagnostics.
pub fn read_nrrd(bytes: &[u8]) -> Result<NrrdDocument, NrrdError> {
    let mut lines = HeaderLines::new(bytes);

    let magic = lines.next_line().ok_or(NrrdError::BadMagic)?;
    let version = parse_magic(magic?.1).ok_or(NrrdError::BadMagic)?;

    let mut fields = RawFields::default();
    let mut diagnostics = Vec::new();
    let mut payload_start = None;

    while let Some(line) = lines.next_line() {
        let (lineno, text) = line?;
        if text.is_empty() {
            payload_start = Some(lines.offset());
            break;
        }
        if text.starts_with('#') {
            continue;
        }
        if let Some((key, _)) = text.split_once(":=") {
            if !key.contains(": ") {
                diagnostics.push(format!("line {lineno}: ignored key/value pair `{key}`"));
                continue;
            }
        }
        let Some((key, value)) = text.split_once(':') else {
            return Err(NrrdError::Malformed {
                line: lineno,
                reason: format!("expected `field: value`, got {text:?}"),
            });
        };
        let value = value.trim();
        let key = key.trim().to_ascii_lowercase();
        fields.set(&key, value, lineno, &mut diagnostics)?;
    }

    let header = fields.into_header(version, &mut diagnostics)?;
    let payload = payload_start.map_or(&[][..], |start| &bytes[start..]);

    // validates sizes before anything is allocated
    let geometry = VolumeGeometry::new(
        header.sizes,
        header.space_directions,
        header.space_origin,
        header.space,
    )?;
    let expected = geometry.voxel_count() * header.scalar_type.byte_size();
    let decoded;
    let raw = match header.encoding {
        Encoding::Raw => payload,
        Encoding::Gzip => {
            let mut out = Vec::with_capacity(expected.min(payload.len().saturating_mul(8)));
            // one extra byte is enough to detect an oversized payload
            MultiGzDecoder::new(payload)
                .take(expected as u64 + 1)
                .read_to_end(&mut out)
                .map_err(NrrdError::Decompress)?;
            decoded = out;
            &decoded[..]
        }
    };
    if raw.len() != expected {
        return Err(NrrdError::SizeMismatch {
            expected,
            actual: raw.len(),
        });
    }

    let data = VoxelData::from_bytes(header.scalar_type, raw, header.endian == Endian::Big);
    let volume = Volume::new(geometry, data)?;

    Ok(NrrdDocument {
        header,
        volume,
        diagnostics,
    })
}

/// Serialize a volume as an `NRRD0004` file with an attached header.
pub fn write_nrrd(volume: &Volume, encoding: Encoding) -> Vec<u8> {
    let geometry = volume.geometry();
    let scalar_type = volume.scalar_type();
    let mut out = String::from("NRRD0004\n");
    out.push_str(&format!("type: {}\n", type_field(scalar_type)));
    out.push_str("dimension: 3\n");
    out.push_str(&format!("space: {}\n", geometry.basis().space_name()));
    let [nx, ny, nz] = geometry.sizes();
    out.push_str(&format!("sizes: {nx} {ny} {nz}\n"));
    let dirs: Vec<String> = geometry.directions().iter().map(format_vector).collect();
    out.push_str(&format!("space directions: {}\n", dirs.join(" ")));
    out.push_str(&format!(
        "space origin: {}\n",
        format_vector(&geometry.origin())
    ));
    if scalar_type.byte_size() > 1 {
        out.push_str("endian: little\n");
    }
    out.push_str(&format!("encoding: {}\n\n", encoding.name()));

    let mut bytes = out.into_bytes();
    let payload = volume.data().to_le_bytes();
    match encoding {
        Encoding::Raw => bytes.extend_from_slice(&payload),
        Encoding::Gzip => {
            let mut enc = GzEncoder::new(bytes, Compression::default());
            // writing into a Vec cannot fail
            enc.write_all(&payload).expect("in-memory gzip");
            bytes = enc.finish().expect("in-memory gzip");
        }
    }
    bytes
}

fn type_field(t: ScalarType) -> &'static str {
    match t {
        ScalarType::U8 => "uchar",
        ScalarType::I16 => "short",
        ScalarType::U16 => "ushort",
        ScalarType::F32 => "float",
    }
}

fn parse_type(s: &str) -> Option<ScalarType> {
    let t = match s {
        "uchar" | "unsigned char" | "uint8" | "uint8_t" => ScalarType::U8,
        "short" | "short int" | "signed short" | "signed short int" | "int16" | "int16_t" => {
            ScalarType::I16
        }
        "ushort" | "unsigned short" | "unsigned short int" | "uint16" | "uint16_t" => {
            ScalarType::U16
        }
        "float" => ScalarType::F32,
        _ => return None,
    };
    Some(t)
}

/// Shortest round-trip decimal, never `-0`.
pub(crate) fn format_number(x: f64) -> String {
    format!("{}", x + 0.0)
}

fn format_vector(v: &[f64; 3]) -> String {
    format!(
        "({},{},{})",
        format_number(v[0]),
        format_number(v[1]),
        format_number(v[2])
    )
}

fn parse_magic(line: &str) -> Option<u8> {
    let rest = line.strip_prefix("NRRD000")?;
    match rest.parse::<u8>() {
        Ok(v @ 1..=5) => Some(v),
        _ => None,
    }
}

/// Parse `(a,b,c)` groups; `none` entries become `None`.
fn parse_vectors(value: &str, line: usize) -> Result<Vec<Option<[f64; 3]>>, NrrdError> {
    let malformed = |reason: String| NrrdError::Malformed { line, reason };
    let mut out = Vec::new();
    let mut rest = value.trim();
    while !rest.is_empty() {
        if let Some(after) = rest.strip_prefix("none") {
            out.push(None);
            rest = after.trim_start();
            continue;
        }
        let Some(inner) = rest.strip_prefix('(') else {
            return Err(malformed(format!("expected vector, got {rest:?}")));
        };
        let close = inner
            .find(')')
            .ok_or_else(|| malformed("unterminated vector".into()))?;
        let comps: Vec<f64> = inner[..close]
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| malformed(format!("bad vector component: {e}")))?;
        let vec: [f64; 3] = comps.try_into().map_err(|c: Vec<f64>| {
            malformed(format!("vector has {} components, need 3", c.len()))
        })?;
        out.push(Some(vec));
        rest = inner[close + 1..].trim_start();
    }
    Ok(out)
}

#[derive(Default)]
struct RawFields {
    dimension: Option<usize>,
    type_name: Option<String>,
    sizes: Option<Vec<usize>>,
    space: Option<Basis>,
    directions: Option<Vec<[f64; 3]>>,
    origin: Option<[f64; 3]>,
    encoding: Option<Encoding>,
    endian: Option<Endian>,
}

impl RawFields {
    fn set(
        &mut self,
        key: &str,
        value: &str,
        line: usize,
        diagnostics: &mut Vec<String>,
    ) -> Result<(), NrrdError> {
        let malformed = |reason: String| NrrdError::Malformed { line, reason };
        match key {
            "dimension" => {
                let d: usize = value
                    .parse()
                    .map_err(|_| malformed(format!("bad dimension {value:?}")))?;
                if d != 3 {
                    return Err(NrrdError::UnsupportedField {
                        field: "dimension",
                        value: value.to_string(),
                    });
                }
                self.dimension = Some(d);
            }
            "type" => self.type_name = Some(value.to_string()),
            "sizes" => {
                let sizes = value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<Result<Vec<usize>, _>>()
                    .map_err(|_| malformed(format!("bad sizes {value:?}")))?;
                self.sizes = Some(sizes);
            }
            "space" => {
                let basis = value
                    .parse::<Basis>()
                    .map_err(|_| NrrdError::UnsupportedField {
                        field: "space",
                        value: value.to_string(),
                    })?;
                self.space = Some(basis);
            }
            "space directions" => {
                let vectors = parse_vectors(value, line)?;
                if vectors.len() != 3 || vectors.iter().any(Option::is_none) {
                    return Err(NrrdError::UnsupportedField {
                        field: "space directions",
                        value: value.to_string(),
                    });
                }
                self.directions = Some(vectors.into_iter().flatten().collect());
            }
            "space origin" => {
                let vectors = parse_vectors(value, line)?;
                match vectors.as_slice() {
                    [Some(v)] => self.origin = Some(*v),
                    _ => return Err(malformed(format!("bad space origin {value:?}"))),
                }
            }
            "encoding" => {
                let enc = value
                    .parse::<Encoding>()
                    .map_err(|_| NrrdError::UnsupportedField {
                        field: "encoding",
                        value: value.to_string(),
                    })?;
                self.encoding = Some(enc);
            }
            "endian" => {
                self.endian = Some(match value {
                    "little" => Endian::Little,
                    "big" => Endian::Big,
                    _ => {
                        return Err(NrrdError::UnsupportedField {
                            field: "endian",
                            value: value.to_string(),
                        })
                    }
                });
            }
            "data file" | "datafile" => {
                return Err(NrrdError::UnsupportedField {
                    field: "data file",
                    value: value.to_string(),
                })
            }
            "byte skip" | "byteskip" | "line skip" | "lineskip" => {
                if value != "0" {
                    return Err(NrrdError::UnsupportedField {
                        field: "skip",
                        value: value.to_string(),
                    });
                }
            }
            "space dimension" => {
                if value != "3" {
                    return Err(NrrdError::UnsupportedField {
                        field: "space dimension",
                        value: value.to_string(),
                    });
                }
            }
            other => diagnostics.push(format!("line {line}: ignored field `{other}`")),
        }
        Ok(())
    }

    fn into_header(
        self,
        version: u8,
        diagnostics: &mut Vec<String>,
    ) -> Result<NrrdHeader, NrrdError> {
        let dimension = self.dimension.ok_or(NrrdError::MissingField("dimension"))?;
        let type_name = self.type_name.ok_or(NrrdError::MissingField("type"))?;
        let scalar_type = parse_type(&type_name).ok_or_else(|| NrrdError::UnsupportedField {
            field: "type",
            value: type_name.clone(),
        })?;
        let sizes_vec = self.sizes.ok_or(NrrdError::MissingField("sizes"))?;
        let sizes: [usize; 3] =
            sizes_vec
                .try_into()
                .map_err(|v: Vec<usize>| NrrdError::UnsupportedField {
                    field: "sizes",
                    value: format!("{} entries", v.len()),
                })?;
        let space = self.space.ok_or(NrrdError::MissingField("space"))?;
        let dirs = self
            .directions
            .ok_or(NrrdError::MissingField("space directions"))?;
        let space_directions = [dirs[0], dirs[1], dirs[2]];
        let space_origin = self.origin.unwrap_or_else(|| {
            diagnostics.push("no space origin, assuming (0,0,0)".into());
            [0.0; 3]
        });
        let encoding = self.encoding.ok_or(NrrdError::MissingField("encoding"))?;
        let endian = match self.endian {
            Some(e) => e,
            None => {
                if scalar_type.byte_size() > 1 {
                    diagnostics.push("no endian field, assuming little".into());
                }
                Endian::Little
            }
        };
        Ok(NrrdHeader {
            version,
            dimension,
            type_name,
            scalar_type,
            sizes,
            space,
            space_directions,
            space_origin,
            encoding,
            endian,
        })
    }
}

/// Line iterator over the ASCII header that tracks the byte offset.
struct HeaderLines<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> HeaderLines<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Self {
            bytes,
            pos: 0,
            line: 0,
        }
    }

    fn offset(&self) -> usize {
        self.pos
    }

    fn next_line(&mut self) -> Option<Result<(usize, &'a str), NrrdError>> {
        if self.pos >= self.bytes.len() {
            return None;
        }
        let rest = &self.bytes[self.pos..];
        let end = rest.iter().position(|&b| b == b'\n');
        let raw = match end {
            Some(e) => &rest[..e],
            None => rest,
        };
        self.pos += raw.len() + usize::from(end.is_some());
        self.line += 1;
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        Some(
            std::str::from_utf8(raw)
                .map(|s| (self.line, s))
                .map_err(|_| NrrdError::Malformed {
                    line: self.line,
                    reason: "header is not ASCII".into(),
                }),
        )
    }
}
