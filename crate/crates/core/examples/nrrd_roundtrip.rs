//! Write a volume as NRRD in both encodings and read it back.
//!
//! `cargo run --example nrrd_roundtrip [input.nrrd]` inspects an existing file instead.

use segstudio::{
    read_nrrd, write_nrrd, Basis, Encoding, ScalarType, Volume, VolumeGeometry, VoxelData,
};

fn main() {
    if let Some(path) = std::env::args().nth(1) {
        let bytes = std::fs::read(&path).expect("readable file");
        match read_nrrd(&bytes) {
            Ok(doc) => {
                println!("{:#?}", doc.header);
                for note in doc.diagnostics {
                    println!("note: {note}");
                }
            }
            Err(e) => println!("{}: {e}", e.code()),
        }
        return;
    }

    let g =
        VolumeGeometry::with_spacing([16, 16, 8], [0.8, 0.8, 2.5], [-6.4, -6.4, 0.0], Basis::Ras)
            .unwrap();
    let ramp = (0..g.voxel_count())
        .map(|i| (i % 4096) as i16 - 1024)
        .collect();
    let volume = Volume::new(g, VoxelData::I16(ramp)).unwrap();
    assert_eq!(volume.scalar_type(), ScalarType::I16);

    for encoding in [Encoding::Raw, Encoding::Gzip] {
        let bytes = write_nrrd(&volume, encoding);
        let header_end = bytes.windows(2).position(|w| w == b"\n\n").unwrap();
        let back = read_nrrd(&bytes).unwrap();
        println!("--- {} ({} bytes) ---", encoding.name(), bytes.len());
        println!("{}", String::from_utf8_lossy(&bytes[..header_end]));
        println!("round trip identical: {}", back.volume == volume);
    }
}
