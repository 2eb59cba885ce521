//! Reorient an LPS volume to RAS: the payload stays, the frame flips.

use segstudio::pipeline::reorient_file;
use segstudio::{parse_nrrd, write_nrrd, Basis, Encoding, ScalarType, Volume, VolumeGeometry};

fn main() {
    let input = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path).unwrap(),
        None => {
            let g = VolumeGeometry::with_spacing(
                [4, 4, 2],
                [0.7, 0.7, 1.5],
                [5.0, 6.0, 7.0],
                Basis::Lps,
            )
            .unwrap();
            write_nrrd(&Volume::zeros(g, ScalarType::U16), Encoding::Raw)
        }
    };
    let before = parse_nrrd(&input).unwrap();
    let out = reorient_file(&input).unwrap();
    let after = parse_nrrd(&out).unwrap();
    for (label, v) in [("before", &before), ("after", &after)] {
        let g = v.geometry();
        println!(
            "{label}: basis {} origin {:?} directions {:?}",
            g.basis(),
            g.origin(),
            g.directions()
        );
    }
    let corner = [3.0, 3.0, 1.0];
    println!(
        "voxel {corner:?}: {:?} (LPS) = {:?} (RAS)",
        before.geometry().index_to_world(corner),
        after.geometry().index_to_world(corner)
    );
    println!("payload unchanged: {}", before.data() == after.data());
}
