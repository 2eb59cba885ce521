//! Map voxel indices to world millimetres and back, in RAS and LPS.

use segstudio::{Basis, VolumeGeometry};

fn main() {
    // 2 mm in-plane, 4 mm slices, origin at (10, -3, 4)
    let g =
        VolumeGeometry::with_spacing([64, 64, 20], [2.0, 2.0, 4.0], [10.0, -3.0, 4.0], Basis::Ras)
            .expect("valid geometry");
    for index in [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [31.5, 31.5, 10.0]] {
        let world = g.index_to_world(index);
        println!(
            "index {index:?} -> world {world:?} -> index {:?}",
            g.world_to_index(world)
        );
    }

    let lps =
        VolumeGeometry::with_spacing([2, 2, 2], [1.0; 3], [5.0, 6.0, 7.0], Basis::Lps).unwrap();
    let ras = lps.to_ras();
    println!(
        "LPS origin {:?} is RAS origin {:?}",
        lps.origin(),
        ras.origin()
    );
    println!("spacing {:?}, voxels {}", g.spacing(), g.voxel_count());
}
