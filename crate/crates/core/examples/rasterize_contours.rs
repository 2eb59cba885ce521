//! Fill contours into a mask with progress reporting.
//!
//! With arguments, runs the file pipeline:
//! `cargo run --example rasterize_contours contours.vtk meta.json mask.nrrd`

use segstudio::pipeline::{encode_mask, mask_from_sources};
use segstudio::{rasterize, Contour, ContourSet, RasterOptions, VolumeGeometry};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [vtk, meta, out] = &args[..] {
        let vtk = std::fs::read_to_string(vtk).unwrap();
        let meta = std::fs::read_to_string(meta).unwrap();
        let progress = |p: u8| eprint!("\r{p:3}%");
        match mask_from_sources(&vtk, &meta, &progress, &RasterOptions::default()) {
            Ok(mask) => {
                std::fs::write(out, encode_mask(&mask)).unwrap();
                eprintln!("\n{} foreground voxels -> {out}", mask.count());
            }
            Err(e) => eprintln!("\n{}: {e}", e.code()),
        }
        return;
    }

    let grid = VolumeGeometry::identity([20, 20, 10]).unwrap();
    let square = Contour::new(5, vec![[2.0, 2.0], [12.0, 2.0], [12.0, 12.0], [2.0, 12.0]]).unwrap();
    // an L-shape needs more than one triangle fan to fill correctly
    let ell = Contour::new(
        6,
        vec![
            [2.0, 2.0],
            [10.0, 2.0],
            [10.0, 5.0],
            [5.0, 5.0],
            [5.0, 12.0],
            [2.0, 12.0],
        ],
    )
    .unwrap();
    let set = ContourSet::from_contours(grid, [square, ell]).unwrap();

    let progress = |p: u8| println!("progress {p}");
    let mask = rasterize(&set, &progress, &RasterOptions::default()).unwrap();
    println!("{} voxels set", mask.count());
    for j in (0..14).rev() {
        let row: String = (0..14)
            .map(|i| if mask.get(i, j, 6) { '#' } else { '.' })
            .collect();
        println!("{row}");
    }

    let bowtie = Contour::new(3, vec![[2.0, 2.0], [12.0, 12.0], [12.0, 2.0], [2.0, 12.0]]).unwrap();
    let bad = ContourSet::from_contours(VolumeGeometry::identity([20, 20, 10]).unwrap(), [bowtie])
        .unwrap();
    let quiet = |_: u8| {};
    match rasterize(&bad, &quiet, &RasterOptions::default()) {
        Err(e) => println!("strict: {}", e.code()),
        Ok(_) => unreachable!(),
    }
    let lenient = RasterOptions {
        lenient: true,
        ..RasterOptions::default()
    };
    println!(
        "lenient: {} voxels",
        rasterize(&bad, &quiet, &lenient).unwrap().count()
    );
}
