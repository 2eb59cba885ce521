//! Dice and Hausdorff between two masks.
//!
//! `cargo run --example compare_masks a.nrrd b.nrrd` compares files.

use segstudio::pipeline::load_mask;
use segstudio::{build_report, render_report, Basis, Mask, ReportFormat, VolumeGeometry};

fn boxed(g: &VolumeGeometry, lo: [usize; 3], hi: [usize; 3]) -> Mask {
    let mut m = Mask::empty(g.clone(), 1).unwrap();
    for k in lo[2]..hi[2] {
        for j in lo[1]..hi[1] {
            for i in lo[0]..hi[0] {
                m.set(i, j, k, true);
            }
        }
    }
    m
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (a, b) = if let [a, b] = &args[..] {
        let load = |p: &str| load_mask(&std::fs::read(p).unwrap()).unwrap();
        (load(a), load(b))
    } else {
        let g =
            VolumeGeometry::with_spacing([8, 4, 4], [1.0, 1.0, 2.0], [0.0; 3], Basis::Ras).unwrap();
        (
            boxed(&g, [0, 0, 0], [4, 4, 4]),
            boxed(&g, [2, 0, 0], [6, 4, 4]),
        )
    };
    match build_report(&a, &b) {
        Ok(report) => {
            print!("{}", render_report(&report, ReportFormat::Text));
            println!("{}", render_report(&report, ReportFormat::Json));
        }
        Err(e) => println!("{}", segstudio::metrics::render_error(&e)),
    }
}
