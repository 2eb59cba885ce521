mod support;

use proptest::prelude::*;
use segstudio::{boundary_voxels, dice, hausdorff, Basis, Mask, VolumeGeometry};
use support::*;

fn grid(seed: u64) -> VolumeGeometry {
    let mut r = rng(seed);
    let sizes = [
        rand::Rng::random_range(&mut r, 2..=16),
        rand::Rng::random_range(&mut r, 2..=16),
        rand::Rng::random_range(&mut r, 1..=16),
    ];
    let spacing = [
        rand::Rng::random_range(&mut r, 0.5..2.5),
        rand::Rng::random_range(&mut r, 0.5..2.5),
        rand::Rng::random_range(&mut r, 0.5..4.0),
    ];
    VolumeGeometry::with_spacing(sizes, spacing, [-10.0, 4.0, 100.0], Basis::Ras).unwrap()
}

fn world(mask: &Mask, voxels: &[[usize; 3]]) -> Vec<[f64; 3]> {
    voxels
        .iter()
        .map(|v| mask.geometry().index_to_world(v.map(|x| x as f64)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dice_and_hausdorff_properties(seed in any::<u64>()) {
        let g = grid(seed);
        let mut r = rng(seed ^ 0xabcdef);
        let a = random_mask(&mut r, &g);
        let b = random_mask(&mut r, &g);

        let dab = dice(&a, &b).unwrap();
        prop_assert_eq!(dab, dice(&b, &a).unwrap());
        prop_assert!((0.0..=1.0).contains(&dab));
        prop_assert_eq!(dice(&a, &a).unwrap(), 1.0);

        let hab = hausdorff(&a, &b).unwrap();
        prop_assert_eq!(hab, hausdorff(&b, &a).unwrap());
        prop_assert!(hab >= 0.0);
        prop_assert_eq!(hausdorff(&a, &a).unwrap(), 0.0);

        let (ba, bb) = (boundary_voxels(&a), boundary_voxels(&b));
        prop_assert_eq!(&ba, &oracle_boundary(&a));
        prop_assert_eq!(hab == 0.0, ba == bb);
        prop_assert_eq!(hab, oracle_hausdorff(&world(&a, &ba), &world(&b, &bb)));
    }
}

#[test]
fn zero_hausdorff_implies_equal_boundaries() {
    // same boundary, different interior fill is impossible for 6-connectivity
    // boundaries of solid boxes, so check a shifted pair is nonzero
    let g = VolumeGeometry::identity([10, 10, 10]).unwrap();
    let mut a = Mask::empty(g.clone(), 1).unwrap();
    let mut b = Mask::empty(g, 1).unwrap();
    for k in 2..6 {
        for j in 2..6 {
            for i in 2..6 {
                a.set(i, j, k, true);
                b.set(i + 1, j, k, true);
            }
        }
    }
    assert_eq!(hausdorff(&a, &b).unwrap(), 1.0);
    assert_ne!(boundary_voxels(&a), boundary_voxels(&b));
}
