// Random certified Schottky groups and random basepoints, looking for a negative defect.

use std::f64::consts::TAU;

use fuchsian::freegroup::{build_schottky, random_disks};
use fuchsian::hyperbolic::Point;
use fuchsian::inequality::{defect_report, THEOREM_SLACK};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn run_example() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut min_defect = f64::INFINITY;
    let trials = 2000;
    for t in 0..trials {
        let k = 2 + t % 3;
        let spec = build_schottky(&random_disks(k, 1.2, &mut rng)).unwrap();
        let z = Point::from_polar(Point::I, rng.gen_range(0.0..4.0), rng.gen_range(0.0..TAU));
        let r = defect_report(&spec, z).unwrap();
        assert!(r.defect >= -THEOREM_SLACK && r.satisfies_accs);
        min_defect = min_defect.min(r.defect);
    }
    println!("{trials} trials, smallest defect {min_defect:.6e}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
