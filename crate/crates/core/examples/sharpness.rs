// Maximizing the angular sum: the level-two group reaches π/2, thin Schottky groups do not.

use std::f64::consts::FRAC_PI_2;

use fuchsian::freegroup::{build_schottky, gamma2, symmetric_disks};
use fuchsian::optimizer::{maximize_angular_sum, OptimizerConfig};

pub fn run_example() {
    let cfg = OptimizerConfig::default();
    let tight = maximize_angular_sum(&gamma2(), &cfg).unwrap();
    println!("gamma2: max angular sum {:.12} at {}", tight.value, tight.z_star);
    assert!((tight.value - FRAC_PI_2).abs() < 1e-6);
    for r in [0.5, 0.2, 0.05] {
        let spec = build_schottky(&symmetric_disks(2, r)).unwrap();
        let opt = maximize_angular_sum(&spec, &cfg).unwrap();
        println!("symmetric disks of radius {r}: max angular sum {:.9}, gap {:.3e}", opt.value, FRAC_PI_2 - opt.value);
        assert!(opt.value < FRAC_PI_2);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
