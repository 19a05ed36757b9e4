// Two-generator displacements with nonnegative defect force sinh(ℓ₁/2) sinh(ℓ₂/2) >= 1.

use fuchsian::freegroup::{build_schottky, gamma2, random_disks};
use fuchsian::hyperbolic::{displacement, Point};
use fuchsian::inequality::{buser_implication, margulis_check};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() {
    let m = (3.0 + 2.0 * 2f64.sqrt()).ln();
    let tight = buser_implication(m, m);
    println!("extremal pair: product {:.15}, angular sum {:.15}", tight.product, tight.angular_sum);
    assert!((tight.product - 1.0).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let spec = build_schottky(&random_disks(2, 1.0, &mut rng)).unwrap();
        let d: Vec<f64> = spec.generators().iter().map(|g| displacement(g, Point::I)).collect();
        let out = buser_implication(d[0], d[1]);
        println!("d = ({:.4}, {:.4}): product {:.4}, premise {}, holds {}", d[0], d[1], out.product, out.premise, out.holds);
        assert!(out.holds);
    }
    let check = margulis_check(&gamma2(), Point::new(0.2, 1.1).unwrap()).unwrap();
    println!("larger displacement at 0.2+1.1i exceeds the constant by {:.6}", check.slack);
    assert!(check.holds);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
