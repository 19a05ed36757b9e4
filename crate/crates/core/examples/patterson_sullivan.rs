// Truncated orbit-sum approximations of the boundary measure and its first-letter decomposition.

use fuchsian::freegroup::{gamma2, Letter};
use fuchsian::hyperbolic::Point;
use fuchsian::measure::{decompose_by_first_letter, decomposition_identity_residual, mass_chain_bound, PoincareApprox};

pub fn run_example() {
    let spec = gamma2();
    for max_len in [4, 6, 8] {
        let approx = PoincareApprox::new(&spec, Point::I, max_len, 1.05).unwrap();
        let measure = approx.measure(64).unwrap();
        let parts = decompose_by_first_letter(&approx, 64).unwrap();
        let masses: Vec<f64> = parts.iter().map(|m| m.total()).collect();
        let residual = Letter::alphabet(2)
            .map(|psi| decomposition_identity_residual(&approx, psi, 64).unwrap())
            .fold(0.0, f64::max);
        println!(
            "L = {max_len}: {} atoms, TV from uniform {:.4}, first-letter masses {masses:.4?}, residual {residual:.4}",
            approx.atom_count(),
            measure.total_variation_from_uniform()
        );
        println!("  chain bounds {:?}", mass_chain_bound(&masses).unwrap());
        assert!((masses.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
