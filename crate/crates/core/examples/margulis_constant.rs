// Minimizing the larger displacement over the half-plane and cross-checking on a grid.

use fuchsian::freegroup::gamma2;
use fuchsian::optimizer::{grid_oracle, lipschitz_bound, minimize_max_displacement, Objective, OptimizerConfig, Window};

pub fn run_example() {
    let spec = gamma2();
    let opt = minimize_max_displacement(&spec, &OptimizerConfig::default()).unwrap();
    println!(
        "search: z* = {}, value {:.12}, {} iterations, converged {}",
        opt.z_star, opt.value, opt.iterations, opt.converged
    );
    let window = Window::around(opt.z_star, 0.5).unwrap();
    let res = 1e-2;
    let grid = grid_oracle(&spec, Objective::MaxDisplacement, window, res).unwrap();
    let slack = lipschitz_bound(Objective::MaxDisplacement, 2) * res / window.y_min;
    println!("grid: z = {}, value {:.12}, allowed gap {slack:.3e}", grid.z_star, grid.value);
    assert!((opt.value - (3.0 + 2.0 * 2f64.sqrt()).ln()).abs() < 1e-6);
    assert!(grid.value >= opt.value - 1e-12 && grid.value - opt.value <= slack);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
