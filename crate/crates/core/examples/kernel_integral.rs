// Closed-form arc integral of the Poisson kernel against adaptive quadrature.

use std::f64::consts::PI;

use fuchsian::inequality::{kernel_arc_integral, kernel_arc_integrand};
use fuchsian::quadrature::integrate;

pub fn run_example() {
    for h in [0.0, 0.5, 2.0, 8.0] {
        for a in [0.1, 0.5, 0.9, 1.0] {
            let closed = kernel_arc_integral(h, a);
            let q = integrate(|phi| kernel_arc_integrand(h, phi), 0.0, PI * a, 1e-12);
            println!("h = {h:>3}, a = {a:>3}: closed {closed:.14}, quadrature {:.14}", q.value);
            assert!((closed - q.value).abs() < 1e-9);
        }
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
