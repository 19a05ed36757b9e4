// Points, isometries, distances and the Poisson kernel on the upper half-plane.

use fuchsian::hyperbolic::{displacement, distance, poisson_kernel, BoundaryPoint, Isometry, Point};
use fuchsian::quadrature::integrate;

pub fn run_example() {
    let p = Point::I;
    let q = Point::new(1.0, 2.0).unwrap();
    let g = Isometry::new(2.0, 1.0, 1.0, 1.0).unwrap();
    println!("d(i, 1+2i) = {:.12}", distance(p, q));
    println!("d(g i, g(1+2i)) = {:.12}", distance(g.apply(p), g.apply(q)));
    println!("g is hyperbolic: {}, translation length {:.12}", g.is_hyperbolic(), g.translation_length());
    println!("displacement of i under g = {:.12}", displacement(&g, p));
    assert!((distance(p, q) - distance(g.apply(p), g.apply(q))).abs() < 1e-12);
    assert!(displacement(&g, p) >= g.translation_length() - 1e-12);

    let mass = integrate(|t| poisson_kernel(p, q, BoundaryPoint::new(t)), 0.0, std::f64::consts::TAU, 1e-12);
    println!("Poisson kernel mass around the circle / 2π = {:.12}", mass.value / std::f64::consts::TAU);
    assert!((mass.value / std::f64::consts::TAU - 1.0).abs() < 1e-9);
}

#[allow(dead_code)]
fn main() {
    run_example();
}
