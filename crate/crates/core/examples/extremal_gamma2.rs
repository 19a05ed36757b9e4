// The angular defect on the level-two congruence group, which makes the inequality tight at i.

use fuchsian::freegroup::gamma2;
use fuchsian::hyperbolic::Point;
use fuchsian::inequality::defect_report;

pub fn run_example() {
    let spec = gamma2();
    for (x, y) in [(0.0, 1.0), (0.0, 2.0), (0.5, 1.0), (0.3, 0.7)] {
        let r = defect_report(&spec, Point::new(x, y).unwrap()).unwrap();
        println!(
            "z = {x}+{y}i: d = {:?}, angular sum {:.12}, defect {:.3e}",
            r.displacements, r.angular_sum, r.defect
        );
        assert!(r.defect >= -1e-12);
    }
    let r = defect_report(&spec, Point::I).unwrap();
    assert!(r.defect.abs() < 1e-12);
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
}

#[allow(dead_code)]
fn main() {
    run_example();
}
