// Per-rank displacement bounds compared with the older logarithmic bound.

use fuchsian::inequality::{bound_bk, log_2k_minus_1, strictness_witness};

pub fn run_example() {
    println!("{:>3} {:>14} {:>14} {:>10}", "k", "B(k)", "log(2k-1)", "gap");
    for k in 2..=10 {
        let (b, old) = (bound_bk(k), log_2k_minus_1(k));
        println!("{k:>3} {b:>14.10} {old:>14.10} {:>10.6}", b - old);
        assert!(b > old);
    }
    for k in [2, 3, 5] {
        let w = strictness_witness(k);
        println!(
            "k = {k}: equal angles {:.6} give region sum {:.12} but angular sum {:.6} > π/2",
            w.angle, w.accs_region_sum, w.angular_sum
        );
        assert!(w.angular_sum > std::f64::consts::FRAC_PI_2);
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
