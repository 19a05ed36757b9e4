// From first-letter masses to displacement bounds, with the slack of each step.

use fuchsian::inequality::{bound_bk, displacement_lower_bound, trig_chain_check, MassPair};

pub fn run_example() {
    let alphas = [0.1, 0.2];
    let betas = [0.3, 0.35];
    let report = trig_chain_check(&alphas, &betas).unwrap();
    for s in &report.steps {
        println!(
            "α = {}, β = {}: log E = {:.9}, chain bound {:.9}, angle slack {:.3e}",
            s.alpha, s.beta, s.displacement_bound, s.chain_bound, s.angle_slack
        );
        let direct = displacement_lower_bound(MassPair::new(s.alpha, 1.0 - s.beta).unwrap()).unwrap();
        assert!((direct - s.displacement_bound).abs() < 1e-12);
    }
    println!("minimum slack {:.3e}, identity residual {:.1e}", report.min_slack, report.max_identity_residual);
    assert!(report.min_slack >= -1e-12);

    for k in 2..=5 {
        let m = vec![1.0 / (2.0 * k as f64); k];
        let r = trig_chain_check(&m, &m).unwrap();
        println!("equal masses, k = {k}: {:.12} vs B(k) = {:.12}", r.steps[0].displacement_bound, bound_bk(k));
    }
}

#[allow(dead_code)]
fn main() {
    run_example();
}
