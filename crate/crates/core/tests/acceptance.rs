//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use fuchsian::freegroup::{build_schottky, gamma2, random_disks, verify_certificate, Letter};
use fuchsian::hyperbolic::{displacement, Point};
use fuchsian::inequality::{
    angular_term, bound_bk, buser_product, defect_report, kernel_arc_integral, kernel_arc_integrand,
    log_2k_minus_1, measure_comparison_check, trig_chain_check, Hypothesis, InequalityError,
    MARGULIS_CONSTANT, THEOREM_SLACK,
};
use fuchsian::measure::{decompose_by_first_letter, decomposition_identity_residual, BoundaryMeasure, PoincareApprox};
use fuchsian::optimizer::{grid_oracle, minimize_max_displacement, Objective, OptimizerConfig, Window};
use fuchsian::quadrature::integrate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Verdict {
    ok: bool,
    detail: String,
}

fn verdict(ok: bool, detail: String) -> Verdict {
    Verdict { ok, detail }
}

fn extremal_sharpness() -> Verdict {
    let exact = (3.0 + 2.0 * SQRT_2).ln();
    let r = defect_report(&gamma2(), Point::I).expect("gamma2 is certified");
    let d_err = r.displacements.iter().map(|d| (d - exact).abs()).fold(0.0, f64::max);
    let sum_err = (r.angular_sum - FRAC_PI_2).abs();
    verdict(
        d_err < 1e-12 && sum_err < 1e-12,
        format!("|d - log(3+2√2)| = {d_err:.1e}, |sum - π/2| = {sum_err:.1e}"),
    )
}

fn margulis_constant() -> Verdict {
    let spec = gamma2();
    let opt = minimize_max_displacement(&spec, &OptimizerConfig::default()).expect("certified");
    let value_err = (opt.value - MARGULIS_CONSTANT).abs();
    let z_err = fuchsian::hyperbolic::distance(opt.z_star, Point::I);
    let res = 5e-3;
    let window = Window::new(-1.0, 1.0, 0.25, 4.0).unwrap();
    let grid = grid_oracle(&spec, Objective::MaxDisplacement, window, res).expect("grid fits");
    // nearest node is at most res/√2 away in the Euclidean metric, i.e. res/(√2 y_min) hyperbolic
    let lipschitz_slack = 2.0 * res / (SQRT_2 * window.y_min);
    let grid_gap = grid.value - opt.value;
    verdict(
        opt.converged && value_err < 1e-6 && z_err < 1e-4 && grid_gap >= -1e-12 && grid_gap <= lipschitz_slack,
        format!(
            "value error {value_err:.1e}, d(z*, i) = {z_err:.1e}, grid - search = {grid_gap:.1e} (allowed {lipschitz_slack:.1e})"
        ),
    )
}

fn bound_table() -> Verdict {
    let failing: Vec<usize> = (2..=64).filter(|&k| bound_bk(k) <= log_2k_minus_1(k)).collect();
    let gap = bound_bk(2) - 3f64.ln();
    let closed = ((3.0 + 2.0 * SQRT_2) / 3.0).ln();
    let gap_err = (gap - closed).abs();
    verdict(
        failing.is_empty() && gap_err < 1e-9 && (gap - 0.664).abs() < 5e-4,
        format!("B(2) - log 3 = {gap:.10}, rows with B(k) <= log(2k-1): {failing:?}"),
    )
}

fn monte_carlo() -> Verdict {
    let trials = 10_000;
    let results: Vec<(bool, f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xACCE55);
            rng.set_stream(t as u64);
            let k = 2 + t % 3;
            let spec = build_schottky(&random_disks(k, 1.2, &mut rng)).expect("valid disks");
            let certified = verify_certificate(&spec, 64).map(|r| r.valid).unwrap_or(false);
            let z = Point::from_polar(Point::I, rng.gen_range(0.0..4.0), rng.gen_range(0.0..TAU));
            let report = match defect_report(&spec, z) {
                Ok(r) => r,
                Err(InequalityError::UncertifiedGroup { report }) => *report,
                Err(e) => panic!("{e}"),
            };
            (certified, report.defect, report.accs_sum)
        })
        .collect();
    let uncertified = results.iter().filter(|r| !r.0).count();
    let bad_defect = results.iter().filter(|r| r.1 < -THEOREM_SLACK).count();
    let bad_accs = results.iter().filter(|r| r.2 > 0.5 + THEOREM_SLACK).count();
    let min_defect = results.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    verdict(
        uncertified == 0 && bad_defect == 0 && bad_accs == 0,
        format!(
            "{trials} trials, {uncertified} uncertified, {bad_defect} defects below -1e-9, {bad_accs} ACCS sums above 1/2, min defect {min_defect:.3e}"
        ),
    )
}

fn integral_identity() -> Verdict {
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let h = 10.0 * i as f64 / 49.0;
        for j in 1..=50 {
            let a = j as f64 / 50.0;
            let q = integrate(|phi| kernel_arc_integrand(h, phi), 0.0, PI * a, 1e-12);
            worst = worst.max((q.value - kernel_arc_integral(h, a)).abs());
        }
    }
    verdict(worst < 1e-9, format!("largest |closed form - quadrature| = {worst:.1e} over 50x50 (h, a)"))
}

fn random_comparison(rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<bool>) {
    let n = rng.gen_range(1..=20);
    let f: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..10.0)).collect();
    let mu: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| f[j].total_cmp(&f[i]));
    let mut c = vec![false; n];
    for &j in &order[..rng.gen_range(1..=n)] {
        c[j] = true;
    }
    let mass_c: f64 = (0..n).filter(|&j| c[j]).map(|j| mu[j]).sum();
    let mut mu0: Vec<f64> = mu.iter().map(|m| m * rng.gen_range(0.0..1.0)).collect();
    let total: f64 = mu0.iter().sum();
    if total > mass_c {
        let scale = mass_c / total * rng.gen_range(0.5..1.0);
        mu0.iter_mut().for_each(|m| *m *= scale);
    }
    (f, mu, mu0, c)
}

fn comparison_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut failures = 0;
    for _ in 0..500 {
        let (f, mu, mu0, c) = random_comparison(&mut rng);
        match measure_comparison_check(&f, &mu, &mu0, &c) {
            Ok(out) if out.holds => {}
            _ => failures += 1,
        }
    }
    let f = [3.0, 2.0, 1.0];
    let mu = [0.2, 0.5, 0.3];
    let cases: [(&[f64], &[f64], &[bool], Hypothesis); 5] = [
        (&f, &[0.3, 0.1, 0.1], &[true, true, false], Hypothesis::NotDominated),
        (&f, &[0.1, 0.1, 0.1], &[true, false, false], Hypothesis::InsufficientMass),
        (&f, &[0.1, 0.1, 0.1], &[false, true, true], Hypothesis::NotSeparated),
        (&f, &[0.1, -0.1, 0.1], &[true, true, false], Hypothesis::NegativeMeasure),
        (&f, &[0.1, 0.1], &[true, true, false], Hypothesis::LengthMismatch),
    ];
    let misjudged = cases
        .iter()
        .filter(|(f, mu0, c, h)| {
            measure_comparison_check(f, &mu, mu0, c) != Err(InequalityError::PreconditionViolated(*h))
        })
        .count();
    verdict(
        failures == 0 && misjudged == 0,
        format!("500 instances, {failures} failures; {misjudged} of {} bad instances misjudged", cases.len()),
    )
}

fn buser() -> Verdict {
    let extremal = buser_product(MARGULIS_CONSTANT, MARGULIS_CONSTANT);
    let mut rng = ChaCha8Rng::seed_from_u64(55);
    let mut premises = 0;
    let mut broken = 0;
    for _ in 0..1000 {
        let spec = build_schottky(&random_disks(2, 1.2, &mut rng)).expect("valid disks");
        let z = Point::from_polar(Point::I, rng.gen_range(0.0..4.0), rng.gen_range(0.0..TAU));
        let d: Vec<f64> = spec.generators().iter().map(|g| displacement(g, z)).collect();
        let defect = FRAC_PI_2 - angular_term(d[0]) - angular_term(d[1]);
        if defect >= 0.0 {
            premises += 1;
            if buser_product(d[0], d[1]) < 1.0 - THEOREM_SLACK {
                broken += 1;
            }
        }
    }
    verdict(
        (extremal - 1.0).abs() < 1e-12 && broken == 0,
        format!("extremal product - 1 = {:.1e}; {premises} configurations with defect >= 0, {broken} broken", extremal - 1.0),
    )
}

fn measure_trends() -> Verdict {
    let spec = gamma2();
    let lengths = [6, 8, 10, 12];
    let mut sum_err: f64 = 0.0;
    let mut tv = Vec::new();
    let mut residual = Vec::new();
    for &l in &lengths {
        let approx = PoincareApprox::new(&spec, Point::I, l, 1.05).expect("truncation fits");
        let parts = decompose_by_first_letter(&approx, 64).unwrap();
        let total: f64 = parts.iter().map(BoundaryMeasure::total).sum();
        sum_err = sum_err.max((total - 1.0).abs());
        tv.push(approx.measure(64).unwrap().total_variation_from_uniform());
        let worst = Letter::alphabet(2)
            .map(|psi| decomposition_identity_residual(&approx, psi, 64).unwrap())
            .fold(0.0, f64::max);
        residual.push(worst);
    }
    // a Schottky group of infinite co-area for the normalization part
    let schottky = build_schottky(&random_disks(3, 0.6, &mut ChaCha8Rng::seed_from_u64(3))).unwrap();
    for l in [2, 4, 6] {
        let approx = PoincareApprox::new(&schottky, Point::I, l, 1.05).unwrap();
        let total: f64 = decompose_by_first_letter(&approx, 64).unwrap().iter().map(BoundaryMeasure::total).sum();
        sum_err = sum_err.max((total - 1.0).abs());
    }
    let tv_monotone = tv.windows(2).all(|w| w[1] <= w[0]);
    let residual_drop = residual[3] < residual[1];
    verdict(
        sum_err < 1e-12 && tv_monotone && residual_drop,
        format!(
            "mass sum error {sum_err:.1e}; TV {:?}; residual(8) = {:.4}, residual(12) = {:.4}",
            tv.iter().map(|v| (v * 1e4).round() / 1e4).collect::<Vec<_>>(),
            residual[1],
            residual[3]
        ),
    )
}

fn trig_chain() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut min_slack = f64::INFINITY;
    for _ in 0..1000 {
        let k = rng.gen_range(2..=6);
        let w: Vec<f64> = (0..2 * k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total = w.iter().sum::<f64>() / rng.gen_range(0.8..1.0);
        let (alphas, betas): (Vec<f64>, Vec<f64>) = (0..k)
            .map(|i| {
                let (a, b) = (w[2 * i] / total, w[2 * i + 1] / total);
                (a.min(b), a.max(b))
            })
            .unzip();
        let report = trig_chain_check(&alphas, &betas).expect("admissible masses");
        min_slack = min_slack.min(report.min_slack);
    }
    let mut sym_err: f64 = 0.0;
    for k in 2..=8 {
        let m = vec![1.0 / (2.0 * k as f64); k];
        let report = trig_chain_check(&m, &m).unwrap();
        for s in &report.steps {
            sym_err = sym_err.max((s.displacement_bound - bound_bk(k)).abs());
        }
    }
    verdict(
        min_slack >= -1e-12 && sym_err < 1e-12,
        format!("smallest slack {min_slack:.2e} over 1000 mass vectors; symmetric error {sym_err:.1e}"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Verdict); 9] = [
        ("extremal sharpness", Duration::from_millis(1), extremal_sharpness),
        ("margulis constant", Duration::from_secs(30), margulis_constant),
        ("bound table", Duration::from_millis(1), bound_table),
        ("monte carlo instantiation", Duration::from_secs(60), monte_carlo),
        ("integral identity", Duration::from_secs(5), integral_identity),
        ("finite comparison oracle", Duration::from_secs(1), comparison_oracle),
        ("buser product", Duration::from_secs(5), buser),
        ("measure-lab trends", Duration::from_secs(120), measure_trends),
        ("trig chain", Duration::from_secs(1), trig_chain),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let ok = v.ok && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {} [{:.3} ms, budget {:?}{}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            elapsed.as_secs_f64() * 1e3,
            budget,
            if in_time { "" } else { ", over budget" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
