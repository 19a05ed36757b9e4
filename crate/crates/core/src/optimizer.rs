//! Searches over basepoints: the smallest possible largest displacement, and
//! the largest possible angular sum.
//!
//! Both searches run in the coordinates `(x, log y)`, which cover the whole
//! half-plane. The default method is Nelder–Mead with five seeded restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::GroupSpec;
use crate::hyperbolic::{displacement, distance, Point};
use crate::inequality::angular_term;

/// Largest grid accepted by [`grid_oracle`].
pub const GRID_CELL_CAP: u64 = 10_000_000;

const RESTARTS: usize = 5;
const INITIAL_STEP: f64 = 0.5;
/// Restart results closer than this (hyperbolic distance) are the same optimum.
const DISTINCT_OPTIMA: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("group has no valid ping-pong certificate")]
    UncertifiedGroup,
    #[error("invalid optimizer config: {0}")]
    InvalidConfig(String),
    #[error("search did not converge after {} iterations", best.iterations)]
    NotConverged { best: Box<Optimum> },
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("grid has {cells} cells, cap is {cap}")]
    BudgetExceeded { cells: u64, cap: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Nelder–Mead with restarts.
    SimplexSearch,
    /// Compass search along `x` and `log y`. Can stall on kinks that are not
    /// aligned with the axes.
    CoordinateDescentOnHalfPlane,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iters: usize,
    /// Stop when the simplex (or compass step) is smaller than this in `(x, log y)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            method: Method::SimplexSearch,
            max_iters: 2000,
            tol: 1e-10,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(OptimizerError::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(OptimizerError::InvalidConfig("max_iters must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// `max_i d(z, g_i z)`, minimized.
    MaxDisplacement,
    /// `Σ arccos(tanh(d(z, g_i z)/2))`, maximized.
    AngularSum,
}

impl Objective {
    pub fn evaluate(self, spec: &GroupSpec, z: Point) -> f64 {
        let ds = spec.generators().iter().map(|g| displacement(g, z));
        match self {
            Objective::MaxDisplacement => ds.fold(0.0, f64::max),
            Objective::AngularSum => ds.map(angular_term).sum(),
        }
    }

    fn sign(self) -> f64 {
        match self {
            Objective::MaxDisplacement => 1.0,
            Objective::AngularSum => -1.0,
        }
    }

    /// Whether `a` is strictly better than `b`.
    fn better(self, a: f64, b: f64) -> bool {
        self.sign() * a < self.sign() * b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalOptimum {
    pub z: Point,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Optimum {
    pub z_star: Point,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub history: Vec<(Point, f64)>,
    /// Distinct end points of the restarts, best first.
    pub local_optima: Vec<LocalOptimum>,
}

impl Optimum {
    pub fn require_converged(self) -> Result<Self, OptimizerError> {
        if self.converged {
            Ok(self)
        } else {
            Err(OptimizerError::NotConverged { best: Box::new(self) })
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("optimum serializes")
    }

    /// `iteration,x,y,value`.
    pub fn history_csv(&self) -> String {
        let mut out = String::from("iteration,x,y,value\n");
        for (i, (p, v)) in self.history.iter().enumerate() {
            out.push_str(&format!("{i},{},{},{v}\n", p.x(), p.y()));
        }
        out
    }
}

fn to_point(u: [f64; 2]) -> Point {
    Point::new_unchecked(u[0], u[1].exp())
}

struct Run {
    best: [f64; 2],
    value: f64,
    iterations: usize,
    converged: bool,
    history: Vec<(Point, f64)>,
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: &F, start: [f64; 2], step: f64, cfg: &OptimizerConfig) -> Run {
    let mut simplex = [start, [start[0] + step, start[1]], [start[0], start[1] + step]];
    let mut values = simplex.map(|u| f(u));
    let mut history = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    loop {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);
        history.push((to_point(simplex[0]), values[0]));

        let diameter = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .map(|(i, j)| (simplex[i][0] - simplex[j][0]).hypot(simplex[i][1] - simplex[j][1]))
            .fold(0.0, f64::max);
        if diameter < cfg.tol {
            converged = true;
            break;
        }
        if iterations >= cfg.max_iters {
            break;
        }
        iterations += 1;

        let centroid = lerp(simplex[0], simplex[1], 0.5);
        let reflected = lerp(centroid, simplex[2], -1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = lerp(centroid, simplex[2], -2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let (contracted, fc) = if fr < values[2] {
                let c = lerp(centroid, reflected, 0.5);
                (c, f(c))
            } else {
                let c = lerp(centroid, simplex[2], 0.5);
                (c, f(c))
            };
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = lerp(simplex[0], simplex[i], 0.5);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    Run {
        best: simplex[0],
        value: values[0],
        iterations,
        converged,
        history,
    }
}

fn compass_search<F: Fn([f64; 2]) -> f64>(f: &F, start: [f64; 2], step: f64, cfg: &OptimizerConfig) -> Run {
    let mut u = start;
    let mut value = f(u);
    let mut h = step;
    let mut history = vec![(to_point(u), value)];
    let mut iterations = 0;
    let mut converged = false;
    const DIRECTIONS: [[f64; 2]; 4] = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]];
    loop {
        if h < cfg.tol {
            converged = true;
            break;
        }
        if iterations >= cfg.max_iters {
            break;
        }
        iterations += 1;
        let mut moved = false;
        for d in DIRECTIONS {
            let trial = [u[0] + h * d[0], u[1] + h * d[1]];
            let ft = f(trial);
            if ft < value {
                u = trial;
                value = ft;
                moved = true;
                break;
            }
        }
        if !moved {
            h *= 0.5;
        }
        history.push((to_point(u), value));
    }
    Run {
        best: u,
        value,
        iterations,
        converged,
        history,
    }
}

fn search(spec: &GroupSpec, objective: Objective, cfg: &OptimizerConfig) -> Result<Optimum, OptimizerError> {
    cfg.validate()?;
    if !spec.is_certified() {
        return Err(OptimizerError::UncertifiedGroup);
    }
    let sign = objective.sign();
    let f = |u: [f64; 2]| sign * objective.evaluate(spec, to_point(u));
    let run = |start: [f64; 2], step: f64| match cfg.method {
        Method::SimplexSearch => nelder_mead(&f, start, step, cfg),
        Method::CoordinateDescentOnHalfPlane => compass_search(&f, start, step, cfg),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts = vec![[0.0, 0.0]];
    starts.extend((1..RESTARTS).map(|_| [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]));
    let runs: Vec<Run> = starts.par_iter().map(|&s| run(s, INITIAL_STEP)).collect();

    let mut local_optima: Vec<LocalOptimum> = Vec::new();
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&i, &j| runs[i].value.total_cmp(&runs[j].value).then(i.cmp(&j)));
    for &i in &order {
        let z = to_point(runs[i].best);
        if local_optima.iter().all(|o| distance(o.z, z) > DISTINCT_OPTIMA) {
            local_optima.push(LocalOptimum {
                z,
                value: sign * runs[i].value,
            });
        }
    }

    let winner = &runs[order[0]];
    let mut best = winner.best;
    let mut value = winner.value;
    let mut iterations = winner.iterations;
    let mut converged = winner.converged;
    let mut history = winner.history.clone();
    // Restart from the best point with a fresh simplex until that stops helping.
    let mut step = INITIAL_STEP * 0.1;
    while iterations < cfg.max_iters {
        let polish = run(best, step);
        iterations += polish.iterations;
        history.extend(polish.history.iter().skip(1).copied());
        if polish.value < value {
            best = polish.best;
            value = polish.value;
            converged = polish.converged;
            step *= 0.1;
        } else {
            converged = converged || polish.converged;
            break;
        }
    }

    let z_star = to_point(best);
    Ok(Optimum {
        z_star,
        value: objective.evaluate(spec, z_star),
        iterations,
        converged,
        history: history.into_iter().map(|(p, v)| (p, sign * v)).collect(),
        local_optima,
    })
}

/// Smallest value over `z` of `max_i d(z, g_i z)`.
pub fn minimize_max_displacement(spec: &GroupSpec, cfg: &OptimizerConfig) -> Result<Optimum, OptimizerError> {
    search(spec, Objective::MaxDisplacement, cfg)
}

/// Largest value over `z` of `Σ arccos(tanh(d(z, g_i z)/2))`.
pub fn maximize_angular_sum(spec: &GroupSpec, cfg: &OptimizerConfig) -> Result<Optimum, OptimizerError> {
    search(spec, Objective::AngularSum, cfg)
}

/// `[x_min, x_max] × [y_min, y_max]` in half-plane coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Window {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self, OptimizerError> {
        let w = Window {
            x_min,
            x_max,
            y_min,
            y_max,
        };
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(OptimizerError::InvalidWindow("bounds must be finite".into()));
        }
        if x_min > x_max || y_min > y_max {
            return Err(OptimizerError::InvalidWindow("min exceeds max".into()));
        }
        if y_min <= 0.0 {
            return Err(OptimizerError::InvalidWindow("y_min must be positive".into()));
        }
        Ok(w)
    }

    /// Square window of half-width `radius` around `center`, clipped to `y > 0`.
    pub fn around(center: Point, radius: f64) -> Result<Self, OptimizerError> {
        let y_min = (center.y() - radius).max(center.y() * 1e-3);
        Window::new(center.x() - radius, center.x() + radius, y_min, center.y() + radius)
    }
}

fn axis(lo: f64, hi: f64, resolution: f64) -> Vec<f64> {
    let steps = ((hi - lo) / resolution - 1e-9).ceil().max(0.0) as usize;
    if steps == 0 {
        return vec![lo];
    }
    (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect()
}

/// Evaluates `objective` on every node of a grid with spacing at most
/// `resolution`, edges included.
pub fn grid_oracle(
    spec: &GroupSpec,
    objective: Objective,
    window: Window,
    resolution: f64,
) -> Result<Optimum, OptimizerError> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(OptimizerError::InvalidWindow(format!("resolution must be positive, got {resolution}")));
    }
    let nx = ((window.x_max - window.x_min) / resolution).ceil() + 1.0;
    let ny = ((window.y_max - window.y_min) / resolution).ceil() + 1.0;
    let cells = nx * ny;
    if cells > GRID_CELL_CAP as f64 {
        return Err(OptimizerError::BudgetExceeded {
            cells: if cells >= u64::MAX as f64 { u64::MAX } else { cells as u64 },
            cap: GRID_CELL_CAP,
        });
    }
    let xs = axis(window.x_min, window.x_max, resolution);
    let ys = axis(window.y_min, window.y_max, resolution);
    let row_best: Vec<(usize, f64)> = ys
        .par_iter()
        .map(|&y| {
            let mut best = (0, objective.evaluate(spec, Point::new_unchecked(xs[0], y)));
            for (i, &x) in xs.iter().enumerate().skip(1) {
                let v = objective.evaluate(spec, Point::new_unchecked(x, y));
                if objective.better(v, best.1) {
                    best = (i, v);
                }
            }
            best
        })
        .collect();
    let mut best_row = 0;
    for (r, rb) in row_best.iter().enumerate().skip(1) {
        if objective.better(rb.1, row_best[best_row].1) {
            best_row = r;
        }
    }
    let (col, value) = row_best[best_row];
    let z_star = Point::new_unchecked(xs[col], ys[best_row]);
    Ok(Optimum {
        z_star,
        value,
        iterations: xs.len() * ys.len(),
        converged: true,
        history: vec![(z_star, value)],
        local_optima: vec![LocalOptimum { z: z_star, value }],
    })
}

/// Upper bound on the hyperbolic Lipschitz constant of `objective` for a rank-`k` group.
pub fn lipschitz_bound(objective: Objective, k: usize) -> f64 {
    match objective {
        // |d(z, gz) - d(w, gw)| <= d(z, w) + d(gz, gw)
        Objective::MaxDisplacement => 2.0,
        // each term has slope at most 1/2 in d
        Objective::AngularSum => k as f64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{build_schottky, gamma2, random_disks, symmetric_disks};
    use crate::hyperbolic::Isometry;
    use crate::inequality::{bound_bk, MARGULIS_CONSTANT, THEOREM_SLACK};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn gamma2_margulis_value() {
        let opt = minimize_max_displacement(&gamma2(), &cfg()).unwrap();
        assert!(opt.converged);
        assert!((opt.value - MARGULIS_CONSTANT).abs() < 1e-6, "{}", opt.value);
        assert!(distance(opt.z_star, Point::I) < 1e-4, "{}", opt.z_star);
        assert!((opt.value - Objective::MaxDisplacement.evaluate(&gamma2(), opt.z_star)).abs() < 1e-12);
        assert!(opt.value >= bound_bk(2) - 1e-6);
    }

    #[test]
    fn gamma2_grid_then_refine() {
        let spec = gamma2();
        let window = Window::new(-1.0, 1.0, 0.25, 4.0).unwrap();
        let mut g = grid_oracle(&spec, Objective::MaxDisplacement, window, 0.005).unwrap();
        assert!((g.value - MARGULIS_CONSTANT).abs() < 0.01);
        // zoom in around the coarse optimum down to resolution 1e-3 and beyond
        let mut res = 0.005;
        for _ in 0..4 {
            let w = Window::around(g.z_star, 10.0 * res).unwrap();
            res /= 5.0;
            g = grid_oracle(&spec, Objective::MaxDisplacement, w, res).unwrap();
        }
        let opt = minimize_max_displacement(&spec, &cfg()).unwrap();
        assert!((g.value - opt.value).abs() < 2.0 * res * 2.0);
        assert!(distance(g.z_star, opt.z_star) < 1e-3);
    }

    #[test]
    fn grid_agrees_with_search_within_lipschitz() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let specs = [
            gamma2(),
            build_schottky(&symmetric_disks(2, 0.5)).unwrap(),
            build_schottky(&random_disks(2, 0.9, &mut rng)).unwrap(),
        ];
        let res = 0.01;
        for spec in &specs {
            for objective in [Objective::MaxDisplacement, Objective::AngularSum] {
                let opt = search(spec, objective, &cfg()).unwrap();
                let w = Window::around(opt.z_star, 0.5).unwrap();
                let g = grid_oracle(spec, objective, w, res).unwrap();
                // nearest node is within res/√2 Euclidean, i.e. res/(√2 y) hyperbolic
                let h = res / (std::f64::consts::SQRT_2 * w.y_min);
                let slack = lipschitz_bound(objective, spec.k()) * h;
                assert!((g.value - opt.value).abs() <= slack, "{objective:?}: {} vs {}", g.value, opt.value);
                assert!(!objective.better(g.value, opt.value) || (g.value - opt.value).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn single_cell_grid() {
        let w = Window::new(0.3, 0.3, 2.0, 2.0).unwrap();
        let g = grid_oracle(&gamma2(), Objective::MaxDisplacement, w, 0.1).unwrap();
        assert_eq!(g.z_star, Point::new(0.3, 2.0).unwrap());
        assert_eq!(g.iterations, 1);
    }

    #[test]
    fn grid_budget_and_window_errors() {
        let w = Window::new(-10.0, 10.0, 0.1, 10.0).unwrap();
        assert!(matches!(
            grid_oracle(&gamma2(), Objective::MaxDisplacement, w, 1e-4),
            Err(OptimizerError::BudgetExceeded { .. })
        ));
        assert!(Window::new(1.0, 0.0, 1.0, 2.0).is_err());
        assert!(Window::new(0.0, 1.0, 0.0, 2.0).is_err());
        assert!(grid_oracle(&gamma2(), Objective::AngularSum, w, 0.0).is_err());
    }

    #[test]
    fn conjugation_equivariance() {
        let m = Isometry::new(2.0, 1.0, 0.5, 0.75).unwrap();
        for spec in [gamma2(), build_schottky(&symmetric_disks(2, 0.5)).unwrap()] {
            let conj = spec.conjugated(&m);
            let a = minimize_max_displacement(&spec, &cfg()).unwrap();
            let b = minimize_max_displacement(&conj, &cfg()).unwrap();
            assert!((a.value - b.value).abs() < 1e-6);
            assert!(distance(m.apply(a.z_star), b.z_star) < 1e-3, "{} vs {}", m.apply(a.z_star), b.z_star);
            let a = maximize_angular_sum(&spec, &cfg()).unwrap();
            let b = maximize_angular_sum(&conj, &cfg()).unwrap();
            assert!((a.value - b.value).abs() < 1e-6);
        }
    }

    #[test]
    fn rank_three_floor() {
        let spec = build_schottky(&symmetric_disks(3, 0.25)).unwrap();
        let opt = minimize_max_displacement(&spec, &cfg()).unwrap();
        assert!(opt.value >= bound_bk(3) - 1e-6, "{}", opt.value);
        // regression value: the symmetric configuration is optimal at i
        assert!(distance(opt.z_star, Point::I) < 1e-4);
        let at_i = Objective::MaxDisplacement.evaluate(&spec, Point::I);
        assert!((opt.value - at_i).abs() < 1e-8);
    }

    #[test]
    fn gamma2_sharpness() {
        let opt = maximize_angular_sum(&gamma2(), &cfg()).unwrap();
        assert!((opt.value - FRAC_PI_2).abs() < 1e-6, "{}", opt.value);
        assert!(opt.value <= FRAC_PI_2 + THEOREM_SLACK);
    }

    #[test]
    fn separated_disks_far_from_sharp() {
        let spec = build_schottky(&symmetric_disks(2, PI / 64.0)).unwrap();
        let opt = maximize_angular_sum(&spec, &cfg()).unwrap();
        assert!(opt.value < 0.5, "{}", opt.value);
        // the symmetric point is the maximum
        assert!((opt.value - Objective::AngularSum.evaluate(&spec, Point::I)).abs() < 1e-8);
    }

    #[test]
    fn random_specs_respect_floor_and_ceiling() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10 {
            let k = rng.gen_range(2..4);
            let spec = build_schottky(&random_disks(k, 1.0, &mut rng)).unwrap();
            let lo = minimize_max_displacement(&spec, &cfg()).unwrap();
            assert!(lo.value >= bound_bk(k) - 1e-6);
            let hi = maximize_angular_sum(&spec, &cfg()).unwrap();
            assert!(hi.value <= FRAC_PI_2 + THEOREM_SLACK);
        }
    }

    #[test]
    fn lipschitz_bounds_hold() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..500 {
            let k = rng.gen_range(2..5);
            let spec = build_schottky(&random_disks(k, 1.0, &mut rng)).unwrap();
            let z = Point::from_polar(Point::I, rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.3));
            let w = Point::from_polar(z, rng.gen_range(0.0..1.0), rng.gen_range(0.0..6.3));
            let d = distance(z, w);
            for objective in [Objective::MaxDisplacement, Objective::AngularSum] {
                let diff = (objective.evaluate(&spec, z) - objective.evaluate(&spec, w)).abs();
                assert!(diff <= lipschitz_bound(objective, k) * d + 1e-9);
            }
        }
    }

    #[test]
    fn coordinate_descent_comes_close() {
        let c = OptimizerConfig {
            method: Method::CoordinateDescentOnHalfPlane,
            ..cfg()
        };
        let opt = minimize_max_displacement(&gamma2(), &c).unwrap();
        assert!(opt.converged);
        assert!(opt.value >= MARGULIS_CONSTANT - 1e-9);
        assert!(opt.value - MARGULIS_CONSTANT < 1e-3, "{}", opt.value);
    }

    #[test]
    fn iteration_cap_reports_not_converged() {
        let c = OptimizerConfig { max_iters: 3, ..cfg() };
        let opt = minimize_max_displacement(&gamma2(), &c).unwrap();
        assert!(!opt.converged);
        assert!(matches!(opt.require_converged(), Err(OptimizerError::NotConverged { .. })));
        assert!(OptimizerConfig { tol: 0.0, ..cfg() }.validate().is_err());
        assert!(OptimizerConfig { max_iters: 0, ..cfg() }.validate().is_err());
        assert_eq!(
            minimize_max_displacement(&gamma2().without_certificate(), &cfg()).unwrap_err(),
            OptimizerError::UncertifiedGroup
        );
    }

    #[test]
    fn deterministic_given_seed() {
        let spec = build_schottky(&random_disks(3, 0.8, &mut ChaCha8Rng::seed_from_u64(1))).unwrap();
        let a = minimize_max_displacement(&spec, &cfg()).unwrap();
        let b = minimize_max_displacement(&spec, &cfg()).unwrap();
        assert_eq!(a, b);
        assert!(a.history_csv().starts_with("iteration,x,y,value\n0,"));
        let v: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        for key in ["z_star", "value", "iterations", "converged"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
