//! The angular displacement inequality and the quantities around it.
//!
//! For free generators `g1, …, gk` and any basepoint `z`, with
//! `dᵢ = d(z, gᵢz)`,
//!
//! ```text
//! Σᵢ arccos(tanh(dᵢ / 2)) ≤ π / 2.
//! ```
//!
//! The *defect* is `π/2` minus the left side. This module evaluates it, the
//! resulting bound `B(k)` on the largest displacement, the older
//! `Σ 1/(1 + e^{dᵢ}) ≤ 1/2` inequality it implies, the mass-to-displacement
//! lower bound used in its proof and the two surface corollaries (the
//! Margulis constant and the product of half-length sines of two loops).

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;
use thiserror::Error;

use crate::freegroup::GroupSpec;
use crate::hyperbolic::{displacement, Isometry, Point};

/// Absolute slack allowed on every comparison derived from an exact theorem.
pub const THEOREM_SLACK: f64 = 1e-9;

/// `log(3 + 2√2)`, the two-dimensional Margulis constant.
pub const MARGULIS_CONSTANT: f64 = 1.762_747_174_039_086_1;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InequalityError {
    #[error("group has no valid ping-pong certificate; report is advisory")]
    UncertifiedGroup { report: Box<DefectReport> },
    #[error("group has no valid ping-pong certificate; Margulis check is advisory")]
    UncertifiedMargulis { outcome: MargulisOutcome },
    #[error("expected a rank-2 group, got rank {0}")]
    NotRankTwo(usize),
    #[error("mass pair (a = {a}, b = {b}) is outside 0 <= a <= 1/2, 0 <= b <= 1")]
    MassOutOfRange { a: f64, b: f64 },
    #[error("degenerate masses (a = {a}, b = {b}): the bound is infinite or undefined")]
    DegenerateMass { a: f64, b: f64 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(Hypothesis),
}

/// Which hypothesis of a finite check failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Hypothesis {
    #[error("inputs have mismatched lengths")]
    LengthMismatch,
    #[error("inputs are empty")]
    Empty,
    #[error("f must be finite and nonnegative")]
    NegativeFunction,
    #[error("measures must be finite and nonnegative")]
    NegativeMeasure,
    #[error("mu0 <= mu must hold pointwise")]
    NotDominated,
    #[error("mu(C) >= mu0(X) must hold")]
    InsufficientMass,
    #[error("inf f(C) >= sup f(X - C) must hold")]
    NotSeparated,
    #[error("alpha_i must lie in (0, 1/2)")]
    AlphaRange,
    #[error("beta_i must lie in (0, 1)")]
    BetaRange,
    #[error("alpha_i <= beta_i must hold")]
    NotOrdered,
    #[error("total mass sum(alpha_i + beta_i) must not exceed 1")]
    MassExceedsOne,
    #[error("masses must sum to 1")]
    NotNormalized,
    #[error("need an even number (2k) of first-letter masses")]
    OddLetterCount,
}

/// `arccos(tanh(d/2))`, evaluated as `2 atan(e^{-d/2})` to keep accuracy for
/// large `d`. Strictly decreasing from `π/2` at `d = 0`.
pub fn angular_term(d: f64) -> f64 {
    2.0 * (-d / 2.0).exp().atan()
}

/// Inverse of [`angular_term`]: `log((1 + cos y) / (1 - cos y)) = -2 log tan(y/2)`.
pub fn displacement_for_angle(y: f64) -> f64 {
    -2.0 * (y / 2.0).tan().ln()
}

/// `B(k) = log((1 + cos(π/2k)) / (1 - cos(π/2k)))`: some generator moves every
/// point at least this far.
pub fn bound_bk(k: usize) -> f64 {
    assert!(k >= 2, "B(k) is defined for k >= 2");
    displacement_for_angle(PI / (2.0 * k as f64))
}

/// `log(2k - 1)`, the bound obtained from the three-dimensional inequality.
pub fn log_2k_minus_1(k: usize) -> f64 {
    (2.0 * k as f64 - 1.0).ln()
}

/// `Σ 1 / (1 + e^{dᵢ})`.
pub fn accs_sum(displacements: &[f64]) -> f64 {
    displacements.iter().map(|d| 1.0 / (1.0 + d.exp())).sum()
}

/// `Σ (1 - cos yᵢ)`; at most 1 exactly when [`accs_sum`] of the matching
/// displacements is at most 1/2.
pub fn accs_region_sum(angles: &[f64]) -> f64 {
    angles
        .iter()
        .map(|y| {
            let s = (y / 2.0).sin();
            2.0 * s * s
        })
        .sum()
}

/// The equal-angle point `yᵢ = arccos(1 - 1/k)` that lies on the boundary of
/// the older inequality's region but violates the angular one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrictnessWitness {
    pub k: usize,
    pub angle: f64,
    pub accs_region_sum: f64,
    pub angular_sum: f64,
}

pub fn strictness_witness(k: usize) -> StrictnessWitness {
    let angle = (1.0 - 1.0 / k as f64).acos();
    let angles = vec![angle; k];
    StrictnessWitness {
        k,
        angle,
        accs_region_sum: accs_region_sum(&angles),
        angular_sum: k as f64 * angle,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub k: usize,
    pub basepoint: Point,
    pub displacements: Vec<f64>,
    pub angular_terms: Vec<f64>,
    pub angular_sum: f64,
    pub defect: f64,
    pub max_displacement: f64,
    #[serde(rename = "bound_Bk")]
    pub bound_bk: f64,
    pub accs_sum: f64,
    pub satisfies_main: bool,
    pub satisfies_accs: bool,
    /// Set when the group was not certified free.
    pub advisory: bool,
}

impl DefectReport {
    pub fn csv_header(k: usize) -> String {
        let mut cols = vec!["k".to_string(), "z_x".to_string(), "z_y".to_string()];
        cols.extend((1..=k).map(|i| format!("d_{i}")));
        cols.extend(
            ["angular_sum", "defect", "satisfies_main", "satisfies_accs"]
                .iter()
                .map(|s| s.to_string()),
        );
        cols.join(",")
    }

    /// `k,z_x,z_y,d_1..d_k,angular_sum,defect,satisfies_main,satisfies_accs`.
    pub fn csv_row(&self) -> String {
        let mut cols = vec![
            self.k.to_string(),
            self.basepoint.x().to_string(),
            self.basepoint.y().to_string(),
        ];
        cols.extend(self.displacements.iter().map(|d| d.to_string()));
        cols.push(self.angular_sum.to_string());
        cols.push(self.defect.to_string());
        cols.push(self.satisfies_main.to_string());
        cols.push(self.satisfies_accs.to_string());
        cols.join(",")
    }
}

/// Evaluates the inequality for bare generators without any freeness check.
pub fn evaluate_defect(generators: &[Isometry], z: Point) -> DefectReport {
    let displacements: Vec<f64> = generators.iter().map(|g| displacement(g, z)).collect();
    let angular_terms: Vec<f64> = displacements.iter().map(|&d| angular_term(d)).collect();
    let angular_sum: f64 = angular_terms.iter().sum();
    let defect = FRAC_PI_2 - angular_sum;
    let max_displacement = displacements.iter().copied().fold(0.0, f64::max);
    let accs = accs_sum(&displacements);
    let k = generators.len();
    DefectReport {
        k,
        basepoint: z,
        bound_bk: if k >= 2 { bound_bk(k) } else { f64::NAN },
        displacements,
        angular_terms,
        angular_sum,
        defect,
        max_displacement,
        accs_sum: accs,
        satisfies_main: defect >= -THEOREM_SLACK,
        satisfies_accs: accs <= 0.5 + THEOREM_SLACK,
        advisory: false,
    }
}

/// The defect at `z`. Uncertified groups still get a report, returned inside
/// [`InequalityError::UncertifiedGroup`] with `advisory` set.
pub fn defect_report(spec: &GroupSpec, z: Point) -> Result<DefectReport, InequalityError> {
    let mut report = evaluate_defect(spec.generators(), z);
    if spec.is_certified() {
        Ok(report)
    } else {
        report.advisory = true;
        Err(InequalityError::UncertifiedGroup {
            report: Box::new(report),
        })
    }
}

/// Masses `(a, b)` with `0 <= a <= 1/2` and `0 <= b <= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassPair {
    a: f64,
    b: f64,
}

impl MassPair {
    pub fn new(a: f64, b: f64) -> Result<Self, InequalityError> {
        if (0.0..=0.5).contains(&a) && (0.0..=1.0).contains(&b) {
            Ok(MassPair { a, b })
        } else {
            Err(InequalityError::MassOutOfRange { a, b })
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `log(tan(πb/2) / tan(πa/2))`: a measure of mass at most `a`, dominated by
/// the round measure at `z`, whose Poisson transform toward `γ⁻¹z` has mass at
/// least `b`, forces `d(z, γz)` above this value. Negative values are vacuous.
pub fn displacement_lower_bound(m: MassPair) -> Result<f64, InequalityError> {
    let (a, b) = (m.a, m.b);
    if a == 0.0 || b == 0.0 || b == 1.0 {
        return Err(InequalityError::DegenerateMass { a, b });
    }
    Ok(((PI * b / 2.0).tan() / (PI * a / 2.0).tan()).ln())
}

/// `(1/π) (cosh h - sinh h cos φ)⁻¹`, the integrand of [`kernel_arc_integral`].
pub fn kernel_arc_integrand(h: f64, phi: f64) -> f64 {
    crate::hyperbolic::poisson_kernel_at(h, phi) / PI
}

/// `(1/π) ∫₀^{πa} dφ / (cosh h - sinh h cos φ) = (2/π) arctan(e^h tan(πa/2))`.
///
/// Panics unless `h >= 0` and `0 < a <= 1`. At `a = 1` the limit value 1 is
/// returned without evaluating `tan(π/2)`.
pub fn kernel_arc_integral(h: f64, a: f64) -> f64 {
    assert!(h >= 0.0, "h must be nonnegative, got {h}");
    assert!(a > 0.0 && a <= 1.0, "a must lie in (0, 1], got {a}");
    if a == 1.0 {
        return 1.0;
    }
    2.0 / PI * (h.exp() * (PI * a / 2.0).tan()).atan()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonOutcome {
    /// `∫_X f dμ₀`.
    pub lhs: f64,
    /// `∫_C f dμ`.
    pub rhs: f64,
    pub holds: bool,
}

/// Finite instance of the comparison lemma: if `0 <= μ₀ <= μ`,
/// `μ(C) >= μ₀(X)` and `inf f(C) >= sup f(X - C)` then
/// `∫_X f dμ₀ <= ∫_C f dμ`. `in_c[j]` marks membership of point `j` in `C`.
pub fn measure_comparison_check(
    f: &[f64],
    mu: &[f64],
    mu0: &[f64],
    in_c: &[bool],
) -> Result<ComparisonOutcome, InequalityError> {
    use Hypothesis::*;
    let fail = |h| Err(InequalityError::PreconditionViolated(h));
    let n = f.len();
    if mu.len() != n || mu0.len() != n || in_c.len() != n {
        return fail(LengthMismatch);
    }
    if n == 0 {
        return fail(Empty);
    }
    if f.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return fail(NegativeFunction);
    }
    if mu.iter().chain(mu0).any(|v| !(v.is_finite() && *v >= 0.0)) {
        return fail(NegativeMeasure);
    }
    if mu0.iter().zip(mu).any(|(m0, m)| m0 > m) {
        return fail(NotDominated);
    }
    let mass_c: f64 = (0..n).filter(|&j| in_c[j]).map(|j| mu[j]).sum();
    let mass0: f64 = mu0.iter().sum();
    if mass_c < mass0 {
        return fail(InsufficientMass);
    }
    let inf_c = (0..n)
        .filter(|&j| in_c[j])
        .map(|j| f[j])
        .fold(f64::INFINITY, f64::min);
    let sup_out = (0..n)
        .filter(|&j| !in_c[j])
        .map(|j| f[j])
        .fold(f64::NEG_INFINITY, f64::max);
    if inf_c < sup_out {
        return fail(NotSeparated);
    }
    let lhs: f64 = f.iter().zip(mu0).map(|(v, m)| v * m).sum();
    let rhs: f64 = (0..n).filter(|&j| in_c[j]).map(|j| f[j] * mu[j]).sum();
    let tol = 1e-12 * rhs.abs().max(1.0);
    Ok(ComparisonOutcome {
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
    })
}

/// `sin²((x + y)/2) - sin x sin y`, nonnegative on `(0, π)²`.
pub fn sin_product_slack(x: f64, y: f64) -> f64 {
    let s = ((x + y) / 2.0).sin();
    s * s - x.sin() * y.sin()
}

/// One generator's pass through the chain turning masses into an angular bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrigChainStep {
    pub alpha: f64,
    pub beta: f64,
    /// `(α + β) / 2`.
    pub p: f64,
    /// `E = tan(π(1-β)/2) / tan(πα/2)`, the lower bound for `e^{d}`.
    pub exp_bound: f64,
    /// `|E - (cos(πp) / (sin(πβ/2) sin(πα/2)) + 1)|`, zero up to rounding.
    pub identity_residual: f64,
    /// `sin²(πp/2) - sin(πβ/2) sin(πα/2)`.
    pub sin_product_slack: f64,
    /// `E + 1 - (cos(πp) / sin²(πp/2) + 2)`.
    pub kernel_slack: f64,
    /// `|cos(πp) / sin²(πp/2) + 2 - 2 / (1 - cos(πp))|`, zero up to rounding.
    pub closed_form_residual: f64,
    /// `πp - arccos((E - 1)/(E + 1))`.
    pub angle_slack: f64,
    /// `log E`.
    pub displacement_bound: f64,
    /// `log((1 + cos πp) / (1 - cos πp))`, the displacement at which the chain is tight.
    pub chain_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigChainReport {
    pub steps: Vec<TrigChainStep>,
    /// `π/2 - Σ πpᵢ`.
    pub sum_slack: f64,
    /// Smallest inequality slack over all steps, including `sum_slack`.
    pub min_slack: f64,
    /// Largest identity residual over all steps.
    pub max_identity_residual: f64,
}

/// Replays the chain of elementary inequalities from first-letter masses
/// `αᵢ = ν_{gᵢ}(S¹)`, `βᵢ = ν_{gᵢ⁻¹}(S¹)` to the angular sum, reporting the
/// slack of every step.
pub fn trig_chain_check(
    alphas: &[f64],
    betas: &[f64],
) -> Result<TrigChainReport, InequalityError> {
    use Hypothesis::*;
    let fail = |h| Err(InequalityError::PreconditionViolated(h));
    if alphas.len() != betas.len() {
        return fail(LengthMismatch);
    }
    if alphas.is_empty() {
        return fail(Empty);
    }
    for (&a, &b) in alphas.iter().zip(betas) {
        if !(a > 0.0 && a < 0.5) {
            return fail(AlphaRange);
        }
        if !(b > 0.0 && b < 1.0) {
            return fail(BetaRange);
        }
        if a > b {
            return fail(NotOrdered);
        }
    }
    let total: f64 = alphas.iter().chain(betas).sum();
    if total > 1.0 + 1e-12 {
        return fail(MassExceedsOne);
    }

    let steps: Vec<TrigChainStep> = alphas
        .iter()
        .zip(betas)
        .map(|(&alpha, &beta)| {
            let p = (alpha + beta) / 2.0;
            let (sa, ca) = (PI * alpha / 2.0).sin_cos();
            let (sb, cb) = (PI * beta / 2.0).sin_cos();
            let exp_bound = (PI * (1.0 - beta) / 2.0).tan() / (PI * alpha / 2.0).tan();
            let cos_p = (PI * p).cos();
            let identity_residual = (exp_bound - (cb * ca / (sb * sa))).abs()
                + (cb * ca / (sb * sa) - (cos_p / (sb * sa) + 1.0)).abs();
            let half = (PI * p / 2.0).sin();
            let sin_slack = half * half - sb * sa;
            let lower = cos_p / (half * half) + 2.0;
            let kernel_slack = exp_bound + 1.0 - lower;
            let closed_form_residual = (lower - 2.0 / (1.0 - cos_p)).abs();
            let angle_slack = PI * p - angular_term(exp_bound.ln());
            TrigChainStep {
                alpha,
                beta,
                p,
                exp_bound,
                identity_residual,
                sin_product_slack: sin_slack,
                kernel_slack,
                closed_form_residual,
                angle_slack,
                displacement_bound: exp_bound.ln(),
                chain_bound: displacement_for_angle(PI * p),
            }
        })
        .collect();
    let sum_slack = FRAC_PI_2 - steps.iter().map(|s| PI * s.p).sum::<f64>();
    let min_slack = steps
        .iter()
        .flat_map(|s| [s.sin_product_slack, s.kernel_slack, s.angle_slack])
        .fold(sum_slack, f64::min);
    let max_identity_residual = steps
        .iter()
        .flat_map(|s| [s.identity_residual, s.closed_form_residual])
        .fold(0.0, f64::max);
    Ok(TrigChainReport {
        steps,
        sum_slack,
        min_slack,
        max_identity_residual,
    })
}

/// `sinh(ℓ₁/2) · sinh(ℓ₂/2)`.
pub fn buser_product(l1: f64, l2: f64) -> f64 {
    (l1 / 2.0).sinh() * (l2 / 2.0).sinh()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BuserOutcome {
    pub angular_sum: f64,
    pub product: f64,
    /// `arccos(tanh(ℓ₁/2)) + arccos(tanh(ℓ₂/2)) <= π/2`.
    pub premise: bool,
    /// `product >= 1 - THEOREM_SLACK`.
    pub conclusion: bool,
    pub holds: bool,
}

/// Checks that a nonnegative two-term defect forces `sinh(ℓ₁/2) sinh(ℓ₂/2) >= 1`.
pub fn buser_implication(l1: f64, l2: f64) -> BuserOutcome {
    let angular_sum = angular_term(l1) + angular_term(l2);
    let product = buser_product(l1, l2);
    let premise = angular_sum <= FRAC_PI_2;
    let conclusion = product >= 1.0 - THEOREM_SLACK;
    BuserOutcome {
        angular_sum,
        product,
        premise,
        conclusion,
        holds: !premise || conclusion,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MargulisOutcome {
    pub max_displacement: f64,
    /// `max_displacement - log(3 + 2√2)`.
    pub slack: f64,
    pub holds: bool,
}

/// Whether one of the two generators moves `z` by at least `log(3 + 2√2)`.
pub fn margulis_check(spec: &GroupSpec, z: Point) -> Result<MargulisOutcome, InequalityError> {
    if spec.k() != 2 {
        return Err(InequalityError::NotRankTwo(spec.k()));
    }
    let [g, h] = [spec.generators()[0], spec.generators()[1]];
    let max_displacement = displacement(&g, z).max(displacement(&h, z));
    let slack = max_displacement - MARGULIS_CONSTANT;
    let outcome = MargulisOutcome {
        max_displacement,
        slack,
        holds: slack >= -THEOREM_SLACK,
    };
    if spec.is_certified() {
        Ok(outcome)
    } else {
        Err(InequalityError::UncertifiedMargulis { outcome })
    }
}
