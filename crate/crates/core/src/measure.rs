//! Truncated Patterson–Sullivan measures.
//!
//! Every nonidentity word `γ` of length at most `max_len` places an atom of
//! weight `e^{-s·d(z₀, γz₀)}` at the direction of `γz₀` seen from `z₀` (disk
//! frame centred at `z₀`). Weights are normalized to total mass 1 and binned
//! on `N` uniform arcs. Splitting the atoms by first letter gives the measures
//! `ν_ψ`, and [`decomposition_identity_residual`] measures how far they are
//! from satisfying the transport identity
//! `∫ P(z₀, ψ⁻¹z₀, ζ)^D dν_{ψ⁻¹}(ζ) = 1 - ν_ψ(S¹)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{walk_words_from, word_count, BoundaryDisk, GroupSpec, Letter, DEFAULT_WORD_CAP};
use crate::hyperbolic::{distance, normalize_angle, poisson_kernel, BoundaryPoint, DiskFrame, Point};

pub const DEFAULT_BINS: usize = 64;
pub const DEFAULT_EXPONENT: f64 = 1.05;
pub const MIN_BINS: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error("group has no valid ping-pong certificate")]
    UncertifiedGroup,
    #[error("exponent s must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("need at least {MIN_BINS} bins, got {0}")]
    TooFewBins(usize),
    #[error("truncation at length 0 leaves no orbit points")]
    EmptyOrbit,
    #[error("truncation needs {requested} words, cap is {cap}")]
    BudgetExceeded { requested: u64, cap: u64 },
    #[error("letter {0} is not in the group's alphabet")]
    LetterOutOfRange(Letter),
    #[error("precondition violated: {0}")]
    PreconditionViolated(crate::inequality::Hypothesis),
}

/// Masses on `N` uniform arcs `[2πj/N, 2π(j+1)/N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMeasure {
    #[serde(rename = "N")]
    n: usize,
    bins: Vec<f64>,
    total: f64,
}

impl BoundaryMeasure {
    pub fn from_bins(bins: Vec<f64>) -> Self {
        let total = compensated_sum(bins.iter().copied());
        BoundaryMeasure {
            n: bins.len(),
            bins,
            total,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn bin_width(&self) -> f64 {
        TAU / self.n as f64
    }

    pub fn bin_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.bin_width()
    }

    pub fn bin_of(&self, theta: f64) -> usize {
        bin_index(theta, self.n)
    }

    /// Mass over `[lo, hi)`, counting each bin by the fraction of it inside.
    pub fn mass_in_interval(&self, lo: f64, hi: f64) -> f64 {
        let w = self.bin_width();
        let mut mass = 0.0;
        for (j, m) in self.bins.iter().enumerate() {
            let (a, b) = (j as f64 * w, (j + 1) as f64 * w);
            let mut overlap = 0.0;
            for shift in [-TAU, 0.0, TAU] {
                let (l, h) = (lo + shift, hi + shift);
                overlap += (b.min(h) - a.max(l)).max(0.0);
            }
            mass += m * (overlap / w).min(1.0);
        }
        mass
    }

    pub fn mass_in_disk(&self, disk: &BoundaryDisk) -> f64 {
        self.mass_in_interval(disk.center - disk.radius, disk.center + disk.radius)
    }

    /// `½ Σ |m_j - total/N|`.
    pub fn total_variation_from_uniform(&self) -> f64 {
        let u = self.total / self.n as f64;
        0.5 * self.bins.iter().map(|m| (m - u).abs()).sum::<f64>()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("measure serializes")
    }

    /// `bin_index,angle_center,mass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_index,angle_center,mass\n");
        for (j, m) in self.bins.iter().enumerate() {
            out.push_str(&format!("{j},{},{m}\n", self.bin_center(j)));
        }
        out
    }
}

fn bin_index(theta: f64, n: usize) -> usize {
    let j = (normalize_angle(theta) / TAU * n as f64).floor() as usize;
    j.min(n - 1)
}

fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    /// Direction of `γz₀` in the frame centred at `z₀`.
    pub theta: f64,
    /// Normalized weight.
    pub weight: f64,
}

/// Weighted orbit of `z₀` truncated at word length `max_len`, grouped by
/// first letter.
#[derive(Debug, Clone)]
pub struct PoincareApprox {
    spec: GroupSpec,
    basepoint: Point,
    max_len: usize,
    exponent_s: f64,
    atoms: Vec<Vec<Atom>>,
    raw_total: f64,
}

impl PoincareApprox {
    pub fn new(spec: &GroupSpec, z0: Point, max_len: usize, s: f64) -> Result<Self, MeasureError> {
        if !spec.is_certified() {
            return Err(MeasureError::UncertifiedGroup);
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(MeasureError::InvalidExponent(s));
        }
        if max_len == 0 {
            return Err(MeasureError::EmptyOrbit);
        }
        let cap = DEFAULT_WORD_CAP;
        match word_count(spec.k(), max_len) {
            Some(n) if n <= cap => {}
            other => {
                return Err(MeasureError::BudgetExceeded {
                    requested: other.unwrap_or(u64::MAX),
                    cap,
                })
            }
        }

        let frame = DiskFrame::centered(z0);
        let letters: Vec<Letter> = Letter::alphabet(spec.k()).collect();
        let mut atoms: Vec<Vec<Atom>> = letters
            .par_iter()
            .map(|&first| {
                let mut out = Vec::new();
                walk_words_from(spec, first, max_len, |_, m| {
                    let p = m.apply(z0);
                    out.push(Atom {
                        theta: frame.direction(p).theta(),
                        weight: (-s * distance(z0, p)).exp(),
                    });
                });
                out
            })
            .collect();
        let raw_total = compensated_sum(atoms.iter().flatten().map(|a| a.weight));
        for a in atoms.iter_mut().flatten() {
            a.weight /= raw_total;
        }
        Ok(PoincareApprox {
            spec: spec.clone(),
            basepoint: z0,
            max_len,
            exponent_s: s,
            atoms,
            raw_total,
        })
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn basepoint(&self) -> Point {
        self.basepoint
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn exponent_s(&self) -> f64 {
        self.exponent_s
    }

    /// Unnormalized partial sum of the Poincaré series (identity excluded).
    pub fn raw_total(&self) -> f64 {
        self.raw_total
    }

    /// Atoms of words starting with `letter`.
    pub fn atoms(&self, letter: Letter) -> &[Atom] {
        &self.atoms[letter.index()]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.iter().map(Vec::len).sum()
    }

    fn raw_bins(&self, letter: Letter, n: usize) -> Vec<f64> {
        let mut sums = vec![0.0; n];
        let mut comps = vec![0.0; n];
        for a in &self.atoms[letter.index()] {
            let j = bin_index(a.theta, n);
            let t = sums[j] + a.weight;
            comps[j] += (sums[j] - t) + a.weight;
            sums[j] = t;
        }
        sums.iter().zip(&comps).map(|(s, c)| s + c).collect()
    }

    fn check(&self, letter: Letter, n: usize) -> Result<(), MeasureError> {
        if n < MIN_BINS {
            return Err(MeasureError::TooFewBins(n));
        }
        if letter.generator() >= self.spec.k() {
            return Err(MeasureError::LetterOutOfRange(letter));
        }
        Ok(())
    }

    /// `ν_ψ` binned on `n` arcs.
    pub fn first_letter_measure(&self, letter: Letter, n: usize) -> Result<BoundaryMeasure, MeasureError> {
        self.check(letter, n)?;
        Ok(BoundaryMeasure::from_bins(self.raw_bins(letter, n)))
    }

    /// The full measure, as the bin-wise sum of the first-letter measures.
    pub fn measure(&self, n: usize) -> Result<BoundaryMeasure, MeasureError> {
        let parts = decompose_by_first_letter(self, n)?;
        let mut bins = vec![0.0; n];
        for part in &parts {
            for (b, m) in bins.iter_mut().zip(part.bins()) {
                *b += m;
            }
        }
        Ok(BoundaryMeasure::from_bins(bins))
    }
}

pub fn ps_approximation(
    spec: &GroupSpec,
    z0: Point,
    max_len: usize,
    s: f64,
    n: usize,
) -> Result<BoundaryMeasure, MeasureError> {
    if n < MIN_BINS {
        return Err(MeasureError::TooFewBins(n));
    }
    PoincareApprox::new(spec, z0, max_len, s)?.measure(n)
}

/// The `2k` measures `ν_ψ`, indexed by [`Letter::index`].
pub fn decompose_by_first_letter(
    approx: &PoincareApprox,
    n: usize,
) -> Result<Vec<BoundaryMeasure>, MeasureError> {
    Letter::alphabet(approx.spec.k())
        .map(|l| approx.first_letter_measure(l, n))
        .collect()
}

/// `|Σ_j P(z₀, ψ⁻¹z₀, θ_j) ν_{ψ⁻¹}(j) - (1 - ν_ψ(S¹))|` with `θ_j` the bin centres.
pub fn decomposition_identity_residual(
    approx: &PoincareApprox,
    psi: Letter,
    n: usize,
) -> Result<f64, MeasureError> {
    decomposition_identity_residual_with_exponent(approx, psi, n, 1.0)
}

/// As [`decomposition_identity_residual`] with the kernel raised to `exponent`.
pub fn decomposition_identity_residual_with_exponent(
    approx: &PoincareApprox,
    psi: Letter,
    n: usize,
    exponent: f64,
) -> Result<f64, MeasureError> {
    approx.check(psi, n)?;
    let z0 = approx.basepoint;
    let target = approx.spec.letter_matrix(psi.inverse()).apply(z0);
    let nu_inv = approx.first_letter_measure(psi.inverse(), n)?;
    let nu = approx.first_letter_measure(psi, n)?;
    let lhs = compensated_sum(nu_inv.bins().iter().enumerate().map(|(j, m)| {
        poisson_kernel(z0, target, BoundaryPoint::new(nu_inv.bin_center(j))).powf(exponent) * m
    }));
    Ok((lhs - (1.0 - nu.total())).abs())
}

/// A lower bound for one generator's displacement from its first-letter masses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ChainBound {
    Finite(f64),
    /// `α = 0`: the bound is `+∞`.
    Unbounded,
    /// `β = 1`: the bound is `-∞` and says nothing.
    Vacuous,
}

impl ChainBound {
    pub fn value(self) -> f64 {
        match self {
            ChainBound::Finite(v) => v,
            ChainBound::Unbounded => f64::INFINITY,
            ChainBound::Vacuous => f64::NEG_INFINITY,
        }
    }
}

/// `log(tan(π(1-βᵢ)/2) / tan(παᵢ/2))` per generator, where `αᵢ ≤ βᵢ` are the
/// masses of `gᵢ` and `gᵢ⁻¹` sorted. `masses` is indexed by [`Letter::index`]
/// and must be nonnegative with total 1.
pub fn mass_chain_bound(masses: &[f64]) -> Result<Vec<ChainBound>, MeasureError> {
    use crate::inequality::Hypothesis;
    let fail = |h| Err(MeasureError::PreconditionViolated(h));
    if masses.is_empty() {
        return fail(Hypothesis::Empty);
    }
    if masses.len() % 2 != 0 {
        return fail(Hypothesis::OddLetterCount);
    }
    if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
        return fail(Hypothesis::NegativeMeasure);
    }
    if (masses.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return fail(Hypothesis::NotNormalized);
    }
    Ok(masses
        .chunks(2)
        .map(|pair| {
            let alpha = pair[0].min(pair[1]);
            let beta = pair[0].max(pair[1]);
            if beta >= 1.0 {
                ChainBound::Vacuous
            } else if alpha == 0.0 {
                ChainBound::Unbounded
            } else {
                ChainBound::Finite(((PI * (1.0 - beta) / 2.0).tan() / (PI * alpha / 2.0).tan()).ln())
            }
        })
        .collect())
}
