//! Free Fuchsian groups: generators, ping-pong certificates and reduced words.
//!
//! Letters of the symmetric alphabet are ordered `g1, g1⁻¹, g2, g2⁻¹, …` and
//! indexed `0..2k` in that order. A [`PingPongCertificate`] stores one boundary
//! disk per letter in the same order, expressed in the base disk frame
//! (centred at `i`, see [`crate::hyperbolic`]).
//!
//! A boundary disk is the closed hyperbolic half-plane cut off by the geodesic
//! joining the two endpoints of an arc `[center - radius, center + radius]`.
//! The letter `ψ` must map the complement of `disk(ψ⁻¹)` into `disk(ψ)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};
use std::fmt;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyperbolic::{
    angular_separation, normalize_angle, DiskFrame, GeometryError, Isometry, Mobius, Point,
};

/// Default cap on the number of words an enumeration may produce.
pub const DEFAULT_WORD_CAP: u64 = 10_000_000;

/// Minimal gap between certificate disks, in radians.
pub const DISJOINT_MARGIN: f64 = 1e-9;

/// Slack allowed on the mapping condition and on tangencies.
pub const MAPPING_SLACK: f64 = 1e-9;

/// Boundary samples used when a certificate is checked implicitly.
pub const DEFAULT_CERTIFICATE_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeGroupError {
    #[error("a free group spec needs k >= 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("k: declared {declared} but {given} generators given")]
    RankMismatch { declared: usize, given: usize },
    #[error("generators[{index}]: {source}")]
    InvalidGenerator {
        index: usize,
        #[source]
        source: GeometryError,
    },
    #[error("generators[{index}]: {reason}")]
    DegenerateGenerator { index: usize, reason: &'static str },
    #[error("certificate.disks: expected {expected} disks, got {given}")]
    CertificateLength { expected: usize, given: usize },
    #[error("certificate.disks[{index}]: radius {radius} must lie in (0, pi/2)")]
    InvalidDisk { index: usize, radius: f64 },
    #[error("disks {first} and {second} overlap (gap {gap:e})")]
    OverlappingDisks {
        first: usize,
        second: usize,
        gap: f64,
    },
    #[error("enumeration would produce {requested} words, above the cap of {cap}")]
    BudgetExceeded { requested: u64, cap: u64 },
    #[error("spec has no ping-pong certificate")]
    MissingCertificate,
    #[error("word contains letter {letter} outside an alphabet of rank {k}")]
    LetterOutOfRange { letter: usize, k: usize },
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("unknown builtin spec {0:?}")]
    UnknownBuiltin(String),
    #[error("malformed spec JSON: {0}")]
    Json(String),
}

/// One letter of the symmetric alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter(usize);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter(2 * generator + usize::from(inverse))
    }

    pub fn from_index(index: usize) -> Self {
        Letter(index)
    }

    /// Position in the ordering `g1, g1⁻¹, g2, …`.
    pub fn index(self) -> usize {
        self.0
    }

    /// Zero-based generator number.
    pub fn generator(self) -> usize {
        self.0 / 2
    }

    pub fn is_inverse(self) -> bool {
        self.0 % 2 == 1
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// All `2k` letters in canonical order.
    pub fn alphabet(k: usize) -> impl Iterator<Item = Letter> {
        (0..2 * k).map(Letter)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inverse() {
            write!(f, "g{}^-1", self.generator() + 1)
        } else {
            write!(f, "g{}", self.generator() + 1)
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn identity() -> Self {
        ReducedWord::default()
    }

    pub fn new(letters: Vec<Letter>) -> Result<Self, FreeGroupError> {
        if let Some(pos) = letters.windows(2).position(|w| w[1] == w[0].inverse()) {
            return Err(FreeGroupError::NotReduced(pos + 1));
        }
        Ok(ReducedWord { letters })
    }

    /// Concatenates the letters and cancels adjacent inverse pairs.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        ReducedWord { letters: out }
    }

    /// The reduced form of `self · other`.
    pub fn concat(&self, other: &ReducedWord) -> Self {
        Self::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Self {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for (j, l) in self.letters.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// An arc of the boundary circle in the base frame, standing for the
/// half-plane it bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDisk {
    /// Centre angle in radians.
    pub center: f64,
    /// Angular half-width in radians.
    pub radius: f64,
}

impl BoundaryDisk {
    pub fn new(center: f64, radius: f64) -> Self {
        BoundaryDisk {
            center: normalize_angle(center),
            radius,
        }
    }

    pub fn start(&self) -> f64 {
        self.center - self.radius
    }

    pub fn end(&self) -> f64 {
        self.center + self.radius
    }

    /// Signed angular gap to another disk; negative when they overlap.
    pub fn gap(&self, other: &BoundaryDisk) -> f64 {
        angular_separation(self.center, other.center) - self.radius - other.radius
    }

    pub fn contains_angle(&self, theta: f64, slack: f64) -> bool {
        angular_separation(theta, self.center) <= self.radius + slack
    }

    /// Whether the point lies in the closed half-plane bounded by this disk's
    /// geodesic, measured in the base frame.
    pub fn contains_point(&self, p: Point, slack: f64) -> bool {
        let w = DiskFrame::base().to_disk(p);
        let (sin_r, cos_r) = self.radius.sin_cos();
        let c = Complex64::from_polar(1.0 / cos_r, self.center);
        (w - c).norm() <= sin_r / cos_r + slack
    }
}

/// `2k` boundary disks witnessing freeness and discreteness by ping-pong.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PingPongCertificate {
    pub disks: Vec<BoundaryDisk>,
    /// Permits touching disks (parabolic generators).
    #[serde(default)]
    pub tangent: bool,
}

impl PingPongCertificate {
    pub fn disk(&self, letter: Letter) -> &BoundaryDisk {
        &self.disks[letter.index()]
    }
}

/// `k >= 2` generators and an optional certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    generators: Vec<Isometry>,
    certificate: Option<PingPongCertificate>,
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    k: usize,
    generators: Vec<[f64; 4]>,
    #[serde(default)]
    certificate: Option<PingPongCertificate>,
}

impl Serialize for GroupSpec {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        RawSpec {
            k: self.k(),
            generators: self.generators.iter().map(|g| g.entries()).collect(),
            certificate: self.certificate.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GroupSpec {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RawSpec::deserialize(de)?;
        GroupSpec::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

impl GroupSpec {
    pub fn new(
        generators: Vec<Isometry>,
        certificate: Option<PingPongCertificate>,
    ) -> Result<Self, FreeGroupError> {
        let k = generators.len();
        if k < 2 {
            return Err(FreeGroupError::TooFewGenerators(k));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.is_identity(1e-12) {
                return Err(FreeGroupError::DegenerateGenerator {
                    index,
                    reason: "generator is the identity",
                });
            }
            if g.is_elliptic() {
                return Err(FreeGroupError::DegenerateGenerator {
                    index,
                    reason: "generator is elliptic (|trace| < 2)",
                });
            }
        }
        if let Some(cert) = &certificate {
            if cert.disks.len() != 2 * k {
                return Err(FreeGroupError::CertificateLength {
                    expected: 2 * k,
                    given: cert.disks.len(),
                });
            }
            for (index, disk) in cert.disks.iter().enumerate() {
                if !(disk.radius > 0.0 && disk.radius < FRAC_PI_2) || !disk.center.is_finite() {
                    return Err(FreeGroupError::InvalidDisk {
                        index,
                        radius: disk.radius,
                    });
                }
            }
        }
        Ok(GroupSpec {
            generators,
            certificate,
        })
    }

    fn from_raw(raw: RawSpec) -> Result<Self, FreeGroupError> {
        if raw.k != raw.generators.len() {
            return Err(FreeGroupError::RankMismatch {
                declared: raw.k,
                given: raw.generators.len(),
            });
        }
        let generators = raw
            .generators
            .iter()
            .enumerate()
            .map(|(index, &[a, b, c, d])| {
                Isometry::new(a, b, c, d)
                    .map_err(|source| FreeGroupError::InvalidGenerator { index, source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        GroupSpec::new(generators, raw.certificate)
    }

    pub fn from_json(text: &str) -> Result<Self, FreeGroupError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            if path == "." {
                FreeGroupError::Json(inner.to_string())
            } else {
                FreeGroupError::Json(format!("{path}: {inner}"))
            }
        })?;
        GroupSpec::from_raw(raw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn certificate(&self) -> Option<&PingPongCertificate> {
        self.certificate.as_ref()
    }

    pub fn without_certificate(&self) -> Self {
        GroupSpec {
            generators: self.generators.clone(),
            certificate: None,
        }
    }

    pub fn letter_matrix(&self, letter: Letter) -> Isometry {
        let g = self.generators[letter.generator()];
        if letter.is_inverse() {
            g.inverse()
        } else {
            g
        }
    }

    pub fn word_matrix(&self, word: &ReducedWord) -> Result<Isometry, FreeGroupError> {
        let mut m = Isometry::IDENTITY;
        for &l in word.letters() {
            if l.generator() >= self.k() {
                return Err(FreeGroupError::LetterOutOfRange {
                    letter: l.index(),
                    k: self.k(),
                });
            }
            m = m * self.letter_matrix(l);
        }
        Ok(m)
    }

    /// Conjugates every generator by `m` and carries the certificate disks
    /// along with `m`'s boundary action.
    pub fn conjugated(&self, m: &Isometry) -> Self {
        let generators = self.generators.iter().map(|g| g.conjugate_by(m)).collect();
        let certificate = self.certificate.as_ref().map(|cert| PingPongCertificate {
            disks: cert
                .disks
                .iter()
                .map(|d| {
                    let start = act_on_boundary(m, d.start());
                    let len = normalize_angle(act_on_boundary(m, d.end()) - start);
                    BoundaryDisk::new(start + len / 2.0, len / 2.0)
                })
                .collect(),
            tangent: cert.tangent,
        });
        GroupSpec {
            generators,
            certificate,
        }
    }

    /// Runs [`verify_certificate`] with the default sample count.
    pub fn is_certified(&self) -> bool {
        verify_certificate(self, DEFAULT_CERTIFICATE_SAMPLES)
            .map(|r| r.valid)
            .unwrap_or(false)
    }
}

/// The level-two congruence subgroup, freely generated by `z ↦ z + 2` and
/// `z ↦ z / (2z + 1)`.
pub fn gamma2() -> GroupSpec {
    let g1 = Isometry::new(1.0, 2.0, 0.0, 1.0).expect("unimodular");
    let g2 = Isometry::new(1.0, 0.0, 2.0, 1.0).expect("unimodular");
    // Boundary intervals [1, ∞], [-∞, -1], [0, 1], [-1, 0] seen from i.
    let disks = vec![
        BoundaryDisk::new(7.0 * FRAC_PI_4, FRAC_PI_4),
        BoundaryDisk::new(FRAC_PI_4, FRAC_PI_4),
        BoundaryDisk::new(5.0 * FRAC_PI_4, FRAC_PI_4),
        BoundaryDisk::new(3.0 * FRAC_PI_4, FRAC_PI_4),
    ];
    GroupSpec::new(
        vec![g1, g2],
        Some(PingPongCertificate {
            disks,
            tangent: true,
        }),
    )
    .expect("gamma2 is a valid spec")
}

/// `2k` equally spaced disks of angular radius `radius`; `g_i` and `g_i⁻¹`
/// sit at opposite angles `(i - 1)π/k` and `(i - 1)π/k + π`.
pub fn symmetric_disks(k: usize, radius: f64) -> Vec<BoundaryDisk> {
    (0..k)
        .flat_map(|i| {
            let theta = i as f64 * PI / k as f64;
            [
                BoundaryDisk::new(theta, radius),
                BoundaryDisk::new(theta + PI, radius),
            ]
        })
        .collect()
}

/// A random disjoint configuration: the circle is cut into `2k` random slots,
/// each slot receives one disk of radius at most `max_radius` (and at most
/// 49% of the slot), and slots are assigned to letters by a random permutation.
pub fn random_disks<R: Rng + ?Sized>(k: usize, max_radius: f64, rng: &mut R) -> Vec<BoundaryDisk> {
    let n = 2 * k;
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..1.5)).collect();
    let total: f64 = weights.iter().sum();
    let offset = rng.gen_range(0.0..TAU);
    let mut start = offset;
    let mut slots = Vec::with_capacity(n);
    for w in &weights {
        let width = TAU * w / total;
        let cap = max_radius.min(0.49 * width);
        let radius = cap * rng.gen_range(0.35..1.0);
        slots.push(BoundaryDisk::new(start + width / 2.0, radius));
        start += width;
    }
    slots.shuffle(rng);
    slots
}

fn check_disjoint(disks: &[BoundaryDisk], margin: f64) -> Result<(), FreeGroupError> {
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let gap = disks[i].gap(&disks[j]);
            if gap < margin {
                return Err(FreeGroupError::OverlappingDisks {
                    first: i,
                    second: j,
                    gap,
                });
            }
        }
    }
    Ok(())
}

/// The hyperbolic translation carrying the exterior of `source` onto `target`,
/// with axis the common perpendicular of the two bounding geodesics.
pub fn pairing_isometry(
    source: &BoundaryDisk,
    target: &BoundaryDisk,
) -> Result<Isometry, GeometryError> {
    let at = |theta: f64| Complex64::from_polar(1.0, theta);
    let (p, q) = (at(source.start()), at(source.end()));
    let (u, v) = (at(target.start()), at(target.end()));
    // cross-ratio of p, q, u, v equals ((E + 1) / (E - 1))² for the normal form
    // where the geodesics become |z| = 1 and |z| = E.
    let cross = ((u - p) * (v - q)) / ((u - q) * (v - p));
    let s = cross.re.max(1.0 + f64::EPSILON).sqrt();
    let stretch = (s + 1.0) / (s - 1.0);
    let one = Complex64::new(1.0, 0.0);
    let to_standard = Mobius::to_zero_one_infinity(p, q, u);
    let from_standard =
        Mobius::to_zero_one_infinity(-one, one, Complex64::new(stretch, 0.0)).inverse();
    let normal = from_standard * to_standard;
    let root = stretch.sqrt();
    let dilate = Mobius::new(
        Complex64::new(root, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0 / root, 0.0),
    );
    let in_disk = normal.inverse() * dilate * normal;
    let cayley = DiskFrame::base().mobius();
    (cayley.inverse() * in_disk * cayley).to_isometry()
}

/// Builds a Schottky group from `2k` disks listed in letter order
/// (`disk(g1), disk(g1⁻¹), disk(g2), …`).
pub fn build_schottky(disks: &[BoundaryDisk]) -> Result<GroupSpec, FreeGroupError> {
    if disks.len() % 2 != 0 || disks.len() < 4 {
        return Err(FreeGroupError::TooFewGenerators(disks.len() / 2));
    }
    for (index, d) in disks.iter().enumerate() {
        if !(d.radius > 0.0 && d.radius < FRAC_PI_2) {
            return Err(FreeGroupError::InvalidDisk {
                index,
                radius: d.radius,
            });
        }
    }
    check_disjoint(disks, DISJOINT_MARGIN)?;
    let k = disks.len() / 2;
    let generators = (0..k)
        .map(|i| {
            pairing_isometry(&disks[2 * i + 1], &disks[2 * i])
                .map_err(|source| FreeGroupError::InvalidGenerator { index: i, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    GroupSpec::new(
        generators,
        Some(PingPongCertificate {
            disks: disks.to_vec(),
            tangent: false,
        }),
    )
}

/// Parses `gamma2`, `schottky:k=K,r=R` (symmetric) or `schottky:k=K,r=R,seed=S`
/// (random disks with radius cap `R`).
pub fn builtin(name: &str) -> Result<GroupSpec, FreeGroupError> {
    let unknown = || FreeGroupError::UnknownBuiltin(name.to_string());
    if name == "gamma2" {
        return Ok(gamma2());
    }
    let params = name.strip_prefix("schottky:").ok_or_else(unknown)?;
    let (mut k, mut r, mut seed) = (None, None, None);
    for kv in params.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = kv.split_once('=').ok_or_else(unknown)?;
        match key.trim() {
            "k" => k = Some(value.trim().parse::<usize>().map_err(|_| unknown())?),
            "r" => r = Some(value.trim().parse::<f64>().map_err(|_| unknown())?),
            "seed" => seed = Some(value.trim().parse::<u64>().map_err(|_| unknown())?),
            _ => return Err(unknown()),
        }
    }
    let k = k.ok_or_else(unknown)?;
    let r = r.unwrap_or(PI / (4.0 * k as f64));
    let disks = match seed {
        Some(s) => {
            use rand::SeedableRng;
            random_disks(k, r, &mut rand_chacha::ChaCha8Rng::seed_from_u64(s))
        }
        None => symmetric_disks(k, r),
    };
    build_schottky(&disks)
}

/// Boundary action of `g` on an angle of the base frame.
pub fn act_on_boundary(g: &Isometry, theta: f64) -> f64 {
    let m = g.in_frame(&DiskFrame::base());
    normalize_angle(m.apply(Complex64::from_polar(1.0, theta)).arg())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub valid: bool,
    /// Smallest pairwise gap between disks (negative on overlap).
    pub disjoint_margin: f64,
    /// Smallest distance by which a sampled image stays inside its target disk.
    pub mapping_margin: f64,
    pub tangent: bool,
    pub failures: Vec<String>,
}

/// Checks disjointness and, on `samples` boundary points per letter, that each
/// letter maps the complement of `disk(ψ⁻¹)` into `disk(ψ)`.
pub fn verify_certificate(
    spec: &GroupSpec,
    samples: usize,
) -> Result<CertificateReport, FreeGroupError> {
    let cert = spec
        .certificate()
        .ok_or(FreeGroupError::MissingCertificate)?;
    let mut failures = Vec::new();
    let n = cert.disks.len();
    let mut disjoint_margin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let gap = cert.disks[i].gap(&cert.disks[j]);
            disjoint_margin = disjoint_margin.min(gap);
        }
    }
    let required = if cert.tangent {
        -MAPPING_SLACK
    } else {
        DISJOINT_MARGIN
    };
    if disjoint_margin < required {
        failures.push(format!("disks overlap with margin {disjoint_margin:e}"));
    }

    let samples = samples.max(2);
    let mut mapping_margin = f64::INFINITY;
    for letter in Letter::alphabet(spec.k()) {
        let source = cert.disk(letter.inverse());
        let target = cert.disk(letter);
        let g = spec.letter_matrix(letter);
        let frame_map = g.in_frame(&DiskFrame::base());
        let arc_start = source.end();
        let arc_len = TAU - 2.0 * source.radius;
        for s in 0..samples {
            let theta = arc_start + arc_len * s as f64 / (samples - 1) as f64;
            let image = frame_map.apply(Complex64::from_polar(1.0, theta)).arg();
            let margin = target.radius - angular_separation(image, target.center);
            if margin < mapping_margin {
                mapping_margin = margin;
            }
        }
        if mapping_margin < -MAPPING_SLACK {
            failures.push(format!(
                "{letter} does not map the exterior of disk({}) into disk({letter})",
                letter.inverse()
            ));
        }
    }
    failures.dedup();
    Ok(CertificateReport {
        valid: failures.is_empty(),
        disjoint_margin,
        mapping_margin,
        tangent: cert.tangent,
        failures,
    })
}

/// `1 + Σ_{L=1}^{max_len} 2k (2k - 1)^{L-1}`, or `None` on overflow.
pub fn word_count(k: usize, max_len: usize) -> Option<u64> {
    let n = 2 * k as u64;
    let mut total: u64 = 1;
    let mut level: u64 = 1;
    for len in 1..=max_len {
        level = if len == 1 {
            n
        } else {
            level.checked_mul(n - 1)?
        };
        total = total.checked_add(level)?;
    }
    Some(total)
}

fn check_budget(k: usize, max_len: usize, cap: u64) -> Result<u64, FreeGroupError> {
    match word_count(k, max_len) {
        Some(n) if n <= cap => Ok(n),
        Some(n) => Err(FreeGroupError::BudgetExceeded {
            requested: n,
            cap,
        }),
        None => Err(FreeGroupError::BudgetExceeded {
            requested: u64::MAX,
            cap,
        }),
    }
}

pub fn enumerate_reduced_words(
    spec: &GroupSpec,
    max_len: usize,
) -> Result<Vec<ReducedWord>, FreeGroupError> {
    enumerate_reduced_words_capped(spec.k(), max_len, DEFAULT_WORD_CAP)
}

/// Breadth-first enumeration in letter order `g1, g1⁻¹, …, gk, gk⁻¹`.
pub fn enumerate_reduced_words_capped(
    k: usize,
    max_len: usize,
    cap: u64,
) -> Result<Vec<ReducedWord>, FreeGroupError> {
    let total = check_budget(k, max_len, cap)?;
    let mut out = Vec::with_capacity(total as usize);
    out.push(ReducedWord::identity());
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = out.len();
        for idx in level_start..level_end {
            let last = out[idx].letters.last().copied();
            for l in Letter::alphabet(k) {
                if Some(l.inverse()) == last {
                    continue;
                }
                let mut letters = out[idx].letters.clone();
                letters.push(l);
                out.push(ReducedWord { letters });
            }
        }
        level_start = level_end;
    }
    Ok(out)
}

/// Depth-first walk over every nonempty reduced word starting with `first`
/// and of length at most `max_len`, passing the letters and the word's matrix.
pub fn walk_words_from<F>(spec: &GroupSpec, first: Letter, max_len: usize, mut visit: F)
where
    F: FnMut(&[Letter], &Isometry),
{
    fn recurse<F: FnMut(&[Letter], &Isometry)>(
        spec: &GroupSpec,
        letters: &mut Vec<Letter>,
        m: Isometry,
        max_len: usize,
        visit: &mut F,
    ) {
        visit(letters, &m);
        if letters.len() == max_len {
            return;
        }
        let last = *letters.last().expect("nonempty");
        for l in Letter::alphabet(spec.k()) {
            if l == last.inverse() {
                continue;
            }
            letters.push(l);
            recurse(spec, letters, m * spec.letter_matrix(l), max_len, visit);
            letters.pop();
        }
    }
    if max_len == 0 {
        return;
    }
    let mut letters = vec![first];
    recurse(spec, &mut letters, spec.letter_matrix(first), max_len, &mut visit);
}

/// `(w, w·z)` for every reduced word of length at most `max_len`, in
/// enumeration order.
pub fn orbit(
    spec: &GroupSpec,
    z: Point,
    max_len: usize,
) -> Result<Vec<(ReducedWord, Point)>, FreeGroupError> {
    let total = check_budget(spec.k(), max_len, DEFAULT_WORD_CAP)?;
    let mut words = Vec::with_capacity(total as usize);
    let mut matrices = Vec::with_capacity(total as usize);
    words.push(ReducedWord::identity());
    matrices.push(Isometry::IDENTITY);
    let mut level_start = 0;
    for _ in 0..max_len {
        let level_end = words.len();
        for idx in level_start..level_end {
            let last = words[idx].letters.last().copied();
            for l in Letter::alphabet(spec.k()) {
                if Some(l.inverse()) == last {
                    continue;
                }
                let mut letters = words[idx].letters.clone();
                letters.push(l);
                words.push(ReducedWord { letters });
                matrices.push(matrices[idx] * spec.letter_matrix(l));
            }
        }
        level_start = level_end;
    }
    Ok(words
        .into_iter()
        .zip(matrices)
        .map(|(w, m)| (w, m.apply(z)))
        .collect())
}
