//! Closed-form primitives of the hyperbolic plane.
//!
//! Points live in the upper half-plane `{x + iy : y > 0}`. Orientation-preserving
//! isometries are real 2×2 matrices of determinant one acting by fractional linear
//! maps. The disk model is reached through [`DiskFrame`], a Cayley transform that
//! re-centres a chosen point at the origin.
//!
//! Boundary angles are measured counterclockwise from the positive real axis of
//! the disk model. Unless stated otherwise the *base frame* is the disk frame
//! centred at `i` with no extra rotation, i.e. `w = (z - i) / (z + i)`; in that
//! frame the point at infinity of the half-plane sits at angle `0`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance used when normalising matrices on construction.
pub const CONSTRUCTION_TOL: f64 = 1e-12;

/// Distances below this are reported as exactly zero.
pub const ZERO_DISTANCE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point ({x}, {y}) is not in the upper half-plane")]
    InvalidPoint { x: f64, y: f64 },
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("determinant {det} is not positive; matrix is not in GL+(2,R)")]
    NonPositiveDeterminant { det: f64 },
}

/// A point of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint")]
pub struct Point {
    x: f64,
    y: f64,
}

#[derive(Deserialize)]
struct RawPoint {
    x: f64,
    y: f64,
}

impl TryFrom<RawPoint> for Point {
    type Error = GeometryError;

    fn try_from(raw: RawPoint) -> Result<Self, Self::Error> {
        Point::new(raw.x, raw.y)
    }
}

impl Point {
    /// The point `i`.
    pub const I: Point = Point { x: 0.0, y: 1.0 };

    pub fn new(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() && y > 0.0 {
            Ok(Point { x, y })
        } else {
            Err(GeometryError::InvalidPoint { x, y })
        }
    }

    pub(crate) fn new_unchecked(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0 && x.is_finite(), "({x}, {y}) left the half-plane");
        Point { x, y }
    }

    /// Convenience constructor for points on the imaginary axis.
    pub fn on_imaginary_axis(y: f64) -> Result<Self, GeometryError> {
        Point::new(0.0, y)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeometryError> {
        Point::new(z.re, z.im)
    }

    /// The point at hyperbolic distance `dist` from `center`, leaving `center`
    /// in the direction `angle` of the disk frame centred there.
    pub fn from_polar(center: Point, dist: f64, angle: f64) -> Point {
        let r = (dist / 2.0).tanh();
        DiskFrame::centered(center).from_disk(Complex64::from_polar(r, angle))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot parse {0:?} as a point; expected `x+yi` or `x,y`")]
pub struct ParsePointError(String);

impl std::str::FromStr for Point {
    type Err = ParsePointError;

    /// Accepts `x+yi` (also `x-yi`, rejected later as off the half-plane) or `x,y`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParsePointError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (re, im) = if let Some((re, im)) = t.split_once(',') {
            (re.to_string(), im.to_string())
        } else {
            let body = t.strip_suffix('i').ok_or_else(err)?;
            let bytes = body.as_bytes();
            let split = (1..bytes.len())
                .rev()
                .find(|&k| {
                    (bytes[k] == b'+' || bytes[k] == b'-')
                        && !matches!(bytes[k - 1], b'e' | b'E')
                })
                .ok_or_else(err)?;
            let im = match &body[split..] {
                "+" => "1".to_string(),
                "-" => "-1".to_string(),
                other => other.to_string(),
            };
            (body[..split].to_string(), im)
        };
        let x: f64 = re.parse().map_err(|_| err())?;
        let y: f64 = im.trim_start_matches('+').parse().map_err(|_| err())?;
        Point::new(x, y).map_err(|_| err())
    }
}

/// `cosh d(p, q)`, clamped below at 1.
pub fn cosh_distance(p: Point, q: Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    (1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)).max(1.0)
}

/// Hyperbolic distance between two points of the half-plane.
///
/// Uses `d = 2 asinh(|p - q| / (2 sqrt(Im p Im q)))`, which agrees with
/// `arccosh(1 + |p - q|² / (2 Im p Im q))` and keeps full relative accuracy for
/// nearby points.
pub fn distance(p: Point, q: Point) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let chord = dx.hypot(dy);
    let d = 2.0 * (chord / (2.0 * (p.y * q.y).sqrt())).asinh();
    if d < ZERO_DISTANCE {
        0.0
    } else {
        d
    }
}

/// An orientation-preserving isometry, stored as a matrix of determinant one
/// whose first nonzero entry is positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 4]")]
pub struct Isometry {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl From<Isometry> for [f64; 4] {
    fn from(g: Isometry) -> Self {
        g.entries()
    }
}

impl<'de> Deserialize<'de> for Isometry {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let [a, b, c, d] = <[f64; 4]>::deserialize(de)?;
        Isometry::new(a, b, c, d).map_err(serde::de::Error::custom)
    }
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Builds an isometry from any real matrix with positive determinant,
    /// scaling it to determinant one and fixing the overall sign.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeometryError> {
        if ![a, b, c, d].iter().all(|v| v.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let det = a * d - b * c;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if !(det > CONSTRUCTION_TOL * scale * scale) {
            return Err(GeometryError::NonPositiveDeterminant { det });
        }
        Ok(Self::renormalized(a, b, c, d))
    }

    fn canonical(a: f64, b: f64, c: f64, d: f64) -> Self {
        let lead = [a, b, c, d].into_iter().find(|v| *v != 0.0).unwrap_or(1.0);
        if lead < 0.0 {
            Isometry {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Isometry { a, b, c, d }
        }
    }

    /// Re-normalises the determinant after accumulated rounding. Drift below
    /// the rounding noise of `ad - bc` itself is left alone, since rescaling
    /// by a noisy determinant would lose accuracy for large entries.
    fn renormalized(a: f64, b: f64, c: f64, d: f64) -> Self {
        let det = a * d - b * c;
        let noise = 64.0 * f64::EPSILON * ((a * d).abs() + (b * c).abs());
        if (det - 1.0).abs() <= noise {
            Self::canonical(a, b, c, d)
        } else {
            let s = det.sqrt();
            Self::canonical(a / s, b / s, c / s, d / s)
        }
    }

    /// `z ↦ z + t`.
    pub fn translation(t: f64) -> Self {
        Isometry {
            a: 1.0,
            b: t,
            c: 0.0,
            d: 1.0,
        }
    }

    /// `z ↦ λ z` for `λ > 0`: translation of length `|log λ|` along the imaginary axis.
    pub fn dilation(lambda: f64) -> Result<Self, GeometryError> {
        Isometry::new(lambda, 0.0, 0.0, 1.0)
    }

    /// Rotation by `angle` about `i`, as seen in the base disk frame.
    pub fn rotation_about_i(angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        Self::canonical(c, s, -s, c)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Row-major entries `[a, b, c, d]`.
    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    pub fn inverse(&self) -> Self {
        Self::canonical(self.d, -self.b, -self.c, self.a)
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.operator_distance(&Isometry::IDENTITY) <= tol
    }

    /// `|trace| < 2`: a rotation about an interior point.
    pub fn is_elliptic(&self) -> bool {
        self.trace().abs() < 2.0 - CONSTRUCTION_TOL
    }

    pub fn is_parabolic(&self) -> bool {
        (self.trace().abs() - 2.0).abs() <= CONSTRUCTION_TOL && !self.is_identity(CONSTRUCTION_TOL)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0 + CONSTRUCTION_TOL
    }

    /// Translation length `2 arccosh(|tr| / 2)`; zero for non-hyperbolic elements.
    pub fn translation_length(&self) -> f64 {
        2.0 * (self.trace().abs() / 2.0).max(1.0).acosh()
    }

    /// `m ∘ self ∘ m⁻¹`.
    pub fn conjugate_by(&self, m: &Isometry) -> Self {
        *m * *self * m.inverse()
    }

    /// Operator-norm distance between the two matrices, minimised over the
    /// sign ambiguity of PSL(2, R).
    pub fn operator_distance(&self, other: &Isometry) -> f64 {
        let plus = spectral_norm(
            self.a - other.a,
            self.b - other.b,
            self.c - other.c,
            self.d - other.d,
        );
        let minus = spectral_norm(
            self.a + other.a,
            self.b + other.b,
            self.c + other.c,
            self.d + other.d,
        );
        plus.min(minus)
    }

    /// Fractional linear action `z ↦ (az + b) / (cz + d)`.
    pub fn apply(&self, p: Point) -> Point {
        let (x, y) = (p.x, p.y);
        let re = self.c * x + self.d;
        let im = self.c * y;
        let denom = re * re + im * im;
        let nx = ((self.a * x + self.b) * re + self.a * self.c * y * y) / denom;
        let ny = y / denom;
        Point::new_unchecked(nx, ny)
    }

    /// The same map viewed in a disk frame.
    pub fn in_frame(&self, frame: &DiskFrame) -> Mobius {
        let m = frame.mobius();
        m * Mobius::from(*self) * m.inverse()
    }
}

impl Mul for Isometry {
    type Output = Isometry;

    fn mul(self, rhs: Isometry) -> Isometry {
        Isometry::renormalized(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        )
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn spectral_norm(a: f64, b: f64, c: f64, d: f64) -> f64 {
    // largest singular value of [[a, b], [c, d]]
    let s = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = (s * s - 4.0 * det * det).max(0.0).sqrt();
    ((s + disc) / 2.0).sqrt()
}

/// `d(p, g p)`.
pub fn displacement(g: &Isometry, p: Point) -> f64 {
    distance(p, g.apply(p))
}

/// A complex Möbius map, used for actions in the disk model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Mobius { a, b, c, d }
    }

    pub fn apply(&self, w: Complex64) -> Complex64 {
        (self.a * w + self.b) / (self.c * w + self.d)
    }

    pub fn inverse(&self) -> Self {
        Mobius {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// The map sending `z1, z2, z3` to `0, 1, ∞`.
    pub fn to_zero_one_infinity(z1: Complex64, z2: Complex64, z3: Complex64) -> Self {
        Mobius {
            a: z2 - z3,
            b: -z1 * (z2 - z3),
            c: z2 - z1,
            d: -z3 * (z2 - z1),
        }
    }

    /// Recovers a real matrix when this map preserves the upper half-plane.
    ///
    /// The entries are first divided by the phase of the largest one, then the
    /// imaginary residue is discarded.
    pub fn to_isometry(&self) -> Result<Isometry, GeometryError> {
        let entries = [self.a, self.b, self.c, self.d];
        let lead = entries
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let phase = lead / lead.norm();
        let [a, b, c, d] = entries.map(|e| (e / phase).re);
        Isometry::new(a, b, c, d)
    }
}

impl Mul for Mobius {
    type Output = Mobius;

    fn mul(self, rhs: Mobius) -> Mobius {
        Mobius {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }
}

impl From<Isometry> for Mobius {
    fn from(g: Isometry) -> Self {
        let r = |v: f64| Complex64::new(v, 0.0);
        Mobius::new(r(g.a), r(g.b), r(g.c), r(g.d))
    }
}

/// A Cayley transform identifying the half-plane with the unit disk, sending
/// `center` to the origin and then rotating by a unit complex factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskFrame {
    center: Point,
    rotation: Complex64,
}

impl DiskFrame {
    /// The base frame: centred at `i`, no rotation.
    pub fn base() -> Self {
        Self::centered(Point::I)
    }

    /// `w = (z - c) / (z - c̄)`.
    pub fn centered(center: Point) -> Self {
        DiskFrame {
            center,
            rotation: Complex64::new(1.0, 0.0),
        }
    }

    /// Centred at `center` and rotated so that `toward` lies on the positive
    /// imaginary axis. Falls back to [`DiskFrame::centered`] when the two points
    /// coincide.
    pub fn aligned(center: Point, toward: Point) -> Self {
        let w0 = Self::centered(center).to_disk(toward);
        let r = w0.norm();
        if r == 0.0 {
            return Self::centered(center);
        }
        DiskFrame {
            center,
            rotation: Complex64::i() * w0.conj() / r,
        }
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn rotation(&self) -> Complex64 {
        self.rotation
    }

    /// The frame map as a Möbius transformation (half-plane → disk).
    pub fn mobius(&self) -> Mobius {
        let c = self.center.to_complex();
        Mobius::new(
            self.rotation,
            -self.rotation * c,
            Complex64::new(1.0, 0.0),
            -c.conj(),
        )
    }

    pub fn to_disk(&self, p: Point) -> Complex64 {
        let z = p.to_complex();
        let c = self.center.to_complex();
        self.rotation * (z - c) / (z - c.conj())
    }

    /// Inverse of [`DiskFrame::to_disk`] for `|w| < 1`.
    pub fn from_disk(&self, w: Complex64) -> Point {
        let c = self.center.to_complex();
        let u = w / self.rotation;
        let z = (c - u * c.conj()) / (Complex64::new(1.0, 0.0) - u);
        Point::new_unchecked(z.re, z.im.max(f64::MIN_POSITIVE))
    }

    /// Direction of `p` as seen from the frame centre.
    pub fn direction(&self, p: Point) -> BoundaryPoint {
        BoundaryPoint::new(self.to_disk(p).arg())
    }

    /// Boundary angle of the real point `xi` of the half-plane.
    pub fn boundary_angle(&self, xi: f64) -> BoundaryPoint {
        let c = self.center.to_complex();
        let z = Complex64::new(xi, 0.0);
        BoundaryPoint::new((self.rotation * (z - c) / (z - c.conj())).arg())
    }

    /// Boundary angle of the point at infinity.
    pub fn infinity_angle(&self) -> BoundaryPoint {
        BoundaryPoint::new(self.rotation.arg())
    }
}

/// Disk coordinates of `p` in the frame centred at `center`.
pub fn to_disk(p: Point, center: Point) -> Complex64 {
    DiskFrame::centered(center).to_disk(p)
}

/// A point of the boundary circle, as an angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct BoundaryPoint {
    theta: f64,
}

impl BoundaryPoint {
    pub fn new(theta: f64) -> Self {
        BoundaryPoint {
            theta: normalize_angle(theta),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }

    /// Unsigned angular separation in `[0, π]`.
    pub fn separation(&self, other: &BoundaryPoint) -> f64 {
        angular_separation(self.theta, other.theta)
    }
}

/// Maps any finite angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Unsigned separation of two angles, in `[0, π]`.
pub fn angular_separation(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// `(cosh h - sinh h cos φ)⁻¹`, written to avoid cancellation when `φ ≈ 0`.
pub fn poisson_kernel_at(h: f64, phi: f64) -> f64 {
    let half = (phi / 2.0).sin();
    1.0 / ((-h).exp() + 2.0 * h.sinh() * half * half)
}

/// The Poisson kernel `P(z, z', ζ) = (cosh d(z,z') - sinh d(z,z') cos ∠z'zζ)⁻¹`.
///
/// `zeta` is read as an angle in the disk frame centred at `z`, so the angle
/// `∠z'zζ` is the separation between `zeta` and the direction of `zp` from `z`.
pub fn poisson_kernel(z: Point, zp: Point, zeta: BoundaryPoint) -> f64 {
    let h = distance(z, zp);
    if h == 0.0 {
        return 1.0;
    }
    let dir = DiskFrame::centered(z).direction(zp);
    poisson_kernel_at(h, zeta.theta - dir.theta)
}
