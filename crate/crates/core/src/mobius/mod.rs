//! Möbius transformations of the extended complex plane.
//!
//! Maps are stored as `2x2` complex matrices normalised to determinant 1.
//! The point at infinity is an explicit variant of [`ExtComplex`], never a
//! large float, so the `(0, ∞)` sentinel used for non-tangent generators
//! stays meaningful.

mod disc;
mod h3;

pub use disc::{circumcircle, Disc};
pub use h3::H3Point;

use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tol;

pub type Complex = Complex64;

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex),
    Infinity,
}

impl ExtComplex {
    pub fn new(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    pub fn finite(&self) -> Option<Complex> {
        match *self {
            ExtComplex::Finite(z) => Some(z),
            ExtComplex::Infinity => None,
        }
    }

    /// Euclidean modulus, `+inf` for the point at infinity.
    pub fn norm(&self) -> f64 {
        match self {
            ExtComplex::Finite(z) => z.norm(),
            ExtComplex::Infinity => f64::INFINITY,
        }
    }

    /// Equality up to `tol` in the chordal metric.
    pub fn approx_eq(&self, other: &ExtComplex, tol: f64) -> bool {
        chordal_metric(*self, *other) <= tol
    }

    /// `1/z` with `0 <-> ∞`.
    pub fn recip(&self) -> ExtComplex {
        match *self {
            ExtComplex::Infinity => ExtComplex::Finite(Complex::new(0.0, 0.0)),
            ExtComplex::Finite(z) if z.norm() == 0.0 => ExtComplex::Infinity,
            ExtComplex::Finite(z) => ExtComplex::Finite(recip(z)),
        }
    }
}

impl From<Complex> for ExtComplex {
    fn from(z: Complex) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            ExtComplex::Finite(z)
        } else {
            ExtComplex::Infinity
        }
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::from(Complex::new(x, 0.0))
    }
}

impl fmt::Display for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtComplex::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            ExtComplex::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtComplex::Finite(z) => [z.re, z.im].serialize(s),
            ExtComplex::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Pair([f64; 2]),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => Ok(ExtComplex::new(re, im)),
            Repr::Tag(t) if t.eq_ignore_ascii_case("inf") || t == "∞" => Ok(ExtComplex::Infinity),
            Repr::Tag(t) => Err(D::Error::custom(format!("expected [re, im] or \"inf\", got {t:?}"))),
        }
    }
}

/// Serde adapter writing a [`Complex`] as `[re, im]`.
pub mod complex_pair {
    use super::Complex;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex::new(re, im))
    }
}

/// Chordal distance on the Riemann sphere, with values in `[0, 2]`.
pub fn chordal_metric(z: ExtComplex, w: ExtComplex) -> f64 {
    match (z, w) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(z), ExtComplex::Infinity) | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
            let n = z.norm();
            if n > 1.0 {
                2.0 / (n * (1.0 + 1.0 / (n * n)).sqrt())
            } else {
                2.0 / (1.0 + n * n).sqrt()
            }
        }
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            let (nz, nw) = (z.norm(), w.norm());
            if nz > 1.0 && nw > 1.0 {
                // z -> 1/z is a chordal isometry; keeps the squares bounded.
                chordal_finite(recip(z), recip(w))
            } else if nz > 1.0 {
                2.0 * (Complex::new(1.0, 0.0) - w * recip(z)).norm() / ((1.0 + 1.0 / (nz * nz)).sqrt() * (1.0 + nw * nw).sqrt())
            } else if nw > 1.0 {
                chordal_metric(ExtComplex::Finite(w), ExtComplex::Finite(z))
            } else {
                chordal_finite(z, w)
            }
        }
    }
}

/// `1/z` without squaring `|z|`, which overflows for `|z| > 1e154`.
fn recip(z: Complex) -> Complex {
    let n = z.norm();
    z.conj() / n / n
}

fn chordal_finite(z: Complex, w: Complex) -> f64 {
    2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
}

/// Square root with nonnegative real part; on the imaginary axis the root
/// with nonnegative imaginary part is chosen.
fn canonical_sqrt(z: Complex) -> Complex {
    let s = z.sqrt();
    if s.re < 0.0 || (s.re == 0.0 && s.im < 0.0) {
        -s
    } else {
        s
    }
}

/// `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    a: Complex,
    b: Complex,
    c: Complex,
    d: Complex,
}

impl MobiusMap {
    /// Builds and normalises a map. Fails when `|ad - bc|` is below
    /// [`tol::DEGENERATE_DET`].
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > tol::DEGENERATE_DET) {
            return Err(Error::DegenerateMap { det: det.norm() });
        }
        Ok(Self::scaled(a, b, c, d, det))
    }

    /// Real-entry convenience constructor.
    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let r = |x| Complex::new(x, 0.0);
        Self::new(r(a), r(b), r(c), r(d))
    }

    fn scaled(a: Complex, b: Complex, c: Complex, d: Complex, det: Complex) -> Self {
        let s = canonical_sqrt(det);
        MobiusMap {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
    }

    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        MobiusMap {
            a: one,
            b: zero,
            c: zero,
            d: one,
        }
    }

    pub fn a(&self) -> Complex {
        self.a
    }
    pub fn b(&self) -> Complex {
        self.b
    }
    pub fn c(&self) -> Complex {
        self.c
    }
    pub fn d(&self) -> Complex {
        self.d
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    /// Re-divides by the square root of the current determinant.
    pub fn renormalized(&self) -> Self {
        Self::scaled(self.a, self.b, self.c, self.d, self.det())
    }

    /// `self ∘ other`, i.e. `z ↦ self(other(z))`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let det = a * d - b * c;
        if det.norm() > 0.0 && det.re.is_finite() && det.im.is_finite() {
            Self::scaled(a, b, c, d, det)
        } else {
            MobiusMap { a, b, c, d }
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        MobiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// The point sent to infinity.
    pub fn pole(&self) -> ExtComplex {
        if self.c.norm_sqr() == 0.0 {
            ExtComplex::Infinity
        } else {
            ExtComplex::from(-self.d / self.c)
        }
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c.norm_sqr() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::from(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm_sqr() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::from((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Applies the map to a finite point whose image is known to be finite.
    pub fn apply_complex(&self, z: Complex) -> Complex {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `|f'(z)| = 1/|cz + d|^2`.
    pub fn derivative_modulus(&self, z: Complex) -> Result<f64> {
        let den = (self.c * z + self.d).norm();
        if den < tol::POLE_EPS {
            return Err(Error::PoleDerivative);
        }
        Ok(self.det().norm() / (den * den))
    }

    /// Derivative in the chordal metric,
    /// `f#(z) = (1 + |z|^2)/(1 + |f(z)|^2) |f'(z)|`.
    ///
    /// With `ad - bc = 1` this is `(1 + |z|^2)/(|az + b|^2 + |cz + d|^2)`,
    /// which is finite everywhere and equals `1/(|a|^2 + |c|^2)` at infinity.
    pub fn chordal_derivative(&self, z: ExtComplex) -> f64 {
        let det = self.det().norm();
        match z {
            ExtComplex::Infinity => det / (self.a.norm_sqr() + self.c.norm_sqr()),
            ExtComplex::Finite(z) => {
                let num = (self.a * z + self.b).norm_sqr();
                let den = (self.c * z + self.d).norm_sqr();
                det * (1.0 + z.norm_sqr()) / (num + den)
            }
        }
    }
}

impl Mul for MobiusMap {
    type Output = MobiusMap;

    fn mul(self, rhs: MobiusMap) -> MobiusMap {
        self.compose(&rhs)
    }
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    a: [f64; 2],
    b: [f64; 2],
    c: [f64; 2],
    d: [f64; 2],
}

impl Serialize for MobiusMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = |z: Complex| [z.re, z.im];
        MapRepr {
            a: p(self.a),
            b: p(self.b),
            c: p(self.c),
            d: p(self.d),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MobiusMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MapRepr::deserialize(d)?;
        let c = |p: [f64; 2]| Complex::new(p[0], p[1]);
        MobiusMap::new(c(r.a), c(r.b), c(r.c), c(r.d)).map_err(D::Error::custom)
    }
}
