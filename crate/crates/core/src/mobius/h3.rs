use serde::{Deserialize, Serialize};

use super::{Complex, MobiusMap};

/// Point `(x, y, t)` of upper half-space, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H3Point {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl H3Point {
    /// The point `j = (0, 0, 1)`.
    pub const J: H3Point = H3Point { x: 0.0, y: 0.0, t: 1.0 };

    pub fn new(x: f64, y: f64, t: f64) -> Option<Self> {
        (t > 0.0 && t.is_finite() && x.is_finite() && y.is_finite()).then_some(H3Point { x, y, t })
    }

    pub fn from_parts(z: Complex, t: f64) -> Option<Self> {
        Self::new(z.re, z.im, t)
    }

    /// Vertical projection onto the boundary plane.
    pub fn shadow(&self) -> Complex {
        Complex::new(self.x, self.y)
    }

    pub fn height(&self) -> f64 {
        self.t
    }

    /// Hyperbolic distance, via `sinh(ρ/2) = |P - Q| / (2 sqrt(t_P t_Q))`.
    pub fn distance(&self, other: &H3Point) -> f64 {
        let dz = (self.shadow() - other.shadow()).norm_sqr();
        let dt = self.t - other.t;
        let s = (dz + dt * dt).sqrt() / (2.0 * (self.t * other.t).sqrt());
        2.0 * s.asinh()
    }
}

impl MobiusMap {
    /// Poincaré extension to upper half-space.
    ///
    /// For `P = z + t j` and `ad - bc = 1`:
    /// `z' = ((az + b) conj(cz + d) + a conj(c) t^2) / D`, `t' = t / D`,
    /// with `D = |cz + d|^2 + |c|^2 t^2`.
    pub fn apply_h3(&self, p: &H3Point) -> H3Point {
        let z = p.shadow();
        let t2 = p.t * p.t;
        let cz_d = self.c * z + self.d;
        let den = cz_d.norm_sqr() + self.c.norm_sqr() * t2;
        let num = (self.a * z + self.b) * cz_d.conj() + self.a * self.c.conj() * t2;
        let w = num / den;
        H3Point {
            x: w.re,
            y: w.im,
            t: p.t / den,
        }
    }

    /// `ρ(j, f(j))` from `cosh ρ = (|a|^2 + |b|^2 + |c|^2 + |d|^2) / 2`.
    pub fn hyp_dist_from_j(&self) -> f64 {
        let s: f64 = self.entries().iter().map(|z| z.norm_sqr()).sum();
        (0.5 * s).max(1.0).acosh()
    }
}
