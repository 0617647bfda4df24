use serde::{Deserialize, Serialize};

use super::{Complex, ExtComplex, MobiusMap};
use crate::error::{Error, Result};
use crate::tol;

/// Euclidean disc `{ z : |z - center| < radius }`.
///
/// A radius of exactly zero is allowed: it is what a deeply contracted
/// orbit disc becomes once its radius underflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    #[serde(with = "super::complex_pair")]
    center: Complex,
    radius: f64,
}

impl Disc {
    pub fn new(center: Complex, radius: f64) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite() && center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidDisc {
                re: center.re,
                im: center.im,
                radius,
            });
        }
        Ok(Disc { center, radius })
    }

    pub fn unit() -> Self {
        Disc {
            center: Complex::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn center(&self) -> Complex {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `|center| + radius`; at most 1 for a disc inside the unit disc.
    pub fn outer_reach(&self) -> f64 {
        self.center.norm() + self.radius
    }

    pub fn within_unit_disc(&self, slack: f64) -> bool {
        self.outer_reach() <= 1.0 + slack
    }

    /// `self ⊂ other`, up to `slack`.
    pub fn inside(&self, other: &Disc, slack: f64) -> bool {
        (self.center - other.center).norm() + self.radius <= other.radius + slack
    }

    /// Distance from `z` to the boundary circle.
    pub fn boundary_distance(&self, z: Complex) -> f64 {
        ((z - self.center).norm() - self.radius).abs()
    }

    pub fn boundary_point(&self, angle: f64) -> Complex {
        self.center + Complex::from_polar(self.radius, angle)
    }
}

impl MobiusMap {
    /// Image of a disc whose closure avoids the pole.
    ///
    /// The pole `p` is reflected in the boundary circle; its mirror image
    /// `p*` is sent to the centre of the image circle, and any boundary point
    /// fixes the radius.
    pub fn image_disc(&self, disc: &Disc) -> Result<Disc> {
        let (c0, r) = (disc.center, disc.radius);
        if self.c.norm_sqr() == 0.0 {
            let scale = (self.a / self.d).norm();
            return Disc::new((self.a * c0 + self.b) / self.d, scale * r);
        }
        let pole = -self.d / self.c;
        let offset = pole - c0;
        let gap = offset.norm() - r;
        if !(gap > tol::DISC_SLACK) {
            return Err(Error::PoleInsideDisc { gap });
        }
        let mirror = c0 + r * r / offset.conj();
        let center = self.apply_complex(mirror);
        let edge = self.apply_complex(c0 + Complex::new(r, 0.0));
        Disc::new(center, (edge - center).norm())
    }

    /// Membership in the class of maps sending the unit disc strictly
    /// inside itself. Returns the image of the unit disc when it is a
    /// bounded disc (pole outside the closed unit disc).
    pub fn in_class_md(&self) -> (bool, Option<Disc>) {
        if let ExtComplex::Finite(p) = self.pole() {
            if p.norm() <= 1.0 + tol::DISC_SLACK {
                return (false, None);
            }
        }
        let image = match self.image_disc(&Disc::unit()) {
            Ok(d) => d,
            Err(_) => return (false, None),
        };
        let inside = image.within_unit_disc(tol::DISC_SLACK);
        let is_unit = image.radius >= 1.0 - tol::DISC_SLACK && image.center.norm() <= tol::DISC_SLACK;
        (inside && !is_unit, Some(image))
    }
}

/// Circle through three points; `None` when they are collinear.
pub fn circumcircle(p: Complex, q: Complex, r: Complex) -> Option<Disc> {
    let (b, c) = (q - p, r - p);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < f64::EPSILON * (b.norm_sqr() + c.norm_sqr()) {
        return None;
    }
    let (bb, cc) = (b.norm_sqr(), c.norm_sqr());
    let ux = (c.im * bb - b.im * cc) / d;
    let uy = (b.re * cc - c.re * bb) / d;
    let u = Complex::new(ux, uy);
    Disc::new(p + u, u.norm()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn g() -> MobiusMap {
        MobiusMap::from_real(0.0, 0.5, 1.0, 1.5).unwrap()
    }

    #[test]
    fn g_image_of_unit_disc() {
        let e = g().image_disc(&Disc::unit()).unwrap();
        assert_abs_diff_eq!(e.center().re, 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(e.center().im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.radius(), 0.4, epsilon = 1e-14);
        assert_abs_diff_eq!(e.outer_reach(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn identity_and_affine_images() {
        assert_eq!(MobiusMap::identity().image_disc(&Disc::unit()).unwrap(), Disc::unit());
        let half = MobiusMap::from_real(1.0, 0.0, 0.0, 2.0).unwrap();
        let e = half.image_disc(&Disc::unit()).unwrap();
        assert_abs_diff_eq!(e.radius(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(e.center().norm(), 0.0);
    }

    #[test]
    fn pole_inside_is_an_error() {
        let inv = MobiusMap::from_real(0.0, 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(inv.image_disc(&Disc::unit()), Err(Error::PoleInsideDisc { .. })));
    }

    #[test]
    fn class_membership() {
        let (ok, e) = g().in_class_md();
        assert!(ok);
        let e = e.unwrap();
        assert_abs_diff_eq!(e.center().re, 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(e.radius(), 0.4, epsilon = 1e-14);

        let (ok, e) = MobiusMap::identity().in_class_md();
        assert!(!ok);
        assert_eq!(e, Some(Disc::unit()));

        let (ok, e) = MobiusMap::from_real(0.0, 1.0, 1.0, 0.0).unwrap().in_class_md();
        assert!(!ok);
        assert!(e.is_none());

        // a disc automorphism is not a strict self-map
        let rot = MobiusMap::new(
            Complex::new(0.0, 1.0),
            Complex::new(0.0, 0.0),
            Complex::new(0.0, 0.0),
            Complex::new(1.0, 0.0),
        )
        .unwrap();
        assert!(!rot.in_class_md().0);
    }

    #[test]
    fn circumcircle_basic() {
        let d = circumcircle(Complex::new(1.0, 0.0), Complex::new(0.0, 1.0), Complex::new(-1.0, 0.0)).unwrap();
        assert_abs_diff_eq!(d.radius(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.center().norm(), 0.0, epsilon = 1e-15);
        assert!(circumcircle(Complex::new(0.0, 0.0), Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)).is_none());
    }
}
