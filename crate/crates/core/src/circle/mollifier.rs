//! The smooth bump used as approximate identity.
//!
//! `rho(x) = c * exp(-1 / (1 - |x|^2))` on the open unit disc, zero outside,
//! with `c` fixed by `integral rho = 1`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use super::bessel::j0;
use crate::geometry::Point2;
use crate::quad::simpson;

/// Unnormalised profile as a function of `|x|^2`.
#[inline]
pub fn bump_profile(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

/// Normalisation constant `c`; computed once.
///
/// With `u = 1 - r^2` the mass is `pi * integral_0^1 exp(-1/u) du`.
pub fn normalization() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let mass = PI * simpson(|u| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 }, 0.0, 1.0, 8192);
        1.0 / mass
    })
}

/// `rho_eps(x) = eps^-2 rho(x / eps)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mollifier {
    pub scale: f64,
}

impl Mollifier {
    pub fn new(scale: f64) -> Self {
        assert!(scale > 0.0, "mollifier scale must be positive");
        Mollifier { scale }
    }

    /// Density as a function of the distance to the origin.
    #[inline]
    pub fn radial(&self, r: f64) -> f64 {
        let s = r / self.scale;
        normalization() * bump_profile(s * s) / (self.scale * self.scale)
    }

    #[inline]
    pub fn density(&self, x: Point2) -> f64 {
        self.radial(x.norm())
    }

    /// Fourier transform `rho_hat(eps * xi)` under the `exp(-2 pi i x.xi)`
    /// convention; real and radial, equal to 1 at the origin.
    pub fn fourier(&self, xi: Point2) -> f64 {
        unit_fourier(self.scale * xi.norm())
    }
}

/// `rho_hat(k) = 2 pi c integral_0^1 exp(-1/(1-r^2)) J0(2 pi k r) r dr`.
pub fn unit_fourier(k: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    let c = normalization();
    TAU * c * simpson(|r| bump_profile(r * r) * j0(TAU * k * r) * r, 0.0, 1.0, 2048)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::MOLLIFIER_NORM_REL;

    #[test]
    fn normalization_matches_closed_form() {
        // integral_0^1 exp(-1/u) du = e^-1 - E1(1), E1(1) = 0.21938393439552027.
        let mass = PI * ((-1.0_f64).exp() - 0.219_383_934_395_520_27);
        let rel = (normalization() * mass - 1.0).abs();
        assert!(rel < MOLLIFIER_NORM_REL, "relative error {rel}");
    }

    #[test]
    fn unit_mass_by_cartesian_quadrature() {
        let m = Mollifier::new(0.3);
        let n = 400;
        let h = 0.6 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            for j in 0..=n {
                let p = Point2::new(-0.3 + i as f64 * h, -0.3 + j as f64 * h);
                s += m.density(p);
            }
        }
        assert!((s * h * h - 1.0).abs() < 1e-8);
    }

    #[test]
    fn fourier_transform_contracts() {
        assert_eq!(unit_fourier(0.0), 1.0);
        let mut prev = 1.0;
        for k in [0.1, 0.3, 0.5, 1.0] {
            let v = unit_fourier(k);
            assert!(v < prev && v.abs() <= 1.0);
            prev = v;
        }
        for k in [2.0, 5.0, 9.0] {
            assert!(unit_fourier(k).abs() < 1.0);
        }
    }
}
