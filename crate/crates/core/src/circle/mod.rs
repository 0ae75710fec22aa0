//! Circle measures and the two-circle kernel.
//!
//! Frequencies are in cycles per unit length: `f_hat(xi) = integral f(x)
//! exp(-2 pi i x.xi) dx`. The circle "measure" of radius `r` is the
//! pushforward of `d theta` under `theta -> r e(theta)`, so its transform is
//! `2 pi J0(2 pi r |xi|)` and is real.
//!
//! The two-circle kernel `K` is the pushforward of `d theta` under
//! `theta -> (a e(theta), b e(theta +- theta_ab))`; these are the pairs
//! `(u, v)` with `|u| = a`, `|v| = b`, `|u - v| = 1`. Its transform reduces to
//! the single-circle transform at `U_ab(xi, eta)`.

mod bessel;
mod mollifier;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bessel::{j0, CROSSOVER as BESSEL_CROSSOVER};
pub use mollifier::{bump_profile, normalization as mollifier_normalization, unit_fourier, Mollifier};

use crate::error::Result;
use crate::geometry::{gamma_ab, Point2};

/// Frequency variable; same representation as a spatial point.
pub type FreqPoint = Point2;

/// Which solution branch of `|u - v| = 1` the kernel integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Both,
    Plus,
    Minus,
}

impl Branch {
    /// Signs `s` with `phi = theta + s * theta_ab` contributing to the branch.
    pub fn signs(self) -> &'static [f64] {
        match self {
            Branch::Both => &[1.0, -1.0],
            Branch::Plus => &[1.0],
            Branch::Minus => &[-1.0],
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(Branch::Both),
            "plus" => Ok(Branch::Plus),
            "minus" => Ok(Branch::Minus),
            _ => Err(crate::Error::param("branch", format!("expected both|plus|minus, got {s:?}"))),
        }
    }
}

/// Transform of `d theta` on the circle of radius `r`.
#[inline]
pub fn sigma_hat(r: f64, xi: FreqPoint) -> f64 {
    TAU * j0(TAU * r * xi.norm())
}

/// `U_ab(xi, eta) = a xi + b R(-theta_ab) eta`.
pub fn u_map(a: f64, b: f64, xi: FreqPoint, eta: FreqPoint) -> Result<FreqPoint> {
    u_map_signed(a, b, xi, eta, 1.0)
}

/// Branch-signed form: `sign = -1` rotates `eta` the other way.
pub fn u_map_signed(a: f64, b: f64, xi: FreqPoint, eta: FreqPoint, sign: f64) -> Result<FreqPoint> {
    let g = gamma_ab(a, b)?;
    let s = sign * (1.0 - g * g).max(0.0).sqrt();
    Ok(Point2::new(a * xi.x + b * g * eta.x + b * s * eta.y, a * xi.y - b * s * eta.x + b * g * eta.y))
}

/// Closed-form kernel transform. Values are real; returned as complex for
/// uniformity with the quadrature path.
pub fn k_hat(a: f64, b: f64, xi: FreqPoint, eta: FreqPoint, branch: Branch) -> Result<Complex64> {
    let mut acc = 0.0;
    for &sign in branch.signs() {
        acc += sigma_hat(1.0, u_map_signed(a, b, xi, eta, sign)?);
    }
    Ok(Complex64::new(acc, 0.0))
}

/// Kernel transform by periodic trapezoid quadrature of the defining
/// oscillatory integral over `theta`. `nodes = 0` picks a count that
/// resolves the phase.
pub fn k_hat_quadrature(a: f64, b: f64, xi: FreqPoint, eta: FreqPoint, branch: Branch, nodes: usize) -> Result<Complex64> {
    let theta_ab = gamma_ab(a, b)?.acos();
    let n = if nodes == 0 {
        let bandwidth = TAU * (a * xi.norm() + b * eta.norm());
        64 + (1.5 * bandwidth).ceil() as usize
    } else {
        nodes
    };
    let h = TAU / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for &sign in branch.signs() {
        for k in 0..n {
            let t = k as f64 * h;
            let phi = t + sign * theta_ab;
            let phase = TAU * (a * (t.cos() * xi.x + t.sin() * xi.y) + b * (phi.cos() * eta.x + phi.sin() * eta.y));
            acc += Complex64::from_polar(1.0, phase);
        }
    }
    Ok(acc * h)
}

/// `sup_{|xi| <= r_max} |sigma_hat(1, xi)| (1 + |xi|)^{1/2}` over `samples + 1`
/// equally spaced radii.
pub fn decay_sup(r_max: f64, samples: usize) -> (f64, f64) {
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..=samples {
        let r = r_max * k as f64 / samples as f64;
        let v = sigma_hat(1.0, Point2::new(r, 0.0)).abs() * (1.0 + r).sqrt();
        if v > best.1 {
            best = (r, v);
        }
    }
    best
}

/// Trapezoid nodes on the active half-window of [`sigma_eps`].
const SIGMA_EPS_NODES: usize = 128;

/// `(sigma_r * rho_eps)(x) = integral rho_eps(x - r e(theta)) r d theta`.
///
/// Only the arc within distance `eps` of `x` contributes. The integrand
/// vanishes to all orders at the window ends, so a fixed trapezoid rule on
/// the window converges faster than any power.
pub fn sigma_eps(r: f64, eps: f64, x: Point2) -> f64 {
    let rho = Mollifier::new(eps);
    let d = x.norm();
    if (d - r).abs() >= eps {
        return 0.0;
    }
    if d == 0.0 {
        return TAU * r * rho.radial(r);
    }
    // Integrand depends on |x - r e(theta)|^2 = d^2 + r^2 - 2 d r cos(theta),
    // with theta measured from the direction of x; it is even in theta.
    let c0 = (d * d + r * r - eps * eps) / (2.0 * d * r);
    let half = if c0 <= -1.0 { PI } else { c0.min(1.0).acos() };
    let f = |t: f64| {
        let q = d * d + r * r - 2.0 * d * r * t.cos();
        rho.radial(q.max(0.0).sqrt())
    };
    2.0 * r * crate::quad::trapezoid(f, 0.0, half, SIGMA_EPS_NODES)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tolerances::{BRANCH_MODULUS_ABS, KERNEL_IDENTITY_ABS};
    use rand::{Rng, SeedableRng};

    fn rand_freq(rng: &mut rand_chacha::ChaCha8Rng, rmax: f64) -> Point2 {
        let r = rmax * rng.gen::<f64>().sqrt();
        Point2::unit(rng.gen::<f64>() * TAU).scale(r)
    }

    #[test]
    fn u_map_hand_value() {
        let u = u_map(1.0, 1.0, Point2::new(1.0, 0.0), Point2::new(1.0, 0.0)).unwrap();
        assert!((u.x - 1.5).abs() < 1e-15);
        assert!((u.y + 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((u.norm() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn u_map_blocks_scale_norms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (a, b) in [(1.0, 1.0), (0.8, 0.9), (0.6, 0.7)] {
            for _ in 0..50 {
                let v = rand_freq(&mut rng, 10.0);
                let z = Point2::ORIGIN;
                assert!((u_map(a, b, z, v).unwrap().norm() - b * v.norm()).abs() < 1e-12);
                assert!((u_map(a, b, v, z).unwrap().norm() - a * v.norm()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mass_at_zero_frequency() {
        let z = Point2::ORIGIN;
        assert_eq!(k_hat(1.0, 1.0, z, z, Branch::Plus).unwrap().re, TAU);
        assert_eq!(k_hat(1.0, 1.0, z, z, Branch::Both).unwrap().re, 2.0 * TAU);
        assert_eq!(sigma_hat(0.3, z), TAU);
    }

    #[test]
    fn closed_form_matches_quadrature() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for (a, b) in [(1.0, 1.0), (0.8, 0.9)] {
            for _ in 0..40 {
                let (xi, eta) = (rand_freq(&mut rng, 8.0), rand_freq(&mut rng, 8.0));
                for br in [Branch::Plus, Branch::Minus, Branch::Both] {
                    let c = k_hat(a, b, xi, eta, br).unwrap();
                    let q = k_hat_quadrature(a, b, xi, eta, br, 0).unwrap();
                    assert!((c - q).norm() < KERNEL_IDENTITY_ABS, "{br:?}: {c} vs {q}");
                }
            }
        }
    }

    #[test]
    fn branches_are_mirror_images() {
        let mirror = |p: Point2| Point2::new(p.x, -p.y);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let (xi, eta) = (rand_freq(&mut rng, 8.0), rand_freq(&mut rng, 8.0));
            let m = k_hat(0.8, 0.9, xi, eta, Branch::Minus).unwrap().norm();
            let p = k_hat(0.8, 0.9, mirror(xi), mirror(eta), Branch::Plus).unwrap().norm();
            assert!((m - p).abs() < BRANCH_MODULUS_ABS);
        }
    }

    #[test]
    fn sigma_hat_is_radial() {
        let v = sigma_hat(1.3, Point2::new(2.0, 0.0));
        for k in 0..8 {
            let w = sigma_hat(1.3, Point2::unit(k as f64 * 0.7).scale(2.0));
            assert!((v - w).abs() < 1e-14);
        }
    }

    #[test]
    fn decay_sup_near_origin() {
        // d/dr of J0(2 pi r) sqrt(1 + r) is 1/2 at r = 0, so the sup sits just off the origin.
        let (r, v) = decay_sup(50.0, 20_000);
        assert!(r > 0.0 && r < 0.05, "{r}");
        assert!(v > TAU && v < TAU * 1.01, "{v}");
    }

    #[test]
    fn sigma_eps_support_and_rotation() {
        assert_eq!(sigma_eps(1.0, 0.1, Point2::new(1.2, 0.0)), 0.0);
        assert_eq!(sigma_eps(1.0, 0.1, Point2::new(0.5, 0.0)), 0.0);
        let base = sigma_eps(1.0, 0.125, Point2::new(1.03, 0.0));
        assert!(base > 0.0);
        for k in 1..8 {
            let p = Point2::new(1.03, 0.0).rotate(k as f64 * TAU / 8.0);
            assert!((sigma_eps(1.0, 0.125, p) - base).abs() < 1e-8);
        }
    }

    #[test]
    fn sigma_eps_peak_matches_cartesian_oracle() {
        // Direct 2D quadrature of rho_eps(x - y) over a fine polar sampling of the circle.
        let (r, eps, x) = (1.0, 0.125, Point2::new(1.0, 0.0));
        let rho = Mollifier::new(eps);
        let n = 200_000;
        let h = TAU / n as f64;
        let oracle: f64 = (0..n).map(|k| rho.density(x.sub(&Point2::unit(k as f64 * h).scale(r)))).sum::<f64>() * h * r;
        let v = sigma_eps(r, eps, x);
        assert!((v - oracle).abs() < 1e-9 * oracle, "{v} vs {oracle}");
        assert!(v > 0.5 / eps && v < 2.0 / eps, "{v}");
    }

    #[test]
    fn sigma_eps_mass() {
        // Radial integration: integral over the plane = 2 pi * integral sigma_eps(rho) rho d rho.
        let (r, eps) = (0.7, 0.1);
        let mass = TAU * crate::quad::simpson(|s| sigma_eps(r, eps, Point2::new(s, 0.0)) * s, r - eps, r + eps, 4000);
        assert!((mass - TAU * r).abs() < 1e-6, "{mass}");
    }
}
