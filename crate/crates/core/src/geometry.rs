use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::DEGENERACY_SLACK;

/// A point of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector `(cos theta, sin theta)`.
    pub fn unit(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(c, s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Euclidean distance. Every counting predicate in the crate goes through
    /// this function so that pruned and brute-force paths agree bit for bit.
    #[inline]
    pub fn dist(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        (dx * dx + dy * dy).sqrt()
    }

    #[inline]
    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Point2::new(self.x * s, self.y * s)
    }

    pub fn add(&self, o: &Point2) -> Self {
        Point2::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &Point2) -> Self {
        Point2::new(self.x - o.x, self.y - o.y)
    }

    pub fn rotate(&self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min: Point2,
    pub max: Point2,
}

impl BoundingBox {
    pub fn of(points: impl IntoIterator<Item = Point2>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut bb = BoundingBox { min: first, max: first };
        for p in it {
            bb.min.x = bb.min.x.min(p.x);
            bb.min.y = bb.min.y.min(p.y);
            bb.max.x = bb.max.x.max(p.x);
            bb.max.y = bb.max.y.max(p.y);
        }
        Some(bb)
    }

    pub fn inflate(&self, r: f64) -> Self {
        BoundingBox { min: Point2::new(self.min.x - r, self.min.y - r), max: Point2::new(self.max.x + r, self.max.y + r) }
    }

    pub fn contains_box(&self, other: &BoundingBox) -> bool {
        self.min.x <= other.min.x && self.min.y <= other.min.y && self.max.x >= other.max.x && self.max.y >= other.max.y
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// Target side lengths of a triangle `(t12, t13, t23)`.
///
/// Side `t12` joins the first two vertices; `t13` the first and third;
/// `t23` the second and third.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleSpec {
    pub t12: f64,
    pub t13: f64,
    pub t23: f64,
}

impl TriangleSpec {
    /// Validates positivity and the (closed) triangle inequality.
    pub fn new(t12: f64, t13: f64, t23: f64) -> Result<Self> {
        for (name, v) in [("t12", t12), ("t13", t13), ("t23", t23)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, format!("side must be positive, got {v}")));
            }
        }
        let spec = TriangleSpec { t12, t13, t23 };
        let (a, b) = spec.rescaled();
        gamma_ab(a, b)?;
        Ok(spec)
    }

    pub fn equilateral(t: f64) -> Result<Self> {
        Self::new(t, t, t)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.t12, self.t13, self.t23]
    }

    pub fn min_side(&self) -> f64 {
        self.t12.min(self.t13).min(self.t23)
    }

    pub fn max_side(&self) -> f64 {
        self.t12.max(self.t13).max(self.t23)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.t12 * s, self.t13 * s, self.t23 * s)
    }

    /// Rescales so that `t12` becomes the unit side and returns
    /// `(a, b) = (t13 / t12, t23 / t12)`: the lengths of the two sides that
    /// meet at the third vertex.
    pub fn rescaled(&self) -> (f64, f64) {
        (self.t13 / self.t12, self.t23 / self.t12)
    }
}

/// Cosine of the angle opposite the unit side in a triangle with sides
/// `a`, `b`, `1`: `(a^2 + b^2 - 1) / (2ab)`.
///
/// Values within [`DEGENERACY_SLACK`] of `+-1` are clamped (collinear
/// triangles are admitted); anything further out is a degenerate-triangle
/// error.
pub fn gamma_ab(a: f64, b: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0) {
        return Err(Error::param("a, b", format!("sides must be positive, got ({a}, {b})")));
    }
    let gamma = (a * a + b * b - 1.0) / (2.0 * a * b);
    if gamma.abs() > 1.0 + DEGENERACY_SLACK || !gamma.is_finite() {
        return Err(Error::DegenerateTriangle { a, b, gamma });
    }
    Ok(gamma.clamp(-1.0, 1.0))
}

/// `arccos(gamma_ab(a, b))`, the angle between the sides of length `a` and `b`.
pub fn theta_ab(a: f64, b: f64) -> Result<f64> {
    Ok(gamma_ab(a, b)?.acos())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn gamma_examples() {
        assert!((gamma_ab(1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((theta_ab(1.0, 1.0).unwrap() - FRAC_PI_3).abs() < 1e-15);
        assert!(gamma_ab(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap().abs() < 1e-15);
        assert!((theta_ab(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(gamma_ab(2.0, 1.0).unwrap(), 1.0);
        assert!(matches!(gamma_ab(3.0, 1.0), Err(Error::DegenerateTriangle { .. })));
    }

    #[test]
    fn clamps_inside_slack_only() {
        // (1 + 1e-13) * 2 sides against the unit side: barely collinear.
        let a = 1.0 + 1e-13;
        assert_eq!(gamma_ab(a, 2.0 - a + 1e-13).map(|g| g <= 1.0).ok(), Some(true));
        assert!(gamma_ab(0.5, 0.5 - 1e-6).is_err());
    }

    #[test]
    fn triangle_spec_validation() {
        assert!(TriangleSpec::new(1.0, 1.0, 2.0_f64.sqrt()).is_ok());
        assert!(TriangleSpec::new(1.0, 1.0, 2.0).is_ok());
        assert!(TriangleSpec::new(1.0, 1.0, 2.1).is_err());
        assert!(TriangleSpec::new(0.0, 1.0, 1.0).is_err());
        let (a, b) = TriangleSpec::new(2.0, 1.0, 1.5).unwrap().rescaled();
        assert_eq!((a, b), (0.5, 0.75));
    }

    #[test]
    fn rotation_preserves_distance() {
        let p = Point2::new(0.3, -0.7);
        let q = Point2::new(-1.1, 0.25);
        let d = p.dist(&q);
        let (pr, qr) = (p.rotate(0.77), q.rotate(0.77));
        assert!((pr.dist(&qr) - d).abs() < 1e-15);
    }
}
