use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point2};

/// Default cap on the number of samples a single grid may hold.
pub const DEFAULT_MAX_GRID_CELLS: usize = 1 << 24;

/// A scalar field sampled on a uniform square grid.
///
/// Sample `(i, j)` sits at `origin + (i * spacing, j * spacing)` and is
/// stored at `values[j * width + i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub origin: Point2,
    pub spacing: f64,
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn zeros(origin: Point2, spacing: f64, width: usize, height: usize) -> Result<Self> {
        Self::zeros_capped(origin, spacing, width, height, DEFAULT_MAX_GRID_CELLS)
    }

    pub fn zeros_capped(origin: Point2, spacing: f64, width: usize, height: usize, max_cells: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::param("spacing", format!("must be positive, got {spacing}")));
        }
        if width == 0 || height == 0 {
            return Err(Error::param("width, height", "grid must be non-empty"));
        }
        let cells = width.checked_mul(height).ok_or_else(|| Error::cap("grid cells", usize::MAX, max_cells))?;
        if cells > max_cells {
            return Err(Error::cap("grid cells", cells, max_cells));
        }
        Ok(GridFunction { origin, spacing, width, height, values: vec![0.0; cells] })
    }

    /// Smallest grid with the given spacing whose samples cover `bbox`.
    pub fn covering(bbox: &BoundingBox, spacing: f64, max_cells: usize) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::param("spacing", format!("must be positive, got {spacing}")));
        }
        let w = (bbox.width() / spacing).ceil() as usize + 1;
        let h = (bbox.height() / spacing).ceil() as usize + 1;
        Self::zeros_capped(bbox.min, spacing, w, h, max_cells)
    }

    pub fn from_fn(origin: Point2, spacing: f64, width: usize, height: usize, f: impl Fn(Point2) -> f64) -> Result<Self> {
        let mut g = Self::zeros(origin, spacing, width, height)?;
        for j in 0..height {
            for i in 0..width {
                g.values[j * width + i] = f(g.point(i, j));
            }
        }
        Ok(g)
    }

    /// Same geometry, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), self.values.len());
        GridFunction { origin: self.origin, spacing: self.spacing, width: self.width, height: self.height, values }
    }

    pub fn same_geometry(&self, other: &GridFunction) -> bool {
        self.origin == other.origin && self.spacing == other.spacing && self.width == other.width && self.height == other.height
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point2 {
        Point2::new(self.origin.x + i as f64 * self.spacing, self.origin.y + j as f64 * self.spacing)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.width + i]
    }

    /// Sample value at integer index, zero outside the grid.
    #[inline]
    pub fn get_or_zero(&self, i: isize, j: isize) -> f64 {
        if i < 0 || j < 0 || i as usize >= self.width || j as usize >= self.height {
            0.0
        } else {
            self.values[j as usize * self.width + i as usize]
        }
    }

    /// Bilinear interpolation, zero outside the grid.
    pub fn sample(&self, p: Point2) -> f64 {
        let fx = (p.x - self.origin.x) / self.spacing;
        let fy = (p.y - self.origin.y) / self.spacing;
        let i0 = fx.floor();
        let j0 = fy.floor();
        let tx = fx - i0;
        let ty = fy - j0;
        let (i0, j0) = (i0 as isize, j0 as isize);
        let v00 = self.get_or_zero(i0, j0);
        let v10 = self.get_or_zero(i0 + 1, j0);
        let v01 = self.get_or_zero(i0, j0 + 1);
        let v11 = self.get_or_zero(i0 + 1, j0 + 1);
        (1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11)
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox { min: self.origin, max: self.point(self.width - 1, self.height - 1) }
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    /// `h^2 * sum(values)`.
    pub fn integral(&self) -> f64 {
        self.cell_area() * self.values.iter().sum::<f64>()
    }

    pub fn l1_norm(&self) -> f64 {
        self.cell_area() * self.values.iter().map(|v| v.abs()).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.cell_area() * self.values.iter().map(|v| v * v).sum::<f64>()).sqrt()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.with_values(self.values.iter().map(|v| c * v).collect())
    }

    /// Shift by a whole number of cells, filling with zeros.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let mut out = self.with_values(vec![0.0; self.values.len()]);
        for j in 0..self.height {
            for i in 0..self.width {
                out.values[j * self.width + i] = self.get_or_zero(i as isize - di, j as isize - dj);
            }
        }
        out
    }

    /// Largest `|value|` among samples within `margin` of the grid edge.
    pub fn max_abs_near_boundary(&self, margin: f64) -> f64 {
        let m = (margin / self.spacing).ceil() as usize;
        let mut best = 0.0_f64;
        for j in 0..self.height {
            for i in 0..self.width {
                let near = i < m || j < m || i + m >= self.width || j + m >= self.height;
                if near {
                    best = best.max(self.get(i, j).abs());
                }
            }
        }
        best
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp() -> GridFunction {
        GridFunction::from_fn(Point2::new(-1.0, 0.0), 0.5, 5, 3, |p| 2.0 * p.x + p.y).unwrap()
    }

    #[test]
    fn bilinear_sampling_reproduces_affine_functions() {
        let g = ramp();
        for p in [Point2::new(-0.8, 0.3), Point2::new(0.9, 0.99), Point2::new(0.0, 0.5)] {
            assert!((g.sample(p) - (2.0 * p.x + p.y)).abs() < 1e-14);
        }
        assert_eq!(g.sample(Point2::new(-5.0, 0.0)), 0.0);
    }

    #[test]
    fn integral_uses_cell_area() {
        let g = GridFunction::from_fn(Point2::ORIGIN, 0.25, 4, 4, |_| 1.0).unwrap();
        assert_eq!(g.integral(), 1.0);
        assert_eq!(g.scaled(3.0).l1_norm(), 3.0);
    }

    #[test]
    fn cell_cap_is_enforced() {
        let err = GridFunction::zeros_capped(Point2::ORIGIN, 1.0, 100, 100, 1000).unwrap_err();
        assert!(matches!(err, Error::ResourceCap { .. }));
    }

    #[test]
    fn shift_moves_values() {
        let g = ramp();
        let s = g.shifted(1, 1);
        assert_eq!(s.get(2, 2), g.get(1, 1));
        assert_eq!(s.get(0, 0), 0.0);
    }
}
