//! Uniform cell index for ball and annulus range queries.

use crate::geometry::{BoundingBox, Point2};
use crate::tolerances::PRUNING_SLACK;

/// A closed distance band `lo <= d <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn new(lo: f64, hi: f64) -> Self {
        Band { lo, hi }
    }

    /// One-sided band `[t, t + width]`.
    pub fn outward(t: f64, width: f64) -> Self {
        Band::new(t, t + width)
    }

    /// Two-sided band `[t - half, t + half]`.
    pub fn centered(t: f64, half: f64) -> Self {
        Band::new(t - half, t + half)
    }

    #[inline]
    pub fn contains(&self, d: f64) -> bool {
        d >= self.lo && d <= self.hi
    }
}

/// Points bucketed into square cells of side `cell`, stored in CSR form.
///
/// Every point is indexed exactly once. The index is immutable after
/// construction and may be shared across threads.
#[derive(Debug, Clone)]
pub struct CellIndex {
    cell: f64,
    origin: Point2,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    members: Vec<u32>,
}

/// Per-axis cap on the number of cells; coarser cells are used beyond it.
const MAX_CELLS_PER_AXIS: usize = 4096;

impl CellIndex {
    pub fn new(points: &[Point2], cell: f64) -> Self {
        assert!(cell.is_finite() && cell > 0.0, "cell size must be positive");
        let bb = BoundingBox::of(points.iter().copied()).unwrap_or(BoundingBox { min: Point2::ORIGIN, max: Point2::ORIGIN });
        let extent = bb.width().max(bb.height());
        let cell = cell.max(extent / MAX_CELLS_PER_AXIS as f64);
        let nx = (bb.width() / cell).floor() as usize + 1;
        let ny = (bb.height() / cell).floor() as usize + 1;
        let mut index = CellIndex { cell, origin: bb.min, nx, ny, starts: vec![0; nx * ny + 1], members: vec![0; points.len()] };
        let keys: Vec<usize> = points.iter().map(|p| index.key_of(p)).collect();
        for &k in &keys {
            index.starts[k + 1] += 1;
        }
        for c in 0..nx * ny {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        for (i, &k) in keys.iter().enumerate() {
            index.members[fill[k] as usize] = i as u32;
            fill[k] += 1;
        }
        index
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn coords_of(&self, p: &Point2) -> (usize, usize) {
        let cx = ((p.x - self.origin.x) / self.cell).floor().max(0.0) as usize;
        let cy = ((p.y - self.origin.y) / self.cell).floor().max(0.0) as usize;
        (cx.min(self.nx - 1), cy.min(self.ny - 1))
    }

    fn key_of(&self, p: &Point2) -> usize {
        let (cx, cy) = self.coords_of(p);
        cy * self.nx + cx
    }

    #[inline]
    fn cell_members(&self, cx: usize, cy: usize) -> &[u32] {
        let k = cy * self.nx + cx;
        &self.members[self.starts[k] as usize..self.starts[k + 1] as usize]
    }

    /// Calls `visit(cx, cy)` for every cell whose box may intersect the closed
    /// annulus `band` around `center`. The test is conservative.
    fn for_each_cell_near(&self, center: &Point2, band: Band, mut visit: impl FnMut(usize, usize)) {
        if band.hi < 0.0 || self.members.is_empty() {
            return;
        }
        let hi = band.hi * (1.0 + PRUNING_SLACK) + PRUNING_SLACK;
        let lo = (band.lo * (1.0 - PRUNING_SLACK) - PRUNING_SLACK).max(0.0);
        let x0 = center.x - hi;
        let x1 = center.x + hi;
        let y0 = center.y - hi;
        let y1 = center.y + hi;
        let gx1 = self.origin.x + self.nx as f64 * self.cell;
        let gy1 = self.origin.y + self.ny as f64 * self.cell;
        if x1 < self.origin.x || y1 < self.origin.y || x0 > gx1 || y0 > gy1 {
            return;
        }
        let clamp_cell = |v: f64, o: f64, n: usize| -> usize { (((v - o) / self.cell).floor().max(0.0) as usize).min(n - 1) };
        let cx0 = clamp_cell(x0, self.origin.x, self.nx);
        let cx1 = clamp_cell(x1, self.origin.x, self.nx);
        let cy0 = clamp_cell(y0, self.origin.y, self.ny);
        let cy1 = clamp_cell(y1, self.origin.y, self.ny);
        let lo2 = lo * lo;
        let hi2 = hi * hi;
        for cy in cy0..=cy1 {
            let by0 = self.origin.y + cy as f64 * self.cell;
            let by1 = by0 + self.cell;
            let dy_min = (by0 - center.y).max(0.0).max(center.y - by1);
            let dy_max = (center.y - by0).abs().max((by1 - center.y).abs());
            for cx in cx0..=cx1 {
                let bx0 = self.origin.x + cx as f64 * self.cell;
                let bx1 = bx0 + self.cell;
                let dx_min = (bx0 - center.x).max(0.0).max(center.x - bx1);
                let dx_max = (center.x - bx0).abs().max((bx1 - center.x).abs());
                let dmin2 = dx_min * dx_min + dy_min * dy_min;
                let dmax2 = dx_max * dx_max + dy_max * dy_max;
                if dmin2 <= hi2 && dmax2 >= lo2 {
                    visit(cx, cy);
                }
            }
        }
    }

    /// Appends to `out` the indices `i` with `band.contains(points[i].dist(center))`.
    /// `points` must be the slice the index was built from. Output order is
    /// unspecified.
    pub fn annulus_into(&self, points: &[Point2], center: &Point2, band: Band, out: &mut Vec<u32>) {
        self.for_each_cell_near(center, band, |cx, cy| {
            for &m in self.cell_members(cx, cy) {
                if band.contains(points[m as usize].dist(center)) {
                    out.push(m);
                }
            }
        });
    }

    /// Indices within the closed ball of radius `r` around `center`.
    pub fn ball_into(&self, points: &[Point2], center: &Point2, r: f64, out: &mut Vec<u32>) {
        self.annulus_into(points, center, Band::new(f64::NEG_INFINITY, r), out);
    }

    /// Calls `visit(i)` for each indexed point in the closed annulus.
    pub fn for_each_in_annulus(&self, points: &[Point2], center: &Point2, band: Band, mut visit: impl FnMut(usize)) {
        self.for_each_cell_near(center, band, |cx, cy| {
            for &m in self.cell_members(cx, cy) {
                if band.contains(points[m as usize].dist(center)) {
                    visit(m as usize);
                }
            }
        });
    }

    /// Nearest distinct-index neighbour distance, searched in growing rings.
    /// Used for resolution floors; `None` for fewer than two points.
    pub fn min_spacing(&self, points: &[Point2]) -> Option<f64> {
        if points.len() < 2 {
            return None;
        }
        let mut best = f64::INFINITY;
        for (i, p) in points.iter().enumerate() {
            let mut r = self.cell;
            loop {
                let mut found = f64::INFINITY;
                self.for_each_in_annulus(points, p, Band::new(f64::NEG_INFINITY, r), |j| {
                    if j != i {
                        found = found.min(points[j].dist(p));
                    }
                });
                if found <= r {
                    best = best.min(found);
                    break;
                }
                if r > best {
                    break;
                }
                r *= 2.0;
            }
        }
        Some(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cloud(n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| Point2::new(rng.gen_range(-1.0..2.0), rng.gen_range(-0.5..1.0))).collect()
    }

    #[test]
    fn every_point_indexed_once() {
        let pts = cloud(500, 1);
        let idx = CellIndex::new(&pts, 0.07);
        let mut seen = vec![0u8; pts.len()];
        for &m in &idx.members {
            seen[m as usize] += 1;
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn annulus_query_matches_scan() {
        let pts = cloud(800, 2);
        for cell in [0.01, 0.1, 0.4, 3.0] {
            let idx = CellIndex::new(&pts, cell);
            for (c, band) in [
                (pts[3], Band::new(0.2, 0.35)),
                (Point2::new(5.0, 5.0), Band::new(5.0, 6.0)),
                (Point2::new(0.5, 0.2), Band::new(0.0, 0.05)),
                (pts[10], Band::new(1.0, 1.0 + 1e-3)),
            ] {
                let mut got = Vec::new();
                idx.annulus_into(&pts, &c, band, &mut got);
                got.sort_unstable();
                let want: Vec<u32> = (0..pts.len() as u32).filter(|&i| band.contains(pts[i as usize].dist(&c))).collect();
                assert_eq!(got, want, "cell {cell} band {band:?}");
            }
        }
    }

    #[test]
    fn min_spacing_matches_scan() {
        let pts = cloud(300, 3);
        let idx = CellIndex::new(&pts, 0.05);
        let mut want = f64::INFINITY;
        for i in 0..pts.len() {
            for j in 0..i {
                want = want.min(pts[i].dist(&pts[j]));
            }
        }
        assert_eq!(idx.min_spacing(&pts), Some(want));
    }
}
