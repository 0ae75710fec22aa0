//! Discrete measures in the plane and the quantities built on them.
//!
//! A [`DiscreteMeasure`] is a finite list of weighted atoms. Cantor-type
//! measures on the line are embedded on the x-axis (`y = 0`); products use
//! the first factor for the x-coordinate and the second for y.

use rand::seq::index::sample;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circle::Mollifier;
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point2};
use crate::grid::{GridFunction, DEFAULT_MAX_GRID_CELLS};
use crate::par;
use crate::spatial::{Band, CellIndex};
use crate::tolerances::{FROSTMAN_MAX_CENTERS, MASS_EXACT};

/// Resource guards shared by the constructors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub max_atoms: usize,
    pub max_grid_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_atoms: 1 << 22, max_grid_cells: DEFAULT_MAX_GRID_CELLS }
    }
}

/// Middle-interval Cantor construction on `[0, 1]` keeping two intervals of
/// length `ratio` at each step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub ratio: f64,
    pub level: u32,
}

impl CantorSpec {
    pub fn new(ratio: f64, level: u32) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 0.5) {
            return Err(Error::param("ratio", format!("must lie in (0, 1/2], got {ratio}")));
        }
        if level > 40 {
            return Err(Error::param("level", format!("at most 40, got {level}")));
        }
        Ok(CantorSpec { ratio, level })
    }

    /// Ratio `2^{-1/alpha}`, so that the limit set has dimension `alpha`.
    pub fn from_dimension(alpha: f64, level: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 1], got {alpha}")));
        }
        CantorSpec::new(2f64.powf(-1.0 / alpha), level)
    }

    pub fn dimension(&self) -> f64 {
        2f64.ln() / (1.0 / self.ratio).ln()
    }

    pub fn atom_count(&self) -> usize {
        1usize << self.level
    }

    /// Length of a level-`L` construction interval.
    pub fn interval_length(&self) -> f64 {
        self.ratio.powi(self.level as i32)
    }
}

/// Finite weighted atom set. Weights are strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    points: Vec<Point2>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(points: Vec<Point2>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::param("weights", format!("{} weights for {} points", weights.len(), points.len())));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::param("points", format!("atom {i} is not finite")));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::param("weights", format!("atom {i} has weight {}", weights[i])));
        }
        Ok(DiscreteMeasure { points, weights })
    }

    /// Equal weights `1/n`.
    pub fn uniform(points: Vec<Point2>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let weights = vec![w; points.len()];
        DiscreteMeasure::new(points, weights)
    }

    /// Unit weights (counting measure).
    pub fn counting(points: Vec<Point2>) -> Result<Self> {
        let weights = vec![1.0; points.len()];
        DiscreteMeasure::new(points, weights)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Point2, f64)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= MASS_EXACT
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::of(self.points.iter().copied())
    }

    /// Smallest distance between atoms with distinct indices.
    pub fn min_spacing(&self) -> Option<f64> {
        let bb = self.bounding_box()?;
        let extent = bb.width().max(bb.height()).max(1e-300);
        let cell = extent / (self.len() as f64).sqrt().max(1.0);
        CellIndex::new(&self.points, cell).min_spacing(&self.points)
    }

    /// Applies `f` to every atom, keeping weights.
    pub fn map_points(&self, f: impl Fn(Point2) -> Point2) -> Result<Self> {
        DiscreteMeasure::new(self.points.iter().map(|&p| f(p)).collect(), self.weights.clone())
    }

    /// Concatenation with all weights multiplied by `1/2`.
    pub fn average(&self, other: &DiscreteMeasure) -> Result<Self> {
        let points = self.points.iter().chain(&other.points).copied().collect();
        let weights = self.weights.iter().chain(&other.weights).map(|w| 0.5 * w).collect();
        DiscreteMeasure::new(points, weights)
    }
}

/// Level-`L` approximant: `2^L` atoms of weight `2^{-L}` at the left
/// endpoints of the construction intervals, in increasing order.
pub fn cantor_measure(spec: CantorSpec) -> DiscreteMeasure {
    let r = spec.ratio;
    let mut xs = vec![0.0];
    let mut step = 1.0 - r;
    for _ in 0..spec.level {
        let mut next = Vec::with_capacity(xs.len() * 2);
        next.extend(xs.iter().copied());
        next.extend(xs.iter().map(|x| x + step));
        next.sort_by(f64::total_cmp);
        xs = next;
        step *= r;
    }
    let w = 1.0 / xs.len() as f64;
    DiscreteMeasure { weights: vec![w; xs.len()], points: xs.into_iter().map(|x| Point2::new(x, 0.0)).collect() }
}

fn require_on_axis(m: &DiscreteMeasure, name: &'static str) -> Result<()> {
    if let Some(i) = m.points.iter().position(|p| p.y != 0.0) {
        return Err(Error::param(name, format!("atom {i} is off the x-axis")));
    }
    Ok(())
}

/// Copies of `m` translated by `-1` and `+1` along x, weights halved.
pub fn shifted_union(m: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    require_on_axis(m, "m")?;
    let mut points = Vec::with_capacity(2 * m.len());
    points.extend(m.points.iter().map(|p| Point2::new(p.x - 1.0, 0.0)));
    points.extend(m.points.iter().map(|p| Point2::new(p.x + 1.0, 0.0)));
    let weights = m.weights.iter().chain(&m.weights).map(|w| 0.5 * w).collect();
    Ok(DiscreteMeasure { points, weights })
}

/// Product of two measures on the x-axis; `mx` gives x, `my` gives y.
/// Atoms are ordered with the y-index varying fastest.
pub fn product_measure(mx: &DiscreteMeasure, my: &DiscreteMeasure, limits: &Limits) -> Result<DiscreteMeasure> {
    require_on_axis(mx, "mx")?;
    require_on_axis(my, "my")?;
    let n = mx.len().saturating_mul(my.len());
    if n > limits.max_atoms {
        return Err(Error::cap("product atoms", n, limits.max_atoms));
    }
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (p, wp) in mx.atoms() {
        for (q, wq) in my.atoms() {
            points.push(Point2::new(p.x, q.x));
            weights.push(wp * wq);
        }
    }
    Ok(DiscreteMeasure { points, weights })
}

/// Output of [`thicken_with`].
#[derive(Debug, Clone)]
pub struct Thickening {
    pub density: GridFunction,
    /// Ball radius `n^{-1/s}`.
    pub radius: f64,
    /// Height of a single ball before dividing by `pi`: `n^{-1 + 2/s}`.
    pub height: f64,
    /// `h^2 * sum(values) * pi`, i.e. the integral under the ball-height
    /// normalisation; equals `pi` when the balls are disjoint.
    pub raw_integral: f64,
}

/// Sub-samples per node axis used to resolve ball boundaries.
const THICKEN_SUPERSAMPLE: usize = 4;

/// `thicken_with` with spacing `n^{-1/s} / 4`.
pub fn thicken(points: &[Point2], s: f64, limits: &Limits) -> Result<GridFunction> {
    Ok(thicken_with(points, s, None, limits)?.density)
}

/// Probability density `(n^{-1 + 2/s} / pi) * sum_p 1_{B(p, n^{-1/s})}`
/// sampled on a grid covering all balls. Each node holds the fraction of
/// its cell covered, estimated on a `4 x 4` sub-grid.
pub fn thicken_with(points: &[Point2], s: f64, spacing: Option<f64>, limits: &Limits) -> Result<Thickening> {
    let n = points.len();
    if n == 0 {
        return Err(Error::param("points", "need at least one point"));
    }
    if !(s > 0.0 && s <= 2.0) {
        return Err(Error::param("s", format!("must lie in (0, 2], got {s}")));
    }
    let nf = n as f64;
    let radius = nf.powf(-1.0 / s);
    let h = spacing.unwrap_or(radius / 4.0);
    if !(h > 0.0 && h <= radius / 4.0 * (1.0 + 1e-12)) {
        return Err(Error::param("spacing", format!("must lie in (0, r/4] with r = {radius}, got {h}")));
    }
    let height = nf.powf(-1.0 + 2.0 / s);
    let bb = BoundingBox::of(points.iter().copied()).expect("nonempty").inflate(radius + 2.0 * h);
    let mut grid = GridFunction::covering(&bb, h, limits.max_grid_cells)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| points[i].y.total_cmp(&points[j].y).then(i.cmp(&j)));
    let ys: Vec<f64> = order.iter().map(|&i| points[i].y).collect();

    let (w, origin) = (grid.width, grid.origin);
    let k = THICKEN_SUPERSAMPLE;
    let sub = h / k as f64;
    let r2 = radius * radius;
    let rows = par::map_indexed(grid.height, |j| {
        let yc = origin.y + j as f64 * h;
        let lo = ys.partition_point(|&y| y < yc - 0.5 * h - radius);
        let hi = ys.partition_point(|&y| y <= yc + 0.5 * h + radius);
        let mut row = vec![0.0; w];
        for &pi in &order[lo..hi] {
            let p = points[pi];
            let i0 = (((p.x - radius - origin.x) / h).floor() as isize - 1).max(0) as usize;
            let i1 = ((((p.x + radius - origin.x) / h).ceil() as isize + 1).max(0) as usize).min(w - 1);
            for (i, cell) in row.iter_mut().enumerate().take(i1 + 1).skip(i0) {
                let xc = origin.x + i as f64 * h;
                let mut hits = 0u32;
                for a in 0..k {
                    let dy = yc - 0.5 * h + (a as f64 + 0.5) * sub - p.y;
                    for b in 0..k {
                        let dx = xc - 0.5 * h + (b as f64 + 0.5) * sub - p.x;
                        if dx * dx + dy * dy <= r2 {
                            hits += 1;
                        }
                    }
                }
                *cell += hits as f64;
            }
        }
        row
    });
    let scale = height / (std::f64::consts::PI * (k * k) as f64);
    for (j, row) in rows.into_iter().enumerate() {
        for (i, v) in row.into_iter().enumerate() {
            grid.values[j * w + i] = v * scale;
        }
    }
    let raw_integral = grid.integral() * std::f64::consts::PI;
    Ok(Thickening { density: grid, radius, height, raw_integral })
}

/// Result of [`frostman_ratio`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrostmanReport {
    /// `max mu(B(c, delta)) / delta^s` over centers and scales.
    pub ratio: f64,
    pub argmax_delta: f64,
    pub argmax_center: Point2,
    pub centers_used: usize,
    pub subsampled: bool,
    /// Per-scale maxima, in the order of `scales`.
    pub per_scale: Vec<(f64, f64)>,
}

/// Upper Frostman ratio over closed balls centred at atoms.
///
/// Uses every atom as a center when there are at most `max_centers` (0
/// means the default cap of `10^4`); otherwise a subsample drawn from `seed`.
/// Scales below twice the minimum atom spacing are rejected.
pub fn frostman_ratio(m: &DiscreteMeasure, s: f64, scales: &[f64], max_centers: usize, seed: u64) -> Result<FrostmanReport> {
    if scales.is_empty() {
        return Err(Error::param("scales", "empty scale list"));
    }
    if m.is_empty() {
        return Err(Error::param("m", "empty measure"));
    }
    if let Some(&d) = scales.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::param("scales", format!("scale {d} is not positive")));
    }
    if let Some(sp) = m.min_spacing() {
        if let Some(&d) = scales.iter().find(|&&d| d < 2.0 * sp) {
            return Err(Error::param("scales", format!("scale {d} is below twice the atom spacing {sp}")));
        }
    }
    let cap = if max_centers == 0 { FROSTMAN_MAX_CENTERS } else { max_centers };
    let n = m.len();
    let (centers, subsampled): (Vec<usize>, bool) = if n <= cap {
        ((0..n).collect(), false)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, n, cap).into_vec();
        idx.sort_unstable();
        (idx, true)
    };
    let mut best = (f64::NEG_INFINITY, scales[0], m.points[centers[0]]);
    let mut per_scale = Vec::with_capacity(scales.len());
    for &delta in scales {
        let index = CellIndex::new(&m.points, delta);
        let masses = par::map_indexed(centers.len(), |k| {
            let c = m.points[centers[k]];
            let mut mass = 0.0;
            index.for_each_in_annulus(&m.points, &c, Band::new(f64::NEG_INFINITY, delta), |i| mass += m.weights[i]);
            mass
        });
        let norm = delta.powf(s);
        let mut scale_best = f64::NEG_INFINITY;
        for (k, mass) in masses.into_iter().enumerate() {
            let r = mass / norm;
            if r > scale_best {
                scale_best = r;
            }
            if r > best.0 {
                best = (r, delta, m.points[centers[k]]);
            }
        }
        per_scale.push((delta, scale_best));
    }
    Ok(FrostmanReport { ratio: best.0, argmax_delta: best.1, argmax_center: best.2, centers_used: centers.len(), subsampled, per_scale })
}

/// `sum_{i != j} w_i w_j |p_i - p_j|^{-s}`.
///
/// Row `i` sums `j > i` in increasing order; rows are added in index order
/// and the total doubled.
pub fn energy_integral(m: &DiscreteMeasure, s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::param("s", format!("must be positive, got {s}")));
    }
    let pts = &m.points;
    let ws = &m.weights;
    let half = -0.5 * s;
    let rows = par::map_indexed(pts.len(), |i| {
        let p = pts[i];
        let mut acc = 0.0;
        for j in i + 1..pts.len() {
            let dx = pts[j].x - p.x;
            let dy = pts[j].y - p.y;
            let d2 = dx * dx + dy * dy;
            if d2 == 0.0 {
                return Err(Error::CoincidentAtoms { first: i, second: j });
            }
            acc += ws[j] * d2.powf(half);
        }
        Ok(ws[i] * acc)
    });
    let mut total = 0.0;
    for r in rows {
        total += r?;
    }
    Ok(2.0 * total)
}

/// `n^{-2} sum_{p != p'} |p - p'|^{-s}` with the verdict `value <= cap`.
/// Points must lie in `[0, 1]^2`.
pub fn is_adaptable(points: &[Point2], s: f64, cap: f64) -> Result<(bool, f64)> {
    if let Some(i) = points.iter().position(|p| !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y)) {
        return Err(Error::param("points", format!("point {i} lies outside the unit square")));
    }
    let n = points.len();
    if n < 2 {
        return Ok((0.0 <= cap, 0.0));
    }
    let m = DiscreteMeasure::counting(points.to_vec())?;
    let value = energy_integral(&m, s)? / (n as f64 * n as f64);
    Ok((value <= cap, value))
}

/// Radial profile of `rho * |.|^{alpha - 2}` for the unit mollifier.
///
/// Tabulated on `[0, 4]` with step `1/64` and on `[4, 32]` with step `1/8`;
/// beyond 32 the bare power is used.
#[derive(Debug, Clone)]
pub struct RieszKernel {
    alpha: f64,
    near: Vec<f64>,
    far: Vec<f64>,
}

const NEAR_STEP: f64 = 1.0 / 64.0;
const NEAR_END: f64 = 4.0;
const FAR_STEP: f64 = 1.0 / 8.0;
const FAR_END: f64 = 32.0;

impl RieszKernel {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0) {
            return Err(Error::param("alpha", format!("must lie in (0, 2), got {alpha}")));
        }
        let near_n = (NEAR_END / NEAR_STEP).round() as usize;
        let far_n = ((FAR_END - NEAR_END) / FAR_STEP).round() as usize;
        let near = par::map_indexed(near_n + 1, |k| unit_riesz_profile(alpha, k as f64 * NEAR_STEP));
        let far = par::map_indexed(far_n + 1, |k| unit_riesz_profile(alpha, NEAR_END + k as f64 * FAR_STEP));
        Ok(RieszKernel { alpha, near, far })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `(rho * |.|^{alpha-2})(z)` at `|z| = r`.
    pub fn unit(&self, r: f64) -> f64 {
        let lerp = |table: &[f64], t: f64| {
            let k = (t.floor() as usize).min(table.len() - 2);
            let f = t - k as f64;
            table[k] * (1.0 - f) + table[k + 1] * f
        };
        if r < NEAR_END {
            lerp(&self.near, r / NEAR_STEP)
        } else if r < FAR_END {
            lerp(&self.far, (r - NEAR_END) / FAR_STEP)
        } else {
            r.powf(self.alpha - 2.0)
        }
    }

    /// `(rho_delta * |.|^{alpha-2})(z)` at `|z| = r`.
    pub fn at_scale(&self, r: f64, delta: f64) -> f64 {
        delta.powf(self.alpha - 2.0) * self.unit(r / delta)
    }
}

/// Direct quadrature of `integral rho(y) |z - y|^{alpha - 2} dy`, `|z| = r`.
fn unit_riesz_profile(alpha: f64, r: f64) -> f64 {
    use crate::quad::{periodic, simpson};
    let rho = Mollifier::new(1.0);
    let z = Point2::new(r, 0.0);
    if r >= 2.0 {
        // Polar coordinates about the bump centre; |z - y| >= 1, no singularity.
        simpson(
            |t| {
                if t == 0.0 {
                    return 0.0;
                }
                let ring = periodic(|p| (z.sub(&Point2::unit(p).scale(t))).norm().powf(alpha - 2.0), 128);
                rho.radial(t) * t * ring
            },
            0.0,
            1.0,
            256,
        )
    } else {
        // Polar coordinates about z with t = u^{1/alpha}, which absorbs t^{alpha-1}.
        let ring = |t: f64| periodic(|p| rho.density(z.add(&Point2::unit(p).scale(t))), 512);
        let umax = (r + 1.0).powf(alpha);
        simpson(|u| ring(u.powf(1.0 / alpha)), 0.0, umax, 384) / alpha
    }
}

/// `x -> integral |x - y|^{alpha - 2} d(mu^delta)(y)` sampled on the nodes of
/// `template`, which must cover the support of `m` inflated by `delta`.
/// The Gamma-function normalisation of the Riesz kernel is not applied.
pub fn riesz_potential(m: &DiscreteMeasure, alpha: f64, delta: f64, template: &GridFunction) -> Result<GridFunction> {
    let kernel = RieszKernel::new(alpha)?;
    riesz_potential_with(m, &kernel, delta, template)
}

/// [`riesz_potential`] reusing a tabulated kernel.
pub fn riesz_potential_with(m: &DiscreteMeasure, kernel: &RieszKernel, delta: f64, template: &GridFunction) -> Result<GridFunction> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param("delta", format!("must be positive, got {delta}")));
    }
    let support = m.bounding_box().ok_or_else(|| Error::param("m", "empty measure"))?.inflate(delta);
    if !template.bounding_box().contains_box(&support) {
        return Err(Error::param("grid", "does not cover the support of the measure inflated by delta"));
    }
    let w = template.width;
    let rows = par::map_indexed(template.height, |j| {
        (0..w)
            .map(|i| {
                let x = template.point(i, j);
                m.atoms().map(|(p, wt)| wt * kernel.at_scale(x.dist(&p), delta)).sum::<f64>()
            })
            .collect::<Vec<f64>>()
    });
    Ok(template.with_values(rows.concat()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn cantor_examples() {
        let m = cantor_measure(CantorSpec::new(1.0 / 3.0, 1).unwrap());
        assert_eq!(m.len(), 2);
        assert_eq!(m.points()[0].x, 0.0);
        assert!((m.points()[1].x - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.weights(), &[0.5, 0.5]);

        let m = cantor_measure(CantorSpec::new(0.5, 3).unwrap());
        for (k, p) in m.points().iter().enumerate() {
            assert_eq!(p.x, k as f64 / 8.0);
        }

        let spec = CantorSpec::new(2f64.powf(-4.0 / 3.0), 2).unwrap();
        assert!((spec.interval_length() - 0.15749).abs() < 1e-5);
        let m = cantor_measure(spec);
        let r = spec.ratio;
        let expect = [0.0, r * (1.0 - r), 1.0 - r, 1.0 - r + r * (1.0 - r)];
        for (p, e) in m.points().iter().zip(expect) {
            assert!((p.x - e).abs() < 1e-15);
        }
    }

    #[test]
    fn dimension_round_trip() {
        for a in [0.25, 0.5, 0.75, 0.945, 1.0] {
            let s = CantorSpec::from_dimension(a, 3).unwrap();
            assert!((s.dimension() - a).abs() < 1e-12);
        }
        assert!(CantorSpec::new(0.6, 2).is_err());
    }

    #[test]
    fn shifted_union_examples() {
        let one = DiscreteMeasure::new(vec![Point2::ORIGIN], vec![1.0]).unwrap();
        let u = shifted_union(&one).unwrap();
        assert_eq!(u.points(), &[Point2::new(-1.0, 0.0), Point2::new(1.0, 0.0)]);
        assert_eq!(u.weights(), &[0.5, 0.5]);
        let u = shifted_union(&cantor_measure(CantorSpec::new(1.0 / 3.0, 1).unwrap())).unwrap();
        let xs: Vec<f64> = u.points().iter().map(|p| p.x).collect();
        assert!((xs[1] + 1.0 / 3.0).abs() < 1e-15 && (xs[3] - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(u.total_mass(), 1.0);
        let off = DiscreteMeasure::new(vec![Point2::new(0.0, 1.0)], vec![1.0]).unwrap();
        assert!(shifted_union(&off).is_err());
    }

    #[test]
    fn product_examples() {
        let c = cantor_measure(CantorSpec::new(0.5, 3).unwrap());
        let p = product_measure(&c, &c, &Limits::default()).unwrap();
        assert_eq!(p.len(), 64);
        assert!(p.weights().iter().all(|&w| w == 1.0 / 64.0));
        assert_eq!(p.points()[9], Point2::new(0.125, 0.125));
        let tiny = Limits { max_atoms: 10, ..Limits::default() };
        assert!(matches!(product_measure(&c, &c, &tiny), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn thicken_single_ball() {
        let t = thicken_with(&[Point2::new(0.5, 0.5)], 2.0, None, &Limits::default()).unwrap();
        assert_eq!(t.radius, 1.0);
        assert!((t.raw_integral - PI).abs() < 0.02 * PI);
        assert!((t.density.max() - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn thicken_grid_overlap_peak() {
        // 16 x 16 grid in [0,1]^2, s = 7/4: radius exceeds half the spacing
        // but not half the diagonal, so at most two balls overlap.
        let pts: Vec<Point2> = (0..256).map(|k| Point2::new((k % 16) as f64 / 15.0, (k / 16) as f64 / 15.0)).collect();
        let t = thicken_with(&pts, 1.75, None, &Limits::default()).unwrap();
        let r = t.radius;
        assert!(r > 0.5 / 15.0 && r < 0.5 * 2f64.sqrt() / 15.0);
        assert!((t.density.max() - 2.0 * t.height / PI).abs() < 1e-12);
    }

    #[test]
    fn energy_examples() {
        let m = DiscreteMeasure::new(vec![Point2::ORIGIN, Point2::new(0.5, 0.0)], vec![0.5, 0.5]).unwrap();
        assert!((energy_integral(&m, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let one = DiscreteMeasure::new(vec![Point2::ORIGIN], vec![1.0]).unwrap();
        assert_eq!(energy_integral(&one, 1.0).unwrap(), 0.0);
        let dup = DiscreteMeasure::uniform(vec![Point2::ORIGIN, Point2::ORIGIN]).unwrap();
        assert!(matches!(energy_integral(&dup, 1.0), Err(Error::CoincidentAtoms { .. })));
    }

    #[test]
    fn adaptability_two_points() {
        let p = [Point2::new(0.0, 0.0), Point2::new(0.5, 0.0)];
        let (_, v) = is_adaptable(&p, 1.75, 50.0).unwrap();
        assert!((v - 2.0 * 0.5f64.powf(-1.75) / 4.0).abs() < 1e-14);
        assert!(is_adaptable(&[Point2::new(1.5, 0.0)], 1.0, 1.0).is_err());
    }

    #[test]
    fn frostman_single_atom_blows_up() {
        let one = DiscreteMeasure::new(vec![Point2::ORIGIN], vec![1.0]).unwrap();
        let r = frostman_ratio(&one, 1.0, &[0.1, 0.01, 0.001], 0, 0).unwrap();
        assert!((r.ratio - 1000.0).abs() < 1e-9);
        assert!(frostman_ratio(&one, 1.0, &[], 0, 0).is_err());
    }

    #[test]
    fn riesz_kernel_tail_matches_power() {
        let k = RieszKernel::new(0.25).unwrap();
        let r = 31.9;
        assert!((k.unit(r) / r.powf(-1.75) - 1.0).abs() < 1e-3);
        assert!(k.unit(0.0).is_finite() && k.unit(0.0) > 0.0);
    }
}
