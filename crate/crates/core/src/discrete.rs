//! Finite point sets in the unit square: approximate-congruence counts and
//! distinct-distance statistics.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::ExponentFit;
use crate::geometry::{Point2, TriangleSpec};
use crate::measure::{cantor_measure, is_adaptable, CantorSpec};
use crate::tolerances::{BRUTE_COUNT_SOFT_LIMIT, TRIANGLE_CLASSES_SOFT_LIMIT};
use crate::trilinear::{brute_count, TripleBands, TripleEnumerator};

/// Points of `[0, 1]^2` without exact duplicates.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point2>,
}

impl PointSet {
    pub fn new(points: Vec<Point2>) -> Result<Self> {
        if let Some(i) = points.iter().position(|p| !(p.is_finite() && (0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y))) {
            return Err(Error::param("points", format!("point {i} lies outside the unit square")));
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].x.total_cmp(&points[b].x).then(points[a].y.total_cmp(&points[b].y)));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::CoincidentAtoms { first: w[0].min(w[1]), second: w[0].max(w[1]) });
            }
        }
        Ok(PointSet { points })
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point2> {
        self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// `sqrt(n) x sqrt(n)` lattice with corners at `(0,0)` and `(1,1)`.
    Grid,
    RandomUniform,
    /// Product of a Cantor set with itself; `4^L` points with `4^L` nearest to `n`.
    CantorProduct,
    /// `n` points spread over `clusters` discs of radius `radius`.
    Cluster,
    /// `n / 3` translates of one triangle, offsets within `radius`.
    RepeatedTriangle,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "grid" => GeneratorKind::Grid,
            "random-uniform" | "random" => GeneratorKind::RandomUniform,
            "cantor-product" | "cantor" => GeneratorKind::CantorProduct,
            "cluster" => GeneratorKind::Cluster,
            "repeated-triangle" => GeneratorKind::RepeatedTriangle,
            _ => return Err(Error::param("kind", format!("unknown generator {s:?}"))),
        })
    }
}

/// Kind-specific knobs; unused fields are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorParams {
    pub ratio: f64,
    pub clusters: usize,
    /// Cluster radius; `0` means `n^{-2}`.
    pub radius: f64,
    /// Side lengths for `repeated-triangle`.
    pub triangle: [f64; 3],
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams { ratio: 2f64.powf(-4.0 / 3.0), clusters: 1, radius: 0.0, triangle: [0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2] }
    }
}

/// Quantisation used for collision rejection.
const COLLISION_GRAIN: f64 = 1e-12;

/// Deterministic point set for `(kind, n, seed, params)`.
pub fn generate(kind: GeneratorKind, n: usize, seed: u64, params: &GeneratorParams) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = match kind {
        GeneratorKind::Grid => {
            let m = (n as f64).sqrt().round() as usize;
            if m * m != n {
                return Err(Error::param("n", format!("{n} is not a perfect square")));
            }
            let h = if m > 1 { 1.0 / (m - 1) as f64 } else { 0.0 };
            (0..n).map(|q| Point2::new((q % m) as f64 * h, (q / m) as f64 * h)).collect()
        }
        GeneratorKind::RandomUniform => {
            let mut seen = HashSet::new();
            sample_distinct(n, &mut seen, || Point2::new(rng.gen(), rng.gen()))?
        }
        GeneratorKind::CantorProduct => {
            let level = ((n as f64).ln() / 4f64.ln()).round().max(0.0) as u32;
            let c = cantor_measure(CantorSpec::new(params.ratio, level)?);
            let xs: Vec<f64> = c.points().iter().map(|p| p.x).collect();
            xs.iter().flat_map(|&x| xs.iter().map(move |&y| Point2::new(x, y))).collect()
        }
        GeneratorKind::Cluster => {
            let radius = if params.radius > 0.0 { params.radius } else { (n as f64).powi(-2) };
            let k = params.clusters.max(1);
            let centers: Vec<Point2> =
                (0..k).map(|_| Point2::new(rng.gen_range(radius..=1.0 - radius), rng.gen_range(radius..=1.0 - radius))).collect();
            let mut seen = HashSet::new();
            let mut q = 0usize;
            sample_distinct(n, &mut seen, || {
                let c = centers[q % k];
                q += 1;
                let r = radius * rng.gen::<f64>().sqrt();
                c.add(&Point2::unit(rng.gen::<f64>() * std::f64::consts::TAU).scale(r))
            })?
        }
        GeneratorKind::RepeatedTriangle => {
            let t = TriangleSpec::new(params.triangle[0], params.triangle[1], params.triangle[2])?;
            // x1 at the origin, x2 on the x-axis, x3 from the law of cosines.
            let cos1 = (t.t12 * t.t12 + t.t13 * t.t13 - t.t23 * t.t23) / (2.0 * t.t12 * t.t13);
            let tri = [Point2::ORIGIN, Point2::new(t.t12, 0.0), Point2::new(t.t13 * cos1, t.t13 * (1.0 - cos1 * cos1).max(0.0).sqrt())];
            let ys: Vec<f64> = tri.iter().map(|p| p.y).collect();
            let xs: Vec<f64> = tri.iter().map(|p| p.x).collect();
            let base = Point2::new(
                0.5 - 0.5 * (xs.iter().cloned().fold(f64::MIN, f64::max) + xs.iter().cloned().fold(f64::MAX, f64::min)),
                0.5 - 0.5 * ys.iter().cloned().fold(f64::MIN, f64::max),
            );
            let radius = if params.radius > 0.0 { params.radius } else { (n as f64).powi(-2) };
            let mut seen = HashSet::new();
            let mut off = Point2::ORIGIN;
            let mut q = 0usize;
            sample_distinct(n, &mut seen, || {
                if q.is_multiple_of(3) {
                    off = Point2::new(rng.gen::<f64>() * radius, rng.gen::<f64>() * radius);
                }
                let p = base.add(&off).add(&tri[q % 3]);
                q += 1;
                p
            })?
        }
    };
    PointSet::new(points)
}

fn sample_distinct(n: usize, seen: &mut HashSet<(i64, i64)>, mut draw: impl FnMut() -> Point2) -> Result<Vec<Point2>> {
    let mut out = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while out.len() < n {
        attempts += 1;
        if attempts > 100 * n + 1000 {
            return Err(Error::Numeric("could not draw enough distinct points".into()));
        }
        let p = draw();
        if !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y) {
            continue;
        }
        let key = ((p.x / COLLISION_GRAIN).round() as i64, (p.y / COLLISION_GRAIN).round() as i64);
        if seen.insert(key) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Soft warning for sizes where the cubic brute-force paths get slow.
pub fn brute_size_warning(n: usize) -> Option<String> {
    (n > BRUTE_COUNT_SOFT_LIMIT).then(|| format!("brute-force count on {n} points is O(n^3)"))
}

/// Ordered triples of distinct points with `t_ij - delta <= |x^i - x^j| <= t_ij + delta`.
pub fn count_congruent_brute(p: &PointSet, spec: &TriangleSpec, delta: f64) -> u64 {
    if p.len() < 3 {
        return 0;
    }
    brute_count(p.points(), &TripleBands::centered(spec, delta), true)
}

/// Cell size used by [`count_congruent_fast`].
pub fn count_cell(n: usize, delta: f64) -> f64 {
    delta.max(1.0 / (n as f64).sqrt().ceil().max(1.0))
}

/// Same value as [`count_congruent_brute`] through the pruned enumerator.
/// Requires `delta < min side / 4`.
pub fn count_congruent_fast(p: &PointSet, spec: &TriangleSpec, delta: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < spec.min_side() / 4.0) {
        return Err(Error::param("delta", format!("must lie in (0, min side / 4), got {delta}")));
    }
    if p.len() < 3 {
        return Ok(0);
    }
    let e = TripleEnumerator::single(p.points(), TripleBands::centered(spec, delta), count_cell(p.len(), delta), true);
    Ok(e.count())
}

/// Number of distinct nonzero pairwise distances; sorted distances closer
/// than `resolution` to their predecessor are merged into its class.
pub fn distinct_distances(p: &PointSet, resolution: f64) -> u64 {
    let pts = p.points();
    let mut d: Vec<f64> = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let v = pts[i].dist(&pts[j]);
            if v > 0.0 {
                d.push(v);
            }
        }
    }
    d.sort_unstable_by(f64::total_cmp);
    let mut count = 0u64;
    let mut prev = f64::NEG_INFINITY;
    for v in d {
        if v - prev > resolution {
            count += 1;
        }
        prev = v;
    }
    count
}

/// Soft warning for [`distinct_triangle_classes`].
pub fn triangle_classes_warning(n: usize) -> Option<String> {
    (n > TRIANGLE_CLASSES_SOFT_LIMIT).then(|| format!("triangle classes on {n} points is O(n^3)"))
}

/// Number of distinct sorted side triples over unordered point triples,
/// each side rounded to a multiple of `resolution`.
pub fn distinct_triangle_classes(p: &PointSet, resolution: f64) -> Result<u64> {
    if !(resolution > 0.0) {
        return Err(Error::param("resolution", format!("must be positive, got {resolution}")));
    }
    let pts = p.points();
    let n = pts.len();
    let q = |v: f64| (v / resolution).round() as i64;
    let mut classes: HashSet<[i64; 3]> = HashSet::new();
    for i in 0..n {
        for j in i + 1..n {
            let dij = q(pts[i].dist(&pts[j]));
            for k in j + 1..n {
                let mut s = [dij, q(pts[i].dist(&pts[k])), q(pts[j].dist(&pts[k]))];
                s.sort_unstable();
                classes.insert(s);
            }
        }
    }
    Ok(classes.len() as u64)
}

/// Point-set family for [`corollary_experiment`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: GeneratorKind,
    pub seed: u64,
    #[serde(default)]
    pub params: GeneratorParams,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryRow {
    pub n: usize,
    pub delta: f64,
    pub count: u64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryReport {
    pub rows: Vec<CorollaryRow>,
    pub fit: ExponentFit,
    pub adaptability_exponent: f64,
    pub adaptability_cap: f64,
}

/// For each `n`: generate, check adaptability at `s`, count with
/// `delta = n^{-4/7 - b}`, then fit `log count` against `log n`.
pub fn corollary_experiment(
    family: &FamilySpec,
    sizes: &[usize],
    b: f64,
    spec: &TriangleSpec,
    s: f64,
    cap: f64,
) -> Result<CorollaryReport> {
    let mut distinct_sizes = sizes.to_vec();
    distinct_sizes.sort_unstable();
    distinct_sizes.dedup();
    if distinct_sizes.len() < 3 {
        return Err(Error::InsufficientSamples(distinct_sizes.len()));
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in &distinct_sizes {
        let p = generate(family.kind, n, family.seed, &family.params)?;
        let (ok, energy) = is_adaptable(p.points(), s, cap)?;
        if !ok {
            return Err(Error::NotAdaptable { n, energy, cap });
        }
        let delta = corollary_delta(p.len(), b);
        let count = count_congruent_fast(&p, spec, delta)?;
        rows.push(CorollaryRow { n: p.len(), delta, count, energy });
    }
    let fit = ExponentFit::fit(rows.iter().map(|r| (r.n as f64, r.count as f64)).collect())?;
    Ok(CorollaryReport { rows, fit, adaptability_exponent: s, adaptability_cap: cap })
}

/// `n^{-4/7 - b}`.
pub fn corollary_delta(n: usize, b: f64) -> f64 {
    (n as f64).powf(-4.0 / 7.0 - b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pts: &[(f64, f64)]) -> PointSet {
        PointSet::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn triangle_labelings() {
        let scalene = set(&[(0.0, 0.0), (0.5, 0.0), (0.0, 0.3)]);
        let t = TriangleSpec::new(0.5, 0.3, 0.34f64.sqrt()).unwrap();
        assert_eq!(count_congruent_brute(&scalene, &t, 1e-6), 1);
        assert_eq!(count_congruent_fast(&scalene, &t, 1e-6).unwrap(), 1);

        let h = 3f64.sqrt() / 4.0;
        let eq = set(&[(0.1, 0.1), (0.6, 0.1), (0.35, 0.1 + h)]);
        let t = TriangleSpec::equilateral(0.5).unwrap();
        assert_eq!(count_congruent_brute(&eq, &t, 1e-6), 6);
        assert_eq!(count_congruent_fast(&eq, &t, 1e-6).unwrap(), 6);
    }

    #[test]
    fn unit_square_corners() {
        let sq = set(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
        let t = TriangleSpec::new(1.0, 1.0, 2f64.sqrt()).unwrap();
        assert_eq!(count_congruent_brute(&sq, &t, 0.01), 8);
        assert_eq!(count_congruent_fast(&sq, &t, 0.01).unwrap(), 8);
        assert_eq!(distinct_distances(&sq, 0.0), 2);
        assert_eq!(distinct_triangle_classes(&sq, 1e-9).unwrap(), 1);
    }

    #[test]
    fn tiny_sets() {
        let two = set(&[(0.0, 0.0), (1.0, 0.0)]);
        let t = TriangleSpec::equilateral(1.0).unwrap();
        assert_eq!(count_congruent_brute(&two, &t, 0.1), 0);
        let line = set(&[(0.0, 0.0), (0.25, 0.0), (0.5, 0.0), (0.75, 0.0), (1.0, 0.0)]);
        assert_eq!(distinct_distances(&line, 1e-12), 4);
    }

    #[test]
    fn empty_annulus_beyond_diameter() {
        let p = generate(GeneratorKind::RandomUniform, 100, 3, &GeneratorParams::default()).unwrap();
        let t = TriangleSpec::equilateral(1.5).unwrap();
        assert_eq!(count_congruent_fast(&p, &t, 0.01).unwrap(), 0);
    }

    #[test]
    fn grid_distinct_distances_match_lattice_norms() {
        let p = generate(GeneratorKind::Grid, 32 * 32, 0, &GeneratorParams::default()).unwrap();
        let mut norms = HashSet::new();
        for a in 0..32i64 {
            for b in 0..32i64 {
                if a + b > 0 {
                    norms.insert(a * a + b * b);
                }
            }
        }
        assert_eq!(distinct_distances(&p, 1e-9), norms.len() as u64);
    }

    #[test]
    fn generators_are_deterministic() {
        let gp = GeneratorParams::default();
        assert_eq!(
            generate(GeneratorKind::Grid, 4, 0, &gp).unwrap().points(),
            set(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]).points()
        );
        assert!(generate(GeneratorKind::Grid, 5, 0, &gp).is_err());
        for kind in [GeneratorKind::RandomUniform, GeneratorKind::Cluster, GeneratorKind::RepeatedTriangle] {
            let a = generate(kind, 99, 42, &gp).unwrap();
            assert_eq!(a, generate(kind, 99, 42, &gp).unwrap());
            assert_eq!(a.len(), 99);
        }
        assert_eq!(generate(GeneratorKind::CantorProduct, 250, 0, &gp).unwrap().len(), 256);
    }

    #[test]
    fn corollary_rejects_bad_inputs() {
        let t = TriangleSpec::new(0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2).unwrap();
        let grid = FamilySpec { kind: GeneratorKind::Grid, seed: 0, params: GeneratorParams::default() };
        assert!(matches!(corollary_experiment(&grid, &[256], 0.01, &t, 1.76, 50.0), Err(Error::InsufficientSamples(1))));
        let tri = FamilySpec { kind: GeneratorKind::RepeatedTriangle, seed: 1, params: GeneratorParams::default() };
        assert!(matches!(corollary_experiment(&tri, &[96, 192, 384], 0.01, &t, 1.76, 50.0), Err(Error::NotAdaptable { .. })));
    }
}
