//! Triple-annulus masses, the mollified trilinear form and configuration
//! histograms.
//!
//! All sums run over ordered triples `(x1, x2, x3)`. Side `ij` is
//! `|x_i - x_j|`; bands are closed.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::circle::sigma_eps;
use crate::error::{Error, Result};
use crate::geometry::{Point2, TriangleSpec};
use crate::measure::DiscreteMeasure;
use crate::par;
use crate::spatial::{Band, CellIndex};
use crate::tolerances::PRUNING_SLACK;

/// Closed distance bands for the three sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleBands {
    pub b12: Band,
    pub b13: Band,
    pub b23: Band,
}

impl TripleBands {
    /// `t_ij <= d <= t_ij + eps`.
    pub fn outward(spec: &TriangleSpec, eps: f64) -> Self {
        TripleBands { b12: Band::outward(spec.t12, eps), b13: Band::outward(spec.t13, eps), b23: Band::outward(spec.t23, eps) }
    }

    /// `t_ij - delta <= d <= t_ij + delta`.
    pub fn centered(spec: &TriangleSpec, delta: f64) -> Self {
        TripleBands { b12: Band::centered(spec.t12, delta), b13: Band::centered(spec.t13, delta), b23: Band::centered(spec.t23, delta) }
    }

    #[inline]
    pub fn admits(&self, p1: &Point2, p2: &Point2, p3: &Point2) -> bool {
        self.b12.contains(p1.dist(p2)) && self.b13.contains(p1.dist(p3)) && self.b23.contains(p2.dist(p3))
    }
}

/// Angle-window pruned enumeration of the triples admitted by a
/// [`TripleBands`], with `x1, x2, x3` drawn from three point slices.
///
/// For each `x1` the candidates for `x2` are the members of the `b12`
/// annulus in increasing index order. The `b13` annulus is sorted by angle
/// about `x1`; for each `x2` the law of cosines bounds the angular offset of
/// any admissible `x3`, and only that window is scanned. Every candidate is
/// re-checked with the exact band predicate, so the admitted set equals the
/// brute-force one.
pub struct TripleEnumerator<'a> {
    p1: &'a [Point2],
    p2: &'a [Point2],
    p3: &'a [Point2],
    idx2: CellIndex,
    idx3: CellIndex,
    bands: TripleBands,
    distinct: bool,
}

/// Per-`x1` scratch and results: `js[m]` has admitted third vertices
/// `ks[starts[m]..starts[m + 1]]`, both ascending.
#[derive(Debug, Default, Clone)]
pub struct OuterTriples {
    pub js: Vec<u32>,
    pub starts: Vec<usize>,
    pub ks: Vec<u32>,
}

impl OuterTriples {
    pub fn iter(&self) -> impl Iterator<Item = (u32, &[u32])> + '_ {
        self.js.iter().enumerate().map(move |(m, &j)| (j, &self.ks[self.starts[m]..self.starts[m + 1]]))
    }

    pub fn count(&self) -> u64 {
        self.ks.len() as u64
    }
}

impl<'a> TripleEnumerator<'a> {
    /// `distinct` drops triples with repeated indices; only meaningful when
    /// the three slices are the same set.
    pub fn new(p1: &'a [Point2], p2: &'a [Point2], p3: &'a [Point2], bands: TripleBands, cell: f64, distinct: bool) -> Self {
        TripleEnumerator { p1, p2, p3, idx2: CellIndex::new(p2, cell), idx3: CellIndex::new(p3, cell), bands, distinct }
    }

    /// Single point set for all three vertices.
    pub fn single(points: &'a [Point2], bands: TripleBands, cell: f64, distinct: bool) -> Self {
        let idx = CellIndex::new(points, cell);
        TripleEnumerator { p1: points, p2: points, p3: points, idx2: idx.clone(), idx3: idx, bands, distinct }
    }

    pub fn outer_len(&self) -> usize {
        self.p1.len()
    }

    /// All admitted `(j, k)` for outer vertex `i`.
    pub fn outer(&self, i: usize) -> OuterTriples {
        let x1 = self.p1[i];
        let mut a12 = Vec::new();
        self.idx2.annulus_into(self.p2, &x1, self.bands.b12, &mut a12);
        a12.sort_unstable();
        let mut around: Vec<(f64, u32)> = Vec::new();
        self.idx3.for_each_in_annulus(self.p3, &x1, self.bands.b13, |k| {
            let d = self.p3[k].sub(&x1);
            around.push((d.y.atan2(d.x), k as u32));
        });
        around.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let angles: Vec<f64> = around.iter().map(|a| a.0).collect();

        let mut out = OuterTriples::default();
        out.starts.push(0);
        if around.is_empty() {
            return out;
        }
        let b13 = self.bands.b13;
        let b23 = self.bands.b23;
        let mut windows: Vec<(f64, f64)> = Vec::with_capacity(4);
        for &j in &a12 {
            let j = j as usize;
            if self.distinct && j == i {
                continue;
            }
            let x2 = self.p2[j];
            let rel = x2.sub(&x1);
            let rho2 = x1.dist(&x2);
            windows.clear();
            angular_windows(rel.y.atan2(rel.x), rho2, b13, b23, &mut windows);
            let start = out.ks.len();
            for &(s, e) in &windows {
                let first = angles.partition_point(|&a| a < s);
                for &(a, k) in &around[first..] {
                    if a > e {
                        break;
                    }
                    let ku = k as usize;
                    if self.distinct && (ku == i || ku == j) {
                        continue;
                    }
                    if b23.contains(x2.dist(&self.p3[ku])) {
                        out.ks.push(k);
                    }
                }
            }
            if out.ks.len() > start {
                let tail = &mut out.ks[start..];
                tail.sort_unstable();
                let mut w = start;
                for r in start..out.ks.len() {
                    if r == start || out.ks[r] != out.ks[w - 1] {
                        out.ks[w] = out.ks[r];
                        w += 1;
                    }
                }
                out.ks.truncate(w);
                out.js.push(j as u32);
                out.starts.push(out.ks.len());
            }
        }
        out
    }

    /// Number of admitted ordered triples.
    pub fn count(&self) -> u64 {
        par::map_indexed(self.p1.len(), |i| self.outer(i).count()).into_iter().sum()
    }

    /// `sum_i w1_i sum_j w2_j sum_k w3_k` over admitted triples, inner sums in
    /// increasing index order.
    pub fn mass(&self, w1: &[f64], w2: &[f64], w3: &[f64]) -> f64 {
        par::map_indexed(self.p1.len(), |i| {
            let o = self.outer(i);
            let mut sj = 0.0;
            for (j, ks) in o.iter() {
                let mut sk = 0.0;
                for &k in ks {
                    sk += w3[k as usize];
                }
                sj += w2[j as usize] * sk;
            }
            w1[i] * sj
        })
        .into_iter()
        .sum()
    }
}

/// Angular intervals (within `[-pi, pi]`) that can contain `x3` given `x2`
/// at angle `phi2`, distance `rho2` from `x1`.
fn angular_windows(phi2: f64, rho2: f64, b13: Band, b23: Band, out: &mut Vec<(f64, f64)>) {
    let full = || vec![(-PI, PI)];
    let lo3 = b13.lo;
    let hi3 = b13.hi;
    if !(lo3 > 0.0 && rho2 > 0.0) {
        out.extend(full());
        return;
    }
    // cos(dphi) = (rho2^2 + rho3^2 - d23^2) / (2 rho2 rho3) as rho3, d23 range over their bands.
    let g = |rho3: f64, d: f64| (rho2 * rho2 + rho3 * rho3 - d * d) / (2.0 * rho2 * rho3);
    let dhi = b23.hi;
    let dlo = b23.lo.max(0.0);
    let mut cmin = g(lo3, dhi).min(g(hi3, dhi));
    if rho2 > dhi {
        let crit = (rho2 * rho2 - dhi * dhi).sqrt();
        if crit > lo3 && crit < hi3 {
            cmin = cmin.min(g(crit, dhi));
        }
    }
    let cmax = g(lo3, dlo).max(g(hi3, dlo));
    let cmin = cmin - PRUNING_SLACK;
    let cmax = cmax + PRUNING_SLACK;
    if cmin > cmax || cmax < -1.0 || cmin > 1.0 {
        return;
    }
    let dlo_ang = if cmax >= 1.0 { 0.0 } else { cmax.acos() };
    let dhi_ang = if cmin <= -1.0 { PI } else { cmin.acos() };
    let pad = PRUNING_SLACK;
    let raw: [(f64, f64); 2];
    let n = if dlo_ang == 0.0 && dhi_ang == PI {
        out.extend(full());
        return;
    } else if dlo_ang == 0.0 {
        raw = [(phi2 - dhi_ang - pad, phi2 + dhi_ang + pad), (0.0, 0.0)];
        1
    } else if dhi_ang == PI {
        raw = [(phi2 + dlo_ang - pad, phi2 + TAU - dlo_ang + pad), (0.0, 0.0)];
        1
    } else {
        raw = [(phi2 + dlo_ang - pad, phi2 + dhi_ang + pad), (phi2 - dhi_ang - pad, phi2 - dlo_ang + pad)];
        2
    };
    for &(s, e) in &raw[..n] {
        if e - s >= TAU {
            out.clear();
            out.extend(full());
            return;
        }
        let mut s = s;
        let mut e = e;
        while s < -PI {
            s += TAU;
            e += TAU;
        }
        while s >= PI {
            s -= TAU;
            e -= TAU;
        }
        if e > PI {
            out.push((s, PI));
            out.push((-PI, e - TAU));
        } else {
            out.push((s, e));
        }
    }
}

/// Same sum as [`TripleEnumerator::mass`] by direct `O(n^3)` loops.
pub fn brute_mass(p: &[Point2], w: &[f64], bands: &TripleBands, distinct: bool) -> f64 {
    par::map_indexed(p.len(), |i| {
        let mut sj = 0.0;
        for j in 0..p.len() {
            if (distinct && j == i) || !bands.b12.contains(p[i].dist(&p[j])) {
                continue;
            }
            let mut sk = 0.0;
            for k in 0..p.len() {
                if distinct && (k == i || k == j) {
                    continue;
                }
                if bands.b13.contains(p[i].dist(&p[k])) && bands.b23.contains(p[j].dist(&p[k])) {
                    sk += w[k];
                }
            }
            sj += w[j] * sk;
        }
        w[i] * sj
    })
    .into_iter()
    .sum()
}

/// Number of admitted ordered triples by direct loops.
pub fn brute_count(p: &[Point2], bands: &TripleBands, distinct: bool) -> u64 {
    par::map_indexed(p.len(), |i| {
        let mut c = 0u64;
        for j in 0..p.len() {
            if (distinct && j == i) || !bands.b12.contains(p[i].dist(&p[j])) {
                continue;
            }
            for k in 0..p.len() {
                if distinct && (k == i || k == j) {
                    continue;
                }
                if bands.b13.contains(p[i].dist(&p[k])) && bands.b23.contains(p[j].dist(&p[k])) {
                    c += 1;
                }
            }
        }
        c
    })
    .into_iter()
    .sum()
}

fn check_eps(spec: &TriangleSpec, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    if eps >= spec.min_side() / 2.0 {
        return Err(Error::param("eps", format!("must be below half the shortest side, got {eps}")));
    }
    Ok(())
}

/// Cell size used for mass enumeration.
pub fn mass_cell(spec: &TriangleSpec, eps: f64) -> f64 {
    eps.max(spec.min_side() / 8.0)
}

/// `(mu x mu x mu){t_ij <= |x^i - x^j| <= t_ij + eps for all i < j}`.
pub fn triple_annulus_mass(m: &DiscreteMeasure, spec: &TriangleSpec, eps: f64) -> Result<f64> {
    check_eps(spec, eps)?;
    let bands = TripleBands::outward(spec, eps);
    let e = TripleEnumerator::single(m.points(), bands, mass_cell(spec, eps), false);
    let w = m.weights();
    Ok(e.mass(w, w, w))
}

/// [`triple_annulus_mass`] by direct triple loops.
pub fn triple_annulus_mass_brute(m: &DiscreteMeasure, spec: &TriangleSpec, eps: f64) -> Result<f64> {
    check_eps(spec, eps)?;
    Ok(brute_mass(m.points(), m.weights(), &TripleBands::outward(spec, eps), false))
}

/// `sum w1 w2 w3 sigma^eps_{t12}(x1-x2) sigma^eps_{t13}(x1-x3) sigma^eps_{t23}(x2-x3)`.
pub fn trilinear_form(m1: &DiscreteMeasure, m2: &DiscreteMeasure, m3: &DiscreteMeasure, spec: &TriangleSpec, eps: f64) -> Result<f64> {
    check_eps(spec, eps)?;
    let bands = TripleBands::centered(spec, eps);
    let e = TripleEnumerator::new(m1.points(), m2.points(), m3.points(), bands, mass_cell(spec, eps), false);
    let (p1, p2, p3) = (m1.points(), m2.points(), m3.points());
    let (w1, w2, w3) = (m1.weights(), m2.weights(), m3.weights());
    let total = par::map_indexed(p1.len(), |i| {
        let o = e.outer(i);
        let x1 = p1[i];
        let mut sj = 0.0;
        for (j, ks) in o.iter() {
            let x2 = p2[j as usize];
            let s12 = sigma_eps(spec.t12, eps, x1.sub(&x2));
            if s12 == 0.0 {
                continue;
            }
            let mut sk = 0.0;
            for &k in ks {
                let x3 = p3[k as usize];
                sk += w3[k as usize] * sigma_eps(spec.t13, eps, x1.sub(&x3)) * sigma_eps(spec.t23, eps, x2.sub(&x3));
            }
            sj += w2[j as usize] * s12 * sk;
        }
        w1[i] * sj
    });
    Ok(total.into_iter().sum())
}

/// `(triple_annulus_mass(t, eps) / eps^3) / trilinear_form(t + eps/2, eps)`.
///
/// The shifted kernel is bounded below by a multiple of `1/eps` on the whole
/// annulus `[t, t + eps]`, so the ratio stays bounded.
pub fn domination_ratio(m: &DiscreteMeasure, spec: &TriangleSpec, eps: f64) -> Result<DominationRow> {
    let mass = triple_annulus_mass(m, spec, eps)?;
    let shifted = TriangleSpec::new(spec.t12 + eps / 2.0, spec.t13 + eps / 2.0, spec.t23 + eps / 2.0)?;
    let form = trilinear_form(m, m, m, &shifted, eps)?;
    let lhs = mass / eps.powi(3);
    let ratio = if form > 0.0 {
        lhs / form
    } else if lhs == 0.0 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(DominationRow { eps, mass, form, ratio })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominationRow {
    pub eps: f64,
    pub mass: f64,
    pub form: f64,
    pub ratio: f64,
}

/// Dense histogram of the configuration measure over a box of
/// `(t12, t13, t23)` space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigHistogram {
    pub origin: [f64; 3],
    pub bin_width: f64,
    pub dims: [usize; 3],
    /// Row-major with the `t23` index fastest.
    pub masses: Vec<f64>,
    /// Mass of triples whose side vector falls outside the box.
    pub outside_mass: f64,
    pub total_mass: f64,
}

impl ConfigHistogram {
    #[inline]
    fn flat(&self, b: [usize; 3]) -> usize {
        (b[0] * self.dims[1] + b[1]) * self.dims[2] + b[2]
    }

    #[inline]
    fn bin_of(&self, t: [f64; 3]) -> Option<[usize; 3]> {
        let mut b = [0usize; 3];
        for a in 0..3 {
            let f = ((t[a] - self.origin[a]) / self.bin_width).floor();
            if !(f >= 0.0 && (f as usize) < self.dims[a]) {
                return None;
            }
            b[a] = f as usize;
        }
        Some(b)
    }

    pub fn bin_mass(&self, b: [usize; 3]) -> f64 {
        self.masses[self.flat(b)]
    }

    pub fn bin_center(&self, b: [usize; 3]) -> [f64; 3] {
        std::array::from_fn(|a| self.origin[a] + (b[a] as f64 + 0.5) * self.bin_width)
    }

    /// Mass over `bin_width^3` of the bin containing `t`; 0 outside the box.
    pub fn density_at(&self, t: [f64; 3]) -> f64 {
        self.bin_of(t).map_or(0.0, |b| self.bin_mass(b) / self.bin_width.powi(3))
    }

    /// Sum of all bin masses plus the outside mass.
    pub fn histogram_mass(&self) -> f64 {
        self.masses.iter().sum::<f64>() + self.outside_mass
    }

    /// Largest density over bins whose every point `t` satisfies
    /// `t_a + t_b - t_c >= margin` for all labelings. Near-degenerate
    /// triangles carry unbounded density even for absolutely continuous
    /// measures, so they are excluded.
    pub fn sup_density(&self, margin: f64) -> Option<([usize; 3], f64)> {
        let w = self.bin_width;
        let mut best: Option<([usize; 3], f64)> = None;
        for a in 0..self.dims[0] {
            for b in 0..self.dims[1] {
                for c in 0..self.dims[2] {
                    let lo = [self.origin[0] + a as f64 * w, self.origin[1] + b as f64 * w, self.origin[2] + c as f64 * w];
                    let regular = (0..3).all(|x| lo[(x + 1) % 3] + lo[(x + 2) % 3] - (lo[x] + w) >= margin);
                    if !regular {
                        continue;
                    }
                    let m = self.bin_mass([a, b, c]);
                    if best.is_none_or(|(_, d)| m / w.powi(3) > d) {
                        best = Some(([a, b, c], m / w.powi(3)));
                    }
                }
            }
        }
        best
    }

    /// Marginal over `(t13, t23)`: mass per `t12` bin.
    pub fn marginal_12(&self) -> Vec<f64> {
        let per = self.dims[1] * self.dims[2];
        self.masses.chunks(per).map(|c| c.iter().sum()).collect()
    }
}

/// Box of `(t12, t13, t23)` space covered by a histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramWindow {
    pub lo: [f64; 3],
    pub hi: [f64; 3],
}

impl HistogramWindow {
    pub fn cube(lo: f64, hi: f64) -> Self {
        HistogramWindow { lo: [lo; 3], hi: [hi; 3] }
    }
}

/// Pushes every ordered atom triple (repeats included) into bins of width
/// `bin_width`. Without a window the box is `[0, diameter]^3`.
///
/// Work is split by `t12` bin: each slab of the histogram is filled by one
/// task, visiting its triples in lexicographic `(i, j, k)` order, so the
/// result does not depend on the number of workers.
pub fn config_density(m: &DiscreteMeasure, bin_width: f64, window: Option<HistogramWindow>, max_bins: usize) -> Result<ConfigHistogram> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::param("bin_width", format!("must be positive, got {bin_width}")));
    }
    let p = m.points();
    let w = m.weights();
    let n = p.len();
    let dist: Vec<f64> = (0..n * n).map(|q| p[q / n].dist(&p[q % n])).collect();
    let window = window.unwrap_or_else(|| {
        let diam = dist.iter().cloned().fold(0.0, f64::max);
        HistogramWindow::cube(0.0, diam + bin_width)
    });
    let mut dims = [0usize; 3];
    for (a, d) in dims.iter_mut().enumerate() {
        let span = window.hi[a] - window.lo[a];
        if !(span > 0.0) {
            return Err(Error::param("window", "empty histogram box"));
        }
        *d = (span / bin_width).ceil() as usize;
    }
    let bins = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).unwrap_or(usize::MAX);
    if bins > max_bins {
        return Err(Error::cap("histogram bins", bins, max_bins));
    }
    let mut hist =
        ConfigHistogram { origin: window.lo, bin_width, dims, masses: Vec::new(), outside_mass: 0.0, total_mass: m.total_mass().powi(3) };
    let axis_bin = |a: usize, t: f64| {
        let f = ((t - window.lo[a]) / bin_width).floor();
        (f >= 0.0 && (f as usize) < dims[a]).then_some(f as usize)
    };
    let total_w: f64 = w.iter().sum();
    let mut slabs_pairs: Vec<Vec<u32>> = vec![Vec::new(); dims[0]];
    let mut outside_pairs = 0.0;
    for q in 0..n * n {
        match axis_bin(0, dist[q]) {
            Some(a) => slabs_pairs[a].push(q as u32),
            None => outside_pairs += w[q / n] * w[q % n] * total_w,
        }
    }
    let slab = dims[1] * dims[2];
    let slabs = par::map_indexed(dims[0], |a| {
        let mut local = vec![0.0; slab];
        let mut outside = 0.0;
        for &q in &slabs_pairs[a] {
            let (i, j) = (q as usize / n, q as usize % n);
            let wij = w[i] * w[j];
            for k in 0..n {
                let mass = wij * w[k];
                match (axis_bin(1, dist[i * n + k]), axis_bin(2, dist[j * n + k])) {
                    (Some(b), Some(c)) => local[b * dims[2] + c] += mass,
                    _ => outside += mass,
                }
            }
        }
        (local, outside)
    });
    hist.masses.reserve(bins);
    hist.outside_mass = outside_pairs;
    for (local, outside) in slabs {
        hist.masses.extend(local);
        hist.outside_mass += outside;
    }
    Ok(hist)
}

/// Pair-distance histogram over ordered pairs with the same binning as the
/// first axis of `like`.
pub fn pair_histogram(m: &DiscreteMeasure, like: &ConfigHistogram) -> Vec<f64> {
    let p = m.points();
    let w = m.weights();
    let mut out = vec![0.0; like.dims[0]];
    for i in 0..p.len() {
        for j in 0..p.len() {
            let f = ((p[i].dist(&p[j]) - like.origin[0]) / like.bin_width).floor();
            if f >= 0.0 && (f as usize) < out.len() {
                out[f as usize] += w[i] * w[j];
            }
        }
    }
    out
}

/// `eps^{-1} (mu x mu){t <= |x - y| <= t + eps}` over ordered pairs.
pub fn distance_measure_density(m: &DiscreteMeasure, eps: f64, t: f64) -> Result<f64> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be positive, got {eps}")));
    }
    Ok(pair_band_mass(m, Band::outward(t, eps)) / eps)
}

/// `(mu x mu){d in band}` over ordered pairs.
pub fn pair_band_mass(m: &DiscreteMeasure, band: Band) -> f64 {
    let p = m.points();
    let w = m.weights();
    let cell = (band.hi - band.lo).max(band.hi / 8.0).max(1e-9);
    let index = CellIndex::new(p, cell);
    par::map_indexed(p.len(), |i| {
        let mut hits = Vec::new();
        index.annulus_into(p, &p[i], band, &mut hits);
        hits.sort_unstable();
        w[i] * hits.iter().map(|&j| w[j as usize]).sum::<f64>()
    })
    .into_iter()
    .sum()
}

/// Mass of atoms `y` with `t <= |y - center| <= t + eps`.
pub fn annulus_mass_around(m: &DiscreteMeasure, center: Point2, t: f64, eps: f64) -> f64 {
    let band = Band::outward(t, eps);
    m.atoms().filter(|(p, _)| band.contains(p.dist(&center))).map(|(_, w)| w).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn equilateral() -> DiscreteMeasure {
        let h = 3f64.sqrt() / 2.0;
        DiscreteMeasure::uniform(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, h)]).unwrap()
    }

    #[test]
    fn equilateral_triple_mass() {
        let spec = TriangleSpec::equilateral(1.0 - 1e-9).unwrap();
        let v = triple_annulus_mass(&equilateral(), &spec, 1e-6).unwrap();
        assert!((v - 2.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn unit_square_right_isoceles() {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), Point2::new(1.0, 1.0)];
        let m = DiscreteMeasure::uniform(pts).unwrap();
        let spec = TriangleSpec::new(1.0, 1.0, 2f64.sqrt() - 0.005).unwrap();
        // x1 is the vertex opposite t23: the right angle.
        let v = triple_annulus_mass(&m, &spec, 0.01).unwrap();
        assert_eq!(v, 8.0 / 64.0);
        assert_eq!(triple_annulus_mass_brute(&m, &spec, 0.01).unwrap(), v);
    }

    #[test]
    fn small_cluster_has_no_triples() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let pts: Vec<Point2> = (0..50).map(|_| Point2::new(rng.gen::<f64>() * 0.3, rng.gen::<f64>() * 0.3)).collect();
        let m = DiscreteMeasure::uniform(pts).unwrap();
        let spec = TriangleSpec::equilateral(1.0).unwrap();
        assert_eq!(triple_annulus_mass(&m, &spec, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn pruned_equals_brute_on_random_sets() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..20 {
            let n = 40 + trial * 7;
            let pts: Vec<Point2> = (0..n).map(|_| Point2::new(rng.gen(), rng.gen())).collect();
            let w: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 0.1).collect();
            let m = DiscreteMeasure::new(pts, w).unwrap();
            let spec = TriangleSpec::new(rng.gen_range(0.2..0.6), rng.gen_range(0.2..0.6), rng.gen_range(0.2..0.6))
                .unwrap_or(TriangleSpec::equilateral(0.4).unwrap());
            let eps = rng.gen_range(0.01..0.09);
            let a = triple_annulus_mass(&m, &spec, eps).unwrap();
            let b = triple_annulus_mass_brute(&m, &spec, eps).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "trial {trial}");
        }
    }

    #[test]
    fn windows_cover_wraparound() {
        let mut out = Vec::new();
        angular_windows(PI - 0.1, 1.0, Band::new(1.0, 1.01), Band::new(1.0, 1.01), &mut out);
        // Expected offset near pi/3 either side.
        let hit = |a: f64| out.iter().any(|&(s, e)| a >= s && a <= e);
        let plus = PI - 0.1 + PI / 3.0 + 0.002 - TAU;
        let minus = PI - 0.1 - PI / 3.0 - 0.002;
        assert!(hit(plus) && hit(minus), "{out:?}");
        assert!(!hit(PI - 0.1));
    }

    #[test]
    fn distance_density_two_atoms() {
        let (t, eps) = (1.0, 0.1);
        let m = DiscreteMeasure::uniform(vec![Point2::ORIGIN, Point2::new(t + eps / 2.0, 0.0)]).unwrap();
        assert!((distance_measure_density(&m, eps, t).unwrap() - 1.0 / (2.0 * eps)).abs() < 1e-12);
    }

    #[test]
    fn histogram_mass_and_marginal() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<Point2> = (0..30).map(|_| Point2::new(rng.gen(), rng.gen())).collect();
        let m = DiscreteMeasure::uniform(pts).unwrap();
        let h = config_density(&m, 0.125, None, 1 << 20).unwrap();
        assert!((h.histogram_mass() - 1.0).abs() < 1e-12);
        assert_eq!(h.outside_mass, 0.0);
        let pairs = pair_histogram(&m, &h);
        for (a, b) in h.marginal_12().iter().zip(&pairs) {
            assert!((a - b * m.total_mass()).abs() < 1e-12);
        }
    }

    #[test]
    fn trilinear_single_atoms_is_product_of_peaks() {
        let spec = TriangleSpec::equilateral(1.0).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let one = |p: Point2| DiscreteMeasure::new(vec![p], vec![1.0]).unwrap();
        let (a, b, c) = (Point2::ORIGIN, Point2::new(1.0, 0.0), Point2::new(0.5, h));
        let eps = 0.05;
        let v = trilinear_form(&one(a), &one(b), &one(c), &spec, eps).unwrap();
        let peak = sigma_eps(1.0, eps, Point2::new(1.0, 0.0));
        assert!((v - peak.powi(3)).abs() < 1e-9 * v);
        let far = trilinear_form(&one(a), &one(b), &one(Point2::new(0.5, h + 0.06)), &spec, eps).unwrap();
        assert_eq!(far, 0.0);
    }
}
