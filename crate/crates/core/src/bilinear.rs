//! The bilinear averaging operator over triangles with one unit side.
//!
//! ```text
//! B^eps(f, g)(x) = sum_{+-} integral_0^{2pi} f_eps(x - a e(t)) g_eps(x - b e(t +- theta_ab)) dt
//! ```
//!
//! with `f_eps = f * rho_eps`. The `d theta` integral is a periodic
//! trapezoid rule; off-grid values are bilinear interpolants with zero
//! extension. The data are mollified rather than the circle factors: with
//! one mollification parameter the quadrature integrand stays smooth.
//!
//! Each quadrature offset is split once into an integer node shift and a
//! fractional part, so translating both inputs by a grid vector translates
//! the output exactly.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::circle::{bump_profile, k_hat, unit_fourier, Branch, FreqPoint, Mollifier};
use crate::error::{Error, Result};
use crate::geometry::{gamma_ab, BoundingBox, Point2};
use crate::grid::GridFunction;
use crate::par;

/// `max(256, 8 * width)`.
pub fn default_quad_points(width: usize) -> usize {
    256usize.max(8 * width)
}

/// Offsets `u = a e(t)` and `v = b e(t +- theta_ab)` of the trapezoid rule;
/// every node carries weight `2 pi / n`.
#[derive(Debug, Clone)]
pub struct ThetaRule {
    pub weight: f64,
    pub nodes: Vec<(Point2, Point2)>,
}

impl ThetaRule {
    pub fn new(a: f64, b: f64, quad_points: usize, branch: Branch) -> Result<Self> {
        let theta_ab = gamma_ab(a, b)?.acos();
        let n = quad_points;
        let mut nodes = Vec::with_capacity(n * branch.signs().len());
        for &sign in branch.signs() {
            for k in 0..n {
                let t = TAU * k as f64 / n as f64;
                nodes.push((Point2::unit(t).scale(a), Point2::unit(t + sign * theta_ab).scale(b)));
            }
        }
        Ok(ThetaRule { weight: TAU / n as f64, nodes })
    }
}

/// `f * rho_eps` on the same grid, zero outside. The sampled kernel is
/// renormalised to unit sum, so sums of values are preserved for data
/// supported away from the boundary. `eps = 0` returns a copy.
pub fn mollify(f: &GridFunction, eps: f64) -> Result<GridFunction> {
    if eps == 0.0 {
        return Ok(f.clone());
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::param("eps", format!("must be nonnegative, got {eps}")));
    }
    let h = f.spacing;
    let r = (eps / h).floor() as isize;
    let rho = Mollifier::new(eps);
    let mut taps = Vec::new();
    for dj in -r..=r {
        for di in -r..=r {
            let v = rho.density(Point2::new(di as f64 * h, dj as f64 * h));
            if v > 0.0 {
                taps.push((di, dj, v));
            }
        }
    }
    let total: f64 = taps.iter().map(|t| t.2).sum();
    if total <= 0.0 {
        return Err(Error::param("eps", format!("grid spacing {h} does not resolve eps = {eps}")));
    }
    for t in &mut taps {
        t.2 /= total;
    }
    let (w, hgt) = (f.width as isize, f.height as isize);
    let rows = par::map_indexed(f.height, |j| {
        let j = j as isize;
        (0..w)
            .map(|i| {
                let mut acc = 0.0;
                for &(di, dj, c) in &taps {
                    let (x, y) = (i - di, j - dj);
                    if x >= 0 && y >= 0 && x < w && y < hgt {
                        acc += c * f.values[(y * w + x) as usize];
                    }
                }
                acc
            })
            .collect::<Vec<f64>>()
    });
    Ok(f.with_values(rows.concat()))
}

/// Zero-padded copy for branch-free bilinear sampling.
struct Padded {
    pad: isize,
    stride: isize,
    values: Vec<f64>,
}

impl Padded {
    fn new(g: &GridFunction, pad: usize) -> Self {
        let stride = g.width + 2 * pad + 1;
        let rows = g.height + 2 * pad + 1;
        let mut values = vec![0.0; stride * rows];
        for j in 0..g.height {
            let dst = (j + pad) * stride + pad;
            values[dst..dst + g.width].copy_from_slice(&g.values[j * g.width..(j + 1) * g.width]);
        }
        Padded { pad: pad as isize, stride: stride as isize, values }
    }

    /// Bilinear value at node `(i, j)` plus the split offset.
    #[inline]
    fn sample(&self, i: isize, j: isize, s: &Shift) -> f64 {
        let base = ((j + s.dj + self.pad) * self.stride + i + s.di + self.pad) as usize;
        let v = &self.values;
        let st = self.stride as usize;
        (1.0 - s.fy) * ((1.0 - s.fx) * v[base] + s.fx * v[base + 1]) + s.fy * ((1.0 - s.fx) * v[base + st] + s.fx * v[base + st + 1])
    }
}

/// Offset `-p / h` split into floor and fraction.
#[derive(Debug, Clone, Copy)]
struct Shift {
    di: isize,
    dj: isize,
    fx: f64,
    fy: f64,
}

impl Shift {
    fn of(p: Point2, h: f64) -> Self {
        let (x, y) = (-p.x / h, -p.y / h);
        let (fi, fj) = (x.floor(), y.floor());
        Shift { di: fi as isize, dj: fj as isize, fx: x - fi, fy: y - fj }
    }
}

/// `B^eps(f, g)` on the common grid of `f` and `g`, both branches.
pub fn apply_bilinear(f: &GridFunction, g: &GridFunction, a: f64, b: f64, eps: f64, quad_points: usize) -> Result<GridFunction> {
    apply_bilinear_branch(f, g, a, b, eps, quad_points, Branch::Both)
}

pub fn apply_bilinear_branch(
    f: &GridFunction,
    g: &GridFunction,
    a: f64,
    b: f64,
    eps: f64,
    quad_points: usize,
    branch: Branch,
) -> Result<GridFunction> {
    if !f.same_geometry(g) {
        return Err(Error::param("g", "f and g must share a grid"));
    }
    if quad_points < 64 {
        return Err(Error::param("quad_points", format!("need at least 64, got {quad_points}")));
    }
    if !(eps >= 2.0 * f.spacing) {
        return Err(Error::param("eps", format!("grid spacing {} too coarse for eps = {eps}", f.spacing)));
    }
    let rule = ThetaRule::new(a, b, quad_points, branch)?;
    let fe = mollify(f, eps)?;
    let ge = mollify(g, eps)?;
    let h = f.spacing;
    let pad = (a.max(b) / h).ceil() as usize + 2;
    let (fp, gp) = (Padded::new(&fe, pad), Padded::new(&ge, pad));
    let shifts: Vec<(Shift, Shift)> = rule.nodes.iter().map(|&(u, v)| (Shift::of(u, h), Shift::of(v, h))).collect();
    let w = f.width;
    let rows = par::map_indexed(f.height, |j| {
        let j = j as isize;
        (0..w as isize)
            .map(|i| {
                let mut acc = 0.0;
                for (su, sv) in &shifts {
                    let fv = fp.sample(i, j, su);
                    if fv != 0.0 {
                        acc += fv * gp.sample(i, j, sv);
                    }
                }
                acc * rule.weight
            })
            .collect::<Vec<f64>>()
    });
    Ok(f.with_values(rows.concat()))
}

/// Result of [`plane_wave_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlaneWaveCheck {
    /// Quadrature multiplier of `B^eps` on `e^{2 pi i xi.x}`, `e^{2 pi i eta.x}`.
    pub measured: Complex64,
    /// `k_hat(a, b, -xi, -eta, both)`, damped by `rho_hat(eps xi) rho_hat(eps eta)`.
    pub predicted: Complex64,
    /// The same prediction without damping.
    pub undamped: Complex64,
}

impl PlaneWaveCheck {
    pub fn error(&self) -> f64 {
        (self.measured - self.predicted).norm()
    }
}

/// Applies the operator's `theta` rule to complex exponentials. Mollifying
/// `e^{2 pi i xi.x}` multiplies it by `rho_hat(eps xi)`, so the operator
/// maps `e_xi(x) e_eta(x)` to `m(xi, eta) e_xi(x) e_eta(x)`.
pub fn plane_wave_check(a: f64, b: f64, xi: FreqPoint, eta: FreqPoint, eps: f64, quad_points: usize) -> Result<PlaneWaveCheck> {
    if !(eps >= 0.0) {
        return Err(Error::param("eps", format!("must be nonnegative, got {eps}")));
    }
    let rule = ThetaRule::new(a, b, quad_points, Branch::Both)?;
    let damp = if eps == 0.0 { 1.0 } else { unit_fourier(eps * xi.norm()) * unit_fourier(eps * eta.norm()) };
    let mut acc = Complex64::new(0.0, 0.0);
    for &(u, v) in &rule.nodes {
        let phase = -TAU * (xi.x * u.x + xi.y * u.y + eta.x * v.x + eta.y * v.y);
        acc += Complex64::from_polar(1.0, phase);
    }
    let measured = acc * (rule.weight * damp);
    let undamped = k_hat(a, b, xi.scale(-1.0), eta.scale(-1.0), Branch::Both)?;
    Ok(PlaneWaveCheck { measured, predicted: undamped * damp, undamped })
}

/// `(sum |f_hat(xi)|^2 (1 + |xi|)^{-2 beta} d xi)^{1/2}` with the DFT on the
/// grid's own period: `f_hat(k / (N h)) ~ h^2 F_k` and `d xi = 1 / (N h)^2`,
/// which makes the `beta = 0` case equal to the discrete `L^2` norm.
pub fn sobolev_norm(f: &GridFunction, beta: f64) -> Result<f64> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::param("beta", format!("must be nonnegative, got {beta}")));
    }
    let (w, hgt, h) = (f.width, f.height, f.spacing);
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::<f64>::new();
    let row_fft = planner.plan_fft_forward(w);
    for row in data.chunks_mut(w) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(hgt);
    let mut col = vec![Complex64::new(0.0, 0.0); hgt];
    for i in 0..w {
        for j in 0..hgt {
            col[j] = data[j * w + i];
        }
        col_fft.process(&mut col);
        for j in 0..hgt {
            data[j * w + i] = col[j];
        }
    }
    let signed = |k: usize, n: usize| if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
    let (dx, dy) = (1.0 / (w as f64 * h), 1.0 / (hgt as f64 * h));
    let mut acc = 0.0;
    for j in 0..hgt {
        let ey = signed(j, hgt) * dy;
        for i in 0..w {
            let ex = signed(i, w) * dx;
            let weight = (1.0 + (ex * ex + ey * ey).sqrt()).powf(-2.0 * beta);
            acc += data[j * w + i].norm_sqr() * weight;
        }
    }
    Ok((acc * h.powi(4) * dx * dy).sqrt())
}

/// Test data for the boundedness experiment. All kinds except `PlaneWave`
/// are nonnegative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TestFunctionSpec {
    /// Unit-mass isotropic Gaussian.
    Gaussian { center: [f64; 2], width: f64 },
    /// `W(x) (1 + sum_k c_k cos(2 pi k.x + phi_k))` with `sum |c_k| < 1`,
    /// integer frequencies `|k| <= freq_cap` and `W` a smooth bump on `[0, side]^2`.
    BandLimitedRandom {
        seed: u64,
        freq_cap: f64,
        terms: usize,
        #[serde(default = "default_side")]
        side: f64,
    },
    /// `cos(2 pi xi.x)`; a real stand-in for plane waves on a grid.
    PlaneWave { frequency: [f64; 2] },
    /// Indicator of `[lo, hi]^2`.
    ConstantOnBox { lo: f64, hi: f64 },
}

impl TestFunctionSpec {
    pub fn is_nonnegative(&self) -> bool {
        !matches!(self, TestFunctionSpec::PlaneWave { .. })
    }

    /// Sampled on the nodes of `template`.
    pub fn sample_on(&self, template: &GridFunction) -> GridFunction {
        let f = self.evaluator();
        let values =
            (0..template.height).flat_map(|j| (0..template.width).map(move |i| (i, j))).map(|(i, j)| f(template.point(i, j))).collect();
        template.with_values(values)
    }

    fn evaluator(&self) -> Box<dyn Fn(Point2) -> f64 + '_> {
        match *self {
            TestFunctionSpec::Gaussian { center, width } => {
                let c = Point2::new(center[0], center[1]);
                let norm = 1.0 / (TAU * width * width);
                Box::new(move |p| norm * (-p.sub(&c).norm().powi(2) / (2.0 * width * width)).exp())
            }
            TestFunctionSpec::BandLimitedRandom { seed, freq_cap, terms, side } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let cap = freq_cap.max(1.0);
                let mut modes = Vec::with_capacity(terms);
                while modes.len() < terms {
                    let k = Point2::new(rng.gen_range(-cap..=cap).round(), rng.gen_range(-cap..=cap).round());
                    if k.norm() <= cap && k.norm() > 0.0 {
                        modes.push((k, rng.gen::<f64>() + 0.05, rng.gen::<f64>() * TAU));
                    }
                }
                let total: f64 = modes.iter().map(|m| m.1).sum::<f64>().max(1e-300);
                for m in &mut modes {
                    m.1 *= 0.9 / total;
                }
                Box::new(move |p| {
                    let w = window_1d(p.x / side) * window_1d(p.y / side);
                    if w == 0.0 {
                        return 0.0;
                    }
                    w * (1.0 + modes.iter().map(|&(k, c, ph)| c * (TAU * (k.x * p.x + k.y * p.y) + ph).cos()).sum::<f64>())
                })
            }
            TestFunctionSpec::PlaneWave { frequency } => Box::new(move |p| (TAU * (frequency[0] * p.x + frequency[1] * p.y)).cos()),
            TestFunctionSpec::ConstantOnBox { lo, hi } => {
                Box::new(move |p| if p.x >= lo && p.x <= hi && p.y >= lo && p.y <= hi { 1.0 } else { 0.0 })
            }
        }
    }

    /// A box outside of which the function is negligible; `None` when the
    /// support is unbounded.
    pub fn support(&self) -> Option<BoundingBox> {
        match *self {
            TestFunctionSpec::Gaussian { center, width } => Some(BoundingBox {
                min: Point2::new(center[0] - 8.0 * width, center[1] - 8.0 * width),
                max: Point2::new(center[0] + 8.0 * width, center[1] + 8.0 * width),
            }),
            TestFunctionSpec::BandLimitedRandom { side, .. } => Some(BoundingBox { min: Point2::ORIGIN, max: Point2::new(side, side) }),
            TestFunctionSpec::PlaneWave { .. } => None,
            TestFunctionSpec::ConstantOnBox { lo, hi } => Some(BoundingBox { min: Point2::new(lo, lo), max: Point2::new(hi, hi) }),
        }
    }
}

/// Window side used when a band-limited spec omits it.
pub const DEFAULT_WINDOW_SIDE: f64 = 2.0;

fn default_side() -> f64 {
    DEFAULT_WINDOW_SIDE
}

/// Smooth bump on `[0, 1]`, equal to 1 at `1/2`.
fn window_1d(t: f64) -> f64 {
    let s = 2.0 * t - 1.0;
    bump_profile(s * s) * std::f64::consts::E
}

/// One row of the boundedness table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessRow {
    pub pair: usize,
    pub eps: f64,
    pub numerator: f64,
    pub denom_f: f64,
    pub denom_g: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSpread {
    pub pair: usize,
    pub max_ratio: f64,
    pub min_ratio: f64,
    pub spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessTable {
    pub beta: (f64, f64),
    pub grid_spacing: f64,
    pub quad_points: usize,
    pub rows: Vec<BoundednessRow>,
    pub spreads: Vec<PairSpread>,
}

impl BoundednessTable {
    pub fn max_spread(&self) -> f64 {
        self.spreads.iter().map(|s| s.spread).fold(0.0, f64::max)
    }
}

/// Grid for the boundedness experiment: spacing `h`, covering every input
/// support inflated by `max(a, b, 1) + max eps` plus two cells.
pub fn experiment_grid(pairs: &[(TestFunctionSpec, TestFunctionSpec)], a: f64, b: f64, eps_max: f64, h: f64) -> Result<GridFunction> {
    let mut bb: Option<BoundingBox> = None;
    for spec in pairs.iter().flat_map(|(f, g)| [f, g]) {
        let s = spec.support().ok_or_else(|| Error::param("specs", "boundedness inputs need bounded support"))?;
        bb = Some(match bb {
            None => s,
            Some(o) => BoundingBox::of([o.min, o.max, s.min, s.max]).expect("nonempty"),
        });
    }
    let bb = bb.ok_or_else(|| Error::param("specs", "no test functions"))?;
    GridFunction::covering(&bb.inflate(a.max(b).max(1.0) + eps_max + 2.0 * h), h, crate::grid::DEFAULT_MAX_GRID_CELLS)
}

/// Tolerance on `beta1 + beta2 = 1/2`.
const BETA_SUM_TOL: f64 = 1e-12;

/// `||B^eps(f, g)||_1 / (||f||_{-beta1} ||g||_{-beta2})` for every pair and
/// `eps`, on one grid of spacing `h`.
pub fn boundedness_experiment(
    pairs: &[(TestFunctionSpec, TestFunctionSpec)],
    a: f64,
    b: f64,
    eps_list: &[f64],
    beta1: f64,
    beta2: f64,
    h: f64,
) -> Result<BoundednessTable> {
    Ok(boundedness_experiment_multi(pairs, a, b, eps_list, &[(beta1, beta2)], h)?.remove(0))
}

/// Several `(beta1, beta2)` pairs share the operator evaluations.
pub fn boundedness_experiment_multi(
    pairs: &[(TestFunctionSpec, TestFunctionSpec)],
    a: f64,
    b: f64,
    eps_list: &[f64],
    betas: &[(f64, f64)],
    h: f64,
) -> Result<Vec<BoundednessTable>> {
    for &(b1, b2) in betas {
        if !(b1 >= 0.0 && b2 >= 0.0 && (b1 + b2 - 0.5).abs() <= BETA_SUM_TOL) {
            return Err(Error::param("beta", format!("need beta1, beta2 >= 0 with beta1 + beta2 = 1/2, got ({b1}, {b2})")));
        }
    }
    if eps_list.is_empty() {
        return Err(Error::param("eps", "empty eps list"));
    }
    if let Some((f, _)) = pairs.iter().find(|(f, g)| !f.is_nonnegative() || !g.is_nonnegative()) {
        return Err(Error::param("specs", format!("test functions must be nonnegative, got {f:?}")));
    }
    let eps_max = eps_list.iter().cloned().fold(0.0, f64::max);
    let template = experiment_grid(pairs, a, b, eps_max, h)?;
    let quad = default_quad_points(template.width);

    let mut numerators = Vec::with_capacity(pairs.len());
    let mut denoms = Vec::with_capacity(pairs.len());
    for (fs, gs) in pairs {
        let f = fs.sample_on(&template);
        let g = gs.sample_on(&template);
        let mut row = Vec::with_capacity(eps_list.len());
        for &eps in eps_list {
            row.push(apply_bilinear(&f, &g, a, b, eps, quad)?.l1_norm());
        }
        numerators.push(row);
        let mut d = Vec::with_capacity(betas.len());
        for &(b1, b2) in betas {
            let (df, dg) = (sobolev_norm(&f, b1)?, sobolev_norm(&g, b2)?);
            if !(df > 0.0 && dg > 0.0) {
                return Err(Error::Numeric(format!("nonpositive Sobolev norm for pair {}", d.len())));
            }
            d.push((df, dg));
        }
        denoms.push(d);
    }
    let mut tables = Vec::with_capacity(betas.len());
    for (bi, &beta) in betas.iter().enumerate() {
        let mut rows = Vec::new();
        let mut spreads = Vec::new();
        for (p, nums) in numerators.iter().enumerate() {
            let (df, dg) = denoms[p][bi];
            let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
            for (&eps, &num) in eps_list.iter().zip(nums) {
                let ratio = num / (df * dg);
                hi = hi.max(ratio);
                lo = lo.min(ratio);
                rows.push(BoundednessRow { pair: p, eps, numerator: num, denom_f: df, denom_g: dg, ratio });
            }
            spreads.push(PairSpread { pair: p, max_ratio: hi, min_ratio: lo, spread: hi / lo });
        }
        tables.push(BoundednessTable { beta, grid_spacing: h, quad_points: quad, rows, spreads });
    }
    Ok(tables)
}

/// `count` seeded band-limited random pairs on `[0, side]^2`.
pub fn random_pairs(count: usize, seed: u64, freq_cap: f64, terms: usize, side: f64) -> Vec<(TestFunctionSpec, TestFunctionSpec)> {
    (0..count as u64)
        .map(|k| {
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(2 * k);
            (
                TestFunctionSpec::BandLimitedRandom { seed: s, freq_cap, terms, side },
                TestFunctionSpec::BandLimitedRandom { seed: s + 1, freq_cap, terms, side },
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn square_grid(lo: f64, hi: f64, n: usize) -> GridFunction {
        let h = (hi - lo) / (n - 1) as f64;
        GridFunction::zeros(Point2::new(lo, lo), h, n, n).unwrap()
    }

    #[test]
    fn constants_map_to_four_pi_inside() {
        let t = square_grid(-2.0, 2.0, 81);
        let one = t.with_values(vec![1.0; t.values.len()]);
        let out = apply_bilinear(&one, &one, 1.0, 1.0, 0.1, 256).unwrap();
        let margin = 1.0 + 0.1 + 2.0 * t.spacing;
        for j in 0..t.height {
            for i in 0..t.width {
                let p = t.point(i, j);
                if p.x.abs() < 2.0 - margin && p.y.abs() < 2.0 - margin {
                    assert!((out.get(i, j) - 4.0 * PI).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn mollify_preserves_interior_mass() {
        let t = square_grid(-1.0, 1.0, 101);
        let f = TestFunctionSpec::Gaussian { center: [0.0, 0.0], width: 0.1 }.sample_on(&t);
        let fe = mollify(&f, 0.1).unwrap();
        assert!((fe.integral() - f.integral()).abs() < 1e-12);
        assert!(fe.max() < f.max());
    }

    #[test]
    fn rejects_coarse_grid_and_bad_triangle() {
        let t = square_grid(-1.0, 1.0, 11);
        assert!(apply_bilinear(&t, &t, 1.0, 1.0, 0.1, 256).is_err());
        assert!(apply_bilinear(&t, &t, 3.0, 1.0, 0.5, 256).is_err());
    }

    #[test]
    fn plane_wave_origin_and_contraction() {
        let z = Point2::ORIGIN;
        let c = plane_wave_check(1.0, 1.0, z, z, 0.0, 256).unwrap();
        assert!((c.measured.re - 4.0 * PI).abs() < 1e-12 && (c.predicted.re - 4.0 * PI).abs() < 1e-12);
        let (xi, eta) = (Point2::new(2.5, -1.0), Point2::new(0.3, 4.0));
        let c0 = plane_wave_check(0.8, 0.9, xi, eta, 0.0, 512).unwrap();
        assert!(c0.error() < 1e-6);
        let c1 = plane_wave_check(0.8, 0.9, xi, eta, 0.1, 512).unwrap();
        assert!(c1.error() < 1e-6);
        assert!(c1.measured.norm() <= c0.measured.norm() + 1e-8);
    }

    #[test]
    fn parseval_and_monotonicity() {
        let t = square_grid(-1.0, 1.0, 64);
        let f = TestFunctionSpec::BandLimitedRandom { seed: 3, freq_cap: 4.0, terms: 5, side: 1.0 }.sample_on(&t);
        let l2 = f.l2_norm();
        assert!((sobolev_norm(&f, 0.0).unwrap() - l2).abs() < 1e-10 * l2);
        let mut prev = f64::INFINITY;
        for beta in [0.0, 0.1, 0.25, 0.5] {
            let v = sobolev_norm(&f, beta).unwrap();
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn band_limited_inputs_are_nonnegative() {
        let t = square_grid(-0.2, 1.2, 90);
        for (f, g) in random_pairs(5, 1, 6.0, 8, 1.0) {
            assert!(f.sample_on(&t).min() >= 0.0 && g.sample_on(&t).min() >= 0.0);
        }
    }

    #[test]
    fn beta_sum_is_enforced() {
        let pairs = random_pairs(1, 0, 4.0, 4, 1.0);
        assert!(boundedness_experiment(&pairs, 1.0, 1.0, &[0.25], 0.3, 0.3, 1.0 / 16.0).is_err());
    }
}
