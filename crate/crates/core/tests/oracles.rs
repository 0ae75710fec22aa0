use std::f64::consts::TAU;

use triconfig::bilinear::{apply_bilinear, TestFunctionSpec};
use triconfig::circle::Mollifier;
use triconfig::measure::frostman_ratio;
use triconfig::sharpness::{build_mattila, dyadic, triple_scaling_fit_on, MattilaSpec};
use triconfig::{GridFunction, Limits, Point2};

fn gaussian(c: Point2, w: f64) -> impl Fn(Point2) -> f64 {
    move |p| (-p.sub(&c).norm().powi(2) / (2.0 * w * w)).exp() / (TAU * w * w)
}

/// Continuous `f * rho_eps` by polar midpoint quadrature over the disc.
fn mollified(f: impl Fn(Point2) -> f64, eps: f64) -> impl Fn(Point2) -> f64 {
    let rho = Mollifier::new(eps);
    let (nr, nt) = (96, 64);
    move |x| {
        let mut acc = 0.0;
        for i in 0..nr {
            let r = eps * (i as f64 + 0.5) / nr as f64;
            let ring: f64 = (0..nt).map(|k| f(x.sub(&Point2::unit(TAU * k as f64 / nt as f64).scale(r)))).sum();
            acc += rho.radial(r) * r * ring;
        }
        acc * (eps / nr as f64) * (TAU / nt as f64)
    }
}

/// Points `v` with `|v| = b` and `|v - u| = 1`.
fn circle_intersections(u: Point2, b: f64) -> Vec<Point2> {
    let d = u.norm();
    let along = (d * d + b * b - 1.0) / (2.0 * d);
    let h2 = b * b - along * along;
    if h2 < 0.0 {
        return vec![];
    }
    let (e, n) = (u.scale(1.0 / d), Point2::new(-u.y / d, u.x / d));
    let h = h2.sqrt();
    vec![e.scale(along).add(&n.scale(h)), e.scale(along).sub(&n.scale(h))]
}

#[test]
fn gaussian_pair_matches_constraint_quadrature() {
    let (a, b, eps, w) = (1.0, 1.0, 1.0 / 16.0, 0.1);
    let (cf, cg) = (Point2::ORIGIN, Point2::new(1.0, 0.0));
    let h = 1.0 / 64.0;
    let t = GridFunction::zeros(Point2::new(-1.5, -1.5), h, 256, 224).unwrap();
    let f = TestFunctionSpec::Gaussian { center: [cf.x, cf.y], width: w }.sample_on(&t);
    let g = TestFunctionSpec::Gaussian { center: [cg.x, cg.y], width: w }.sample_on(&t);
    let out = apply_bilinear(&f, &g, a, b, eps, 2048).unwrap();

    let (fe, ge) = (mollified(gaussian(cf, w), eps), mollified(gaussian(cg, w), eps));
    let nodes = 1024;
    for (i, j) in [(128, 151), (130, 150), (126, 153)] {
        let x = t.point(i, j);
        let mut acc = 0.0;
        for k in 0..nodes {
            let u = Point2::unit(TAU * k as f64 / nodes as f64).scale(a);
            let fu = fe(x.sub(&u));
            if fu < 1e-14 {
                continue;
            }
            acc += fu * circle_intersections(u, b).iter().map(|v| ge(x.sub(v))).sum::<f64>();
        }
        let oracle = acc * TAU / nodes as f64;
        let got = out.get(i, j);
        assert!(oracle > 1.0, "probe {x:?} misses the support: {oracle}");
        assert!((got - oracle).abs() <= 1e-2 * oracle, "at {x:?}: {got} vs {oracle}");
    }
}

#[test]
fn product_cantor_frostman_ratio_is_level_stable() {
    let mut ratios = Vec::new();
    for level in [3, 4, 5] {
        let spec = MattilaSpec::new(1.0, 0.75, level, dyadic(1, 3)).unwrap();
        let m = build_mattila(&spec, &Limits::default()).unwrap();
        let floor = spec.eps_floor().unwrap();
        let scales: Vec<f64> = dyadic(1, 8).into_iter().filter(|&r| r >= 2.0 * floor).collect();
        ratios.push(frostman_ratio(&m, spec.dimension(), &scales, 0, 0).unwrap().ratio);
    }
    let (hi, lo) = (ratios.iter().cloned().fold(0.0, f64::max), ratios.iter().cloned().fold(f64::MAX, f64::min));
    assert!(hi / lo <= 4.0, "{ratios:?}");
}

#[test]
fn triple_slope_increases_with_beta() {
    let eps = dyadic(3, 5);
    let mut slopes = Vec::new();
    for beta in [0.5, 0.75, 1.0] {
        let spec = MattilaSpec::new(1.0, beta, 6, eps.clone()).unwrap();
        let m = build_mattila(&spec, &Limits::default()).unwrap();
        let r = triple_scaling_fit_on(&m, &spec, &eps).unwrap();
        slopes.push(r.fit.slope);
    }
    assert!(slopes.windows(2).all(|w| w[0] < w[1]), "{slopes:?}");
    assert!(slopes.iter().all(|s| s.is_finite() && *s > 0.0));
}
