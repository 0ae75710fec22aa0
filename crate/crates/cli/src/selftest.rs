//! Exact and closed-form checks across every module.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use triconfig::bilinear::{apply_bilinear, sobolev_norm};
use triconfig::circle::{k_hat, sigma_eps, sigma_hat, u_map, Branch};
use triconfig::discrete::{
    corollary_experiment, count_congruent_brute, count_congruent_fast, distinct_distances, distinct_triangle_classes, generate, FamilySpec,
    GeneratorKind, GeneratorParams, PointSet,
};
use triconfig::geometry::{gamma_ab, theta_ab};
use triconfig::io::fmt_f64;
use triconfig::measure::{cantor_measure, energy_integral, frostman_ratio, product_measure, shifted_union, thicken_with};
use triconfig::sharpness::{build_mattila, distance_blowup_fit_on, dyadic, MattilaSpec};
use triconfig::trilinear::{config_density, distance_measure_density, triple_annulus_mass};
use triconfig::{CantorSpec, DiscreteMeasure, ExponentFit, GridFunction, Limits, Point2, TriangleSpec};

use crate::report::Table;

struct Checks {
    table: Table,
    failed: usize,
}

impl Checks {
    fn record(&mut self, module: &str, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        self.table.push(vec![module.into(), name.into(), if pass { "PASS" } else { "FAIL" }.into(), detail.replace(',', ";")]);
    }

    fn close(&mut self, module: &str, name: &str, got: f64, want: f64, tol: f64) {
        let pass = (got - want).abs() <= tol;
        self.record(module, name, pass, format!("got {} want {} tol {tol:e}", fmt_f64(got), fmt_f64(want)));
    }

    fn exact<T: PartialEq + std::fmt::Debug>(&mut self, module: &str, name: &str, got: T, want: T) {
        let pass = got == want;
        self.record(module, name, pass, format!("got {got:?} want {want:?}"));
    }

    fn holds(&mut self, module: &str, name: &str, pass: bool) {
        self.record(module, name, pass, String::new());
    }

    fn ok<T>(&mut self, module: &str, name: &str, r: triconfig::Result<T>, check: impl FnOnce(T) -> (bool, String)) {
        match r {
            Ok(v) => {
                let (pass, detail) = check(v);
                self.record(module, name, pass, detail);
            }
            Err(e) => self.record(module, name, false, format!("error: {e}")),
        }
    }
}

fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
    v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
}

fn measure_core(c: &mut Checks) {
    const M: &str = "measure_core";
    let m = cantor_measure(CantorSpec::new(1.0 / 3.0, 1).unwrap());
    c.close(M, "cantor r=1/3 L=1 second atom", m.points()[1].x, 2.0 / 3.0, 1e-15);
    c.exact(M, "cantor r=1/3 L=1 weights", m.weights().to_vec(), vec![0.5, 0.5]);
    let d = cantor_measure(CantorSpec::new(0.5, 3).unwrap());
    c.holds(M, "cantor r=1/2 L=3 dyadic atoms", d.len() == 8 && d.points().iter().enumerate().all(|(k, p)| p.x == k as f64 / 8.0));

    let one = DiscreteMeasure::new(vec![Point2::ORIGIN], vec![1.0]).unwrap();
    c.ok(M, "shifted union of a point", shifted_union(&one), |u| {
        (u.points() == pts(&[(-1.0, 0.0), (1.0, 0.0)]).as_slice() && u.weights() == [0.5, 0.5], String::new())
    });
    c.ok(M, "shifted union of cantor r=1/3 L=1", shifted_union(&m), |u| {
        let xs: Vec<f64> = u.points().iter().map(|p| p.x).collect();
        let want = [-1.0, -1.0 / 3.0, 1.0, 5.0 / 3.0];
        (xs.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15) && u.total_mass() == 1.0, format!("{xs:?}"))
    });

    let two = DiscreteMeasure::new(pts(&[(0.0, 0.0), (1.0, 0.0)]), vec![0.25, 0.75]).unwrap();
    c.ok(M, "product of 2-atom measures", product_measure(&two, &two, &Limits::default()), |p| {
        (p.len() == 4 && p.weights() == [0.0625, 0.1875, 0.1875, 0.5625], format!("{:?}", p.weights()))
    });
    c.ok(M, "product of dyadic cantor sets", product_measure(&d, &d, &Limits::default()), |p| {
        (p.len() == 64 && p.weights().iter().all(|&w| w == 1.0 / 64.0), String::new())
    });

    c.ok(M, "thickening n=1 s=2 radius and raw integral", thicken_with(&[Point2::new(0.5, 0.5)], 2.0, None, &Limits::default()), |t| {
        (t.radius == 1.0 && (t.raw_integral - PI).abs() < 0.02 * PI, format!("radius {} raw {}", t.radius, t.raw_integral))
    });

    c.ok(M, "single atom frostman ratio grows as 1/delta", frostman_ratio(&one, 1.0, &[0.1, 0.01, 0.001], 0, 0), |r| {
        ((r.ratio - 1000.0).abs() < 1e-9, fmt_f64(r.ratio))
    });

    let pair = DiscreteMeasure::uniform(pts(&[(0.0, 0.0), (0.5, 0.0)])).unwrap();
    c.ok(M, "energy of two atoms at distance 1/2, s=1", energy_integral(&pair, 1.0), |e| ((e - 1.0).abs() < 1e-15, fmt_f64(e)));
    c.ok(M, "energy of a single atom", energy_integral(&one, 1.0), |e| (e == 0.0, fmt_f64(e)));
}

fn circle_kernel(c: &mut Checks) {
    const M: &str = "circle_kernel";
    let g = gamma_ab(1.0, 1.0).unwrap();
    c.close(M, "gamma_{1,1} = 1/2", g, 0.5, 1e-15);
    c.close(M, "theta_{1,1} = pi/3", theta_ab(1.0, 1.0).unwrap(), PI / 3.0, 1e-15);
    c.close(M, "gamma for (1/sqrt2, 1/sqrt2)", gamma_ab(FRAC_1_SQRT_2, FRAC_1_SQRT_2).unwrap(), 0.0, 1e-15);
    c.close(M, "gamma for (2, 1) clamps to 1", gamma_ab(2.0, 1.0).unwrap(), 1.0, 0.0);
    c.holds(M, "gamma for (3, 1) is an error", gamma_ab(3.0, 1.0).is_err());

    let xi = Point2::new(0.3, -0.7);
    c.ok(M, "U at eta = 0 is a xi", u_map(0.8, 0.9, xi, Point2::ORIGIN), |u| {
        let pass = (u.x - 0.8 * xi.x).abs() < 1e-15 && (u.y - 0.8 * xi.y).abs() < 1e-15;
        (pass, format!("{u:?}"))
    });
    c.ok(M, "U at xi = 0 has norm b|eta|", u_map(0.8, 0.9, Point2::ORIGIN, xi), |u| {
        ((u.norm() - 0.9 * xi.norm()).abs() < 1e-14, fmt_f64(u.norm()))
    });

    c.close(M, "sigma_hat(1, 0) = 2 pi", sigma_hat(1.0, Point2::ORIGIN), TAU, 1e-15);
    let k0 = |b| k_hat(1.0, 1.0, Point2::ORIGIN, Point2::ORIGIN, b).map(|z| z.re).unwrap_or(f64::NAN);
    c.close(M, "k_hat(0, 0) plus branch = 2 pi", k0(Branch::Plus), TAU, 1e-12);
    c.close(M, "k_hat(0, 0) both branches = 4 pi", k0(Branch::Both), 2.0 * TAU, 1e-12);
    c.close(M, "sigma_eps vanishes off the eps-annulus", sigma_eps(1.0, 0.1, Point2::new(1.2, 0.0)), 0.0, 0.0);
}

fn bilinear(c: &mut Checks) {
    const M: &str = "bilinear";
    let t = GridFunction::zeros(Point2::new(-2.0, -2.0), 0.05, 81, 81).unwrap();
    let one = t.with_values(vec![1.0; t.values.len()]);
    c.ok(M, "B^eps(1,1) = 4 pi", apply_bilinear(&one, &one, 1.0, 1.0, 0.1, 256), |out| {
        let margin = 1.0 + 0.1 + 2.0 * t.spacing;
        let mut worst: f64 = 0.0;
        for j in 0..t.height {
            for i in 0..t.width {
                let p = t.point(i, j);
                if p.x.abs() < 2.0 - margin && p.y.abs() < 2.0 - margin {
                    worst = worst.max((out.get(i, j) - 4.0 * PI).abs());
                }
            }
        }
        (worst < 1e-6, format!("max interior deviation {}", fmt_f64(worst)))
    });
    let g = GridFunction::from_fn(Point2::new(-1.0, -1.0), 1.0 / 32.0, 64, 64, |p| (-8.0 * (p.x * p.x + p.y * p.y)).exp()).unwrap();
    c.ok(M, "Sobolev norm at beta = 0 equals the L2 norm", sobolev_norm(&g, 0.0), |n| {
        let rel = (n - g.l2_norm()).abs() / g.l2_norm();
        (rel <= 1e-10, format!("relative error {rel:e}"))
    });
    let (n0, n1) = (sobolev_norm(&g, 0.25).unwrap_or(f64::NAN), sobolev_norm(&g, 0.5).unwrap_or(f64::NAN));
    c.holds(M, "Sobolev norm nonincreasing in beta", n1 <= n0);
}

fn trilinear(c: &mut Checks) {
    const M: &str = "trilinear";
    let (side, h) = (1.005, 1.005 * 3f64.sqrt() / 2.0);
    let tri = DiscreteMeasure::uniform(pts(&[(0.0, 0.0), (side, 0.0), (side / 2.0, h)])).unwrap();
    c.ok(M, "equilateral triple mass = 2/9", triple_annulus_mass(&tri, &TriangleSpec::equilateral(1.0).unwrap(), 0.01), |v| {
        ((v - 2.0 / 9.0).abs() < 1e-14, fmt_f64(v))
    });
    let cluster = DiscreteMeasure::uniform(pts(&[(0.0, 0.0), (0.1, 0.0), (0.0, 0.1), (0.05, 0.05)])).unwrap();
    c.ok(
        M,
        "cluster smaller than t_min/2 has no triples",
        triple_annulus_mass(&cluster, &TriangleSpec::equilateral(1.0).unwrap(), 0.01),
        |v| (v == 0.0, fmt_f64(v)),
    );
    c.ok(M, "configuration histogram mass = 1", config_density(&tri, 0.1, None, 1 << 20), |hist| {
        ((hist.histogram_mass() - 1.0).abs() < 1e-12, fmt_f64(hist.histogram_mass()))
    });
    let eps = 0.01;
    let two = DiscreteMeasure::uniform(pts(&[(0.0, 0.0), (1.0 + eps / 2.0, 0.0)])).unwrap();
    c.ok(M, "two atoms at distance t + eps/2 give 1/(2 eps)", distance_measure_density(&two, eps, 1.0), |v| {
        ((v - 1.0 / (2.0 * eps)).abs() < 1e-9, fmt_f64(v))
    });
}

fn discrete_geom(c: &mut Checks) {
    const M: &str = "discrete_geom";
    let set = |v: &[(f64, f64)]| PointSet::new(pts(v)).unwrap();
    let scalene = set(&[(0.0, 0.0), (0.3, 0.0), (0.0, 0.4)]);
    let spec = TriangleSpec::new(0.3, 0.4, 0.5).unwrap();
    c.exact(M, "scalene triangle counts once", count_congruent_brute(&scalene, &spec, 1e-6), 1);
    c.ok(M, "scalene triangle counts once (fast)", count_congruent_fast(&scalene, &spec, 1e-6), |v| (v == 1, v.to_string()));
    let h = 3f64.sqrt() / 4.0;
    let eq = set(&[(0.0, 0.0), (0.5, 0.0), (0.25, h)]);
    c.exact(M, "equilateral triangle counts 6", count_congruent_brute(&eq, &TriangleSpec::equilateral(0.5).unwrap(), 1e-6), 6);
    let two = set(&[(0.0, 0.0), (0.5, 0.0)]);
    c.exact(M, "fewer than 3 points count 0", count_congruent_brute(&two, &spec, 0.1), 0);
    let sq = set(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]);
    c.ok(M, "sides beyond the diameter count 0", count_congruent_fast(&sq, &TriangleSpec::equilateral(1.5).unwrap(), 1e-3), |v| {
        (v == 0, v.to_string())
    });
    c.exact(M, "2x2 grid has distances {1, sqrt2}", distinct_distances(&sq, 1e-9), 2);
    let line = set(&(0..6).map(|k| (k as f64 / 5.0, 0.0)).collect::<Vec<_>>());
    c.exact(M, "collinear equally spaced 6 points give 5 distances", distinct_distances(&line, 1e-9), 5);
    c.ok(M, "3 points give one triangle class", distinct_triangle_classes(&scalene, 1e-9), |v| (v == 1, v.to_string()));
    let family = FamilySpec { kind: GeneratorKind::Grid, seed: 0, params: GeneratorParams::default() };
    c.holds(M, "corollary with a single size is an error", corollary_experiment(&family, &[64], 0.01, &spec, 1.76, 50.0).is_err());
    c.ok(M, "grid n=4 is the unit square corners", generate(GeneratorKind::Grid, 4, 0, &GeneratorParams::default()), |p| {
        let mut v: Vec<(f64, f64)> = p.points().iter().map(|q| (q.x, q.y)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        (v == [(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)], format!("{v:?}"))
    });
    let gen = |seed| generate(GeneratorKind::RandomUniform, 50, seed, &GeneratorParams::default()).map(|p| p.into_points());
    c.holds(M, "random-uniform is reproducible for a seed", matches!((gen(7), gen(7)), (Ok(a), Ok(b)) if a == b));
    c.ok(M, "cantor-product has 4^L points", generate(GeneratorKind::CantorProduct, 256, 0, &GeneratorParams::default()), |p| {
        (p.len() == 256, p.len().to_string())
    });
}

fn sharpness_lab(c: &mut Checks) {
    const M: &str = "sharpness_lab";
    let spec = MattilaSpec::new(1.0, 1.0, 2, dyadic(1, 3)).unwrap();
    c.ok(M, "alpha = beta = 1, L = 2 gives 64 dyadic atoms", build_mattila(&spec, &Limits::default()), |m| {
        let on_grid = m.points().iter().all(|p| (p.x * 4.0).fract() == 0.0 && (p.y * 4.0).fract() == 0.0);
        (m.len() == 64 && on_grid && (m.total_mass() - 1.0).abs() < 1e-15, format!("{} atoms", m.len()))
    });
    let e = |a, b| MattilaSpec::new(a, b, 1, vec![]).map(|s| s.predicted_exponent()).unwrap_or(f64::NAN);
    c.close(M, "predicted exponent (1, 3/4) = 3", e(1.0, 0.75), 3.0, 0.0);
    c.close(M, "predicted exponent (1, 1) = 3.5", e(1.0, 1.0), 3.5, 0.0);
    c.close(M, "predicted exponent (3/4, 3/4) = 2.625", e(0.75, 0.75), 2.625, 0.0);
    let two = DiscreteMeasure::uniform(pts(&[(0.0, 0.0), (1.0, 0.0)])).unwrap();
    c.ok(M, "two atoms at distance 1: distance slope = -1", distance_blowup_fit_on(&two, 1.0, &dyadic(2, 6)), |f| {
        ((f.slope + 1.0).abs() < 1e-12, fmt_f64(f.slope))
    });
    c.ok(
        M,
        "exponent fit recovers an exact power law",
        ExponentFit::fit((1..=4).map(|k| (k as f64, (k as f64).powf(1.5))).collect()),
        |f| ((f.slope - 1.5).abs() < 1e-12, fmt_f64(f.slope)),
    );
}

/// Runs every check; failures are reported in the table, never raised.
pub fn selftest() -> Table {
    let mut c = Checks { table: Table::new(&["module", "check", "status", "detail"]), failed: 0 };
    measure_core(&mut c);
    circle_kernel(&mut c);
    bilinear(&mut c);
    trilinear(&mut c);
    discrete_geom(&mut c);
    sharpness_lab(&mut c);
    let total = c.table.rows.len();
    c.table.note("checks", total);
    c.table.note("failed", c.failed);
    c.table
}
