use std::hint::black_box;
use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use triconfig::bilinear::{apply_bilinear, default_quad_points, TestFunctionSpec};
use triconfig::discrete::{count_congruent_fast, generate, GeneratorKind, GeneratorParams};
use triconfig::measure::energy_integral;
use triconfig::par;
use triconfig::sharpness::{build_mattila, MattilaSpec};
use triconfig::trilinear::{config_density, triple_annulus_mass};
use triconfig::{DiscreteMeasure, GridFunction, Limits, Point2, TriangleSpec};

const MODES: [(&str, bool); 2] = [("parallel", true), ("sequential", false)];

fn mattila(level: u32) -> DiscreteMeasure {
    let spec = MattilaSpec::new(1.0, 0.75, level, vec![0.25, 0.125, 0.0625]).unwrap();
    build_mattila(&spec, &Limits::default()).unwrap()
}

fn compare(c: &mut Criterion, group: &str, mut f: impl FnMut()) {
    let mut g = c.benchmark_group(group);
    g.sample_size(10).measurement_time(Duration::from_secs(5));
    for (name, on) in MODES {
        par::set_parallel(on);
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(&mut f));
    }
    par::set_parallel(true);
    g.finish();
}

fn triple_mass(c: &mut Criterion) {
    let m = mattila(5);
    let t = TriangleSpec::new(1.0, 1.0, std::f64::consts::SQRT_2).unwrap();
    compare(c, "triple_annulus_mass/L5", || {
        black_box(triple_annulus_mass(&m, &t, 0.0625).unwrap());
    });
}

fn bilinear(c: &mut Criterion) {
    let g = GridFunction::zeros(Point2::new(-2.0, -2.0), 1.0 / 32.0, 128, 128).unwrap();
    let f = TestFunctionSpec::Gaussian { center: [0.0, 0.0], width: 0.2 }.sample_on(&g);
    let h = TestFunctionSpec::Gaussian { center: [0.5, 0.0], width: 0.3 }.sample_on(&g);
    let quad = default_quad_points(g.width);
    compare(c, "apply_bilinear/128", || {
        black_box(apply_bilinear(&f, &h, 1.0, 1.0, 0.0625, quad).unwrap());
    });
}

fn energy(c: &mut Criterion) {
    let m = mattila(5);
    compare(c, "energy_integral/L5", || {
        black_box(energy_integral(&m, 1.5).unwrap());
    });
}

fn histogram(c: &mut Criterion) {
    let m = mattila(3);
    compare(c, "config_density/L3", || {
        black_box(config_density(&m, 0.0625, None, 1 << 24).unwrap());
    });
}

fn counting(c: &mut Criterion) {
    let p = generate(GeneratorKind::Grid, 4096, 0, &GeneratorParams::default()).unwrap();
    let t = TriangleSpec::new(0.5, 0.5, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    compare(c, "count_congruent_fast/4096", || {
        black_box(count_congruent_fast(&p, &t, 0.008).unwrap());
    });
}

criterion_group!(benches, triple_mass, bilinear, energy, histogram, counting);
criterion_main!(benches);
