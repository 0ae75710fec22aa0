use triconfig::bilinear::{apply_bilinear, TestFunctionSpec};
use triconfig::measure::energy_integral;
use triconfig::par;
use triconfig::sharpness::{build_mattila, dyadic, MattilaSpec};
use triconfig::trilinear::{config_density, triple_annulus_mass};
use triconfig::{GridFunction, Limits, Point2, TriangleSpec};

fn fingerprint() -> Vec<u64> {
    let spec = MattilaSpec::new(1.0, 0.75, 3, dyadic(1, 3)).unwrap();
    let m = build_mattila(&spec, &Limits::default()).unwrap();
    let t = TriangleSpec::new(1.0, 1.0, std::f64::consts::SQRT_2).unwrap();
    let mut out = vec![triple_annulus_mass(&m, &t, 0.25).unwrap(), energy_integral(&m, 1.3).unwrap()];
    let h = config_density(&m, 0.125, None, 1 << 20).unwrap();
    out.push(h.histogram_mass());
    out.extend(h.marginal_12());
    let g = GridFunction::zeros(Point2::new(-2.0, -2.0), 0.0625, 64, 64).unwrap();
    let f = TestFunctionSpec::Gaussian { center: [0.0, 0.2], width: 0.3 }.sample_on(&g);
    out.extend(apply_bilinear(&f, &f, 1.0, 0.9, 0.125, 512).unwrap().values);
    out.into_iter().map(f64::to_bits).collect()
}

#[test]
fn results_are_bit_identical_with_and_without_workers() {
    par::set_parallel(true);
    let parallel = fingerprint();
    par::set_parallel(false);
    let sequential = fingerprint();
    par::set_parallel(true);
    assert_eq!(parallel, sequential);
    assert_eq!(parallel, fingerprint());
}
