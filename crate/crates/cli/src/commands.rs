//! One runner per subcommand.

use std::str::FromStr;
use std::time::{Duration, Instant};

use triconfig::bilinear::{boundedness_experiment, random_pairs};
use triconfig::circle::{decay_sup, k_hat, k_hat_quadrature, sigma_hat, Branch};
use triconfig::discrete::{
    brute_size_warning, corollary_experiment, count_congruent_brute, count_congruent_fast, distinct_distances, distinct_triangle_classes,
    generate, triangle_classes_warning, FamilySpec, GeneratorKind, GeneratorParams, PointSet,
};
use triconfig::io::{fmt_f64, parse_measure};
use triconfig::measure::{cantor_measure, energy_integral, frostman_ratio, product_measure};
use triconfig::sharpness::{annulus_pair_fit_on, build_mattila, triple_scaling_fit_on, MattilaSpec};
use triconfig::trilinear::{
    config_density, distance_measure_density, domination_ratio, triple_annulus_mass, triple_annulus_mass_brute, HistogramWindow,
};
use triconfig::{CantorSpec, DiscreteMeasure, ExponentFit, Limits, Point2, TriangleSpec};

use crate::config::*;
use crate::error::{CliError, CliResult};
use crate::numbers::{parse_list, parse_number, parse_triangle};
use crate::report::Table;

pub struct Ctx {
    pub seed: u64,
    pub limits: Limits,
    pub warnings: Vec<String>,
    deadline: Instant,
    budget: f64,
}

impl Ctx {
    pub fn new(config: &ExperimentConfig) -> Self {
        let budget = config.caps.max_seconds;
        Ctx {
            seed: config.seed,
            limits: config.limits(),
            warnings: Vec::new(),
            deadline: Instant::now() + Duration::from_secs_f64(budget.min(1e9)),
            budget,
        }
    }

    /// Fails once the time budget is spent; called between stages.
    pub fn check_time(&self, stage: &str) -> CliResult<()> {
        if Instant::now() > self.deadline {
            return Err(CliError::Cap(format!("max_seconds = {} exceeded before {stage}", self.budget)));
        }
        Ok(())
    }

    pub fn warn(&mut self, w: Option<String>) {
        if let Some(w) = w {
            self.warnings.push(w);
        }
    }
}

fn f(v: f64) -> String {
    fmt_f64(v)
}

fn list(name: &str, s: &str) -> CliResult<Vec<f64>> {
    parse_list(s).map_err(|e| CliError::config(format!("{name}: {e}")))
}

fn triangle(name: &str, s: &str) -> CliResult<TriangleSpec> {
    let [a, b, c] = parse_triangle(s).map_err(|e| CliError::config(format!("{name}: {e}")))?;
    Ok(TriangleSpec::new(a, b, c)?)
}

fn sizes(s: &str) -> CliResult<Vec<usize>> {
    list("sizes", s)?
        .into_iter()
        .map(|v| {
            if v >= 1.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(CliError::config(format!("sizes: {v} is not a positive integer")))
            }
        })
        .collect()
}

fn gen_params(g: &GenArgs) -> CliResult<GeneratorParams> {
    let mut p = GeneratorParams::default();
    if let Some(r) = g.ratio {
        p.ratio = r;
    }
    if let Some(c) = g.clusters {
        p.clusters = c;
    }
    if let Some(r) = g.radius {
        p.radius = r;
    }
    if let Some(t) = &g.triangle {
        p.triangle = parse_triangle(t).map_err(|e| CliError::config(format!("triangle: {e}")))?;
    }
    Ok(p)
}

fn kind(s: &str) -> CliResult<GeneratorKind> {
    Ok(GeneratorKind::from_str(s)?)
}

fn point_set(kind_name: &str, n: usize, g: &GenArgs, ctx: &Ctx) -> CliResult<PointSet> {
    if n > ctx.limits.max_atoms {
        return Err(CliError::Cap(format!("n = {n} exceeds max_atoms = {}", ctx.limits.max_atoms)));
    }
    Ok(generate(kind(kind_name)?, n, ctx.seed, &gen_params(g)?)?)
}

/// Reads the `x,y[,w]` CSV written by `generate`, or the plain measure format.
pub fn load_measure_text(text: &str) -> CliResult<DiscreteMeasure> {
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.contains(',') => {
            let mut points = Vec::new();
            let mut weights = Vec::new();
            for (k, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') || line.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    continue;
                }
                let v: Vec<f64> = line
                    .split(',')
                    .map(|s| s.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| CliError::config(format!("measure line {}: {e}", k + 1)))?;
                match v.as_slice() {
                    [x, y] => points.push(Point2::new(*x, *y)),
                    [x, y, w] => {
                        points.push(Point2::new(*x, *y));
                        weights.push(*w);
                    }
                    _ => return Err(CliError::config(format!("measure line {}: expected 2 or 3 fields", k + 1))),
                }
            }
            if weights.is_empty() {
                Ok(DiscreteMeasure::uniform(points)?)
            } else if weights.len() == points.len() {
                Ok(DiscreteMeasure::new(points, weights)?)
            } else {
                Err(CliError::config("mixed weighted and unweighted atoms"))
            }
        }
        _ => Ok(parse_measure(text.as_bytes())?),
    }
}

pub fn load_source(src: &SourceArgs, ctx: &Ctx) -> CliResult<DiscreteMeasure> {
    let m = if let Some(path) = &src.input {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        load_measure_text(&text)?
    } else {
        match src.source.as_str() {
            "mattila" => build_mattila(&MattilaSpec::new(src.alpha, src.beta, src.level, vec![])?, &ctx.limits)?,
            "cantor" => {
                let cx = CantorSpec::from_dimension(src.alpha, src.level)?;
                let cy = CantorSpec::from_dimension(src.beta, src.level)?;
                product_measure(&cantor_measure(cx), &cantor_measure(cy), &ctx.limits)?
            }
            other => DiscreteMeasure::uniform(point_set(other, src.n, &src.gen, ctx)?.into_points())?,
        }
    };
    if m.len() > ctx.limits.max_atoms {
        return Err(CliError::Cap(format!("{} atoms exceed max_atoms = {}", m.len(), ctx.limits.max_atoms)));
    }
    Ok(m)
}

fn fit_notes(t: &mut Table, prefix: &str, fit: &ExponentFit) {
    t.note_f(&format!("{prefix}slope"), fit.slope);
    t.note_f(&format!("{prefix}intercept"), fit.intercept);
    t.note_f(&format!("{prefix}residual"), fit.residual);
}

pub fn run_command(cmd: &Command, ctx: &mut Ctx) -> CliResult<Table> {
    match cmd {
        Command::Generate(a) => generate_cmd(a, ctx),
        Command::Energy(a) => energy(a, ctx),
        Command::Frostman(a) => frostman(a, ctx),
        Command::AnnulusMass(a) => annulus_mass(a, ctx),
        Command::Trilinear(a) => trilinear(a, ctx),
        Command::ConfigDensity(a) => config_density_cmd(a, ctx),
        Command::DistanceDensity(a) => distance_density(a, ctx),
        Command::BilinearBound(a) => bilinear_bound(a, ctx),
        Command::KernelDump(a) => kernel_dump(a, ctx),
        Command::Count(a) => count(a, ctx),
        Command::Distinct(a) => distinct(a, ctx),
        Command::Corollary(a) => corollary(a, ctx),
        Command::Sharpness(a) => sharpness(a, ctx),
        Command::Selftest => Ok(crate::selftest::selftest()),
    }
}

fn generate_cmd(a: &GenerateArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let mut t = Table::new(&["x", "y", "w"]);
    for (p, w) in m.atoms() {
        t.push(vec![f(p.x), f(p.y), f(w)]);
    }
    t.note("atoms", m.len());
    t.note_f("total_mass", m.total_mass());
    Ok(t)
}

fn energy(a: &EnergyArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let mut t = Table::new(&["s", "energy"]);
    for s in list("s", &a.s)? {
        ctx.check_time("energy")?;
        t.push(vec![f(s), f(energy_integral(&m, s)?)]);
    }
    t.note("atoms", m.len());
    Ok(t)
}

fn frostman(a: &FrostmanArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let r = frostman_ratio(&m, a.s, &list("scales", &a.scales)?, a.max_centers, ctx.seed)?;
    let mut t = Table::new(&["delta", "max_ratio"]);
    for &(d, v) in &r.per_scale {
        t.push(vec![f(d), f(v)]);
    }
    t.note_f("ratio", r.ratio);
    t.note_f("argmax_delta", r.argmax_delta);
    t.note("centers_used", r.centers_used);
    t.note("subsampled", r.subsampled);
    if r.subsampled {
        ctx.warnings.push(format!("frostman: {} of {} atoms used as centers", r.centers_used, m.len()));
    }
    Ok(t)
}

fn annulus_mass(a: &AnnulusMassArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let spec = triangle("t", &a.t)?;
    let cols: &[&str] = if a.brute { &["eps", "mass", "density", "brute_mass"] } else { &["eps", "mass", "density"] };
    let mut t = Table::new(cols);
    if a.brute {
        ctx.warn(brute_size_warning(m.len()));
    }
    for eps in list("eps", &a.eps)? {
        ctx.check_time("annulus mass")?;
        let mass = triple_annulus_mass(&m, &spec, eps)?;
        let mut row = vec![f(eps), f(mass), f(mass / eps.powi(3))];
        if a.brute {
            row.push(f(triple_annulus_mass_brute(&m, &spec, eps)?));
        }
        t.push(row);
    }
    Ok(t)
}

fn trilinear(a: &TrilinearArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let spec = triangle("t", &a.t)?;
    let mut t = Table::new(&["eps", "mass", "form", "ratio"]);
    for eps in list("eps", &a.eps)? {
        ctx.check_time("trilinear form")?;
        let r = domination_ratio(&m, &spec, eps)?;
        t.push(vec![f(r.eps), f(r.mass), f(r.form), f(r.ratio)]);
    }
    Ok(t)
}

fn config_density_cmd(a: &ConfigDensityArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let window = match &a.window {
        None => None,
        Some(w) => match list("window", w)?.as_slice() {
            [lo, hi] => Some(HistogramWindow::cube(*lo, *hi)),
            _ => return Err(CliError::config("window: expected lo,hi")),
        },
    };
    let h = config_density(&m, a.bin_width, window, a.max_bins)?;
    let mut t = Table::new(&["t12", "t13", "t23", "mass", "density"]);
    let w3 = h.bin_width.powi(3);
    for i in 0..h.dims[0] {
        for j in 0..h.dims[1] {
            for k in 0..h.dims[2] {
                let mass = h.bin_mass([i, j, k]);
                if mass > 0.0 {
                    let c = h.bin_center([i, j, k]);
                    t.push(vec![f(c[0]), f(c[1]), f(c[2]), f(mass), f(mass / w3)]);
                }
            }
        }
    }
    t.note_f("histogram_mass", h.histogram_mass());
    t.note_f("outside_mass", h.outside_mass);
    if let Some((b, d)) = h.sup_density(a.margin) {
        let c = h.bin_center(b);
        t.note("sup_bin", format!("{},{},{}", f(c[0]), f(c[1]), f(c[2])));
        t.note_f("sup_density", d);
    }
    Ok(t)
}

fn distance_density(a: &DistanceDensityArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let m = load_source(&a.source, ctx)?;
    let mut t = Table::new(&["eps", "density"]);
    let mut samples = Vec::new();
    for eps in list("eps", &a.eps)? {
        ctx.check_time("distance density")?;
        let d = distance_measure_density(&m, eps, a.t)?;
        samples.push((eps, d));
        t.push(vec![f(eps), f(d)]);
    }
    match ExponentFit::fit(samples) {
        Ok(fit) => fit_notes(&mut t, "", &fit),
        Err(e) => ctx.warnings.push(format!("no fit: {e}")),
    }
    Ok(t)
}

fn bilinear_bound(a: &BilinearBoundArgs, ctx: &mut Ctx) -> CliResult<Table> {
    if !(a.side > 0.0 && a.side.is_finite()) {
        return Err(CliError::config(format!("side must be positive, got {}", a.side)));
    }
    let pairs = random_pairs(a.pairs, ctx.seed, a.freq_cap, a.terms, a.side);
    let table = boundedness_experiment(&pairs, a.a, a.b, &list("eps", &a.eps)?, a.beta1, a.beta2, a.h)?;
    let mut t = Table::new(&["pair", "eps", "numerator", "denom_f", "denom_g", "ratio"]);
    for r in &table.rows {
        t.push(vec![r.pair.to_string(), f(r.eps), f(r.numerator), f(r.denom_f), f(r.denom_g), f(r.ratio)]);
    }
    t.note("quad_points", table.quad_points);
    t.note_f("max_spread", table.max_spread());
    Ok(t)
}

fn kernel_dump(a: &KernelDumpArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let branch = Branch::from_str(&a.branch)?;
    if a.samples < 2 {
        return Err(CliError::config("samples must be at least 2"));
    }
    match a.what.as_str() {
        "k-hat" => {
            let eta = match list("eta", &a.eta)?.as_slice() {
                [x, y] => Point2::new(*x, *y),
                _ => return Err(CliError::config("eta: expected two coordinates")),
            };
            let cols: &[&str] =
                if a.quadrature { &["xi_x", "xi_y", "k_hat", "quadrature", "abs_diff"] } else { &["xi_x", "xi_y", "k_hat"] };
            let mut t = Table::new(cols);
            let step = 2.0 * a.xi_max / (a.samples - 1) as f64;
            let mut worst: f64 = 0.0;
            for j in 0..a.samples {
                ctx.check_time("kernel dump")?;
                for i in 0..a.samples {
                    let xi = Point2::new(-a.xi_max + i as f64 * step, -a.xi_max + j as f64 * step);
                    let k = k_hat(a.a, a.b, xi, eta, branch)?.re;
                    let mut row = vec![f(xi.x), f(xi.y), f(k)];
                    if a.quadrature {
                        let q = k_hat_quadrature(a.a, a.b, xi, eta, branch, 0)?;
                        let d = (q - k).norm();
                        worst = worst.max(d);
                        row.extend([f(q.re), f(d)]);
                    }
                    t.push(row);
                }
            }
            if a.quadrature {
                t.note_f("max_abs_diff", worst);
            }
            Ok(t)
        }
        "sigma-hat" => {
            let mut t = Table::new(&["r", "sigma_hat", "weighted"]);
            let n = a.samples - 1;
            for k in 0..=n {
                let r = a.xi_max * k as f64 / n as f64;
                let v = sigma_hat(1.0, Point2::new(r, 0.0));
                t.push(vec![f(r), f(v), f(v.abs() * (1.0 + r).sqrt())]);
            }
            let (r, v) = decay_sup(a.xi_max, 100 * n);
            t.note_f("decay_sup", v);
            t.note_f("decay_sup_at", r);
            Ok(t)
        }
        other => Err(CliError::config(format!("what: expected k-hat or sigma-hat, got {other:?}"))),
    }
}

fn count(a: &CountArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let p = point_set(&a.kind, a.n, &a.gen, ctx)?;
    let spec = triangle("t", &a.t)?;
    let delta = if a.delta.trim() == "auto" {
        triconfig::discrete::corollary_delta(p.len(), a.b)
    } else {
        parse_number(&a.delta).map_err(|e| CliError::config(format!("delta: {e}")))?
    };
    let fast = count_congruent_fast(&p, &spec, delta)?;
    let cols: &[&str] = if a.brute { &["n", "delta", "count", "brute"] } else { &["n", "delta", "count"] };
    let mut t = Table::new(cols);
    let mut row = vec![p.len().to_string(), f(delta), fast.to_string()];
    if a.brute {
        ctx.warn(brute_size_warning(p.len()));
        ctx.check_time("brute count")?;
        let brute = count_congruent_brute(&p, &spec, delta);
        row.push(brute.to_string());
        t.note("brute_matches", brute == fast);
        if brute != fast {
            return Err(CliError::Numeric(format!("fast count {fast} differs from brute count {brute}")));
        }
    }
    t.push(row);
    Ok(t)
}

fn distinct(a: &DistinctArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let p = point_set(&a.kind, a.n, &a.gen, ctx)?;
    let cols: &[&str] = if a.triangles { &["n", "distances", "triangle_classes"] } else { &["n", "distances"] };
    let mut t = Table::new(cols);
    let mut row = vec![p.len().to_string(), distinct_distances(&p, a.resolution).to_string()];
    if a.triangles {
        ctx.warn(triangle_classes_warning(p.len()));
        ctx.check_time("triangle classes")?;
        row.push(distinct_triangle_classes(&p, a.resolution)?.to_string());
    }
    t.push(row);
    Ok(t)
}

fn corollary(a: &CorollaryArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let ns = sizes(&a.sizes)?;
    if let Some(&n) = ns.iter().find(|&&n| n > ctx.limits.max_atoms) {
        return Err(CliError::Cap(format!("n = {n} exceeds max_atoms = {}", ctx.limits.max_atoms)));
    }
    let family = FamilySpec { kind: kind(&a.kind)?, seed: ctx.seed, params: gen_params(&a.gen)? };
    let r = corollary_experiment(&family, &ns, a.b, &triangle("t", &a.t)?, a.s, a.cap)?;
    let mut t = Table::new(&["n", "delta", "count", "energy"]);
    for row in &r.rows {
        t.push(vec![row.n.to_string(), f(row.delta), row.count.to_string(), f(row.energy)]);
    }
    fit_notes(&mut t, "", &r.fit);
    t.note_f("adaptability_exponent", r.adaptability_exponent);
    t.note_f("adaptability_cap", r.adaptability_cap);
    Ok(t)
}

fn sharpness(a: &SharpnessArgs, ctx: &mut Ctx) -> CliResult<Table> {
    let spec = MattilaSpec::new(a.alpha, a.beta, a.level, list("eps", &a.eps)?)?.with_config(triangle("config", &a.config)?);
    let eps = spec.validated_eps()?;
    let m = build_mattila(&spec, &ctx.limits)?;
    let r = triple_scaling_fit_on(&m, &spec, &eps)?;
    let mut t = Table::new(&["eps", "mass", "density"]);
    for row in &r.rows {
        t.push(vec![f(row.eps), f(row.mass), f(row.density)]);
    }
    fit_notes(&mut t, "", &r.fit);
    t.note_f("predicted", r.predicted);
    t.note_f("eps_floor", r.eps_floor);
    t.note("zero_rows", r.zero_rows);
    if r.zero_rows > 0 {
        ctx.warnings.push(format!("{} eps values with zero mass left out of the fit", r.zero_rows));
    }
    if a.pair_fit {
        ctx.check_time("pair fit")?;
        let p = annulus_pair_fit_on(&m, &spec, &eps)?;
        t.note("pair_base", format!("{},{}", f(p.base.x), f(p.base.y)));
        fit_notes(&mut t, "pair_", &p.fit);
        t.note_f("pair_predicted", p.predicted);
    }
    Ok(t)
}
