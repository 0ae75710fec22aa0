//! Small fixed-rule quadratures.

/// Composite Simpson rule with `n` (rounded up to even) subintervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

/// Trapezoid rule on `[a, b]` with `n` subintervals. Exponentially accurate
/// for integrands that vanish to all orders at both ends.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n.max(1);
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for k in 1..n {
        acc += f(a + k as f64 * h);
    }
    acc * h
}

/// Periodic trapezoid rule on `[0, 2 pi)` with `n` nodes.
pub fn periodic(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rules_integrate_known_functions() {
        assert!((simpson(|x| x * x * x, 0.0, 2.0, 4) - 4.0).abs() < 1e-14);
        assert!((trapezoid(|x| x, 0.0, 1.0, 3) - 0.5).abs() < 1e-15);
        let p = periodic(|t| (3.0 * t).cos().powi(2), 16);
        assert!((p - std::f64::consts::PI).abs() < 1e-13);
    }
}
