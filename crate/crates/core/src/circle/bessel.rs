//! Bessel function of the first kind, order zero.
//!
//! Power series below the crossover, Hankel asymptotic expansion above it.
//! Both branches stay within 1e-10 absolute error: the series loses at most
//! a few thousand ulps to cancellation at the crossover, and the optimally
//! truncated asymptotic series has its smallest term near `exp(-2x)`.

use std::f64::consts::{FRAC_PI_4, PI};

/// Series/asymptotic switch point.
pub const CROSSOVER: f64 = 12.0;

pub fn j0(x: f64) -> f64 {
    let x = x.abs();
    if x < CROSSOVER {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    }
}

fn j0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= -q / (k * k);
        sum += term;
        if term.abs() < 1e-18 && k * k > q {
            break;
        }
        k += 1.0;
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    // t_k = a_k(0) / x^k with a_k(0) = prod_{m<=k} -(2m-1)^2 / (k! 8^k).
    let mut p = 1.0;
    let mut q = 0.0;
    let mut t: f64 = 1.0;
    let mut k = 1usize;
    loop {
        let m = (2 * k - 1) as f64;
        let next = -t * m * m / (8.0 * k as f64 * x);
        if next.abs() >= t.abs() || next.abs() < 1e-17 {
            break;
        }
        t = next;
        // P collects even k with sign (-1)^(k/2), Q odd k with (-1)^((k-1)/2).
        match k % 4 {
            0 => p += t,
            1 => q += t,
            2 => p -= t,
            _ => q -= t,
        }
        k += 1;
    }
    let chi = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}
