//! Log-log least-squares exponent fits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unweighted least-squares fit of `ln value = intercept + slope * ln size`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    /// `(size, value)` pairs, sorted by size.
    pub samples: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
}

impl ExponentFit {
    /// Requires at least three samples with strictly increasing positive
    /// sizes and positive values.
    pub fn fit(mut samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InsufficientSamples(samples.len()));
        }
        samples.sort_by(|p, q| p.0.total_cmp(&q.0));
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::param("samples", format!("sizes must be strictly increasing, {} repeats", w[0].0)));
            }
        }
        if let Some(&(s, v)) = samples.iter().find(|&&(s, v)| !(s > 0.0 && v > 0.0 && s.is_finite() && v.is_finite())) {
            return Err(Error::Numeric(format!("cannot take logs of sample ({s}, {v})")));
        }
        let n = samples.len() as f64;
        let xs: Vec<f64> = samples.iter().map(|p| p.0.ln()).collect();
        let ys: Vec<f64> = samples.iter().map(|p| p.1.ln()).collect();
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let ss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
        Ok(ExponentFit { samples, slope, intercept, residual: (ss / n).sqrt() })
    }

    pub fn predict(&self, size: f64) -> f64 {
        (self.intercept + self.slope * size.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let s: Vec<_> = [0.5, 0.25, 0.125, 0.0625].iter().map(|&e: &f64| (e, 3.0 * e.powf(2.5))).collect();
        let f = ExponentFit::fit(s).unwrap();
        assert!((f.slope - 2.5).abs() < 1e-12);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!((f.predict(0.1) - 3.0 * 0.1f64.powf(2.5)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_samples() {
        assert!(matches!(ExponentFit::fit(vec![(1.0, 1.0), (2.0, 2.0)]), Err(Error::InsufficientSamples(2))));
        assert!(ExponentFit::fit(vec![(1.0, 1.0), (1.0, 2.0), (3.0, 1.0)]).is_err());
        assert!(ExponentFit::fit(vec![(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
    }
}
