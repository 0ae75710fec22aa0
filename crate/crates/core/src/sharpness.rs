//! Shifted product-Cantor construction and its finite-scale scaling laws.
//!
//! `F_a = (C_a - 1) u (C_a + 1)` and `E = F_alpha x F_beta`. The default
//! configuration is `t = (1, 1, sqrt 2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::ExponentFit;
use crate::geometry::{Point2, TriangleSpec};
use crate::measure::{cantor_measure, product_measure, shifted_union, CantorSpec, DiscreteMeasure, Limits};
use crate::par;
use crate::trilinear::{annulus_mass_around, distance_measure_density, triple_annulus_mass};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MattilaSpec {
    pub alpha: f64,
    pub beta: f64,
    pub level: u32,
    pub eps_list: Vec<f64>,
    pub config: TriangleSpec,
}

impl MattilaSpec {
    pub fn new(alpha: f64, beta: f64, level: u32, eps_list: Vec<f64>) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::param(name, format!("must lie in (0, 1], got {v}")));
            }
        }
        Ok(MattilaSpec { alpha, beta, level, eps_list, config: TriangleSpec::new(1.0, 1.0, std::f64::consts::SQRT_2)? })
    }

    pub fn with_config(mut self, config: TriangleSpec) -> Self {
        self.config = config;
        self
    }

    pub fn x_factor(&self) -> Result<CantorSpec> {
        CantorSpec::from_dimension(self.alpha, self.level)
    }

    pub fn y_factor(&self) -> Result<CantorSpec> {
        CantorSpec::from_dimension(self.beta, self.level)
    }

    /// `3 alpha / 2 + 2 beta`.
    pub fn predicted_exponent(&self) -> f64 {
        1.5 * self.alpha + 2.0 * self.beta
    }

    /// `alpha / 2 + beta`.
    pub fn predicted_pair_exponent(&self) -> f64 {
        0.5 * self.alpha + self.beta
    }

    pub fn dimension(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Smallest admissible `eps`: the longer of the two level-`L`
    /// construction intervals. Below it the approximant no longer looks like
    /// the limit measure along that axis.
    pub fn eps_floor(&self) -> Result<f64> {
        Ok(self.x_factor()?.interval_length().max(self.y_factor()?.interval_length()))
    }

    /// Rejects `eps` values below [`Self::eps_floor`] (with a relative slack
    /// of `1e-12`) and fewer than three values.
    pub fn validated_eps(&self) -> Result<Vec<f64>> {
        let floor = self.eps_floor()?;
        if let Some(&e) = self.eps_list.iter().find(|&&e| !(e >= floor * (1.0 - 1e-12))) {
            return Err(Error::param("eps", format!("eps = {e} is below the resolution floor {floor}")));
        }
        let mut eps = self.eps_list.clone();
        eps.sort_by(f64::total_cmp);
        eps.dedup();
        if eps.len() < 3 {
            return Err(Error::InsufficientSamples(eps.len()));
        }
        Ok(eps)
    }
}

/// Dyadic list `2^-from, ..., 2^-to`.
pub fn dyadic(from: i32, to: i32) -> Vec<f64> {
    let (lo, hi) = (from.min(to), from.max(to));
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

/// `F_alpha x F_beta` at level `L`: `(2^{L+1})^2` atoms of equal weight.
pub fn build_mattila(spec: &MattilaSpec, limits: &Limits) -> Result<DiscreteMeasure> {
    let n = (1usize << (spec.level + 1)).pow(2);
    if n > limits.max_atoms {
        return Err(Error::cap("Mattila atoms", n, limits.max_atoms));
    }
    let fx = shifted_union(&cantor_measure(spec.x_factor()?))?;
    let fy = shifted_union(&cantor_measure(spec.y_factor()?))?;
    product_measure(&fx, &fy, limits)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub eps: f64,
    pub mass: f64,
    /// `mass / eps^3`.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub fit: ExponentFit,
    pub predicted: f64,
    pub eps_floor: f64,
    /// Rows with zero mass, left out of the fit.
    pub zero_rows: usize,
}

/// Triple-annulus mass of the construction at each `eps` and the log-log
/// slope against `eps` over the rows with positive mass.
pub fn triple_scaling_fit(spec: &MattilaSpec, limits: &Limits) -> Result<ScalingReport> {
    let eps = spec.validated_eps()?;
    let m = build_mattila(spec, limits)?;
    triple_scaling_fit_on(&m, spec, &eps)
}

/// [`triple_scaling_fit`] on a prebuilt measure.
pub fn triple_scaling_fit_on(m: &DiscreteMeasure, spec: &MattilaSpec, eps: &[f64]) -> Result<ScalingReport> {
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let mass = triple_annulus_mass(m, &spec.config, e)?;
        rows.push(ScalingRow { eps: e, mass, density: mass / e.powi(3) });
    }
    let positive: Vec<(f64, f64)> = rows.iter().filter(|r| r.mass > 0.0).map(|r| (r.eps, r.mass)).collect();
    let zero_rows = rows.len() - positive.len();
    let fit = ExponentFit::fit(positive)?;
    Ok(ScalingReport { rows, fit, predicted: spec.predicted_exponent(), eps_floor: spec.eps_floor()?, zero_rows })
}

/// Fitted slope minus 3; negative values mean `mass / eps^3` grows as
/// `eps` shrinks.
pub fn density_blowup_indicator(spec: &MattilaSpec, limits: &Limits) -> Result<f64> {
    Ok(triple_scaling_fit(spec, limits)?.fit.slope - 3.0)
}

/// Log-log fit of `eps^{-1} (mu x mu){t <= |x - y| <= t + eps}` against `eps`.
pub fn distance_blowup_fit_on(m: &DiscreteMeasure, t: f64, eps: &[f64]) -> Result<ExponentFit> {
    let values = par::map_indexed(eps.len(), |k| distance_measure_density(m, eps[k], t));
    let mut samples = Vec::with_capacity(eps.len());
    for (k, v) in values.into_iter().enumerate() {
        samples.push((eps[k], v?));
    }
    ExponentFit::fit(samples)
}

pub fn distance_blowup_fit(spec: &MattilaSpec, t: f64, limits: &Limits) -> Result<ExponentFit> {
    let eps = spec.validated_eps()?;
    distance_blowup_fit_on(&build_mattila(spec, limits)?, t, &eps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairFitReport {
    pub base: Point2,
    pub fit: ExponentFit,
    pub predicted: f64,
}

/// Mass of the unit annulus `[1, 1 + eps]` around the atom nearest the
/// origin, fitted against `eps`.
pub fn annulus_pair_fit(spec: &MattilaSpec, limits: &Limits) -> Result<PairFitReport> {
    let eps = spec.validated_eps()?;
    let m = build_mattila(spec, limits)?;
    annulus_pair_fit_on(&m, spec, &eps)
}

pub fn annulus_pair_fit_on(m: &DiscreteMeasure, spec: &MattilaSpec, eps: &[f64]) -> Result<PairFitReport> {
    let base = nearest_atom(m, Point2::ORIGIN).ok_or_else(|| Error::param("m", "empty measure"))?;
    let samples = eps.iter().map(|&e| (e, annulus_mass_around(m, base, 1.0, e))).collect();
    Ok(PairFitReport { base, fit: ExponentFit::fit(samples)?, predicted: spec.predicted_pair_exponent() })
}

/// Lowest-index atom at minimal distance from `p`.
pub fn nearest_atom(m: &DiscreteMeasure, p: Point2) -> Option<Point2> {
    m.points().iter().copied().min_by(|a, b| a.dist(&p).total_cmp(&b.dist(&p)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_level_two() {
        let spec = MattilaSpec::new(1.0, 1.0, 2, dyadic(1, 3)).unwrap();
        let m = build_mattila(&spec, &Limits::default()).unwrap();
        assert_eq!(m.len(), 64);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
        let bb = m.bounding_box().unwrap();
        assert_eq!((bb.min.x, bb.max.x), (-1.0, 1.75));
        assert!(m.points().iter().all(|p| (p.x * 4.0).fract() == 0.0 && (p.y * 4.0).fract() == 0.0));
    }

    #[test]
    fn level_six_spacing() {
        let spec = MattilaSpec::new(1.0, 0.75, 6, dyadic(3, 6)).unwrap();
        assert!((spec.y_factor().unwrap().interval_length() - 3.9e-3).abs() < 1e-4);
        assert_eq!(spec.eps_floor().unwrap(), 1.0 / 64.0);
        assert_eq!(spec.validated_eps().unwrap().len(), 4);
        let bad = MattilaSpec::new(1.0, 0.75, 6, dyadic(3, 7)).unwrap();
        assert!(bad.validated_eps().is_err());
    }

    #[test]
    fn predicted_exponents() {
        let e = |a, b| MattilaSpec::new(a, b, 1, vec![]).unwrap().predicted_exponent();
        assert_eq!(e(1.0, 0.75), 3.0);
        assert_eq!(e(1.0, 1.0), 3.5);
        assert_eq!(e(0.75, 0.75), 2.625);
    }

    #[test]
    fn two_atom_distance_slope_is_minus_one() {
        let m = DiscreteMeasure::uniform(vec![Point2::ORIGIN, Point2::new(1.0, 0.0)]).unwrap();
        let f = distance_blowup_fit_on(&m, 1.0, &dyadic(2, 6)).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
    }
}
