//! Numeric tolerances and thresholds used across the crate, its tests and
//! the acceptance suite. [`listing`] echoes all of them in run reports.

/// Probability measures must have unit mass to this precision.
pub const MASS_EXACT: f64 = 1e-12;
/// |gamma| may exceed 1 by this much before a triangle counts as degenerate;
/// values within the slack are clamped.
pub const DEGENERACY_SLACK: f64 = 1e-12;
/// Absolute error bound targeted by the Bessel J0 evaluation.
pub const BESSEL_ABS: f64 = 1e-10;
/// Relative error of the mollifier normalisation constant.
pub const MOLLIFIER_NORM_REL: f64 = 1e-10;
/// Closed-form kernel transform vs direct angular quadrature.
pub const KERNEL_IDENTITY_ABS: f64 = 1e-8;
/// Equal-modulus check between reflected branches.
pub const BRANCH_MODULUS_ABS: f64 = 1e-10;
/// Bound on sup |sigma_hat(1, xi)| (1 + |xi|)^(1/2) over the radial scan.
pub const DECAY_BOUND: f64 = 6.39;
/// Margin added to 2 pi when checking the two-circle kernel decay.
pub const KERNEL_DECAY_MARGIN: f64 = 0.1;
/// Mass of the mollified circle measure vs 2 pi r.
pub const SIGMA_EPS_MASS_ABS: f64 = 1e-6;
/// Rotation invariance of the mollified circle measure.
pub const SIGMA_EPS_ROTATION_ABS: f64 = 1e-8;
/// Bilinear operator applied to constants vs 4 pi.
pub const BILINEAR_CONSTANT_ABS: f64 = 1e-6;
/// Plane-wave multiplier vs closed-form kernel at zero mollification.
pub const PLANE_WAVE_ABS: f64 = 1e-6;
/// Bilinearity and homogeneity checks.
pub const BILINEARITY_REL: f64 = 1e-10;
/// Allowed max/min spread of the boundedness ratio across scales.
pub const BOUNDEDNESS_SPREAD: f64 = 3.0;
/// Sobolev norm at beta = 0 vs L2 norm.
pub const PARSEVAL_REL: f64 = 1e-10;
/// Pruned vs brute-force triple masses.
pub const TRIPLE_MASS_ABS: f64 = 1e-12;
/// Reassociation tolerance for partitioned floating sums.
pub const REASSOCIATION_REL: f64 = 1e-12;
/// Energy scaling identity under dilation.
pub const ENERGY_SCALING_REL: f64 = 1e-10;
/// Capped energy used to declare a point set adaptable.
pub const ADAPTABILITY_CAP: f64 = 50.0;
/// Energy exponent used to screen families for the corollary experiment.
pub const ADAPTABILITY_EXPONENT: f64 = 1.76;
/// Upper bound on the fitted congruent-triangle exponent (9/7 + 0.15).
pub const COROLLARY_SLOPE_MAX: f64 = 9.0 / 7.0 + 0.15;
/// Window for the threshold-case triple-mass slope.
pub const SHARPNESS_SLOPE_LO: f64 = 2.8;
pub const SHARPNESS_SLOPE_HI: f64 = 3.2;
/// Lower bound on the slope for the two-dimensional member of the family.
pub const SHARPNESS_FULL_MIN: f64 = 3.3;
/// Upper bound on the slope for the dimension-1.5 member.
pub const SHARPNESS_LOW_MAX: f64 = 2.85;
/// Tolerance on the single-annulus exponent.
pub const ANNULUS_EXPONENT_ABS: f64 = 0.2;
/// |slope| bound for a bounded distance density.
pub const DISTANCE_FLAT_ABS: f64 = 0.1;
/// Slope bound certifying finite-scale blow-up of the distance density.
pub const DISTANCE_BLOWUP_MAX: f64 = -0.1;
/// Allowed variation factor of the Riesz potential sup norm.
pub const RIESZ_SUP_SPREAD: f64 = 2.0;
/// Thickened densities integrate to one within this relative error.
pub const THICKEN_MASS_REL: f64 = 0.02;
/// Slack on cell-box and angular window tests in the pruned enumerators.
pub const PRUNING_SLACK: f64 = 1e-9;
/// Above this many atoms the Frostman ratio subsamples ball centers.
pub const FROSTMAN_MAX_CENTERS: usize = 10_000;
/// Soft limits for the O(n^3) routines.
pub const BRUTE_COUNT_SOFT_LIMIT: usize = 2000;
pub const TRIANGLE_CLASSES_SOFT_LIMIT: usize = 1500;

/// Every tolerance above as `(name, value)`.
pub fn listing() -> Vec<(&'static str, f64)> {
    vec![
        ("MASS_EXACT", MASS_EXACT),
        ("DEGENERACY_SLACK", DEGENERACY_SLACK),
        ("BESSEL_ABS", BESSEL_ABS),
        ("MOLLIFIER_NORM_REL", MOLLIFIER_NORM_REL),
        ("KERNEL_IDENTITY_ABS", KERNEL_IDENTITY_ABS),
        ("BRANCH_MODULUS_ABS", BRANCH_MODULUS_ABS),
        ("DECAY_BOUND", DECAY_BOUND),
        ("KERNEL_DECAY_MARGIN", KERNEL_DECAY_MARGIN),
        ("SIGMA_EPS_MASS_ABS", SIGMA_EPS_MASS_ABS),
        ("SIGMA_EPS_ROTATION_ABS", SIGMA_EPS_ROTATION_ABS),
        ("BILINEAR_CONSTANT_ABS", BILINEAR_CONSTANT_ABS),
        ("PLANE_WAVE_ABS", PLANE_WAVE_ABS),
        ("BILINEARITY_REL", BILINEARITY_REL),
        ("BOUNDEDNESS_SPREAD", BOUNDEDNESS_SPREAD),
        ("PARSEVAL_REL", PARSEVAL_REL),
        ("TRIPLE_MASS_ABS", TRIPLE_MASS_ABS),
        ("REASSOCIATION_REL", REASSOCIATION_REL),
        ("ENERGY_SCALING_REL", ENERGY_SCALING_REL),
        ("ADAPTABILITY_CAP", ADAPTABILITY_CAP),
        ("ADAPTABILITY_EXPONENT", ADAPTABILITY_EXPONENT),
        ("COROLLARY_SLOPE_MAX", COROLLARY_SLOPE_MAX),
        ("SHARPNESS_SLOPE_LO", SHARPNESS_SLOPE_LO),
        ("SHARPNESS_SLOPE_HI", SHARPNESS_SLOPE_HI),
        ("SHARPNESS_FULL_MIN", SHARPNESS_FULL_MIN),
        ("SHARPNESS_LOW_MAX", SHARPNESS_LOW_MAX),
        ("ANNULUS_EXPONENT_ABS", ANNULUS_EXPONENT_ABS),
        ("DISTANCE_FLAT_ABS", DISTANCE_FLAT_ABS),
        ("DISTANCE_BLOWUP_MAX", DISTANCE_BLOWUP_MAX),
        ("RIESZ_SUP_SPREAD", RIESZ_SUP_SPREAD),
        ("THICKEN_MASS_REL", THICKEN_MASS_REL),
        ("PRUNING_SLACK", PRUNING_SLACK),
        ("FROSTMAN_MAX_CENTERS", FROSTMAN_MAX_CENTERS as f64),
        ("BRUTE_COUNT_SOFT_LIMIT", BRUTE_COUNT_SOFT_LIMIT as f64),
        ("TRIANGLE_CLASSES_SOFT_LIMIT", TRIANGLE_CLASSES_SOFT_LIMIT as f64),
    ]
}
