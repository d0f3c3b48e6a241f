//! Closed-form constants of the Gauss–Weierstrass asymptotics.
//!
//! Each value is computed from its defining expression instead of being
//! stored as a decimal literal.

use std::f64::consts::{E, PI};

/// `1 + 6/e + 16/e²`, the leading coefficient of `(A−B)/B ≤ C·ρ`.
pub fn difference_ratio_constant() -> f64 {
    1.0 + 6.0 / E + 16.0 / (E * E)
}

/// `2(1 + 6/e + 16/e²)`, the leading coefficient of `var_S ≤ C·ρ`.
pub fn space_variance_constant() -> f64 {
    2.0 * difference_ratio_constant()
}

/// `√(2(1 + 6/e + 16/e²))`, the limiting upper bound on the
/// Gauss–Weierstrass uncertainty product.
pub fn gw_uncertainty_bound() -> f64 {
    space_variance_constant().sqrt()
}

/// `1/8 + 3/(4e) + 2/e²`, the leading coefficient of `A − B ≤ C/ρ`.
pub fn difference_series_constant() -> f64 {
    0.125 + 3.0 / (4.0 * E) + 2.0 / (E * E)
}

/// `3√3 e^{-3/2} / 8`: peak of `v₁` (estimations) times `ρ^{3/2}`.
pub fn v1_peak_constant() -> f64 {
    3.0 * 3f64.sqrt() * (-1.5f64).exp() / 8.0
}

/// `(√(2π) + 6√3 e^{-3/2}) / 16`: lower-side constant for the `v₂₃` series.
pub fn v23_lower_constant() -> f64 {
    ((2.0 * PI).sqrt() + 6.0 * 3f64.sqrt() * (-1.5f64).exp()) / 16.0
}

/// `25√5 e^{-5/2} / 32`: peak of `v₄` times `ρ^{5/2}`.
pub fn v4_peak_constant() -> f64 {
    25.0 * 5f64.sqrt() * (-2.5f64).exp() / 32.0
}

/// `−3/(4e)`: minimum of the negative difference term times `ρ`.
pub fn v1_diff_peak_constant() -> f64 {
    -3.0 / (4.0 * E)
}

/// `2/e²`: maximum of the exponential-difference term times `ρ`.
pub fn v2_diff_peak_constant() -> f64 {
    2.0 / (E * E)
}

/// `1/(4√e)`: maximum of the square-root-difference term times `√ρ`.
pub fn v3_diff_peak_constant() -> f64 {
    1.0 / (4.0 * E.sqrt())
}
