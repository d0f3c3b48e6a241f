//! Uncertainty products of zonal functions on the 2-sphere.
//!
//! A zonal function is given by its Legendre coefficients
//! `f(cos θ) = Σ (2l+1)/(4π) c_l P_l(cos θ)`. The crate computes its space and
//! momentum variances, bounds the series that arise for wavelet families, and
//! sweeps families across scales to check their asymptotic behaviour.

// `!(x > 0.0)` rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod constants;
pub mod error;
pub mod families;
pub mod format;
pub mod localization;
pub mod series_bounds;
pub mod summation;
pub mod verify;
pub mod zonal;

pub use error::{Error, Result};
pub use families::{auto_degree, CustomTable, FamilyDescriptor, GeneralExponential, WaveletFamily};
pub use localization::{uncertainty_product, var_momentum, var_space, LocalizationReport};
pub use zonal::{legendre_eval, reconstruct, LegendreCoefficients};
