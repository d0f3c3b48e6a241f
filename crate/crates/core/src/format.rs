//! Text emission for reports and sweep tables.
//!
//! All reals are written with 17 significant digits in scientific notation,
//! enough to reproduce every `f64` bit-exactly.

/// `x` with 17 significant digits, e.g. `1.4142135623730951e0`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}
