//! Space and momentum variances of a zonal function and their uncertainty product.
//!
//! For real coefficients,
//!
//! ```text
//! var_S = (N / D)² − 1,          N = Σ (2l+1) c_l²,   D = 2 Σ (l+1) c_l c_{l+1}
//! var_M = Σ l(l+1)(2l+1) c_l² / N
//! U     = √var_S · √var_M  ≥ 1
//! ```
//!
//! `var_S` is evaluated as `(N − |D|)(N + |D|) / D²` with both factors summed
//! term by term, which keeps full relative accuracy when `N/D → 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::sig17;
use crate::summation::CompensatedSum;
use crate::zonal::LegendreCoefficients;

/// `|D| <= CENTER_THRESHOLD · N` means the spherical center is undefined.
pub const CENTER_THRESHOLD: f64 = 1e-12;
/// Negative `var_S` down to `−VAR_SPACE_SLACK` is rounding and is clamped to 0.
pub const VAR_SPACE_SLACK: f64 = 1e-12;
/// Slack on the uncertainty principle `U ≥ 1`.
pub const UNCERTAINTY_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// `var_S` came out slightly negative and was clamped to zero.
    pub var_space_clamped: bool,
    /// The family formula was undefined at `l = 0`; `c_0` was set to zero.
    pub zeroth_undefined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationReport {
    pub var_space: f64,
    pub var_momentum: f64,
    pub uncertainty: f64,
    pub degree_used: usize,
    /// Neglected relative energy `tail_bound / Σ(2l+1)c_l²`.
    pub truncation_error: f64,
    /// `D = Σ (l+1)(c_l c_{l+1} + c_l c_{l+1})`.
    pub center_denominator: f64,
    #[serde(skip)]
    pub diagnostics: Diagnostics,
}

struct SpaceMoments {
    energy: f64,
    center: f64,
    /// `N − |D|`
    excess: f64,
}

fn space_moments(c: &[f64]) -> SpaceMoments {
    let mut energy = CompensatedSum::new();
    let mut center = CompensatedSum::new();
    let mut minus = CompensatedSum::new();
    let mut plus = CompensatedSum::new();
    for (l, &cl) in c.iter().enumerate() {
        let next = c.get(l + 1).copied().unwrap_or(0.0);
        let e = (2 * l + 1) as f64 * cl * cl;
        let d = 2.0 * (l + 1) as f64 * cl * next;
        energy.add(e);
        center.add(d);
        minus.add(e - d);
        plus.add(e + d);
    }
    let center = center.value();
    let excess = if center >= 0.0 {
        minus.value()
    } else {
        plus.value()
    };
    SpaceMoments {
        energy: energy.value(),
        center,
        excess,
    }
}

fn var_space_inner(coeffs: &LegendreCoefficients) -> Result<(f64, f64, bool)> {
    let m = space_moments(coeffs.coeffs());
    if m.center.abs() <= CENTER_THRESHOLD * m.energy {
        return Err(Error::UndefinedCenter {
            denominator: m.center,
            energy: m.energy,
        });
    }
    let d = m.center.abs();
    let value = m.excess * (m.energy + d) / (d * d);
    if value >= 0.0 {
        Ok((value, m.center, false))
    } else if value >= -VAR_SPACE_SLACK {
        Ok((0.0, m.center, true))
    } else {
        Err(Error::InternalConsistency(format!(
            "space variance {value:e} is negative beyond rounding slack"
        )))
    }
}

/// Space variance `var_S`.
pub fn var_space(coeffs: &LegendreCoefficients) -> Result<f64> {
    var_space_inner(coeffs).map(|(v, _, _)| v)
}

/// Momentum variance `var_M`, the spectral mean of `l(l+1)`.
pub fn var_momentum(coeffs: &LegendreCoefficients) -> f64 {
    let mut num = CompensatedSum::new();
    for (l, &cl) in coeffs.coeffs().iter().enumerate().skip(1) {
        let lf = l as f64;
        num.add(lf * (lf + 1.0) * (2.0 * lf + 1.0) * cl * cl);
    }
    num.value() / coeffs.energy()
}

/// Full localization report. Fails with [`Error::InternalConsistency`] if the
/// uncertainty principle is violated beyond [`UNCERTAINTY_SLACK`].
pub fn uncertainty_product(coeffs: &LegendreCoefficients) -> Result<LocalizationReport> {
    let (vs, center, clamped) = var_space_inner(coeffs)?;
    let vm = var_momentum(coeffs);
    let u = vs.sqrt() * vm.sqrt();
    if !(u >= 1.0 - UNCERTAINTY_SLACK) {
        return Err(Error::InternalConsistency(format!(
            "uncertainty product {u} below 1 (var_S = {vs:e}, var_M = {vm:e})"
        )));
    }
    Ok(LocalizationReport {
        var_space: vs,
        var_momentum: vm,
        uncertainty: u,
        degree_used: coeffs.degree(),
        truncation_error: coeffs.tail_bound() / coeffs.energy(),
        center_denominator: center,
        diagnostics: Diagnostics {
            var_space_clamped: clamped,
            zeroth_undefined: coeffs.zeroth_undefined(),
        },
    })
}

impl LocalizationReport {
    /// One-line JSON object, keys in fixed order, reals at 17 significant digits.
    pub fn to_json(&self) -> String {
        format!(
            "{{\"var_space\":{},\"var_momentum\":{},\"uncertainty\":{},\"degree_used\":{},\"truncation_error\":{},\"center_denominator\":{}}}",
            sig17(self.var_space),
            sig17(self.var_momentum),
            sig17(self.uncertainty),
            self.degree_used,
            sig17(self.truncation_error),
            sig17(self.center_denominator),
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("report JSON: {e}")))
    }
}
