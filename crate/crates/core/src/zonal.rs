//! Legendre polynomials and the coefficient sequence of a zonal function.
//!
//! A zonal function is stored through its coefficients `c_l` in the expansion
//!
//! ```text
//! f(cos θ) = Σ_l (2l+1)/(4π) · c_l · P_l(cos θ)
//! ```
//!
//! The `(2l+1)/(4π)` factor lives in the expansion, never in `c_l`.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::summation::{compensated_sum, CompensatedSum};

/// Evaluates the Legendre polynomial `P_l(t)` by the Bonnet recurrence
/// `(k+1) P_{k+1} = (2k+1) t P_k - k P_{k-1}`.
pub fn legendre_eval(l: usize, t: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!(
            "Legendre argument must lie in [-1, 1], got {t}"
        )));
    }
    Ok(bonnet(l, t))
}

fn bonnet(l: usize, t: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut curr = t;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * curr - kf * prev) / (kf + 1.0);
        prev = curr;
        curr = next;
    }
    curr
}

/// Dense coefficients `c_0..c_L` of a zonal function plus a bound on the
/// neglected weighted energy `Σ_{l>L} (2l+1) c_l²`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreCoefficients {
    coeffs: Vec<f64>,
    tail_bound: f64,
    zeroth_undefined: bool,
}

impl LegendreCoefficients {
    /// Builds a coefficient sequence with no truncation tail.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        Self::with_tail_bound(coeffs, 0.0)
    }

    pub fn with_tail_bound(coeffs: Vec<f64>, tail_bound: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("coefficient sequence is empty".into()));
        }
        if let Some((l, c)) = coeffs.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(Error::Domain(format!(
                "coefficient c_{l} = {c} is not finite"
            )));
        }
        if !(tail_bound >= 0.0) || !tail_bound.is_finite() {
            return Err(Error::Domain(format!(
                "tail bound must be finite and nonnegative, got {tail_bound}"
            )));
        }
        let energy = weighted_energy(&coeffs);
        if !(energy > 0.0) || !energy.is_finite() {
            return Err(Error::Domain(format!(
                "weighted energy Σ(2l+1)c_l² must be finite and positive, got {energy}"
            )));
        }
        Ok(Self {
            coeffs,
            tail_bound,
            zeroth_undefined: false,
        })
    }

    /// Marks `c_0` as set to zero because the generating formula was undefined at `l = 0`.
    pub(crate) fn mark_zeroth_undefined(mut self) -> Self {
        self.zeroth_undefined = true;
        self
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Highest stored degree `L`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// True when `c_0` could not be evaluated by the family formula and was set to zero.
    pub fn zeroth_undefined(&self) -> bool {
        self.zeroth_undefined
    }

    /// `Σ_{l=0}^{L} (2l+1) c_l²`.
    pub fn energy(&self) -> f64 {
        weighted_energy(&self.coeffs)
    }

    /// Multiplies every coefficient by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| c * s).collect();
        let mut out = Self::with_tail_bound(coeffs, self.tail_bound * s * s)?;
        out.zeroth_undefined = self.zeroth_undefined;
        Ok(out)
    }

    /// Fails when the tail bound exceeds `tol` times the retained energy.
    pub fn check_truncation(&self, tol: f64) -> Result<()> {
        let energy = self.energy();
        if self.tail_bound > tol * energy {
            return Err(Error::Truncation(format!(
                "tail bound {:e} exceeds {tol:e} x energy {energy:e} at degree {}",
                self.tail_bound,
                self.degree()
            )));
        }
        Ok(())
    }

    /// Reads the plain-text coefficient format: one real per line, the `k`-th
    /// value being `c_k`. Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let value: f64 = trimmed.parse().map_err(|_| {
                Error::Parse(format!(
                    "line {}: cannot parse {trimmed:?} as a real",
                    lineno + 1
                ))
            })?;
            coeffs.push(value);
        }
        Self::new(coeffs)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Writes the coefficients in the format read by [`LegendreCoefficients::parse`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.coeffs {
            out.push_str(&crate::format::sig17(*c));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn weighted_energy(coeffs: &[f64]) -> f64 {
    compensated_sum(
        coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| (2 * l + 1) as f64 * c * c),
    )
}

/// Partial sum `f(cos θ) = Σ (2l+1)/(4π) c_l P_l(cos θ)`.
pub fn reconstruct(coeffs: &LegendreCoefficients, theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "theta must lie in [0, π], got {theta}"
        )));
    }
    let t = theta.cos();
    let mut acc = CompensatedSum::new();
    let mut prev = 0.0;
    let mut curr = 1.0;
    for (l, c) in coeffs.coeffs().iter().enumerate() {
        if l == 1 {
            prev = 1.0;
            curr = t;
        } else if l > 1 {
            let k = (l - 1) as f64;
            let next = ((2.0 * k + 1.0) * t * curr - k * prev) / (k + 1.0);
            prev = curr;
            curr = next;
        }
        acc.add((2 * l + 1) as f64 * c * curr);
    }
    Ok(acc.value() / (4.0 * PI))
}
