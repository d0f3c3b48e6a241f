//! Coefficient generators for wavelet families indexed by the scale `ρ`.
//!
//! * Gauss–Weierstrass: `c_l = √(2ρ l(l+1)) · e^{−ρ l(l+1)}`
//! * general exponential: `c_l = [ρ^a q(l)]^c · e^{−ρ^a q(l)}` for a polynomial `q`
//!   positive and strictly increasing on `l ≥ 1`
//! * custom: one coefficient table per scale, loaded from files
//!
//! Truncated sequences carry an analytic bound on the neglected weighted
//! energy `Σ_{l>L} (2l+1) c_l²`, obtained by comparing the tail with an integral.

use std::fmt;

use crate::error::{Error, Result};
use crate::series_bounds::{find_peak, integrate_semi_infinite, SeriesLabel, UnimodalFunction};
use crate::summation::CompensatedSum;
use crate::zonal::LegendreCoefficients;

/// Exponent margin added to `ln(1/tol)` when choosing a truncation degree.
pub const DEGREE_SAFETY_MARGIN: f64 = 40.0;
/// Largest degree ever generated.
pub const MAX_DEGREE: usize = 10_000_000;
/// Number of leading degrees checked for positivity and monotonicity of `q`.
const MONOTONICITY_SAMPLES: usize = 1_000_000;

/// Polynomial with coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::Domain(
                "polynomial coefficients must be finite".into(),
            ));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree `ν`, i.e. the index of the last stored coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }
}

/// Parameters `(a, c, q)` of the exponential family.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralExponential {
    a: f64,
    c: f64,
    q: Polynomial,
}

impl GeneralExponential {
    /// Validates `a > 0`, `c > 0`, `deg q ≥ 1` with nonzero leading
    /// coefficient, and `0 < q(1) < q(2) < … ` over the first 10⁶ degrees.
    pub fn new(a: f64, c: f64, q_coeffs: Vec<f64>) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Domain(format!(
                "exponent a must be positive, got {a}"
            )));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("power c must be positive, got {c}")));
        }
        let q = Polynomial::new(q_coeffs)?;
        if q.coeffs().len() < 2 {
            return Err(Error::Domain("q must have degree at least 1".into()));
        }
        if *q.coeffs().last().unwrap() == 0.0 {
            return Err(Error::Domain(
                "leading coefficient of q must be nonzero".into(),
            ));
        }
        let mut prev = q.eval(1.0);
        if !(prev > 0.0) {
            return Err(Error::Domain(format!("q(1) = {prev} must be positive")));
        }
        for l in 2..=MONOTONICITY_SAMPLES {
            let cur = q.eval(l as f64);
            if !(cur > prev) {
                return Err(Error::Domain(format!(
                    "q must be strictly increasing for l >= 1: q({}) = {prev}, q({l}) = {cur}",
                    l - 1
                )));
            }
            prev = cur;
        }
        Ok(Self { a, c, q })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn q(&self) -> &Polynomial {
        &self.q
    }

    /// The power `[ρ^a q(0)]^c` is undefined when `q(0) < 0` and `c` is not an integer.
    pub fn zeroth_undefined(&self) -> bool {
        self.q.eval(0.0) < 0.0 && self.c.fract() != 0.0
    }

    fn argument(&self, rho: f64, l: f64) -> f64 {
        rho.powf(self.a) * self.q.eval(l)
    }

    fn power(&self, s: f64) -> f64 {
        if self.c == 0.5 {
            s.sqrt()
        } else if self.c.fract() == 0.0 && self.c.abs() < i32::MAX as f64 {
            s.powi(self.c as i32)
        } else {
            s.powf(self.c)
        }
    }

    /// `c_l`, with `None` where the power is undefined.
    fn coefficient(&self, rho: f64, l: usize) -> Option<f64> {
        let s = self.argument(rho, l as f64);
        if s < 0.0 && self.c.fract() != 0.0 {
            return None;
        }
        Some(self.power(s) * (-s).exp())
    }

    /// Weighted-energy density `(2t+1) s^{2c} e^{−2s}`, `s = ρ^a q(t)`.
    fn energy_density(&self, rho: f64, t: f64) -> f64 {
        let s = self.argument(rho, t);
        let p = self.power(s);
        (2.0 * t + 1.0) * p * p * (-2.0 * s).exp()
    }
}

/// Per-scale coefficient tables of a user-supplied family.
#[derive(Debug, Clone, PartialEq)]
pub struct CustomTable {
    entries: Vec<(f64, LegendreCoefficients)>,
}

impl CustomTable {
    /// Rows are stored in decreasing `ρ`; duplicate scales are rejected.
    pub fn new(mut entries: Vec<(f64, LegendreCoefficients)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain(
                "custom family needs at least one table".into(),
            ));
        }
        if let Some((rho, _)) = entries.iter().find(|(r, _)| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::Domain(format!(
                "custom table scale must be positive, got {rho}"
            )));
        }
        entries.sort_by(|x, y| y.0.total_cmp(&x.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain(
                "custom tables must have distinct scales".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn scales(&self) -> Vec<f64> {
        self.entries.iter().map(|(r, _)| *r).collect()
    }

    /// Exact lookup (relative tolerance 1e-12, no interpolation).
    pub fn get(&self, rho: f64) -> Result<&LegendreCoefficients> {
        self.entries
            .iter()
            .find(|(r, _)| (r - rho).abs() <= 1e-12 * r.abs())
            .map(|(_, c)| c)
            .ok_or_else(|| Error::Domain(format!("no custom coefficient table for rho = {rho:e}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WaveletFamily {
    GaussWeierstrass,
    GeneralExponential(GeneralExponential),
    Custom(CustomTable),
}

/// Lightweight description of a family, kept alongside sweep results.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyDescriptor {
    GaussWeierstrass,
    GeneralExponential { a: f64, c: f64, q: Vec<f64> },
    Custom { scales: usize },
}

impl fmt::Display for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyDescriptor::GaussWeierstrass => write!(f, "gauss-weierstrass"),
            FamilyDescriptor::GeneralExponential { a, c, q } => {
                let q: Vec<String> = q.iter().map(|x| x.to_string()).collect();
                write!(f, "general-exponential(a={a}, c={c}, q=[{}])", q.join(","))
            }
            FamilyDescriptor::Custom { scales } => write!(f, "custom({scales} scales)"),
        }
    }
}

impl WaveletFamily {
    pub fn descriptor(&self) -> FamilyDescriptor {
        match self {
            WaveletFamily::GaussWeierstrass => FamilyDescriptor::GaussWeierstrass,
            WaveletFamily::GeneralExponential(g) => FamilyDescriptor::GeneralExponential {
                a: g.a,
                c: g.c,
                q: g.q.coeffs().to_vec(),
            },
            WaveletFamily::Custom(t) => FamilyDescriptor::Custom {
                scales: t.entries.len(),
            },
        }
    }

    /// Coefficients truncated at `degree`.
    pub fn coefficients_at_degree(&self, rho: f64, degree: usize) -> Result<LegendreCoefficients> {
        match self {
            WaveletFamily::GaussWeierstrass => gauss_weierstrass_coeffs(rho, degree),
            WaveletFamily::GeneralExponential(g) => general_exponential_coeffs(g, rho, degree),
            WaveletFamily::Custom(t) => {
                let c = t.get(rho)?;
                let n = (degree + 1).min(c.coeffs().len());
                LegendreCoefficients::with_tail_bound(c.coeffs()[..n].to_vec(), c.tail_bound())
            }
        }
    }

    /// Coefficients at the degree chosen by [`auto_degree`], with the
    /// truncation tolerance checked.
    pub fn coefficients(&self, rho: f64, tol: f64) -> Result<LegendreCoefficients> {
        if let WaveletFamily::Custom(t) = self {
            return Ok(t.get(rho)?.clone());
        }
        let degree = auto_degree(self, rho, tol)?;
        let coeffs = self.coefficients_at_degree(rho, degree)?;
        coeffs.check_truncation(tol)?;
        Ok(coeffs)
    }
}

fn check_scale(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "scale rho must be finite and positive, got {rho}"
        )));
    }
    Ok(())
}

fn check_degree(degree: usize) -> Result<()> {
    if degree < 1 {
        return Err(Error::Domain("truncation degree must be at least 1".into()));
    }
    if degree > MAX_DEGREE {
        return Err(Error::Truncation(format!(
            "degree {degree} exceeds cap {MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// Gauss–Weierstrass coefficients `c_0..c_L`.
pub fn gauss_weierstrass_coeffs(rho: f64, degree: usize) -> Result<LegendreCoefficients> {
    check_scale(rho)?;
    check_degree(degree)?;
    let coeffs = (0..=degree)
        .map(|l| {
            let p = (l * (l + 1)) as f64;
            (2.0 * rho * p).sqrt() * (-rho * p).exp()
        })
        .collect();
    LegendreCoefficients::with_tail_bound(coeffs, gw_tail_bound(rho, degree)?)
}

/// Bound on `Σ_{l>L} (2l+1) c_l² = 4ρ Σ_{l>L} v(l)` with
/// `v(t) = t(t+½)(t+1) e^{−2ρt(t+1)}`.
///
/// Past the peak of `v` the sum is at most `∫_L^∞ v`; before it the peak
/// value is added.
fn gw_tail_bound(rho: f64, degree: usize) -> Result<f64> {
    let l = degree as f64;
    let p = l * (l + 1.0);
    let integral = (-2.0 * rho * p).exp() * (2.0 * rho * p + 1.0) / (8.0 * rho * rho);
    let decreasing = 3.0 * p + 0.5 <= rho * p * (2.0 * l + 1.0).powi(2);
    let peak = if decreasing {
        0.0
    } else {
        let v = UnimodalFunction::builtin(SeriesLabel::V1Est, rho)?;
        find_peak(&v)?.1
    };
    Ok(4.0 * rho * (integral + peak))
}

/// General exponential family coefficients `c_0..c_L`.
pub fn general_exponential_coeffs(
    family: &GeneralExponential,
    rho: f64,
    degree: usize,
) -> Result<LegendreCoefficients> {
    check_scale(rho)?;
    check_degree(degree)?;
    let mut undefined = false;
    let coeffs = (0..=degree)
        .map(|l| {
            family.coefficient(rho, l).unwrap_or_else(|| {
                undefined = true;
                0.0
            })
        })
        .collect();
    let tail = general_tail_bound(family, rho, degree)?;
    let out = LegendreCoefficients::with_tail_bound(coeffs, tail)?;
    Ok(if undefined {
        out.mark_zeroth_undefined()
    } else {
        out
    })
}

/// `∫_L^∞ w + sup_{t≥L} w` for the weighted-energy density `w`.
fn general_tail_bound(family: &GeneralExponential, rho: f64, degree: usize) -> Result<f64> {
    let l = degree as f64;
    let g = family.clone();
    let shifted = UnimodalFunction::custom(rho, move |u| g.energy_density(rho, l + u))?;
    let shape = shifted.shape()?;
    if shape.is_zero() {
        return Ok(0.0);
    }
    let (_, peak) = find_peak(&shifted)?;
    let integral = integrate_semi_infinite(&shifted)?;
    Ok(integral + peak.abs())
}

fn check_tolerance(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Precondition(format!(
            "tolerance must lie in (0, 1), got {tol}"
        )));
    }
    Ok(())
}

/// Truncation degree whose analytic tail bound stays below `tol ×` the
/// retained weighted energy.
///
/// The first candidate solves `ρ^a q(L) ≥ ln(1/tol) + 40` (for Gauss–Weierstrass
/// `L = ⌈√((ln(1/tol) + 40)/ρ)⌉`), plus 10; it grows by 25% until the bound holds.
pub fn auto_degree(family: &WaveletFamily, rho: f64, tol: f64) -> Result<usize> {
    check_scale(rho)?;
    check_tolerance(tol)?;
    let target = (1.0 / tol).ln() + DEGREE_SAFETY_MARGIN;
    let first = match family {
        WaveletFamily::GaussWeierstrass => (target / rho).sqrt().ceil(),
        WaveletFamily::GeneralExponential(g) => smallest_degree_reaching(g, rho, target)? as f64,
        WaveletFamily::Custom(t) => return Ok(t.get(rho)?.degree()),
    };
    if !(first + 10.0 <= MAX_DEGREE as f64) {
        return Err(Error::Truncation(format!(
            "tolerance {tol:e} at rho = {rho:e} needs degree ~{first:e}, above cap {MAX_DEGREE}"
        )));
    }
    let mut degree = first as usize + 10;
    loop {
        let (energy, tail) = match family {
            WaveletFamily::GaussWeierstrass => {
                (gw_energy(rho, degree), gw_tail_bound(rho, degree)?)
            }
            WaveletFamily::GeneralExponential(g) => (
                general_energy(g, rho, degree),
                general_tail_bound(g, rho, degree)?,
            ),
            WaveletFamily::Custom(_) => unreachable!(),
        };
        if tail < tol * energy {
            return Ok(degree);
        }
        let next = (degree as f64 * 1.25).ceil() as usize;
        if next > MAX_DEGREE {
            return Err(Error::Truncation(format!(
                "tail bound {tail:e} still above {tol:e} x energy at the degree cap"
            )));
        }
        degree = next;
    }
}

fn smallest_degree_reaching(g: &GeneralExponential, rho: f64, target: f64) -> Result<usize> {
    let reaches = |l: usize| g.argument(rho, l as f64) >= target;
    if !reaches(MAX_DEGREE) {
        return Err(Error::Truncation(format!(
            "rho^a q(L) stays below {target} for L <= {MAX_DEGREE} at rho = {rho:e}"
        )));
    }
    let (mut lo, mut hi) = (1usize, MAX_DEGREE);
    if reaches(lo) {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn gw_energy(rho: f64, degree: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for l in 1..=degree {
        let p = (l * (l + 1)) as f64;
        acc.add((2 * l + 1) as f64 * 2.0 * rho * p * (-2.0 * rho * p).exp());
    }
    acc.value()
}

fn general_energy(g: &GeneralExponential, rho: f64, degree: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for l in 0..=degree {
        if let Some(c) = g.coefficient(rho, l) {
            acc.add((2 * l + 1) as f64 * c * c);
        }
    }
    acc.value()
}
