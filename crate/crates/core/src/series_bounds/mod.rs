//! Integral-plus-peak sandwich bounds for series of unimodal terms.
//!
//! For `v` continuous on `[0, ∞)`, increasing up to `t₀` and decreasing
//! afterwards, with `v → 0` at infinity,
//!
//! ```text
//! ∫₀^∞ v(t) dt − v(t₀)  ≤  Σ_{l≥1} v(l)  ≤  ∫₀^∞ v(t) dt + v(t₀)
//! ```
//!
//! The module provides the seven concrete term functions that arise in the
//! Gauss–Weierstrass analysis, their closed-form integrals, a numerical
//! integral for everything else, the peak finder, and the bracket itself.

pub mod peak;
pub mod quadrature;
pub mod special;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

pub use special::{erf, erfc};

use quadrature::QuadratureOptions;

/// Which term function a [`UnimodalFunction`] evaluates.
///
/// `*Est` are the terms of the three estimation series; `*Diff` split the
/// difference `A − B` of the space-variance numerator and denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesLabel {
    /// `t(t+½)(t+1) e^{−2ρt(t+1)}`
    V1Est,
    /// `t(t+1)² e^{−2ρ(t+1)²}`
    V2Est,
    /// `(t+1)³ e^{−2ρ(t+1)²}`
    V3Est,
    /// `t²(t+½)(t+1)² e^{−2ρt(t+1)}`
    V4Est,
    /// `[t(t+½)(t+1) − (t+1)³] e^{−2ρt(t+1)}`, negative
    V1Diff,
    /// `(t+1)³ [e^{−2ρt(t+1)} − e^{−2ρ(t+1)²}]`
    V2Diff,
    /// `[(t+1)³ − (t+1)²√(t(t+2))] e^{−2ρ(t+1)²}`
    V3Diff,
    Custom,
}

impl SeriesLabel {
    pub const BUILTIN: [SeriesLabel; 7] = [
        SeriesLabel::V1Est,
        SeriesLabel::V2Est,
        SeriesLabel::V3Est,
        SeriesLabel::V4Est,
        SeriesLabel::V1Diff,
        SeriesLabel::V2Diff,
        SeriesLabel::V3Diff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SeriesLabel::V1Est => "V1_EST",
            SeriesLabel::V2Est => "V2_EST",
            SeriesLabel::V3Est => "V3_EST",
            SeriesLabel::V4Est => "V4_EST",
            SeriesLabel::V1Diff => "V1_DIFF",
            SeriesLabel::V2Diff => "V2_DIFF",
            SeriesLabel::V3Diff => "V3_DIFF",
            SeriesLabel::Custom => "CUSTOM",
        }
    }

    pub fn has_closed_form(self) -> bool {
        !matches!(self, SeriesLabel::V3Diff | SeriesLabel::Custom)
    }
}

impl fmt::Display for SeriesLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A term function `v(t)` together with its scale parameter.
#[derive(Clone)]
pub struct UnimodalFunction {
    label: SeriesLabel,
    rho: f64,
    eval: Evaluator,
}

impl fmt::Debug for UnimodalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UnimodalFunction")
            .field("label", &self.label)
            .field("rho", &self.rho)
            .finish()
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "rho must be finite and positive, got {rho}"
        )));
    }
    Ok(())
}

impl UnimodalFunction {
    pub fn builtin(label: SeriesLabel, rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let eval: Evaluator = match label {
            SeriesLabel::V1Est => Arc::new(move |t: f64| {
                t * (t + 0.5) * (t + 1.0) * (-2.0 * rho * t * (t + 1.0)).exp()
            }),
            SeriesLabel::V2Est => Arc::new(move |t: f64| {
                let s = t + 1.0;
                t * s * s * (-2.0 * rho * s * s).exp()
            }),
            SeriesLabel::V3Est => Arc::new(move |t: f64| {
                let s = t + 1.0;
                s * s * s * (-2.0 * rho * s * s).exp()
            }),
            SeriesLabel::V4Est => Arc::new(move |t: f64| {
                let p = t * (t + 1.0);
                p * p * (t + 0.5) * (-2.0 * rho * p).exp()
            }),
            // t(t+½)(t+1) − (t+1)³ = −(t+1)(3t/2 + 1)
            SeriesLabel::V1Diff => Arc::new(move |t: f64| {
                -(t + 1.0) * (1.5 * t + 1.0) * (-2.0 * rho * t * (t + 1.0)).exp()
            }),
            // e^{−2ρt(t+1)} − e^{−2ρ(t+1)²} = −e^{−2ρt(t+1)} · expm1(−2ρ(t+1))
            SeriesLabel::V2Diff => Arc::new(move |t: f64| {
                let s = t + 1.0;
                -s * s * s * (-2.0 * rho * t * s).exp() * (-2.0 * rho * s).exp_m1()
            }),
            // (t+1) − √(t(t+2)) = 1 / ((t+1) + √(t(t+2)))
            SeriesLabel::V3Diff => Arc::new(move |t: f64| {
                let s = t + 1.0;
                s * s / (s + (t * (t + 2.0)).sqrt()) * (-2.0 * rho * s * s).exp()
            }),
            SeriesLabel::Custom => {
                return Err(Error::Usage(
                    "CUSTOM functions are built with UnimodalFunction::custom".into(),
                ))
            }
        };
        Ok(Self { label, rho, eval })
    }

    pub fn custom<F>(rho: f64, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        check_rho(rho)?;
        Ok(Self {
            label: SeriesLabel::Custom,
            rho,
            eval: Arc::new(f),
        })
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn label(&self) -> SeriesLabel {
        self.label
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Runs the shape probe; see [`Shape`].
    pub fn shape(&self) -> Result<Shape> {
        probe(self)
    }
}

/// Result of probing a function on the geometric grid `t = 2^{k/8}, k ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shape {
    /// `+1` for a peak, `−1` for a trough, `0` for the zero function.
    pub orientation: f64,
    /// `v(0)`.
    pub value_at_zero: f64,
    /// Largest `|v|` seen on the grid.
    pub max_abs: f64,
    /// First grid point past the extremum where `|v| < 1e-18 · max_abs`.
    pub cutoff: f64,
}

impl Shape {
    pub fn is_zero(&self) -> bool {
        self.orientation == 0.0
    }
}

const DECAY_RATIO: f64 = 1e-18;
const MAX_CUTOFF: f64 = 1e12;

fn probe(v: &UnimodalFunction) -> Result<Shape> {
    let step = 2f64.powf(0.125);
    let value_at_zero = v.eval(0.0);
    let mut grid = Vec::new();
    let mut t = 1.0;
    let mut max_abs = 0.0_f64;
    let mut argmax = 0usize;
    loop {
        let y = v.eval(t);
        if !y.is_finite() {
            return Err(Error::Shape(format!(
                "{} is not finite at t = {t:e}",
                v.label
            )));
        }
        if y.abs() > max_abs {
            max_abs = y.abs();
            argmax = grid.len();
        }
        grid.push((t, y));
        let past_peak = grid.len() > argmax + 1;
        if past_peak && (y.abs() < DECAY_RATIO * max_abs || (max_abs == 0.0 && t >= 64.0)) {
            break;
        }
        t *= step;
        if t > MAX_CUTOFF {
            return Err(Error::Convergence(format!(
                "{} does not decay below {DECAY_RATIO:e} x peak for t <= {MAX_CUTOFF:e}",
                v.label
            )));
        }
    }
    let cutoff = grid.last().map(|p| p.0).unwrap_or(1.0);
    if max_abs == 0.0 && value_at_zero == 0.0 {
        return Ok(Shape {
            orientation: 0.0,
            value_at_zero,
            max_abs,
            cutoff,
        });
    }
    let orientation = if grid[argmax].1 < 0.0 { -1.0 } else { 1.0 };
    let floor = 1e-12 * max_abs;
    if let Some(&(t, y)) = grid.iter().find(|(_, y)| orientation * y < -floor) {
        return Err(Error::Shape(format!(
            "{} changes sign: v({t:e}) = {y:e} against extremum {:e}",
            v.label,
            orientation * max_abs
        )));
    }
    let mut descending = false;
    for w in grid.windows(2) {
        let d = orientation * (w[1].1 - w[0].1);
        if d < 0.0 {
            descending = true;
        } else if d > 0.0 && descending {
            return Err(Error::Shape(format!(
                "{} is not unimodal: rises again near t = {:e}",
                v.label, w[1].0
            )));
        }
    }
    Ok(Shape {
        orientation,
        value_at_zero,
        max_abs,
        cutoff,
    })
}

/// Location and value of the extremum of `v` (maximum, or minimum for a
/// negative function). Golden-section search on a doubling bracket from `t = 1`.
pub fn find_peak(v: &UnimodalFunction) -> Result<(f64, f64)> {
    let shape = probe(v)?;
    if shape.is_zero() {
        return Err(Error::Shape(format!(
            "{} vanishes on the probe grid",
            v.label
        )));
    }
    peak_with_orientation(v, shape.orientation)
}

fn peak_with_orientation(v: &UnimodalFunction, orientation: f64) -> Result<(f64, f64)> {
    let oriented = |t: f64| orientation * v.eval(t);
    let (lo, hi) = peak::bracket_maximum(&oriented)?;
    let (t, _) = peak::golden_section_max(&oriented, lo, hi, 1e-10);
    Ok((t, v.eval(t)))
}

/// `∫₀^∞ v(t) dt` from the transcribed antiderivatives.
pub fn closed_form_integral(label: SeriesLabel, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let r = rho;
    let value = match label {
        SeriesLabel::V1Est => 1.0 / (8.0 * r * r),
        SeriesLabel::V2Est => {
            (2.0 * (-2.0 * r).exp() - (2.0 * PI * r).sqrt() * erfc((2.0 * r).sqrt()))
                / (16.0 * r * r)
        }
        SeriesLabel::V3Est => (1.0 + 2.0 * r) * (-2.0 * r).exp() / (8.0 * r * r),
        SeriesLabel::V4Est => 1.0 / (8.0 * r * r * r),
        SeriesLabel::V1Diff => {
            -(14.0 * r.sqrt()
                + (r / 2.0).exp() * (2.0 * PI).sqrt() * (3.0 + r) * erfc((r / 2.0).sqrt()))
                / (32.0 * r.powf(1.5))
        }
        SeriesLabel::V2Diff => {
            // −4(1+2ρ)e^{−2ρ} + 2(2+7ρ) rewritten as −4[expm1(−2ρ) + 2ρe^{−2ρ}] + 14ρ
            let polynomial_part =
                -4.0 * ((-2.0 * r).exp_m1() + 2.0 * r * (-2.0 * r).exp()) + 14.0 * r;
            let erfc_part =
                (3.0 + r) * (2.0 * PI * r).sqrt() * (r / 2.0).exp() * erfc((r / 2.0).sqrt());
            (polynomial_part + erfc_part) / (32.0 * r * r)
        }
        SeriesLabel::V3Diff | SeriesLabel::Custom => {
            return Err(Error::Usage(format!("{label} has no closed-form integral")))
        }
    };
    Ok(value)
}

/// Adaptive quadrature of `∫₀^∞ v(t) dt` on `[0, cutoff]`, where the cutoff is
/// found by doubling past the peak until `|v| < 1e-18 × |peak|`.
pub fn integrate_semi_infinite(v: &UnimodalFunction) -> Result<f64> {
    integrate_semi_infinite_with(v, 1e-9)
}

/// As [`integrate_semi_infinite`] with an explicit relative tolerance.
pub fn integrate_semi_infinite_with(v: &UnimodalFunction, rel_tol: f64) -> Result<f64> {
    let shape = probe(v)?;
    if shape.is_zero() {
        return Ok(0.0);
    }
    let (loc, peak_value) = peak_with_orientation(v, shape.orientation)?;
    let scale = peak_value.abs();
    let mut cutoff = loc.max(1.0) * 2.0;
    while v.eval(cutoff).abs() >= DECAY_RATIO * scale {
        cutoff *= 2.0;
        if cutoff > MAX_CUTOFF {
            return Err(Error::Convergence(format!(
                "{} has no decay cutoff below t = {MAX_CUTOFF:e}",
                v.label
            )));
        }
    }
    let opts = QuadratureOptions {
        abs_tol: 1e-12 * scale,
        rel_tol,
        max_intervals: 5000,
    };
    let f = |t: f64| v.eval(t);
    Ok(quadrature::integrate(f, 0.0, cutoff, &[loc.min(cutoff), 1.0], opts)?.value)
}

/// Lower and upper bounds on `Σ_{l≥1} v(l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBracket {
    pub lower: f64,
    pub upper: f64,
    pub integral: f64,
    pub peak_location: f64,
    pub peak_value: f64,
}

impl SeriesBracket {
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.lower - slack <= x && x <= self.upper + slack
    }
}

/// `[∫v − |v(t₀)|, ∫v + |v(t₀)|]`. The closed-form integral is used where one
/// exists, quadrature otherwise. Negative functions are bracketed through `−v`;
/// the zero function gives `[0, 0]` with `peak_location = 0`.
pub fn bracket_series(v: &UnimodalFunction) -> Result<SeriesBracket> {
    let shape = probe(v)?;
    if shape.is_zero() {
        return Ok(SeriesBracket {
            lower: 0.0,
            upper: 0.0,
            integral: 0.0,
            peak_location: 0.0,
            peak_value: 0.0,
        });
    }
    let (peak_location, peak_value) = peak_with_orientation(v, shape.orientation)?;
    let integral = if v.label.has_closed_form() {
        closed_form_integral(v.label, v.rho)?
    } else {
        integrate_semi_infinite(v)?
    };
    Ok(SeriesBracket {
        lower: integral - peak_value.abs(),
        upper: integral + peak_value.abs(),
        integral,
        peak_location,
        peak_value,
    })
}

/// Brute-force `Σ_{l≥1} v(l)`, stopping past the peak once terms fall below
/// `1e-18 ×` the peak magnitude.
pub fn sum_series(v: &UnimodalFunction) -> Result<f64> {
    let shape = probe(v)?;
    if shape.is_zero() {
        return Ok(0.0);
    }
    let (loc, peak_value) = peak_with_orientation(v, shape.orientation)?;
    let threshold = DECAY_RATIO * peak_value.abs();
    let mut acc = CompensatedSum::new();
    let mut l = 1u64;
    loop {
        let term = v.eval(l as f64);
        acc.add(term);
        if l as f64 > loc && term.abs() < threshold {
            break;
        }
        l += 1;
        if l as f64 > MAX_CUTOFF {
            return Err(Error::Convergence(format!(
                "{} series does not converge",
                v.label
            )));
        }
    }
    Ok(acc.value())
}
