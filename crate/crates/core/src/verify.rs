//! Verification suites run by the command-line `verify` subcommand.

use std::fmt;
use std::str::FromStr;

use crate::asymptotics::{
    fit_exponent, geometric_grid, sweep, verify_difference_bound, verify_estimations,
    verify_gw_bound, Check, Quantity,
};
use crate::constants;
use crate::error::{Error, Result};
use crate::families::WaveletFamily;
use crate::series_bounds::{
    bracket_series, closed_form_integral, erfc, find_peak, integrate_semi_infinite_with,
    sum_series, SeriesLabel, UnimodalFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Series sandwich, closed-form integrals, peak asymptotics.
    Lemmas,
    /// Estimation and difference-series bounds on a scale grid.
    Bounds,
    /// Gauss–Weierstrass sweep against the limiting bound.
    Gw,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemmas" => Ok(Suite::Lemmas),
            "bounds" => Ok(Suite::Bounds),
            "gw" => Ok(Suite::Gw),
            "all" => Ok(Suite::All),
            other => Err(Error::Usage(format!(
                "unknown suite '{other}' (expected lemmas, bounds, gw or all)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemmas => "lemmas",
            Suite::Bounds => "bounds",
            Suite::Gw => "gw",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn run_suite(suite: Suite) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Lemmas => lemma_checks()?,
        Suite::Bounds => bound_checks()?,
        Suite::Gw => gw_checks()?,
        Suite::All => {
            let mut all = lemma_checks()?;
            all.extend(bound_checks()?);
            all.extend(gw_checks()?);
            all
        }
    };
    Ok(SuiteReport { checks })
}

fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// 20 scales spread over `[1e-4, 1e-1]`.
pub fn lemma_grid() -> Vec<f64> {
    geometric_grid(1e-4, 1e-1, 20).expect("fixed grid is valid")
}

pub fn lemma_checks() -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let grid = lemma_grid();

    let mut inside = 0;
    let mut total = 0;
    let mut worst = String::new();
    for label in SeriesLabel::BUILTIN {
        for &rho in &grid {
            let v = UnimodalFunction::builtin(label, rho)?;
            let b = bracket_series(&v)?;
            let s = sum_series(&v)?;
            total += 1;
            if b.contains(s, 1e-9 * b.integral.abs()) {
                inside += 1;
            } else if worst.is_empty() {
                worst = format!(", first miss {label} at rho = {rho:e}");
            }
        }
    }
    checks.push(Check::new(
        "series sandwich",
        inside == total,
        format!("{inside}/{total} sums inside their brackets{worst}"),
    ));

    let mut max_rel: f64 = 0.0;
    for label in SeriesLabel::BUILTIN
        .into_iter()
        .filter(|l| l.has_closed_form())
    {
        for &rho in &grid {
            let v = UnimodalFunction::builtin(label, rho)?;
            let q = integrate_semi_infinite_with(&v, 1e-12)?;
            max_rel = max_rel.max(rel_diff(q, closed_form_integral(label, rho)?));
        }
    }
    checks.push(Check::new(
        "closed-form integrals",
        max_rel < 1e-9,
        format!("max relative difference to quadrature {max_rel:.3e}"),
    ));

    let i1 = closed_form_integral(SeriesLabel::V1Est, 0.1)?;
    let i4 = closed_form_integral(SeriesLabel::V4Est, 0.5)?;
    checks.push(Check::new(
        "closed-form spot values",
        (i1 - 12.5).abs() <= 1e-12 && (i4 - 1.0).abs() <= 1e-12,
        format!("int v1(0.1) = {i1}, int v4(0.5) = {i4}"),
    ));

    for c in peak_asymptotics(1e-6)? {
        checks.push(c);
    }

    let worst_c = grid
        .iter()
        .map(|&rho| {
            let lhs = erfc((2.0 * rho).sqrt());
            let rhs = 1.0 - 2.0 * (2.0 / std::f64::consts::PI).sqrt() * rho.sqrt();
            (lhs - rhs).abs() / rho.powf(1.5)
        })
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "erfc expansion",
        worst_c <= 2.0,
        format!("max |erfc(sqrt(2 rho)) - expansion| / rho^1.5 = {worst_c:.4}"),
    ));
    Ok(checks)
}

/// Scaled peak locations and values at one small scale.
pub fn peak_asymptotics(rho: f64) -> Result<Vec<Check>> {
    let sq = rho.sqrt();
    let loc_cases = [
        (SeriesLabel::V1Est, 3f64.sqrt() / 2.0),
        (SeriesLabel::V4Est, 5f64.sqrt() / 2.0),
        (SeriesLabel::V1Diff, 1.0 / 2f64.sqrt()),
        (SeriesLabel::V2Diff, 1.0),
        (SeriesLabel::V3Diff, 0.5),
    ];
    let val_cases = [
        (SeriesLabel::V1Est, rho * sq, constants::v1_peak_constant()),
        (SeriesLabel::V1Diff, rho, constants::v1_diff_peak_constant()),
        (SeriesLabel::V2Diff, rho, constants::v2_diff_peak_constant()),
        (SeriesLabel::V3Diff, sq, constants::v3_diff_peak_constant()),
    ];
    let mut checks = Vec::new();
    for (label, want) in loc_cases {
        let (t, _) = find_peak(&UnimodalFunction::builtin(label, rho)?)?;
        let r = rel_diff(t * sq, want);
        checks.push(Check::new(
            format!("peak location {label}"),
            r <= 0.05,
            format!(
                "t*sqrt(rho) = {:.6} vs {want:.6} ({:.2}%)",
                t * sq,
                100.0 * r
            ),
        ));
    }
    for (label, scale, want) in val_cases {
        let (_, v) = find_peak(&UnimodalFunction::builtin(label, rho)?)?;
        let r = rel_diff(v * scale, want);
        checks.push(Check::new(
            format!("peak value {label}"),
            r <= 0.10,
            format!(
                "scaled value {:.6} vs {want:.6} ({:.2}%)",
                v * scale,
                100.0 * r
            ),
        ));
    }
    Ok(checks)
}

/// Ten scales over `[1e-5, 1e-2]`.
pub fn bounds_grid() -> Vec<f64> {
    geometric_grid(1e-5, 1e-2, 10).expect("fixed grid is valid")
}

pub fn bound_checks() -> Result<Vec<Check>> {
    let grid = bounds_grid();
    let mut checks = verify_estimations(&grid)?.checks;
    checks.extend(verify_difference_bound(&grid)?.checks);
    let tiny = verify_difference_bound(&[1e-6])?;
    let r = tiny.rows[0].sum_over_b;
    checks.push(Check::new(
        "(A+B)/B limit",
        (r - 2.0).abs() <= 0.02,
        format!("(A+B)/B = {r:.9} at rho = 1e-6"),
    ));
    Ok(checks)
}

pub fn gw_checks() -> Result<Vec<Check>> {
    let table = sweep(&WaveletFamily::GaussWeierstrass, 1e-6, 1e-2, 21, 1e-12)?;
    let verdict = verify_gw_bound(&table)?;
    let mut checks = verdict.checks;
    checks.push(Check::new(
        "gw observed limit",
        true,
        format!(
            "U = {:.12} at rho = 1e-6 (recorded, not asserted)",
            verdict.observed_limit
        ),
    ));

    let u = fit_exponent(&table, Quantity::Uncertainty, (1e-6, 1e-3))?;
    checks.push(Check::new(
        "gw U slope",
        u.slope.abs() <= 0.05,
        format!("slope = {:.5}", u.slope),
    ));
    let m = fit_exponent(&table, Quantity::VarMomentum, (1e-6, 1e-3))?;
    checks.push(Check::new(
        "gw var_M slope",
        (m.slope + 1.0).abs() <= 0.02,
        format!("slope = {:.5}", m.slope),
    ));
    for (rho, tol) in [(1e-4, 0.05), (1e-6, 0.005)] {
        let row = table
            .rows
            .iter()
            .find(|r| rel_diff(r.rho, rho) < 1e-9)
            .ok_or_else(|| Error::InternalConsistency(format!("grid misses rho = {rho:e}")))?;
        let dev = (row.rho_times_var_momentum - 1.0).abs();
        checks.push(Check::new(
            format!("gw rho*var_M at {rho:e}"),
            dev <= tol,
            format!("|rho var_M - 1| = {dev:.3e}"),
        ));
    }
    let limit = constants::space_variance_constant() + 0.01;
    let worst = table
        .rows
        .iter()
        .filter(|r| r.rho <= 1e-3 * (1.0 + 1e-9))
        .map(|r| r.var_space_over_rho)
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::new(
        "gw var_S/rho bound",
        worst <= limit,
        format!("max var_S/rho = {worst:.6} for rho <= 1e-3, limit {limit:.6}"),
    ));
    Ok(checks)
}
