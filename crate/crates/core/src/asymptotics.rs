//! Scale sweeps, log-log exponent fits, and checks of the small-scale
//! asymptotics of the Gauss–Weierstrass family.

use std::fmt;

use rayon::prelude::*;

use crate::constants;
use crate::error::{Error, Result};
use crate::families::{FamilyDescriptor, WaveletFamily};
use crate::format::sig17;
use crate::localization::{uncertainty_product, LocalizationReport, UNCERTAINTY_SLACK};
use crate::series_bounds::{sum_series, SeriesLabel, UnimodalFunction};

/// Headroom on `U ≤ B` for finite `ρ`.
pub const GW_BOUND_SLACK: f64 = 1e-3;
/// Largest scale accepted by the asymptotic checks.
pub const ASYMPTOTIC_RHO_MAX: f64 = 1e-1;
/// Largest scale accepted by [`verify_gw_bound`].
pub const GW_RHO_MAX: f64 = 1e-2;

/// `n` scales from `rho_max` down to `rho_min`, equally spaced in `log ρ`.
pub fn geometric_grid(rho_min: f64, rho_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(rho_min > 0.0 && rho_min.is_finite() && rho_max.is_finite()) {
        return Err(Error::Precondition(format!(
            "scales must be finite and positive, got [{rho_min}, {rho_max}]"
        )));
    }
    if !(rho_min < rho_max) {
        return Err(Error::Precondition(format!(
            "rho_min = {rho_min} must be below rho_max = {rho_max}"
        )));
    }
    if points < 2 {
        return Err(Error::Precondition(format!(
            "a sweep needs at least 2 points, got {points}"
        )));
    }
    // interpolating log10 puts decade points exactly on 1e-k
    let (top, bottom) = (rho_max.log10(), rho_min.log10());
    let last = points - 1;
    Ok((0..points)
        .map(|i| match i {
            0 => rho_max,
            i if i == last => rho_min,
            i => 10f64.powf(top + (bottom - top) * i as f64 / last as f64),
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub rho: f64,
    pub report: LocalizationReport,
    pub rho_times_var_momentum: f64,
    pub var_space_over_rho: f64,
}

/// Rows in strictly decreasing `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub family: FamilyDescriptor,
    pub rows: Vec<SweepRow>,
}

pub const CSV_HEADER: &str =
    "rho,degree,var_space,var_momentum,uncertainty,rho_varM,varS_over_rho,truncation_error";

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                sig17(r.rho),
                r.report.degree_used,
                sig17(r.report.var_space),
                sig17(r.report.var_momentum),
                sig17(r.report.uncertainty),
                sig17(r.rho_times_var_momentum),
                sig17(r.var_space_over_rho),
                sig17(r.report.truncation_error),
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let report = r.report.to_json();
                format!(
                    "{{\"rho\":{},{},\"rho_varM\":{},\"varS_over_rho\":{}}}",
                    sig17(r.rho),
                    &report[1..report.len() - 1],
                    sig17(r.rho_times_var_momentum),
                    sig17(r.var_space_over_rho),
                )
            })
            .collect();
        let family = self.family.to_string().replace('"', "\\\"");
        format!("{{\"family\":\"{family}\",\"rows\":[{}]}}", rows.join(","))
    }

    pub fn rho_max(&self) -> Option<f64> {
        self.rows.first().map(|r| r.rho)
    }
}

fn row_at(family: &WaveletFamily, rho: f64, tol: f64) -> Result<SweepRow> {
    let coeffs = family.coefficients(rho, tol)?;
    let report = uncertainty_product(&coeffs)?;
    Ok(SweepRow {
        rho,
        rho_times_var_momentum: rho * report.var_momentum,
        var_space_over_rho: report.var_space / rho,
        report,
    })
}

/// Sweep over a geometric grid of `points` scales in `[rho_min, rho_max]`.
pub fn sweep(
    family: &WaveletFamily,
    rho_min: f64,
    rho_max: f64,
    points: usize,
    tol: f64,
) -> Result<SweepTable> {
    sweep_scales(family, &geometric_grid(rho_min, rho_max, points)?, tol)
}

/// Sweep over explicit scales. Rows are evaluated in parallel and returned in
/// decreasing `ρ`; a failing row is reported with its scale.
pub fn sweep_scales(family: &WaveletFamily, scales: &[f64], tol: f64) -> Result<SweepTable> {
    if scales.is_empty() {
        return Err(Error::Precondition("no scales to sweep".into()));
    }
    let mut grid = scales.to_vec();
    if let Some(bad) = grid.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
        return Err(Error::Precondition(format!(
            "scale must be finite and positive, got {bad}"
        )));
    }
    grid.sort_by(|a, b| b.total_cmp(a));
    if grid.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("sweep scales must be distinct".into()));
    }
    let rows = grid
        .par_iter()
        .map(|&rho| {
            row_at(family, rho, tol).map_err(|e| Error::AtScale {
                rho,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        family: family.descriptor(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Uncertainty,
    VarSpace,
    VarMomentum,
}

impl Quantity {
    fn of(self, r: &LocalizationReport) -> f64 {
        match self {
            Quantity::Uncertainty => r.uncertainty,
            Quantity::VarSpace => r.var_space,
            Quantity::VarMomentum => r.var_momentum,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Uncertainty => "U",
            Quantity::VarSpace => "var_space",
            Quantity::VarMomentum => "var_momentum",
        })
    }
}

/// Least-squares line through `(ln ρ, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub window: (f64, f64),
}

/// Fit `ln y = slope · ln ρ + intercept` over rows with `ρ` in `window`
/// (endpoints matched to 1e-9 relative).
pub fn fit_exponent(
    table: &SweepTable,
    quantity: Quantity,
    window: (f64, f64),
) -> Result<ExponentFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo <= hi) {
        return Err(Error::Precondition(format!(
            "invalid fit window [{lo}, {hi}]"
        )));
    }
    let points: Vec<(f64, f64)> = table
        .rows
        .iter()
        .filter(|r| r.rho >= lo * (1.0 - 1e-9) && r.rho <= hi * (1.0 + 1e-9))
        .map(|r| (r.rho, quantity.of(&r.report)))
        .collect();
    fit_power_law(&points, window)
}

/// Least-squares power law through `(ρ, y)` pairs.
pub fn fit_power_law(points: &[(f64, f64)], window: (f64, f64)) -> Result<ExponentFit> {
    if points.len() < 3 {
        return Err(Error::Precondition(format!(
            "exponent fit needs at least 3 points in the window, got {}",
            points.len()
        )));
    }
    if let Some((rho, y)) = points.iter().find(|(_, y)| !(*y > 0.0)) {
        return Err(Error::Fit(format!(
            "nonpositive value {y} at rho = {rho:e}"
        )));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|(r, _)| r.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|(_, y)| y.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Fit("all scales in the window coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    Ok(ExponentFit {
        slope,
        intercept,
        residual_rms: (ss / n).sqrt(),
        window,
    })
}

/// One named pass/fail condition of a verification suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GwBoundVerdict {
    pub holds: bool,
    pub max_uncertainty: f64,
    pub bound: f64,
    /// `U` at the smallest scale in the table.
    pub observed_limit: f64,
    pub checks: Vec<Check>,
}

/// Checks `1 ≤ U ≤ B` on a Gauss–Weierstrass sweep, and that successive
/// changes of `U` shrink over the fine half of the table.
pub fn verify_gw_bound(table: &SweepTable) -> Result<GwBoundVerdict> {
    if table.family != FamilyDescriptor::GaussWeierstrass {
        return Err(Error::Usage(format!(
            "the bound applies to the Gauss–Weierstrass family, not {}",
            table.family
        )));
    }
    let rho_max = table
        .rho_max()
        .ok_or_else(|| Error::Precondition("empty sweep table".into()))?;
    if rho_max > GW_RHO_MAX {
        return Err(Error::Precondition(format!(
            "table reaches rho = {rho_max:e}; the asymptotic check needs rho <= {GW_RHO_MAX:e}"
        )));
    }
    let bound = constants::gw_uncertainty_bound();
    let us: Vec<f64> = table.rows.iter().map(|r| r.report.uncertainty).collect();
    let min_u = us.iter().copied().fold(f64::INFINITY, f64::min);
    let max_u = us.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let mut checks = vec![
        Check::new(
            "gw uncertainty principle",
            min_u >= 1.0 - UNCERTAINTY_SLACK,
            format!("min U = {min_u:.12}"),
        ),
        Check::new(
            "gw upper bound",
            max_u <= bound + GW_BOUND_SLACK,
            format!("max U = {max_u:.12}, B = {bound:.12}"),
        ),
    ];

    let steps: Vec<f64> = us.windows(2).map(|w| (w[0] - w[1]).abs()).collect();
    let fine = &steps[steps.len() / 2..];
    let shrinking = fine.windows(2).all(|w| w[1] <= w[0] + 1e-12 * bound);
    checks.push(Check::new(
        "gw convergence signal",
        shrinking,
        format!(
            "|dU| over fine half: {}",
            fine.iter()
                .map(|d| format!("{d:.3e}"))
                .collect::<Vec<_>>()
                .join(" ")
        ),
    ));
    Ok(GwBoundVerdict {
        holds: checks.iter().all(|c| c.passed),
        max_uncertainty: max_u,
        bound,
        observed_limit: *us.last().unwrap(),
        checks,
    })
}

/// Slack `δ(ρ) = K√ρ` fitted on the coarse half of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlackFit {
    pub k: f64,
    /// Every fine-half point satisfies `ratio ≤ 1 + K√ρ`.
    pub validated: bool,
    /// Largest `ratio / (1 + K√ρ)` over the fine half (0 if the half is empty).
    pub worst_fine: f64,
}

/// `points` are `(ρ, ratio)` with the claim `ratio ≤ 1 + O(√ρ)`, sorted by
/// decreasing `ρ`. The first `⌈n/2⌉` points fix `K`, the rest validate it.
pub fn fit_slack(points: &[(f64, f64)]) -> SlackFit {
    let split = points.len().div_ceil(2);
    let (coarse, fine) = points.split_at(split);
    let k = coarse
        .iter()
        .map(|(rho, r)| (r - 1.0) / rho.sqrt())
        .fold(0.0, f64::max);
    let worst_fine = fine
        .iter()
        .map(|(rho, r)| r / (1.0 + k * rho.sqrt()))
        .fold(0.0, f64::max);
    SlackFit {
        k,
        validated: worst_fine <= 1.0 + 1e-12,
        worst_fine,
    }
}

/// Brute-force Gauss–Weierstrass series at one scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GwSums {
    pub rho: f64,
    /// `A = Σ l(l+½)(l+1) e^{−2ρl(l+1)}`
    pub a: f64,
    /// `B = Σ (l+1)²√(l(l+2)) e^{−2ρ(l+1)²}`
    pub b: f64,
    /// `A − B`, summed from the three difference terms.
    pub difference: f64,
    /// `Σ l²(l+½)(l+1)² e^{−2ρl(l+1)}`
    pub s4: f64,
}

fn v23(rho: f64) -> Result<UnimodalFunction> {
    UnimodalFunction::custom(rho, move |t: f64| {
        let s = t + 1.0;
        s * s * (t * (t + 2.0)).sqrt() * (-2.0 * rho * s * s).exp()
    })
}

pub fn gw_series_sums(rho: f64) -> Result<GwSums> {
    let sum = |label| sum_series(&UnimodalFunction::builtin(label, rho)?);
    let a = sum(SeriesLabel::V1Est)?;
    let b = sum_series(&v23(rho)?)?;
    let s4 = sum(SeriesLabel::V4Est)?;
    let difference =
        sum(SeriesLabel::V1Diff)? + sum(SeriesLabel::V2Diff)? + sum(SeriesLabel::V3Diff)?;
    Ok(GwSums {
        rho,
        a,
        b,
        difference,
        s4,
    })
}

fn checked_grid(grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() {
        return Err(Error::Precondition("empty scale grid".into()));
    }
    if let Some(r) = grid
        .iter()
        .find(|r| !(**r > 0.0 && **r <= ASYMPTOTIC_RHO_MAX))
    {
        return Err(Error::Precondition(format!(
            "grid scale {r} outside (0, {ASYMPTOTIC_RHO_MAX}]"
        )));
    }
    let mut g = grid.to_vec();
    g.sort_by(|a, b| b.total_cmp(a));
    g.dedup();
    Ok(g)
}

fn sums_on(grid: &[f64]) -> Result<Vec<GwSums>> {
    grid.par_iter()
        .map(|&rho| {
            gw_series_sums(rho).map_err(|e| Error::AtScale {
                rho,
                source: Box::new(e),
            })
        })
        .collect()
}

fn slack_check(name: &str, points: &[(f64, f64)]) -> (SlackFit, Check) {
    let fit = fit_slack(points);
    let detail = format!(
        "K = {:.4e}, worst fine-half ratio = {:.6}, max ratio = {:.6}",
        fit.k,
        fit.worst_fine,
        points.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    );
    (fit, Check::new(name, fit.validated, detail))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationRow {
    pub rho: f64,
    pub sums: GwSums,
    /// `|A − 1/(8ρ²)| ρ^{3/2} / (3√3e^{−3/2}/8)`
    pub ratio_v1: f64,
    /// `(1/(8ρ²) − B) ρ^{3/2} / ((√(2π) + 6√3e^{−3/2})/16)`
    pub ratio_v23_lower: f64,
    /// `(B − 1/(8ρ²)) ρ^{3/2} / (3√3e^{−3/2}/8)`
    pub ratio_v23_upper: f64,
    /// `|S₄ − 1/(8ρ³)| ρ^{5/2} / (25√5e^{−5/2}/32)`
    pub ratio_v4: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationVerdict {
    pub holds: bool,
    pub rows: Vec<EstimationRow>,
    pub slack_v1: SlackFit,
    pub slack_v23_lower: SlackFit,
    pub slack_v23_upper: SlackFit,
    pub slack_v4: SlackFit,
    /// Side of the two-sided `B` estimate that comes closest to its constant.
    pub v23_binding: BindingSide,
    pub checks: Vec<Check>,
}

/// Normalized deviations of the brute-force `A`, `B` and `S₄` from their
/// leading terms, checked against the estimation constants with fitted slack.
pub fn verify_estimations(grid: &[f64]) -> Result<EstimationVerdict> {
    let grid = checked_grid(grid)?;
    let c1 = constants::v1_peak_constant();
    let c23 = constants::v23_lower_constant();
    let c4 = constants::v4_peak_constant();
    let rows: Vec<EstimationRow> = sums_on(&grid)?
        .into_iter()
        .map(|s| {
            let rho = s.rho;
            let lead2 = 1.0 / (8.0 * rho * rho);
            let lead3 = lead2 / rho;
            let n32 = rho * rho.sqrt();
            EstimationRow {
                rho,
                sums: s,
                ratio_v1: (s.a - lead2).abs() * n32 / c1,
                ratio_v23_lower: (lead2 - s.b) * n32 / c23,
                ratio_v23_upper: (s.b - lead2) * n32 / c1,
                ratio_v4: (s.s4 - lead3).abs() * rho * n32 / c4,
            }
        })
        .collect();
    let pts = |f: fn(&EstimationRow) -> f64| rows.iter().map(|r| (r.rho, f(r))).collect::<Vec<_>>();
    let (slack_v1, c_v1) = slack_check("estimation v1", &pts(|r| r.ratio_v1));
    let (slack_lo, c_lo) = slack_check("estimation v23 lower", &pts(|r| r.ratio_v23_lower));
    let (slack_up, c_up) = slack_check("estimation v23 upper", &pts(|r| r.ratio_v23_upper));
    let (slack_v4, c_v4) = slack_check("estimation v4", &pts(|r| r.ratio_v4));
    let max_of =
        |f: fn(&EstimationRow) -> f64| rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let v23_binding = if max_of(|r| r.ratio_v23_lower) >= max_of(|r| r.ratio_v23_upper) {
        BindingSide::Lower
    } else {
        BindingSide::Upper
    };
    let checks = vec![c_v1, c_lo, c_up, c_v4];
    Ok(EstimationVerdict {
        holds: checks.iter().all(|c| c.passed),
        rows,
        slack_v1,
        slack_v23_lower: slack_lo,
        slack_v23_upper: slack_up,
        slack_v4,
        v23_binding,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceRow {
    pub rho: f64,
    pub sums: GwSums,
    /// `(A − B) ρ / (1/8 + 3/(4e) + 2/e²)`
    pub ratio_difference: f64,
    /// `((A − B)/B) / ((1 + 6/e + 16/e²) ρ)`
    pub ratio_chain: f64,
    /// `(A + B)/B`, which tends to 2.
    pub sum_over_b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceVerdict {
    pub holds: bool,
    pub rows: Vec<DifferenceRow>,
    pub slack_difference: SlackFit,
    pub slack_chain: SlackFit,
    pub checks: Vec<Check>,
}

/// Checks `(A − B)ρ ≤ (1/8 + 3/(4e) + 2/e²)(1 + K√ρ)` and the resulting
/// `(A − B)/B ≤ (1 + 6/e + 16/e²)ρ(1 + K″√ρ)`.
pub fn verify_difference_bound(grid: &[f64]) -> Result<DifferenceVerdict> {
    let grid = checked_grid(grid)?;
    let cd = constants::difference_series_constant();
    let cr = constants::difference_ratio_constant();
    let rows: Vec<DifferenceRow> = sums_on(&grid)?
        .into_iter()
        .map(|s| DifferenceRow {
            rho: s.rho,
            sums: s,
            ratio_difference: s.difference * s.rho / cd,
            ratio_chain: s.difference / s.b / (cr * s.rho),
            sum_over_b: (s.a + s.b) / s.b,
        })
        .collect();
    let pts = |f: fn(&DifferenceRow) -> f64| rows.iter().map(|r| (r.rho, f(r))).collect::<Vec<_>>();
    let (slack_difference, c_d) = slack_check("difference series", &pts(|r| r.ratio_difference));
    let (slack_chain, c_c) = slack_check("difference chain", &pts(|r| r.ratio_chain));
    let checks = vec![c_d, c_c];
    Ok(DifferenceVerdict {
        holds: checks.iter().all(|c| c.passed),
        rows,
        slack_difference,
        slack_chain,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::GeneralExponential;
    use crate::localization::var_space;

    fn gw() -> WaveletFamily {
        WaveletFamily::GaussWeierstrass
    }

    #[test]
    fn grid_endpoints_and_order() {
        let g = geometric_grid(1e-6, 1e-1, 26).unwrap();
        assert_eq!(g.len(), 26);
        assert_eq!(g[0], 1e-1);
        assert_eq!(g[25], 1e-6);
        assert!(g.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(g[5], 1e-2);
        assert!(geometric_grid(1e-2, 1e-2, 5).is_err());
        assert!(geometric_grid(1e-1, 1e-2, 5).is_err());
        assert!(geometric_grid(1e-3, 1e-2, 1).is_err());
        assert!(geometric_grid(0.0, 1e-2, 4).is_err());
    }

    #[test]
    fn gw_default_sweep() {
        let t = sweep(&gw(), 1e-6, 1e-1, 26, 1e-12).unwrap();
        assert_eq!(t.rows.len(), 26);
        for r in &t.rows {
            assert!(
                r.report.uncertainty >= 1.0 && r.report.uncertainty <= 3.279,
                "{r:?}"
            );
            assert!(r.report.degree_used <= 10_000);
            assert!(r.report.truncation_error <= 1e-12);
        }
        assert!(matches!(
            sweep(&gw(), 1e-2, 1e-2, 26, 1e-12),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sweep_is_deterministic() {
        let a = sweep(&gw(), 1e-5, 1e-2, 9, 1e-12).unwrap();
        let b = sweep(&gw(), 1e-5, 1e-2, 9, 1e-12).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a, b);
    }

    #[test]
    fn gw_momentum_regime() {
        let t = sweep(&gw(), 1e-6, 1e-2, 13, 1e-12).unwrap();
        assert!(t
            .rows
            .windows(2)
            .all(|w| w[0].report.var_momentum < w[1].report.var_momentum));
        for r in &t.rows {
            assert!(r.rho_times_var_momentum > 0.5 && r.rho_times_var_momentum < 1.5);
        }
        let first = (t.rows[0].rho_times_var_momentum - 1.0).abs();
        let last = (t.rows.last().unwrap().rho_times_var_momentum - 1.0).abs();
        assert!(last < first);
    }

    #[test]
    fn csv_layout() {
        let t = sweep(&gw(), 1e-3, 1e-2, 3, 1e-12).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("1.0000000000000000e-2,"));
        assert_eq!(lines[1].split(',').count(), 8);
        let json = t.to_json();
        assert!(json.starts_with("{\"family\":\"gauss-weierstrass\",\"rows\":[{\"rho\":1.0000000000000000e-2,\"var_space\":"));
    }

    #[test]
    fn sweep_errors_name_the_scale() {
        // too tight a tolerance forces the degree past the cap at tiny ρ
        let g = GeneralExponential::new(1.0, 1.0, vec![0.0, 1.0]).unwrap();
        let err = sweep(&WaveletFamily::GeneralExponential(g), 1e-9, 1e-8, 2, 1e-12).unwrap_err();
        assert!(matches!(err, Error::AtScale { .. }), "{err}");
        assert!(err.to_string().contains("rho ="));
    }

    #[test]
    fn general_family_value_at_one_scale() {
        // 40-digit evaluation of the truncated series, l ≤ 10⁴
        let g = GeneralExponential::new(1.0, 1.0, vec![0.0, 1.0]).unwrap();
        let t = sweep_scales(&WaveletFamily::GeneralExponential(g), &[0.01], 1e-12).unwrap();
        let u = t.rows[0].report.uncertainty;
        assert!((u - 1.297_045_772_201_894_3).abs() < 1e-10, "{u}");
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, f64)> = geometric_grid(1e-6, 1e-1, 11)
            .unwrap()
            .into_iter()
            .map(|r| (r, 7.0 / r))
            .collect();
        let f = fit_power_law(&pts, (1e-6, 1e-1)).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 7f64.ln()).abs() < 1e-10);
        assert!(f.residual_rms < 1e-12);
        assert!(matches!(
            fit_power_law(&pts[..2], (1e-6, 1e-1)),
            Err(Error::Precondition(_))
        ));
        let mut bad = pts.clone();
        bad[3].1 = 0.0;
        assert!(matches!(
            fit_power_law(&bad, (1e-6, 1e-1)),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn gw_exponent_fits() {
        let t = sweep(&gw(), 1e-6, 1e-2, 21, 1e-12).unwrap();
        let m = fit_exponent(&t, Quantity::VarMomentum, (1e-6, 1e-3)).unwrap();
        assert!((m.slope + 1.0).abs() < 0.02, "{m:?}");
        let u = fit_exponent(&t, Quantity::Uncertainty, (1e-6, 1e-3)).unwrap();
        assert!(u.slope.abs() < 0.05, "{u:?}");
    }

    #[test]
    fn gw_bound_verdict() {
        let t = sweep(&gw(), 1e-6, 1e-2, 21, 1e-12).unwrap();
        let v = verify_gw_bound(&t).unwrap();
        assert!(v.holds, "{:?}", v.checks);
        assert!((v.bound - 3.277_999_749_485_792).abs() < 1e-15);
        assert!(v.observed_limit > 1.0 && v.observed_limit < v.max_uncertainty);

        let g = GeneralExponential::new(1.0, 1.0, vec![0.0, 1.0]).unwrap();
        let t = sweep(&WaveletFamily::GeneralExponential(g), 1e-3, 1e-2, 3, 1e-12).unwrap();
        assert!(matches!(verify_gw_bound(&t), Err(Error::Usage(_))));

        let t = sweep(&gw(), 1e-2, 0.5, 3, 1e-12).unwrap();
        assert!(matches!(verify_gw_bound(&t), Err(Error::Precondition(_))));
    }

    #[test]
    fn slack_fit_split() {
        let pts = [(1e-1, 1.2), (1e-2, 1.05), (1e-3, 1.01), (1e-4, 1.001)];
        let f = fit_slack(&pts);
        assert!((f.k - 0.2 / 0.1f64.sqrt()).abs() < 1e-12);
        assert!(f.validated);
        let f = fit_slack(&[(1e-1, 0.5), (1e-2, 0.5), (1e-3, 1.5)]);
        assert_eq!(f.k, 0.0);
        assert!(!f.validated);
    }

    #[test]
    fn sums_match_localization() {
        // var_S = (A − B)(A + B)/B² with N = 4ρA and D = 4ρB
        for rho in [1e-2, 1e-4] {
            let s = gw_series_sums(rho).unwrap();
            let c = gw().coefficients(rho, 1e-14).unwrap();
            let direct = var_space(&c).unwrap();
            let via_sums = s.difference * (s.a + s.b) / (s.b * s.b);
            assert!(
                (direct / via_sums - 1.0).abs() < 1e-9,
                "{direct} vs {via_sums}"
            );
            assert!(((s.a - s.b) / s.difference - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn estimations_single_scales() {
        for rho in [1e-4, 1e-2] {
            let v = verify_estimations(&[rho]).unwrap();
            assert!(v.holds, "{:?}", v.checks);
        }
        assert!(matches!(
            verify_estimations(&[]),
            Err(Error::Precondition(_))
        ));
        assert!(verify_estimations(&[0.5]).is_err());
    }

    #[test]
    fn estimations_on_grid() {
        let grid = geometric_grid(1e-5, 1e-2, 10).unwrap();
        let v = verify_estimations(&grid).unwrap();
        assert!(v.holds, "{:?}", v.checks);
        assert_eq!(v.v23_binding, BindingSide::Lower);
        assert_eq!(v.rows.len(), 10);
    }

    #[test]
    fn difference_bound() {
        let v = verify_difference_bound(&[1e-5]).unwrap();
        assert!(v.rows[0].sums.difference * 1e-5 <= 0.672);
        assert!(v.holds);
        let v = verify_difference_bound(&[1e-2]).unwrap();
        assert!(v.holds);
        assert!(matches!(
            verify_difference_bound(&[-1e-3]),
            Err(Error::Precondition(_))
        ));
        let v = verify_difference_bound(&[1e-6]).unwrap();
        assert!((v.rows[0].sum_over_b - 2.0).abs() < 0.02);
    }
}
