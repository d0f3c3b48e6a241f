//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zonal_uncertainty::asymptotics::{
    fit_exponent, geometric_grid, sweep, verify_difference_bound, verify_estimations, Quantity,
    SweepTable,
};
use zonal_uncertainty::constants;
use zonal_uncertainty::series_bounds::{
    bracket_series, closed_form_integral, find_peak, integrate_semi_infinite_with, sum_series,
    SeriesLabel, UnimodalFunction,
};
use zonal_uncertainty::{
    uncertainty_product, Error, GeneralExponential, LegendreCoefficients, WaveletFamily,
};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

type Criterion = fn() -> Result<Outcome, Error>;

fn gw_sweep(rho_min: f64, rho_max: f64, points: usize) -> Result<SweepTable, Error> {
    sweep(
        &WaveletFamily::GaussWeierstrass,
        rho_min,
        rho_max,
        points,
        1e-12,
    )
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (lo.ln() + rng.gen::<f64>() * (hi.ln() - lo.ln())).exp()
}

fn random_scales(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..20).map(|_| log_uniform(&mut rng, 1e-4, 1e-1)).collect()
}

fn ac01_uncertainty_principle() -> Result<Outcome, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut min_u = f64::INFINITY;
    let mut tested = 0;
    while tested < 1000 {
        let len = rng.gen_range(2..=64);
        let v: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = LegendreCoefficients::new(v)?;
        match uncertainty_product(&c) {
            Ok(r) => min_u = min_u.min(r.uncertainty),
            Err(Error::UndefinedCenter { .. }) => continue,
            Err(e) => return Err(e),
        }
        tested += 1;
    }
    let table = gw_sweep(1e-6, 1e-1, 26)?;
    let min_gw = table
        .rows
        .iter()
        .map(|r| r.report.uncertainty)
        .fold(f64::INFINITY, f64::min);
    Ok(outcome(
        min_u >= 1.0 - 1e-9 && min_gw >= 1.0 - 1e-9,
        format!("min U over {tested} random vectors = {min_u:.6}, over GW sweep = {min_gw:.9}"),
    ))
}

fn ac02_gw_boundedness() -> Result<Outcome, Error> {
    let table = gw_sweep(1e-6, 1e-2, 21)?;
    let bound = constants::gw_uncertainty_bound();
    let max_u = table
        .rows
        .iter()
        .map(|r| r.report.uncertainty)
        .fold(0.0, f64::max);
    let fit = fit_exponent(&table, Quantity::Uncertainty, (1e-6, 1e-3))?;
    Ok(outcome(
        max_u <= bound + 1e-3 && fit.slope.abs() <= 0.05,
        format!(
            "max U = {max_u:.9} <= {:.6}, U slope = {:.5}",
            bound + 1e-3,
            fit.slope
        ),
    ))
}

fn ac03_momentum_scaling() -> Result<Outcome, Error> {
    let table = gw_sweep(1e-6, 1e-2, 21)?;
    let at = |rho: f64| {
        table
            .rows
            .iter()
            .find(|r| (r.rho / rho - 1.0).abs() < 1e-9)
            .map(|r| (r.rho_times_var_momentum - 1.0).abs())
            .expect("grid contains the scale")
    };
    let (d4, d6) = (at(1e-4), at(1e-6));
    let fit = fit_exponent(&table, Quantity::VarMomentum, (1e-6, 1e-3))?;
    Ok(outcome(
        d4 <= 0.05 && d6 <= 0.005 && (fit.slope + 1.0).abs() <= 0.02,
        format!(
            "|rho var_M - 1| = {d4:.3e} at 1e-4, {d6:.3e} at 1e-6; var_M slope = {:.6}",
            fit.slope
        ),
    ))
}

fn ac04_space_variance() -> Result<Outcome, Error> {
    let table = gw_sweep(1e-6, 1e-2, 21)?;
    let worst = table
        .rows
        .iter()
        .filter(|r| r.rho <= 1e-3 * (1.0 + 1e-12))
        .map(|r| r.var_space_over_rho)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(outcome(
        worst <= 10.7553,
        format!("max var_S/rho = {worst:.6} for rho <= 1e-3"),
    ))
}

fn ac05_estimations() -> Result<Outcome, Error> {
    let grid = geometric_grid(1e-5, 1e-2, 10)?;
    let v = verify_estimations(&grid)?;
    let fits = [v.slack_v1, v.slack_v23_lower, v.slack_v23_upper, v.slack_v4];
    let validated = fits.iter().all(|f| f.validated);
    Ok(outcome(
        v.holds && validated,
        format!(
            "K = [{}], v23 binding side {:?}",
            fits.iter()
                .map(|f| format!("{:.3e}", f.k))
                .collect::<Vec<_>>()
                .join(", "),
            v.v23_binding
        ),
    ))
}

fn ac06_difference_series() -> Result<Outcome, Error> {
    let grid = geometric_grid(1e-5, 1e-2, 10)?;
    let v = verify_difference_bound(&grid)?;
    let k = v.slack_difference.k;
    let bound_ok = v
        .rows
        .iter()
        .all(|r| r.sums.difference * r.rho <= 0.6716 * (1.0 + k * r.rho.sqrt()));
    let limit = verify_difference_bound(&[1e-6])?.rows[0].sum_over_b;
    Ok(outcome(
        v.holds && bound_ok && (limit - 2.0).abs() <= 0.02,
        format!(
            "max D rho = {:.6}, K' = {k:.3e}, (A+B)/B = {limit:.9} at 1e-6",
            v.rows
                .iter()
                .map(|r| r.sums.difference * r.rho)
                .fold(0.0, f64::max)
        ),
    ))
}

fn ac07_sandwich() -> Result<Outcome, Error> {
    let scales = random_scales(7);
    let mut inside = 0;
    let mut total = 0;
    for label in SeriesLabel::BUILTIN {
        for &rho in &scales {
            let v = UnimodalFunction::builtin(label, rho)?;
            let b = bracket_series(&v)?;
            let s = sum_series(&v)?;
            total += 1;
            if b.contains(s, 1e-9 * b.integral.abs()) {
                inside += 1;
            }
        }
    }
    Ok(outcome(
        inside == total && total == 140,
        format!("{inside}/{total} inside"),
    ))
}

fn ac08_closed_forms() -> Result<Outcome, Error> {
    let scales = random_scales(7);
    let mut worst: f64 = 0.0;
    for label in SeriesLabel::BUILTIN
        .into_iter()
        .filter(|l| l.has_closed_form())
    {
        for &rho in &scales {
            let q = integrate_semi_infinite_with(&UnimodalFunction::builtin(label, rho)?, 1e-12)?;
            let c = closed_form_integral(label, rho)?;
            worst = worst.max((q - c).abs() / c.abs());
        }
    }
    let i1 = closed_form_integral(SeriesLabel::V1Est, 0.1)?;
    let i4 = closed_form_integral(SeriesLabel::V4Est, 0.5)?;
    Ok(outcome(
        worst <= 1e-9 && (i1 - 12.5).abs() <= 1e-12 && (i4 - 1.0).abs() <= 1e-12,
        format!("max relative difference {worst:.3e}; int v1(0.1) = {i1}, int v4(0.5) = {i4}"),
    ))
}

fn ac09_peak_asymptotics() -> Result<Outcome, Error> {
    let rho: f64 = 1e-6;
    let sq = rho.sqrt();
    let peak = |label| find_peak(&UnimodalFunction::builtin(label, rho)?);
    let rel = |x: f64, want: f64| (x - want).abs() / want.abs();
    let mut worst_loc: f64 = 0.0;
    for (label, want) in [
        (SeriesLabel::V1Est, 3f64.sqrt() / 2.0),
        (SeriesLabel::V4Est, 5f64.sqrt() / 2.0),
        (SeriesLabel::V1Diff, 1.0 / 2f64.sqrt()),
        (SeriesLabel::V3Diff, 0.5),
    ] {
        worst_loc = worst_loc.max(rel(peak(label)?.0 * sq, want));
    }
    let mut worst_val: f64 = 0.0;
    for (label, scale, want) in [
        (SeriesLabel::V1Est, rho * sq, constants::v1_peak_constant()),
        (SeriesLabel::V1Diff, rho, constants::v1_diff_peak_constant()),
        (SeriesLabel::V2Diff, rho, constants::v2_diff_peak_constant()),
        (SeriesLabel::V3Diff, sq, constants::v3_diff_peak_constant()),
    ] {
        worst_val = worst_val.max(rel(peak(label)?.1 * scale, want));
    }
    Ok(outcome(
        worst_loc <= 0.05 && worst_val <= 0.10,
        format!(
            "worst location error {:.3}%, worst value error {:.3}%",
            100.0 * worst_loc,
            100.0 * worst_val
        ),
    ))
}

fn ac10_general_family_contrast() -> Result<Outcome, Error> {
    let g = GeneralExponential::new(1.0, 1.0, vec![0.0, 1.0])?;
    let table = sweep(&WaveletFamily::GeneralExponential(g), 1e-5, 1e-2, 13, 1e-12)?;
    let fit = fit_exponent(&table, Quantity::Uncertainty, (1e-5, 1e-2))?;
    let first = table.rows.first().unwrap().report.uncertainty;
    let last = table.rows.last().unwrap().report.uncertainty;
    Ok(outcome(
        (-0.6..=-0.05).contains(&fit.slope),
        format!(
            "U slope = {:.5} (U = {first:.6} at 1e-2, {last:.6} at 1e-5)",
            fit.slope
        ),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("AC01 uncertainty principle", ac01_uncertainty_principle),
        ("AC02 gw boundedness", ac02_gw_boundedness),
        ("AC03 momentum scaling", ac03_momentum_scaling),
        ("AC04 space-variance bound", ac04_space_variance),
        ("AC05 estimations", ac05_estimations),
        ("AC06 difference series", ac06_difference_series),
        ("AC07 series sandwich", ac07_sandwich),
        ("AC08 closed-form integrals", ac08_closed_forms),
        ("AC09 peak asymptotics", ac09_peak_asymptotics),
        ("AC10 general-family contrast", ac10_general_family_contrast),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let (passed, detail) = match run() {
            Ok(o) => (o.passed, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !passed {
            failed += 1;
        }
        println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
