use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use zonal_uncertainty::asymptotics::{sweep, sweep_scales, SweepTable};
use zonal_uncertainty::format::sig17;
use zonal_uncertainty::verify::{run_suite, Suite};
use zonal_uncertainty::{
    auto_degree, uncertainty_product, CustomTable, Error, GeneralExponential, LegendreCoefficients,
    LocalizationReport, WaveletFamily,
};

/// Uncertainty products of zonal wavelets on the 2-sphere.
#[derive(Debug, Parser)]
#[command(name = "zonal-uncertainty", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Localization report for one family at one scale.
    #[command(allow_negative_numbers = true)]
    Compute {
        #[command(flatten)]
        family: FamilyArgs,
        /// Scale parameter.
        #[arg(long)]
        rho: Option<f64>,
        /// Relative truncation tolerance on the weighted energy.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reports over a geometric grid of scales.
    #[command(allow_negative_numbers = true)]
    Sweep {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        rho_min: Option<f64>,
        #[arg(long)]
        rho_max: Option<f64>,
        /// Number of grid points.
        #[arg(long, default_value_t = 26)]
        points: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// Write the check list here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe a family and, with --rho, its truncation at that scale.
    #[command(allow_negative_numbers = true)]
    FamilyInfo {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Gw,
    General,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Lemmas,
    Bounds,
    Gw,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    #[arg(long, value_enum, default_value_t = FamilyKind::Gw)]
    family: FamilyKind,
    /// Exponent a of the general family.
    #[arg(long)]
    a: Option<f64>,
    /// Exponent c of the general family.
    #[arg(long)]
    c: Option<f64>,
    /// Polynomial q as comma-separated coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Coefficient file, optionally tagged with its scale as RHO=PATH. Repeatable.
    #[arg(long)]
    coeffs: Vec<String>,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure with the flag it is attributed to.
struct Failure {
    flag: Option<&'static str>,
    message: String,
}

impl Failure {
    fn flag(flag: &'static str, message: impl Into<String>) -> Self {
        Self {
            flag: Some(flag),
            message: message.into(),
        }
    }

    fn at(flag: &'static str) -> impl FnOnce(Error) -> Self {
        move |e| Self::flag(flag, e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            flag: None,
            message: e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

enum Outcome {
    Ok,
    VerifyFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::VerifyFailed) => ExitCode::from(1),
        Err(f) => {
            let line = match f.flag {
                Some(flag) => format!("error: --{flag}: {}", f.message),
                None => format!("error: {}", f.message),
            };
            eprintln!("{}", line.replace('\n', " "));
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> CliResult<Outcome> {
    match cli.command {
        Command::Compute {
            family,
            rho,
            tol,
            output,
        } => {
            check_tol(tol)?;
            let rho = rho.map(|r| check_scale("rho", r)).transpose()?;
            let coeffs = compute_coefficients(&family, rho, tol)?;
            let report = uncertainty_product(&coeffs)?;
            let text = match output.format.unwrap_or(Format::Json) {
                Format::Json => format!("{}\n", report.to_json()),
                Format::Csv => report_csv(&report),
            };
            emit(&output.out, &text)?;
        }
        Command::Sweep {
            family,
            rho_min,
            rho_max,
            points,
            tol,
            output,
        } => {
            check_tol(tol)?;
            let table = run_sweep(&family, rho_min, rho_max, points, tol)?;
            let text = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => table.to_csv(),
                Format::Json => format!("{}\n", table.to_json()),
            };
            emit(&output.out, &text)?;
        }
        Command::Verify { suite, out } => {
            let suite = match suite {
                SuiteArg::Lemmas => Suite::Lemmas,
                SuiteArg::Bounds => Suite::Bounds,
                SuiteArg::Gw => Suite::Gw,
                SuiteArg::All => Suite::All,
            };
            let report = run_suite(suite)?;
            let text: String = report.checks.iter().map(|c| format!("{c}\n")).collect();
            emit(&out, &text)?;
            if !report.passed() {
                for c in report.failures() {
                    eprintln!("{c}");
                }
                return Ok(Outcome::VerifyFailed);
            }
        }
        Command::FamilyInfo { family, rho, tol } => {
            check_tol(tol)?;
            let rho = rho.map(|r| check_scale("rho", r)).transpose()?;
            let text = family_info(&family, rho, tol)?;
            emit(&None, &text)?;
        }
    }
    Ok(Outcome::Ok)
}

fn check_tol(tol: f64) -> CliResult<()> {
    if tol > 0.0 && tol < 1.0 {
        Ok(())
    } else {
        Err(Failure::flag(
            "tol",
            format!("must lie in (0, 1), got {tol}"),
        ))
    }
}

fn check_scale(flag: &'static str, rho: f64) -> CliResult<f64> {
    if rho > 0.0 && rho.is_finite() {
        Ok(rho)
    } else {
        Err(Failure::flag(
            flag,
            format!("must be finite and positive, got {rho}"),
        ))
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::flag("out", format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_csv(r: &LocalizationReport) -> String {
    format!(
        "var_space,var_momentum,uncertainty,degree_used,truncation_error,center_denominator\n{},{},{},{},{},{}\n",
        sig17(r.var_space),
        sig17(r.var_momentum),
        sig17(r.uncertainty),
        r.degree_used,
        sig17(r.truncation_error),
        sig17(r.center_denominator),
    )
}

/// A `--coeffs` entry: `PATH` or `RHO=PATH`.
struct CoeffEntry {
    rho: Option<f64>,
    path: String,
}

fn parse_coeff_entry(raw: &str) -> CliResult<CoeffEntry> {
    if let Some((head, tail)) = raw.split_once('=') {
        if let Ok(rho) = head.trim().parse::<f64>() {
            let rho = check_scale("coeffs", rho)?;
            return Ok(CoeffEntry {
                rho: Some(rho),
                path: tail.to_string(),
            });
        }
    }
    Ok(CoeffEntry {
        rho: None,
        path: raw.to_string(),
    })
}

fn read_coeffs(path: &str) -> CliResult<LegendreCoefficients> {
    LegendreCoefficients::from_file(path)
        .map_err(|e| Failure::flag("coeffs", format!("{path}: {e}")))
}

fn parse_q(text: &str) -> CliResult<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Failure::flag("q", format!("'{}' is not a number", s.trim())))
        })
        .collect()
}

fn reject_extras(args: &FamilyArgs, kind: &str) -> CliResult<()> {
    let general_only = [
        ("a", args.a.is_some()),
        ("c", args.c.is_some()),
        ("q", args.q.is_some()),
    ];
    if kind != "general" {
        if let Some((flag, _)) = general_only.iter().find(|(_, set)| *set) {
            return Err(Failure::flag(flag, "only applies to --family general"));
        }
    }
    if kind != "custom" && !args.coeffs.is_empty() {
        return Err(Failure::flag("coeffs", "only applies to --family custom"));
    }
    Ok(())
}

fn custom_table(args: &FamilyArgs) -> CliResult<CustomTable> {
    let mut entries = Vec::new();
    for raw in &args.coeffs {
        let e = parse_coeff_entry(raw)?;
        let rho = e.rho.ok_or_else(|| {
            Failure::flag(
                "coeffs",
                format!("'{raw}' needs a scale prefix, as in 1e-3={raw}"),
            )
        })?;
        entries.push((rho, read_coeffs(&e.path)?));
    }
    CustomTable::new(entries).map_err(Failure::at("coeffs"))
}

/// Parametric family from the flags; `None` for a custom family.
fn parametric_family(args: &FamilyArgs) -> CliResult<Option<WaveletFamily>> {
    match args.family {
        FamilyKind::Gw => {
            reject_extras(args, "gw")?;
            Ok(Some(WaveletFamily::GaussWeierstrass))
        }
        FamilyKind::General => {
            reject_extras(args, "general")?;
            let q = args
                .q
                .as_deref()
                .ok_or_else(|| Failure::flag("q", "required for --family general"))?;
            let a = args.a.unwrap_or(1.0);
            let c = args.c.unwrap_or(1.0);
            if !(a > 0.0 && a.is_finite()) {
                return Err(Failure::flag("a", format!("must be positive, got {a}")));
            }
            if !(c > 0.0 && c.is_finite()) {
                return Err(Failure::flag("c", format!("must be positive, got {c}")));
            }
            let g = GeneralExponential::new(a, c, parse_q(q)?).map_err(Failure::at("q"))?;
            Ok(Some(WaveletFamily::GeneralExponential(g)))
        }
        FamilyKind::Custom => {
            reject_extras(args, "custom")?;
            if args.coeffs.is_empty() {
                return Err(Failure::flag("coeffs", "required for --family custom"));
            }
            Ok(None)
        }
    }
}

fn compute_coefficients(
    args: &FamilyArgs,
    rho: Option<f64>,
    tol: f64,
) -> CliResult<LegendreCoefficients> {
    if let Some(family) = parametric_family(args)? {
        let rho = rho.ok_or_else(|| Failure::flag("rho", "required for a parametric family"))?;
        return family.coefficients(rho, tol).map_err(Failure::at("rho"));
    }
    if let [single] = args.coeffs.as_slice() {
        let e = parse_coeff_entry(single)?;
        if e.rho.is_none() {
            return read_coeffs(&e.path);
        }
    }
    let table = custom_table(args)?;
    let scales = table.scales();
    let rho = match (rho, scales.as_slice()) {
        (Some(r), _) => r,
        (None, [only]) => *only,
        (None, _) => {
            return Err(Failure::flag(
                "rho",
                "required to pick one of several coefficient tables",
            ))
        }
    };
    Ok(table.get(rho).map_err(Failure::at("rho"))?.clone())
}

fn run_sweep(
    args: &FamilyArgs,
    rho_min: Option<f64>,
    rho_max: Option<f64>,
    points: usize,
    tol: f64,
) -> CliResult<SweepTable> {
    let rho_min = rho_min.map(|r| check_scale("rho-min", r)).transpose()?;
    let rho_max = rho_max.map(|r| check_scale("rho-max", r)).transpose()?;
    if let (Some(lo), Some(hi)) = (rho_min, rho_max) {
        if lo >= hi {
            return Err(Failure::flag(
                "rho-min",
                format!("{lo} must be below --rho-max {hi}"),
            ));
        }
    }
    match parametric_family(args)? {
        Some(family) => {
            if points < 2 {
                return Err(Failure::flag(
                    "points",
                    format!("must be at least 2, got {points}"),
                ));
            }
            Ok(sweep(
                &family,
                rho_min.unwrap_or(1e-6),
                rho_max.unwrap_or(1e-1),
                points,
                tol,
            )?)
        }
        None => {
            let table = custom_table(args)?;
            let lo = rho_min.unwrap_or(0.0);
            let hi = rho_max.unwrap_or(f64::INFINITY);
            let scales: Vec<f64> = table
                .scales()
                .into_iter()
                .filter(|r| *r >= lo && *r <= hi)
                .collect();
            if scales.is_empty() {
                return Err(Failure::flag(
                    "coeffs",
                    "no coefficient table inside the requested scale range",
                ));
            }
            Ok(sweep_scales(&WaveletFamily::Custom(table), &scales, tol)?)
        }
    }
}

fn family_info(args: &FamilyArgs, rho: Option<f64>, tol: f64) -> CliResult<String> {
    let mut out = String::new();
    match parametric_family(args)? {
        Some(family) => {
            out.push_str(&format!("family: {}\n", family.descriptor()));
            if let WaveletFamily::GeneralExponential(g) = &family {
                out.push_str(&format!(
                    "zeroth coefficient undefined: {}\n",
                    g.zeroth_undefined()
                ));
            }
            if let Some(rho) = rho {
                let degree = auto_degree(&family, rho, tol).map_err(Failure::at("rho"))?;
                let c = family
                    .coefficients_at_degree(rho, degree)
                    .map_err(Failure::at("rho"))?;
                out.push_str(&format!("rho: {}\n", sig17(rho)));
                out.push_str(&format!("degree: {degree}\n"));
                out.push_str(&format!("energy: {}\n", sig17(c.energy())));
                out.push_str(&format!("tail_bound: {}\n", sig17(c.tail_bound())));
            }
        }
        None => {
            if let [single] = args.coeffs.as_slice() {
                let e = parse_coeff_entry(single)?;
                if e.rho.is_none() {
                    let c = read_coeffs(&e.path)?;
                    out.push_str(&format!("family: custom file {}\n", e.path));
                    out.push_str(&format!("degree: {}\n", c.degree()));
                    out.push_str(&format!("energy: {}\n", sig17(c.energy())));
                    return Ok(out);
                }
            }
            let table = custom_table(args)?;
            out.push_str(&format!(
                "family: {}\n",
                WaveletFamily::Custom(table.clone()).descriptor()
            ));
            for r in table.scales() {
                let c = table.get(r)?;
                out.push_str(&format!(
                    "rho {}: degree {}, energy {}\n",
                    sig17(r),
                    c.degree(),
                    sig17(c.energy())
                ));
            }
        }
    }
    Ok(out)
}
