//! Globally adaptive 21-point Gauss–Kronrod quadrature on finite intervals.

use crate::error::{Error, Result};
use crate::summation::compensated_sum;

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-9,
            max_intervals: 5000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// One GK21 panel: (Kronrod value, QUADPACK-style error estimate).
fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[10] * f_center;
    let mut gauss = 0.0;
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Integrates `f` over `[a, b]` (split first at `breakpoints`) by repeatedly
/// bisecting the panel with the largest error estimate.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) || b < a {
        return Err(Error::Domain(format!(
            "invalid integration interval [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut edges = vec![a];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&p| p > a && p < b)
        .collect();
    inner.sort_by(|x, y| x.total_cmp(y));
    inner.dedup();
    edges.extend(inner);
    edges.push(b);

    let mut segments: Vec<Segment> = edges
        .windows(2)
        .map(|w| {
            let (value, error) = gk21(&f, w[0], w[1]);
            Segment {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();

    loop {
        let total = compensated_sum(segments.iter().map(|s| s.value));
        let err: f64 = segments.iter().map(|s| s.error).sum();
        if !total.is_finite() {
            return Err(Error::Convergence(
                "integrand produced a non-finite value".into(),
            ));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(QuadratureResult {
                value: total,
                error: err,
                intervals: segments.len(),
            });
        }
        if segments.len() >= opts.max_intervals {
            return Err(Error::Convergence(format!(
                "adaptive quadrature hit {} panels with error estimate {err:e} (value {total:e})",
                opts.max_intervals
            )));
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one segment");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            return Err(Error::Convergence(format!(
                "panel [{}, {}] cannot be bisected further",
                seg.a, seg.b
            )));
        }
        let (lv, le) = gk21(&f, seg.a, mid);
        let (rv, re) = gk21(&f, mid, seg.b);
        segments.push(Segment {
            a: seg.a,
            b: mid,
            value: lv,
            error: le,
        });
        segments.push(Segment {
            a: mid,
            b: seg.b,
            value: rv,
            error: re,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(
            |x| 3.0 * x * x + 1.0,
            0.0,
            2.0,
            &[],
            QuadratureOptions::default(),
        )
        .unwrap();
        assert!((r.value - 10.0).abs() < 1e-14);
        assert_eq!(r.intervals, 1);
    }

    #[test]
    fn gaussian_integral() {
        let opts = QuadratureOptions {
            abs_tol: 0.0,
            rel_tol: 1e-13,
            max_intervals: 1000,
        };
        let r = integrate(|x: f64| (-x * x).exp(), 0.0, 40.0, &[1.0], opts).unwrap();
        let want = std::f64::consts::PI.sqrt() / 2.0;
        assert!((r.value - want).abs() < 1e-14);
    }

    #[test]
    fn sqrt_singularity_at_endpoint() {
        let opts = QuadratureOptions {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 1000,
        };
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, &[], opts).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_and_invalid_intervals() {
        let r = integrate(|x| x, 1.0, 1.0, &[], QuadratureOptions::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(integrate(|x| x, 1.0, 0.0, &[], QuadratureOptions::default()).is_err());
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &[], QuadratureOptions::default()).is_err());
    }

    #[test]
    fn panel_budget_exhaustion_is_reported() {
        let opts = QuadratureOptions {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_intervals: 3,
        };
        let r = integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 10.0, &[], opts);
        assert!(matches!(r, Err(Error::Convergence(_))));
    }
}
