//! Maximum search for unimodal functions on `[0, ∞)`.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;
const MAX_BRACKET: f64 = 1e12;

/// Brackets the maximum of `f` by doubling from `t = 1`.
///
/// Returns `[lo, hi]` with `f(mid) >= f(hi)` for the last probed `mid`, so
/// a unimodal `f` peaks inside the interval.
pub(crate) fn bracket_maximum<F: Fn(f64) -> f64>(f: &F) -> Result<(f64, f64)> {
    let mut lo = 0.0;
    let mut mid = 1.0;
    let mut hi = 2.0;
    let mut f_mid = f(mid);
    let mut f_hi = f(hi);
    while f_hi > f_mid {
        lo = mid;
        mid = hi;
        f_mid = f_hi;
        hi *= 2.0;
        if hi > MAX_BRACKET {
            return Err(Error::Shape(format!(
                "function still increasing at t = {MAX_BRACKET:e}"
            )));
        }
        f_hi = f(hi);
    }
    Ok((lo, hi))
}

/// Golden-section maximization on `[a, b]` until the bracket is narrower
/// than `rel_tol` times its midpoint. Returns `(t, f(t))`.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(
    f: &F,
    mut a: f64,
    mut b: f64,
    rel_tol: f64,
) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..400 {
        let mid = 0.5 * (a + b);
        if b - a <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
