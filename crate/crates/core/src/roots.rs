//! Bracketed scalar root finding.

use crate::error::{Error, Result};

/// Finds a root of `f` in `[lo, hi]` by bisection, assuming a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, xtol: f64) -> Result<f64> {
    newton_bracketed(|x| (f(x), f64::NAN), lo, hi, xtol)
}

/// Newton iteration kept inside a shrinking sign-change bracket. `f` returns
/// the value and the derivative; a non-finite derivative or a step leaving the
/// bracket falls back to bisection.
pub fn newton_bracketed<F: Fn(f64) -> (f64, f64)>(
    f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let flo = f(lo).0;
    let fhi = f(hi).0;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if !(flo.is_finite() && fhi.is_finite()) || flo.signum() == fhi.signum() {
        return Err(Error::RootNotBracketed(format!(
            "f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    let rising = fhi > 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..500 {
        let (fx, dfx) = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if (fx > 0.0) == rising {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= xtol {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 0.25 * xtol {
            return Ok(next);
        }
        x = next;
    }
    Ok(0.5 * (lo + hi))
}
