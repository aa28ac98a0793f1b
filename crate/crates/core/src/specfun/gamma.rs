use serde::{Deserialize, Serialize};
use statrs::function::gamma as sg;

use crate::error::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaKind {
    Gamma,
    LogGamma,
    Digamma,
}

fn positive(function: &'static str, t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, format!("argument must be positive, got {t}")))
    }
}

pub fn gamma_like(kind: GammaKind, t: f64) -> Result<f64> {
    positive("gamma_like", t)?;
    Ok(match kind {
        GammaKind::Gamma => sg::gamma(t),
        GammaKind::LogGamma => sg::ln_gamma(t),
        GammaKind::Digamma => sg::digamma(t),
    })
}

pub fn gamma(t: f64) -> f64 {
    sg::gamma(t)
}

pub fn ln_gamma(t: f64) -> f64 {
    sg::ln_gamma(t)
}

pub fn digamma(t: f64) -> f64 {
    sg::digamma(t)
}

/// Derivative of the digamma function for `t > 0`.
pub fn trigamma(t: f64) -> f64 {
    let mut t = t;
    let mut acc = 0.0;
    while t < 16.0 {
        acc += 1.0 / (t * t);
        t += 1.0;
    }
    let r = 1.0 / t;
    let r2 = r * r;
    // Asymptotic series with Bernoulli coefficients B2..B10.
    let series = r
        + 0.5 * r2
        + r * r2
            * (1.0 / 6.0
                + r2 * (-1.0 / 30.0 + r2 * (1.0 / 42.0 + r2 * (-1.0 / 30.0 + r2 * 5.0 / 66.0))));
    acc + series
}

/// Solves `digamma(t) = target` for `t > 0` by Newton steps kept inside a bracket.
pub fn digamma_inverse(target: f64) -> Result<f64> {
    if !target.is_finite() {
        return Err(Error::domain("digamma_inverse", "target must be finite"));
    }
    // Initial bracket: digamma is increasing from -inf to +inf on (0, inf).
    let mut lo = 1.0_f64;
    while digamma(lo) > target {
        lo *= 0.5;
    }
    let mut hi = 2.0_f64;
    while digamma(hi) < target {
        hi *= 2.0;
    }
    let mut t = if target >= -2.22 {
        target.exp() + 0.5
    } else {
        -1.0 / (target + EULER_GAMMA)
    };
    if !(t > lo && t < hi) {
        t = 0.5 * (lo + hi);
    }
    for _ in 0..200 {
        let f = digamma(t) - target;
        if f == 0.0 {
            return Ok(t);
        }
        if f < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let mut next = t - f / trigamma(t);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - t).abs() <= 1e-15 * t.abs() || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        t = next;
    }
    Ok(t)
}

/// `ln Gamma(1 + b)` for small `b`, avoiding the cancellation of the Lanczos form.
fn ln_gamma_1p(b: f64) -> f64 {
    if b.abs() < 1e-3 {
        const ZETA2: f64 = 1.644_934_066_848_226_4;
        const ZETA3: f64 = 1.202_056_903_159_594_2;
        const ZETA4: f64 = 1.082_323_233_711_138_2;
        const ZETA5: f64 = 1.036_927_755_143_369_9;
        b * (-EULER_GAMMA
            + b * (ZETA2 / 2.0 + b * (-ZETA3 / 3.0 + b * (ZETA4 / 4.0 - b * ZETA5 / 5.0))))
    } else {
        ln_gamma(1.0 + b)
    }
}

/// Exponential integral `E1(x) = Gamma(0, x)` for `0 < x < 1` by its power series.
fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// `Gamma(b, x)` for `0 < b < 1` and `0 < x < 1`, written as
/// `[(Gamma(1+b) - 1) - (x^b - 1)] / b + x^b sum_{k>=1} -(-x)^k / (k! (b+k))`.
fn upper_gamma_small(b: f64, x: f64) -> f64 {
    let head = (ln_gamma_1p(b).exp_m1() - (b * x.ln()).exp_m1()) / b;
    let mut sum = 0.0;
    let mut pw = 1.0;
    for k in 1..200 {
        pw *= -x / k as f64;
        let add = pw / (b + k as f64);
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    head - x.powf(b) * sum
}

/// Legendre continued fraction for `Gamma(a, x)`, valid for `x >= 1` and any real `a`.
fn upper_gamma_cf(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (a * x.ln() - x).exp() * h
}

/// Non-regularized upper incomplete gamma `Gamma(a, x) = int_x^inf t^(a-1) e^(-t) dt`
/// for real `a` and `x > 0`.
pub fn upper_gamma(a: f64, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite() && a.is_finite()) {
        return Err(Error::domain(
            "upper_gamma",
            format!("need finite a and x > 0, got a={a}, x={x}"),
        ));
    }
    if a > 0.0 {
        let q = sg::gamma_ur(a, x);
        return Ok(if a < 150.0 {
            q * gamma(a)
        } else {
            (q.ln() + ln_gamma(a)).exp()
        });
    }
    if x >= 1.0 {
        return Ok(upper_gamma_cf(a, x));
    }
    let steps = (-a).ceil();
    let b = a + steps;
    let mut g = if b <= 0.0 {
        e1_series(x)
    } else {
        upper_gamma_small(b, x)
    };
    let mut c = b;
    for _ in 0..steps as usize {
        c -= 1.0;
        g = (g - (c * x.ln() - x).exp()) / c;
    }
    Ok(g)
}

/// Regularized upper incomplete gamma `Q(a, x)` for `a > 0`, `x > 0`.
pub fn upper_gamma_regularized(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0 && x > 0.0 && a.is_finite() && x.is_finite()) {
        return Err(Error::domain(
            "upper_gamma_regularized",
            format!("need a > 0 and x > 0, got a={a}, x={x}"),
        ));
    }
    Ok(sg::gamma_ur(a, x))
}
