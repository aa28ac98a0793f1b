//! Globally adaptive Gauss-Kronrod (7/15 point) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let err = ((k - g) * h).abs();
    Panel {
        a,
        b,
        value: k * h,
        error: err,
    }
}

/// Integrates `f` over `[a, b]`, splitting first at the given interior
/// breakpoints, then bisecting the panel with the largest error estimate until
/// the total estimate is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::QuadratureFailure(format!(
            "non-finite limits [{a}, {b}]"
        )));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let mut cuts: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a.min(b) && x < a.max(b))
        .collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let sign = if b < a { -1.0 } else { 1.0 };

    let mut panels: Vec<Panel> = cuts.windows(2).map(|w| kronrod(&f, w[0], w[1])).collect();
    let mut evaluations = 15 * panels.len();
    const MAX_PANELS: usize = 4000;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::QuadratureFailure(format!(
                "integrand produced a non-finite value on [{a}, {b}]"
            )));
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Integral {
                value: sign * value,
                error,
                evaluations,
            });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::QuadratureFailure(format!(
                "no convergence on [{a}, {b}] after {MAX_PANELS} panels: estimate {value:e}, error {error:e}"
            )));
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::QuadratureFailure(format!(
                "panel [{}, {}] cannot be split further: estimate {value:e}, error {error:e}",
                worst.a, worst.b
            )));
        }
        panels[idx] = kronrod(&f, worst.a, mid);
        panels.push(kronrod(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// Integrates `f` over `[a, inf)` by panels of doubling width, each handled by
/// [`integrate`], stopping once a panel contributes less than
/// `stop_ratio * |running total|` (or less than `abs_tol`) twice in a row.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    first_width: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
    stop_ratio: f64,
) -> Result<Integral> {
    let mut total = 0.0;
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut lo = a;
    let mut width = first_width;
    let mut quiet = 0;
    for _ in 0..200 {
        let hi = lo + width;
        let piece = integrate(&f, lo, hi, breakpoints, abs_tol, rel_tol)?;
        total += piece.value;
        error += piece.error;
        evaluations += piece.evaluations;
        if piece.value.abs() <= stop_ratio * total.abs() || piece.value.abs() <= abs_tol {
            quiet += 1;
            if quiet >= 2 {
                return Ok(Integral {
                    value: total,
                    error,
                    evaluations,
                });
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
    }
    Err(Error::QuadratureFailure(format!(
        "integral from {a} to infinity did not settle; last upper limit {lo:e}"
    )))
}
