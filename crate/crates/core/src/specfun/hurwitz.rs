use super::Precision;
use crate::error::{Error, Result};

/// `B_{2j} / (2j)!` for `j = 1..=8`.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

/// Hurwitz zeta `sum_{n>=0} (n + x)^(-s)` for `s > 1`, `x > 0`.
///
/// The first terms are summed directly until the argument exceeds
/// `max(12, s + 16)`; the remainder uses the Euler-Maclaurin formula with
/// eight Bernoulli corrections, which then sits far below double precision.
pub fn hurwitz_zeta(s: f64, x: f64, p: &Precision) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::domain("hurwitz_zeta", format!("need s > 1, got {s}")));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain("hurwitz_zeta", format!("need x > 0, got {x}")));
    }
    let threshold = 12f64.max(s + 16.0);
    let shift = (threshold - x).max(0.0).ceil() as u64;
    if shift > p.max_terms {
        return Err(Error::SlowConvergence(format!(
            "hurwitz_zeta needs {shift} direct terms, limit {}",
            p.max_terms
        )));
    }
    let mut head = 0.0;
    for k in (0..shift).rev() {
        head += (x + k as f64).powf(-s);
    }
    let w = x + shift as f64;
    let w_s = w.powf(-s);
    let mut tail = w * w_s / (s - 1.0) + 0.5 * w_s;
    // Rising factorial s (s+1) ... (s + 2j - 2) times w^(-s-2j+1).
    let mut rising = s;
    let mut pw = w_s / w;
    let inv_w2 = 1.0 / (w * w);
    for (j, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if j > 0 {
            let k = 2.0 * j as f64;
            rising *= (s + k - 1.0) * (s + k);
            pw *= inv_w2;
        }
        tail += c * rising * pw;
    }
    Ok(head + tail)
}

/// Riemann zeta for `s > 1`.
pub fn riemann_zeta(s: f64, p: &Precision) -> Result<f64> {
    hurwitz_zeta(s, 1.0, p)
}
