//! Closed-form area bounds and global-minimality tests.
//!
//! Every bound here is the exact expression with no safety margin. Callers
//! compare `A <= bound` directly.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::ReducedLattice;
use crate::potentials::{opp_buckingham_cm_margin, yukawa_threshold, Potential, PotentialSpec};
use crate::roots::{bisect, newton_bracketed};
use crate::specfun::{
    digamma, digamma_inverse, epstein_zeta_closed, epstein_zeta_direct, gamma, ln_gamma,
    ClosedShape, Precision,
};

/// `p(y) = sum alpha_i y^nu_i` with real exponents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneralizedPolynomial {
    terms: Vec<(f64, f64)>,
}

impl GeneralizedPolynomial {
    /// Terms are `(coefficient, exponent)`; they are sorted by exponent and
    /// must have distinct nonnegative exponents and a positive leading coefficient.
    pub fn new(mut terms: Vec<(f64, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidPolynomial("no terms".into()));
        }
        if terms
            .iter()
            .any(|&(c, e)| !c.is_finite() || !e.is_finite() || e < 0.0)
        {
            return Err(Error::InvalidPolynomial(
                "coefficients must be finite and exponents finite and >= 0".into(),
            ));
        }
        terms.sort_by(|p, q| p.1.total_cmp(&q.1));
        if terms.windows(2).any(|w| w[1].1 - w[0].1 <= 0.0) {
            return Err(Error::InvalidPolynomial("exponents must be distinct".into()));
        }
        if terms.last().map(|t| t.0).unwrap_or(0.0) <= 0.0 {
            return Err(Error::InvalidPolynomial(
                "leading coefficient must be positive".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(f64, f64)] {
        &self.terms
    }

    pub fn eval(&self, y: f64) -> f64 {
        self.terms.iter().map(|&(c, e)| c * y.powf(e)).sum()
    }
}

/// Cauchy's upper bound on the positive roots:
/// `max_{alpha_i < 0} (lambda |alpha_i| / alpha_n)^(1 / (nu_n - nu_i))`,
/// `lambda` being the number of negative coefficients.
pub fn cauchy_bound(p: &GeneralizedPolynomial) -> Result<f64> {
    let (lead_c, lead_e) = *p.terms.last().expect("nonempty");
    let negatives: Vec<(f64, f64)> = p.terms.iter().copied().filter(|t| t.0 < 0.0).collect();
    if negatives.is_empty() {
        return Err(Error::NoNegativeTerm);
    }
    let lambda = negatives.len() as f64;
    Ok(negatives
        .iter()
        .map(|&(c, e)| (lambda * c.abs() / lead_c).powf(1.0 / (lead_e - e)))
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundResult {
    pub area_bound: f64,
    pub route: &'static str,
    pub inputs_echo: PotentialSpec,
}

fn not_applicable(msg: &str) -> Error {
    Error::NotApplicable(msg.to_string())
}

/// Largest area up to which the triangular lattice is certified optimal at
/// fixed area by the family's closed-form bound.
pub fn area_bound_high_density(f: &Potential) -> Result<BoundResult> {
    let spec = f.spec().clone();
    let (bound, route) = match &spec {
        PotentialSpec::ScreenedCoulombSum { terms } => {
            let mut t: Vec<(f64, f64)> = terms.iter().map(|t| (t.a, t.x)).collect();
            t.sort_by(|p, q| p.1.total_cmp(&q.1));
            (screened_bound(&t)?, "screened_coulomb_high_density")
        }
        &PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 } => (
            screened_bound(&[(-a1, x1), (a2, x2)])?,
            "screened_coulomb_high_density",
        ),
        PotentialSpec::InversePowerSum { .. } => {
            let terms = f.power_terms();
            let minus = terms.iter().filter(|t| t.0 < 0.0).count();
            if minus == 0 {
                return Err(not_applicable(
                    "all coefficients positive: completely monotonic, every area works",
                ));
            }
            (
                PI * power_branch(&terms, 2.0 * minus as f64),
                "inverse_power_high_density",
            )
        }
        &PotentialSpec::LennardJonesType { a1, a2, x1, x2 } => (
            PI * (a2 * gamma(x1) / (a1 * gamma(x2))).powf(1.0 / (x2 - x1)),
            "lennard_jones_high_density",
        ),
        PotentialSpec::ExpDecay { exp_terms, .. } => {
            let terms = f.power_terms();
            let minus = terms.iter().filter(|t| t.0 < 0.0).count();
            let b = f.b_sum();
            if minus == 0 && exp_terms.iter().all(|e| e.b > 0.0) {
                return Err(not_applicable(
                    "all coefficients positive: completely monotonic, every area works",
                ));
            }
            let first = if minus > 0 {
                PI * power_branch(&terms, 2.0 * minus as f64 + 2.0)
            } else {
                f64::INFINITY
            };
            let (an, xn) = *terms.last().expect("validated: at least one power term");
            let second = if b > 0.0 {
                (an * PI.powf(xn + 1.0) / ((minus as f64 + 1.0) * b * gamma(xn)))
                    .powf(1.0 / (xn + 0.5))
            } else {
                f64::INFINITY
            };
            (first.min(second), "exp_decay_high_density")
        }
        &PotentialSpec::OppBuckingham { a1, a2, x1, x2 } => (
            (a2 * PI.powf(x2 + 1.0) / (a1 * x1 * gamma(x2))).powf(1.0 / (x2 + 0.5)),
            "opp_buckingham_high_density",
        ),
    };
    if !(bound.is_finite() && bound > 0.0) {
        return Err(not_applicable(&format!(
            "closed-form bound is not a positive finite number ({bound})"
        )));
    }
    Ok(BoundResult {
        area_bound: bound,
        route,
        inputs_echo: spec,
    })
}

/// `min_{a_i < 0} (a_n Gamma(x_i) / (factor |a_i| Gamma(x_n)))^(1 / (x_n - x_i))`.
fn power_branch(terms: &[(f64, f64)], factor: f64) -> f64 {
    let (an, xn) = *terms.last().expect("nonempty");
    terms
        .iter()
        .filter(|t| t.0 < 0.0)
        .map(|&(a, x)| {
            // Log form keeps Gamma ratios finite for large exponents.
            let ln = an.ln() + ln_gamma(x) - factor.ln() - a.abs().ln() - ln_gamma(xn);
            (ln / (xn - x)).exp()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `min{ min_{k in K_a} (pi / x_{k+1}) (-S_n / S_k), pi / x_n }` with partial sums `S_k`.
fn screened_bound(terms: &[(f64, f64)]) -> Result<f64> {
    let total: f64 = terms.iter().map(|t| t.0).sum();
    let xn = terms.last().expect("nonempty").1;
    let mut bound = PI / xn;
    let mut partial = 0.0;
    let mut any = false;
    for k in 0..terms.len() {
        partial += terms[k].0;
        if partial < 0.0 {
            any = true;
            let next = terms
                .get(k + 1)
                .ok_or_else(|| not_applicable("total coefficient sum is negative"))?
                .1;
            bound = bound.min(PI / next * (-total / partial));
        }
    }
    if !any {
        return Err(not_applicable(
            "all partial sums nonnegative: completely monotonic, every area works",
        ));
    }
    if total <= 0.0 {
        return Err(not_applicable(
            "coefficient sum is zero while some partial sum is negative: the bound degenerates to 0",
        ));
    }
    Ok(bound)
}

/// `(zeta_L(2x) - zeta_Lambda1(2x))` with `L` rescaled to area 1.
fn zeta_gap(comparison: &ReducedLattice, x: f64, p: &Precision) -> Result<f64> {
    let unit = comparison.with_area(1.0)?;
    let tri = epstein_zeta_closed(ClosedShape::Triangular, 2.0 * x, p)?;
    let other = if unit.shape_distance(0.0, 1.0) < 1e-14 {
        epstein_zeta_closed(ClosedShape::Square, 2.0 * x, p)?
    } else {
        epstein_zeta_direct(&unit, 2.0 * x, p)?
    };
    Ok(other - tri)
}

/// Area above which `comparison` (rescaled) has strictly lower energy than the
/// triangular lattice of the same area:
/// `max_{a_i > 0} (#I+ a_i gap_i / (|a_1| gap_1))^(1 / (x_i - x_1))`.
pub fn area_bound_low_density(f: &Potential, comparison: &ReducedLattice) -> Result<f64> {
    let terms = match f.spec() {
        PotentialSpec::InversePowerSum { .. } | PotentialSpec::LennardJonesType { .. } => {
            f.power_terms()
        }
        _ => {
            return Err(not_applicable(
                "low-density bound needs an inverse power sum or a Lennard-Jones type potential",
            ))
        }
    };
    let (a1, x1) = terms[0];
    if a1 >= 0.0 {
        return Err(not_applicable("the lowest-order coefficient must be negative"));
    }
    let p = Precision::default();
    let g1 = zeta_gap(comparison, x1, &p)?;
    if !(g1 > 0.0) {
        return Err(not_applicable(
            "comparison lattice has the same energy as the triangular lattice",
        ));
    }
    let lambda = terms.iter().filter(|t| t.0 > 0.0).count() as f64;
    let mut best: f64 = 0.0;
    for &(a, x) in terms.iter().filter(|t| t.0 > 0.0) {
        let gi = zeta_gap(comparison, x, &p)?;
        best = best.max((lambda * a * gi / (a1.abs() * g1)).powf(1.0 / (x - x1)));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YukawaGlobalCheck {
    pub holds: bool,
    pub lhs: (f64, f64),
    /// Threshold `alpha` (squared distance) bounding the area of any global minimizer.
    pub alpha: f64,
    /// `min{pi / x2, (pi / x2)(a2 / a1 - 1)}`.
    pub certified_area: f64,
}

/// Evaluates the two global-minimality inequalities for the attractive-repulsive
/// Yukawa potential. Both at least 1 means the global minimizer is triangular.
pub fn yukawa_global_check(f: &Potential) -> Result<YukawaGlobalCheck> {
    let &PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 } = f.spec() else {
        return Err(Error::UnsupportedFamily {
            operation: "yukawa_global_check",
            family: f.family().name(),
        });
    };
    let q = x1 / x2;
    let lhs1 = a1 * (1.0 + q * PI) / (a2 * (1.0 + PI)) * ((1.0 - q) * PI).exp();
    let lhs2 = a1 * (a1 * x2 + x1 * (a2 - a1) * PI) / (a2 * x2 * (a1 + (a2 - a1) * PI))
        * ((1.0 - q) * (a2 / a1 - 1.0) * PI).exp();
    Ok(YukawaGlobalCheck {
        holds: lhs1 >= 1.0 && lhs2 >= 1.0,
        lhs: (lhs1, lhs2),
        alpha: yukawa_threshold(a1, a2, x1, x2)?,
        certified_area: (PI / x2).min(PI / x2 * (a2 / a1 - 1.0)),
    })
}

/// Root of `-X + ln(1 + X) - ln(2 + 2 pi) + pi`, the largest `pi x1 / x2`
/// allowed by the global test when `a2 = 2 a1`.
pub fn yukawa_equal_ratio_limit() -> f64 {
    let g = |x: f64| -x + x.ln_1p() - (2.0 + 2.0 * PI).ln() + PI;
    bisect(g, 0.0, 10.0, 1e-15).expect("sign change on [0, 10]")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LjGlobalCheck {
    pub holds: bool,
    /// Area of the best triangular lattice, the global minimizer when `holds`.
    pub minimizer_area: f64,
    /// `(a2 x2 / (a1 x1))^(1 / (x2 - x1))`, an upper bound for any global minimizer's area.
    pub area_upper_bound: f64,
    pub h_x1: f64,
    pub h_x2: f64,
}

/// `h(t) = pi^(-t) Gamma(t) t`.
pub fn h(t: f64) -> f64 {
    ln_h(t).exp()
}

fn ln_h(t: f64) -> f64 {
    -t * PI.ln() + ln_gamma(t) + t.ln()
}

pub fn lj_global_check(f: &Potential) -> Result<LjGlobalCheck> {
    let &PotentialSpec::LennardJonesType { a1, a2, x1, x2 } = f.spec() else {
        return Err(Error::UnsupportedFamily {
            operation: "lj_global_check",
            family: f.family().name(),
        });
    };
    let p = Precision::default();
    let z1 = epstein_zeta_closed(ClosedShape::Triangular, 2.0 * x1, &p)?;
    let z2 = epstein_zeta_closed(ClosedShape::Triangular, 2.0 * x2, &p)?;
    let e = 1.0 / (x2 - x1);
    Ok(LjGlobalCheck {
        holds: ln_h(x2) <= ln_h(x1),
        minimizer_area: (a2 * x2 * z2 / (a1 * x1 * z1)).powf(e),
        area_upper_bound: (a2 * x2 / (a1 * x1)).powf(e),
        h_x1: h(x1),
        h_x2: h(x2),
    })
}

/// Quantities derived from `y_min`, `r` and density of the Lennard-Jones
/// global minimizer with `a = (1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LjMinimizerSummary {
    pub y_min: f64,
    pub length: f64,
    pub density: f64,
}

pub fn lj_minimizer_summary(x1: f64, x2: f64) -> Result<LjMinimizerSummary> {
    let f = Potential::lennard_jones(1.0, 1.0, x1, x2)?;
    let g = lj_global_check(&f)?;
    Ok(LjMinimizerSummary {
        y_min: (x2 / x1).powf(1.0 / (2.0 * (x2 - x1))),
        length: (2.0 * g.minimizer_area / 3f64.sqrt()).sqrt(),
        density: 1.0 / g.minimizer_area,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HAnalysis {
    /// Minimum point of `h`, equal to `digamma^-1(ln pi) - 1`.
    pub argmin: f64,
    /// `M != 1` with `h(M) = h(1)`.
    pub conjugate_m: f64,
}

/// Upper end of the bracket used when solving `h(M) = h(x1)`.
pub const H_CONJUGATE_CAP: f64 = 40.0;

pub fn h_argmin() -> f64 {
    digamma_inverse(PI.ln()).expect("finite target") - 1.0
}

pub fn h_analysis() -> Result<HAnalysis> {
    Ok(HAnalysis {
        argmin: h_argmin(),
        conjugate_m: conjugate_of(1.0)?,
    })
}

/// The point `M > argmin` with `h(M) = h(x1)`, for `x1` on the decreasing branch.
pub fn conjugate_of(x1: f64) -> Result<f64> {
    let m = h_argmin();
    if !(x1 > 0.0 && x1 <= m + 1e-9) {
        return Err(Error::domain(
            "conjugate_of",
            format!("x1 must lie in (0, {m:.7}], the decreasing branch of h; got {x1}"),
        ));
    }
    if (x1 - m).abs() <= 1e-9 {
        return Ok(m);
    }
    let target = ln_h(x1);
    // d/dt ln h = -ln pi + digamma(t) + 1/t
    let g = |t: f64| (ln_h(t) - target, -PI.ln() + digamma(t) + 1.0 / t);
    newton_bracketed(g, m, H_CONJUGATE_CAP, 1e-14)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CounterexampleInterval {
    /// Coefficients of `P(A) = c2 A^2 + c1 A + c0`.
    pub coefficients: (f64, f64, f64),
    pub discriminant: f64,
    pub a1: f64,
    pub a2: f64,
}

/// Interval of areas where the square lattice beats the triangular one for
/// `V(r) = 14 r^-2 - 40 r^-3 + 35 r^-4`, a strictly convex decreasing
/// positive potential.
pub fn counterexample_interval() -> Result<CounterexampleInterval> {
    let p = Precision::default();
    let gap = |two_s: f64| -> Result<f64> {
        Ok(epstein_zeta_closed(ClosedShape::Square, two_s, &p)?
            - epstein_zeta_closed(ClosedShape::Triangular, two_s, &p)?)
    };
    let c2 = 14.0 * gap(4.0)?;
    let c1 = -40.0 * gap(6.0)?;
    let c0 = 35.0 * gap(8.0)?;
    quadratic_interval(c2, c1, c0)
}

/// Same polynomial with each zeta value replaced by the plain sum over the
/// box `|m|, |n| <= n_box`. Shows how far truncated sums move the interval.
pub fn counterexample_interval_box(n_box: i64) -> Result<CounterexampleInterval> {
    if n_box < 1 {
        return Err(Error::domain("counterexample_interval_box", "box size must be >= 1"));
    }
    let box_sums = |lat: &ReducedLattice| -> [f64; 3] {
        let b = lat.basis();
        let mut acc = [0.0f64; 3];
        for m in -n_box..=n_box {
            for n in -n_box..=n_box {
                if m == 0 && n == 0 {
                    continue;
                }
                let px = m as f64 * b.u[0] + n as f64 * b.v[0];
                let py = m as f64 * b.u[1] + n as f64 * b.v[1];
                let r = px * px + py * py;
                acc[0] += r.powi(-2);
                acc[1] += r.powi(-3);
                acc[2] += r.powi(-4);
            }
        }
        acc
    };
    let sq = box_sums(&ReducedLattice::square(1.0)?);
    let tr = box_sums(&ReducedLattice::triangular(1.0)?);
    quadratic_interval(
        14.0 * (sq[0] - tr[0]),
        -40.0 * (sq[1] - tr[1]),
        35.0 * (sq[2] - tr[2]),
    )
}

fn quadratic_interval(c2: f64, c1: f64, c0: f64) -> Result<CounterexampleInterval> {
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc <= 0.0 {
        return Err(not_applicable("non-positive discriminant"));
    }
    let sq = disc.sqrt();
    Ok(CounterexampleInterval {
        coefficients: (c2, c1, c0),
        discriminant: disc,
        a1: (-c1 - sq) / (2.0 * c2),
        a2: (-c1 + sq) / (2.0 * c2),
    })
}

/// `C_{A0} = a2 pi^(x2+1) / (a1 A0^(x2+1/2) Gamma(x2))`: for `0 < x1 <= C_{A0}`
/// the triangular lattice is optimal at every area in `(0, A0]`.
pub fn opp_buckingham_x1_threshold(a1: f64, a2: f64, x2: f64, area0: f64) -> Result<f64> {
    if !(a1 > 0.0 && a2 > 0.0 && x2 > 1.5 && area0 > 0.0) {
        return Err(Error::domain(
            "opp_buckingham_x1_threshold",
            "need a1, a2 > 0, x2 > 3/2 and A0 > 0",
        ));
    }
    Ok(a2 * PI.powf(x2 + 1.0) / (a1 * area0.powf(x2 + 0.5) * gamma(x2)))
}

/// Whether the potential is completely monotonic by the exact inequality.
pub fn opp_buckingham_is_cm(a1: f64, a2: f64, x1: f64, x2: f64) -> bool {
    opp_buckingham_cm_margin(a1, a2, x1, x2) >= 0.0
}
