//! Lattice energies `E_f[L] = sum_{p != 0} f(|p|^2)` and the positivity test
//! on `g_A` that certifies the triangular lattice at fixed area.

use std::f64::consts::PI;

use serde::Serialize;

use crate::criteria::area_bound_high_density;
use crate::error::{Error, Result};
use crate::lattice::{exponential_tail_bound, gaussian_tail_bound, ReducedLattice};
use crate::potentials::{log_grid, Atom, InverseLaplaceForm, Potential, SAMPLE_POINTS};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::roots::bisect;
use crate::specfun::{epstein_zeta_many, theta_punctured, upper_gamma, Precision};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergyMethod {
    Direct,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyValue {
    pub value: f64,
    pub error_bound: f64,
    pub method: EnergyMethod,
    pub cutoff_r2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant_ca: Option<f64>,
}

fn budget_to_slow(e: Error) -> Error {
    match e {
        Error::BudgetExceeded { estimated, budget } => Error::SlowConvergence(format!(
            "energy sum needs about {estimated:.3e} lattice points, budget {budget:.3e}"
        )),
        other => other,
    }
}

/// Energy by lattice summation. Power terms go through the Ewald form of the
/// Epstein zeta function; exponentially decaying terms are summed over shells
/// up to a radius where their rigorous tail bound is below the target.
pub fn energy_direct(f: &Potential, lat: &ReducedLattice, p: &Precision) -> Result<EnergyValue> {
    let atoms = f.atoms();
    let mut value = 0.0;
    let mut error = 0.0;
    let mut cutoff: f64 = 0.0;

    let powers: Vec<(f64, f64)> = f.power_terms();
    if !powers.is_empty() {
        let exps: Vec<f64> = powers.iter().map(|&(_, x)| 2.0 * x).collect();
        let zetas = epstein_zeta_many(lat, &exps, p)?;
        // Sum from the most rapidly decaying term to reduce cancellation error.
        for (&(a, _), z) in powers.iter().zip(zetas.iter()).rev() {
            value += a * z.value;
            error += a.abs() * z.error_bound;
            cutoff = cutoff.max(z.cutoff_r2);
        }
    }

    let others: Vec<Atom> = atoms
        .iter()
        .copied()
        .filter(|at| !matches!(at, Atom::Power { .. }))
        .collect();
    if !others.is_empty() {
        let area = lat.area();
        let diam = lat.cell_diameter();
        let target = 1e-2 * p.abs_tol;
        let tail = |r2: f64| -> f64 {
            let r = r2.sqrt();
            others
                .iter()
                .map(|at| match *at {
                    Atom::Screened { a, x } => a.abs() / r2 * gaussian_tail_bound(x, r, area, diam),
                    Atom::RootExp { b, t } => b.abs() * exponential_tail_bound(t, r, area, diam),
                    Atom::Power { .. } => 0.0,
                })
                .sum()
        };
        let mut r2 = lat.min_norm2().max(1e-300);
        while tail(r2) > target {
            r2 *= 1.25;
            if r2 > 1e300 {
                return Err(Error::SlowConvergence("energy tail bound does not decay".into()));
            }
        }
        let shells = lat
            .shells_with_budget(r2, p.max_terms)
            .map_err(budget_to_slow)?;
        let part = shells.sum(|n2| others.iter().map(|at| at.eval(n2)).sum());
        value += part;
        error += tail(r2);
        cutoff = cutoff.max(r2);
    }
    Ok(EnergyValue {
        value,
        error_bound: error,
        method: EnergyMethod::Direct,
        cutoff_r2: cutoff,
        constant_ca: None,
    })
}

/// `g_A(y) = y^(-1) mu_f(pi / (y A)) + mu_f(pi y / A)`.
pub fn g_eval(f: &Potential, area: f64, y: f64) -> Result<f64> {
    check_area(area)?;
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::domain("g_eval", format!("need y > 0, got {y}")));
    }
    Ok(g_with(&f.inverse_laplace(), area, y))
}

fn g_with(mu: &InverseLaplaceForm, area: f64, y: f64) -> f64 {
    mu.eval(PI / (y * area)) / y + mu.eval(PI * y / area)
}

fn check_area(area: f64) -> Result<()> {
    if area > 0.0 && area.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveArea(area))
    }
}

/// Points `y > 1` where `g_A` jumps because a step of `mu_f` is crossed.
fn g_breakpoints(mu: &InverseLaplaceForm, area: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for thr in mu.breakpoints() {
        for y in [area * thr / PI, PI / (area * thr)] {
            if y > 1.0 && y.is_finite() {
                out.push(y);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

/// `C_A = (pi/A) int_1^inf mu_f(pi / (y A)) (1/y - 1/y^2) dy` in closed form.
pub fn constant_ca(f: &Potential, area: f64) -> Result<f64> {
    check_area(area)?;
    let mu = f.inverse_laplace();
    let k = PI / area;
    let mut total = 0.0;
    for p in &mu.power_terms {
        // int_0^inf (k e^-u)^e (1 - e^-u) du = k^e / (e (e + 1))
        let e = p.exponent;
        if e <= 0.0 {
            return Err(Error::domain(
                "constant_ca",
                "power terms need exponent x > 1 for a finite constant",
            ));
        }
        total += p.coeff * k.powf(e) / (e * (e + 1.0));
    }
    for s in &mu.step_terms {
        // Active while k e^-u >= threshold, i.e. u <= U = ln(k / threshold).
        let u = (k / s.threshold).ln();
        if u > 0.0 {
            total += s.height * (u - 1.0 + (-u).exp());
        }
    }
    for h in &mu.heat_terms {
        // In y: coeff (yA/pi)^(3/2) exp(-t^2 A y / (4 pi)) (1/y - 1/y^2)
        // = coeff (A/pi)^(3/2) [k'^(-3/2) Gamma(3/2, k') - k'^(-1/2) Gamma(1/2, k')]
        let kk = h.t * h.t * area / (4.0 * PI);
        let part = kk.powf(-1.5) * upper_gamma(1.5, kk)? - kk.powf(-0.5) * upper_gamma(0.5, kk)?;
        total += h.coeff * (area / PI).powf(1.5) * part;
    }
    Ok(k * total)
}

/// Energy through `E = (pi/A) int_1^inf [theta_L(y / 2A) - 1] g_A(y) dy + C_A`.
pub fn energy_integral(f: &Potential, lat: &ReducedLattice, p: &Precision) -> Result<EnergyValue> {
    let area = lat.area();
    let mu = f.inverse_laplace();
    let ca = constant_ca(f, area)?;
    let bps = g_breakpoints(&mu, area);
    let first_error = std::cell::Cell::new(None::<Error>);
    let integrand = |y: f64| -> f64 {
        match theta_punctured(lat, y / (2.0 * area), p) {
            Ok(t) => t.value * g_with(&mu, area, y),
            Err(e) => {
                if first_error.take().is_none() {
                    first_error.set(Some(e));
                }
                f64::NAN
            }
        }
    };
    // The integrand decays like exp(-pi y m / A) with m the squared minimum
    // norm, so the first panel spans a few decay lengths.
    let decay = (area / (PI * lat.min_norm2())).max(0.05);
    let res = integrate_to_infinity(
        integrand,
        1.0,
        4.0 * decay,
        &bps,
        p.abs_tol,
        p.rel_tol.max(1e-13),
        1e-17,
    );
    if let Some(e) = first_error.take() {
        return Err(e);
    }
    let res = res?;
    Ok(EnergyValue {
        value: PI / area * res.value + ca,
        error_bound: PI / area * res.error,
        method: EnergyMethod::Integral,
        cutoff_r2: 0.0,
        constant_ca: Some(ca),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConditionStatus {
    CertifiedPositive,
    CertifiedNegative,
    SampledPositive,
    SampledNegative,
    Inconclusive,
}

impl ConditionStatus {
    pub fn is_positive(self) -> bool {
        matches!(
            self,
            ConditionStatus::CertifiedPositive | ConditionStatus::SampledPositive
        )
    }
}

/// Outcome of the `g_A >= 0` test. A negative status only says the sufficient
/// condition fails; it does not show that the triangular lattice loses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub area: f64,
    pub status: ConditionStatus,
    /// `(y, g_A(y))` samples: the minimising sample, plus any negative ones found.
    pub witnesses: Vec<(f64, f64)>,
    pub certification_route: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_upper_limit: Option<f64>,
}

/// `g_A` on `[1, inf)` as a sum of `coeff * y^exponent` terms plus heat-kernel
/// contributions bounded separately; used for the tail certificate.
fn tail_start(mu: &InverseLaplaceForm, area: f64) -> Option<f64> {
    let k = PI / area;
    let lead = mu.power_terms.last()?;
    if lead.coeff <= 0.0 {
        return None;
    }
    let e_n = lead.exponent;
    if mu
        .heat_terms
        .iter()
        .any(|_| e_n < 0.5)
    {
        return None;
    }
    let leading = |y: f64| lead.coeff * k.powf(e_n) * y.powf(e_n);
    let rest = |y: f64| -> f64 {
        let mut s = 0.0;
        for p in &mu.power_terms[..mu.power_terms.len() - 1] {
            let c = (p.coeff * k.powf(p.exponent)).abs();
            s += c * (y.powf(p.exponent) + y.powf(-p.exponent - 1.0));
        }
        for h in &mu.heat_terms {
            let c = h.coeff.abs();
            // mu(pi y / A) term, bounded by dropping the exponential factor.
            s += c * (k * y).powf(-1.5);
            // y^-1 mu(pi / (y A)) term.
            s += c * (y / k).powf(0.5) * (-h.t * h.t * y / (4.0 * k)).exp() / k;
        }
        s
    };
    let mut y = 10.0;
    for _ in 0..200 {
        if leading(y) >= 10.0 * rest(y) {
            return Some(y);
        }
        y *= 2.0;
    }
    None
}

/// Exact test for step-function transforms: `g_A = c1 / y + c2` between
/// consecutive breakpoints, so its infimum is attained at piece endpoints.
fn step_exact(mu: &InverseLaplaceForm, area: f64) -> (bool, Vec<(f64, f64)>) {
    let mut cuts = vec![1.0];
    cuts.extend(g_breakpoints(mu, area));
    let mut worst = (1.0, f64::INFINITY);
    let mut negatives = Vec::new();
    let mut record = |y: f64, v: f64, worst: &mut (f64, f64)| {
        if v < worst.1 {
            *worst = (y, v);
        }
        if v < 0.0 {
            negatives.push((y, v));
        }
    };
    for i in 0..cuts.len() {
        let lo = cuts[i];
        let hi = cuts.get(i + 1).copied();
        let mid = match hi {
            Some(h) => 0.5 * (lo + h),
            None => 2.0 * lo,
        };
        // Constants of the piece read off at interior points.
        let c1 = mu.eval(PI / (mid * area));
        let c2 = mu.eval(PI * mid / area);
        record(lo, c1 / lo + c2, &mut worst);
        match hi {
            Some(h) => record(h, c1 / h + c2, &mut worst),
            None => record(f64::INFINITY, c2, &mut worst),
        }
    }
    let ok = negatives.is_empty();
    let mut witnesses = vec![worst];
    witnesses.extend(negatives.into_iter().take(8));
    (ok, witnesses)
}

/// Tests `g_A(y) >= 0` for all `y >= 1`.
pub fn check_sufficient_condition(f: &Potential, area: f64) -> Result<ConditionReport> {
    check_area(area)?;
    let mu = f.inverse_laplace();
    let report = |status, witnesses, route: &str, upper| ConditionReport {
        area,
        status,
        witnesses,
        certification_route: route.to_string(),
        sample_upper_limit: upper,
    };
    let mono = f.classify_monotonicity();
    if mono.is_completely_monotonic() {
        return Ok(report(
            ConditionStatus::CertifiedPositive,
            vec![(1.0, g_with(&mu, area, 1.0))],
            "completely_monotonic",
            None,
        ));
    }
    if let Ok(bound) = area_bound_high_density(f) {
        if area <= bound.area_bound {
            return Ok(report(
                ConditionStatus::CertifiedPositive,
                vec![(1.0, g_with(&mu, area, 1.0))],
                bound.route,
                None,
            ));
        }
    }
    if mu.has_steps() && mu.power_terms.is_empty() && mu.heat_terms.is_empty() {
        let (ok, witnesses) = step_exact(&mu, area);
        let status = if ok {
            ConditionStatus::CertifiedPositive
        } else {
            ConditionStatus::CertifiedNegative
        };
        return Ok(report(status, witnesses, "step_function_exact", None));
    }
    let Some(y_star) = tail_start(&mu, area) else {
        // No tail certificate available: sample only.
        let (worst, negative) = sample_g(&mu, area, 1e6);
        let status = if negative.is_some() {
            ConditionStatus::SampledNegative
        } else {
            ConditionStatus::Inconclusive
        };
        let mut w = vec![worst];
        w.extend(negative.filter(|&n| n != worst));
        return Ok(report(status, w, "sampled_without_tail_certificate", Some(1e6)));
    };
    let (worst, negative) = sample_g(&mu, area, y_star);
    let mut w = vec![worst];
    let status = match negative {
        Some(n) => {
            if n != worst {
                w.push(n);
            }
            ConditionStatus::SampledNegative
        }
        None => ConditionStatus::SampledPositive,
    };
    Ok(report(status, w, "sampled_with_tail_certificate", Some(y_star)))
}

/// Minimum sample of `g_A` over a log grid on `[1, upper]`, and the first negative one.
fn sample_g(mu: &InverseLaplaceForm, area: f64, upper: f64) -> ((f64, f64), Option<(f64, f64)>) {
    let mut worst = (1.0, f64::INFINITY);
    let mut negative = None;
    for y in log_grid(1.0, upper, SAMPLE_POINTS) {
        let v = g_with(mu, area, y);
        if v < worst.1 {
            worst = (y, v);
        }
        if v < 0.0 && negative.is_none() {
            negative = Some((y, v));
        }
    }
    (worst, negative)
}

/// Result of the differentiable-transform criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct C1Report {
    pub report: ConditionReport,
    /// `mu_f >= 0` on `[pi / A, inf)`.
    pub condition1: bool,
    /// `mu_f'(pi y / A) >= y^-3 mu_f'(pi / (A y))` for `y >= 1`.
    pub condition2: bool,
    /// `mu_f'' >= 0` on the sample grid.
    pub convex: bool,
    /// Last point where `mu_f` becomes nonnegative for good (0 if it never is negative).
    pub r0: Option<f64>,
    /// `pi / r0` when `mu_f` is convex.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a0: Option<f64>,
}

/// `sup {y : mu_f(y) < 0}` located on the sample grid and refined by bisection;
/// `None` when `mu_f` is still negative at the top of the grid.
fn last_negative_point(mu: &InverseLaplaceForm) -> Option<f64> {
    let grid: Vec<f64> = log_grid(1e-6, 1e6, SAMPLE_POINTS).collect();
    if mu.eval(*grid.last().unwrap()) < 0.0 {
        return None;
    }
    let last_neg = grid.iter().rposition(|&y| mu.eval(y) < 0.0);
    match last_neg {
        None => Some(0.0),
        Some(i) => {
            let (lo, hi) = (grid[i], grid[i + 1]);
            Some(bisect(|y| mu.eval(y), lo, hi, 1e-14 * hi).unwrap_or(hi))
        }
    }
}

fn second_derivative(mu: &InverseLaplaceForm, y: f64) -> f64 {
    let mut s = 0.0;
    for p in &mu.power_terms {
        let e = p.exponent;
        s += p.coeff * e * (e - 1.0) * y.powf(e - 2.0);
    }
    for h in &mu.heat_terms {
        let k = h.t * h.t / 4.0;
        let phi = y.powf(-1.5) * (-k / y).exp();
        let d = -1.5 / y + k / (y * y);
        s += h.coeff * phi * (d * d + 1.5 / (y * y) - 2.0 * k / (y * y * y));
    }
    s
}

/// Checks the two sufficient conditions for differentiable transforms.
pub fn check_c1_criterion(f: &Potential, area: f64) -> Result<C1Report> {
    check_area(area)?;
    let mu = f.inverse_laplace();
    if mu.has_steps() {
        return Err(Error::UnsupportedFamily {
            operation: "check_c1_criterion",
            family: f.family().name(),
        });
    }
    let k = PI / area;
    let r0 = last_negative_point(&mu);
    let condition1 = matches!(r0, Some(r) if r <= k * (1.0 + 1e-12));
    let mut witnesses = Vec::new();
    if !condition1 {
        // Negative value of mu_f right of pi / A.
        let probe = log_grid(k, k * 1e6, SAMPLE_POINTS)
            .map(|y| (y, mu.eval(y)))
            .find(|&(_, v)| v < 0.0);
        witnesses.extend(probe);
    }
    let mut worst2 = (1.0, f64::INFINITY);
    for y in log_grid(1.0, 1e6, SAMPLE_POINTS) {
        let lhs = mu.derivative(k * y)?;
        let rhs = mu.derivative(k / y)? / (y * y * y);
        // Rounding slack relative to the size of both sides.
        let margin = lhs - rhs + 1e-12 * (lhs.abs() + rhs.abs());
        if margin < worst2.1 {
            worst2 = (y, margin);
        }
    }
    let condition2 = worst2.1 >= 0.0;
    if !condition2 {
        witnesses.push((worst2.0, g_with(&mu, area, worst2.0)));
    }
    let convex = log_grid(1e-6, 1e6, SAMPLE_POINTS).all(|y| second_derivative(&mu, y) >= 0.0);
    let a0 = if convex {
        r0.map(|r| if r > 0.0 { PI / r } else { f64::INFINITY })
    } else {
        None
    };
    let status = if condition1 && condition2 {
        ConditionStatus::SampledPositive
    } else {
        ConditionStatus::Inconclusive
    };
    if witnesses.is_empty() {
        witnesses.push((1.0, g_with(&mu, area, 1.0)));
    }
    Ok(C1Report {
        report: ConditionReport {
            area,
            status,
            witnesses,
            certification_route: "c1_transform_criterion".to_string(),
            sample_upper_limit: Some(1e6),
        },
        condition1,
        condition2,
        convex,
        r0,
        a0,
    })
}

/// Quadrature value of `C_A`, used to cross-check [`constant_ca`].
pub fn constant_ca_quadrature(f: &Potential, area: f64) -> Result<f64> {
    check_area(area)?;
    let mu = f.inverse_laplace();
    let k = PI / area;
    // Substituting y = e^u gives (pi/A) int_0^inf mu(k e^-u) (1 - e^-u) du.
    let bps: Vec<f64> = mu
        .breakpoints()
        .iter()
        .map(|thr| (k / thr).ln())
        .filter(|u| *u > 0.0)
        .collect();
    let upper = 60.0 + bps.iter().fold(0.0_f64, |m, &u| m.max(u));
    let r = integrate(
        |u| mu.eval(k * (-u).exp()) * (-(-u).exp_m1()),
        0.0,
        upper,
        &bps,
        1e-15,
        1e-12,
    )?;
    Ok(k * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{epstein_zeta_closed, ClosedShape};
    use approx::assert_relative_eq;

    fn p() -> Precision {
        Precision::default()
    }

    fn convex_example() -> Potential {
        Potential::inverse_power_sum(&[(14.0, 2.0), (-40.0, 3.0), (35.0, 4.0)]).unwrap()
    }

    fn lj36() -> Potential {
        Potential::lennard_jones(2.0, 1.0, 3.0, 6.0).unwrap()
    }

    #[test]
    fn power_energy_is_zeta() {
        let f = Potential::inverse_power_sum(&[(1.0, 2.0)]).unwrap();
        let e = energy_direct(&f, &ReducedLattice::square(1.0).unwrap(), &p()).unwrap();
        let z = epstein_zeta_closed(ClosedShape::Square, 4.0, &p()).unwrap();
        assert_relative_eq!(e.value, z, max_relative = 1e-13);
    }

    #[test]
    fn square_beats_triangular_for_convex_example_at_three() {
        let sq = energy_direct(&convex_example(), &ReducedLattice::square(3.0).unwrap(), &p()).unwrap();
        let tr = energy_direct(&convex_example(), &ReducedLattice::triangular(3.0).unwrap(), &p()).unwrap();
        assert!(sq.value < tr.value);
    }

    #[test]
    fn lj_triangular_against_brute_force() {
        // Double sum over |m|, |n| <= 2000 with the integral-comparison tail.
        let lat = ReducedLattice::triangular(1.0).unwrap();
        let b = lat.basis();
        // Neumaier compensated summation; a plain loop loses ~1e-11 here.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        let n_max = 2000i64;
        for m in -n_max..=n_max {
            for n in -n_max..=n_max {
                if m == 0 && n == 0 {
                    continue;
                }
                let px = m as f64 * b.u[0] + n as f64 * b.v[0];
                let py = m as f64 * b.u[1] + n as f64 * b.v[1];
                let r = px * px + py * py;
                let v = r.powi(-6) - 2.0 * r.powi(-3);
                let t = sum + v;
                comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
                sum = t;
            }
        }
        let sum = sum + comp;
        let e = energy_direct(&lj36(), &lat, &p()).unwrap();
        // The part beyond the box is about pi / R^4 with R ~ 1700.
        assert!((e.value - sum).abs() < 1e-12, "{} vs {}", e.value, sum);
    }

    #[test]
    fn screened_and_root_exponential_direct_sums() {
        let lat = ReducedLattice::new(0.1, 1.2, 0.9).unwrap();
        let f = Potential::exp_decay(&[(1.0, 2.0)], &[(0.7, 1.3)]).unwrap();
        let e = energy_direct(&f, &lat, &p()).unwrap();
        let shells = lat.shells(90_000.0).unwrap();
        let brute = shells.sum(|r| r.powi(-2) + 0.7 * (-1.3 * r.sqrt()).exp());
        // Power tail beyond R = 300 is ~ 2 pi / (A R^2) * 1/2 ~ 4e-5; compare only the
        // exponential part separately.
        let ewald_power = energy_direct(
            &Potential::inverse_power_sum(&[(1.0, 2.0)]).unwrap(),
            &lat,
            &p(),
        )
        .unwrap()
        .value;
        let brute_exp = shells.sum(|r| 0.7 * (-1.3 * r.sqrt()).exp());
        assert_relative_eq!(e.value - ewald_power, brute_exp, max_relative = 1e-12);
        assert!((e.value - brute).abs() < 1e-4);

        let y = Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap();
        let ey = energy_direct(&y, &lat, &p()).unwrap();
        let brute_y = lat
            .shells(400.0)
            .unwrap()
            .sum(|r| (2.0 * (-2.0 * r).exp() - (-r).exp()) / r);
        assert_relative_eq!(ey.value, brute_y, max_relative = 1e-13);
    }

    #[test]
    fn integral_matches_direct() {
        let cases = vec![
            lj36(),
            Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap(),
            convex_example(),
            Potential::opp_buckingham(1.0, 2.0, 1.0, 6.0).unwrap(),
            Potential::exp_decay(&[(-1.0, 2.0), (2.0, 3.0)], &[(1.5, 1.2)]).unwrap(),
        ];
        for f in &cases {
            for &area in &[0.5, 1.0, 2.0] {
                for lat in [
                    ReducedLattice::triangular(area).unwrap(),
                    ReducedLattice::square(area).unwrap(),
                    ReducedLattice::new(0.3, 1.7, area).unwrap(),
                ] {
                    let d = energy_direct(f, &lat, &p()).unwrap();
                    let i = energy_integral(f, &lat, &p())
                        .unwrap_or_else(|e| panic!("{:?} {area} {:?}: {e}", f.family(), lat.shape()));
                    assert!(
                        (d.value - i.value).abs() <= 1e-9 * d.value.abs().max(1e-3),
                        "{:?} {area}: {} vs {}",
                        f.family(),
                        d.value,
                        i.value
                    );
                }
            }
        }
    }

    #[test]
    fn constant_closed_form_matches_quadrature() {
        for f in [
            lj36(),
            Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap(),
            Potential::opp_buckingham(1.0, 2.0, 1.0, 6.0).unwrap(),
        ] {
            for &area in &[0.5, 1.0, 3.0] {
                assert_relative_eq!(
                    constant_ca(&f, area).unwrap(),
                    constant_ca_quadrature(&f, area).unwrap(),
                    max_relative = 1e-10
                );
            }
        }
    }

    #[test]
    fn g_matches_displayed_lj_formula() {
        // The bracketed closed form equals y * g_A(y).
        for &(area, y) in &[(1.0f64, 1.0f64), (0.8, 2.5), (1.3, 7.0)] {
            let want = PI * PI / (area * area)
                * (PI.powi(3) / (area.powi(3) * 120.0) * (y.powi(6) + y.powi(-5))
                    - y.powi(3)
                    - y.powi(-2));
            assert_relative_eq!(y * g_eval(&lj36(), area, y).unwrap(), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn g_step_example() {
        let f = Potential::screened_coulomb_sum(&[(-1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert_relative_eq!(g_eval(&f, PI / 4.0, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn g_positive_for_positive_transform() {
        let f = Potential::inverse_power_sum(&[(1.0, 2.0), (3.0, 4.5)]).unwrap();
        assert!(g_eval(&f, 1.0, 1.0).unwrap() > 0.0);
    }

    #[test]
    fn sufficient_condition_examples() {
        let a = PI / 120f64.cbrt();
        let r = check_sufficient_condition(&lj36(), a).unwrap();
        assert_eq!(r.status, ConditionStatus::CertifiedPositive);
        let r = check_sufficient_condition(&lj36(), 1.0).unwrap();
        assert_eq!(r.status, ConditionStatus::SampledNegative);
        assert!(r.witnesses.iter().any(|w| w.1 < 0.0));
        let cm = Potential::inverse_power_sum(&[(1.0, 2.0), (2.0, 3.0)]).unwrap();
        assert_eq!(
            check_sufficient_condition(&cm, 17.0).unwrap().status,
            ConditionStatus::CertifiedPositive
        );
        // Just above the bound the sampled route still finds g >= 0 here.
        let r = check_sufficient_condition(&lj36(), 1.02 * a).unwrap();
        assert_ne!(r.status, ConditionStatus::CertifiedPositive);
    }

    #[test]
    fn step_route_is_exact() {
        let f = Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap();
        let big = check_sufficient_condition(&f, 5.0).unwrap();
        assert_eq!(big.certification_route, "step_function_exact");
        assert_eq!(big.status, ConditionStatus::CertifiedNegative);
        assert!(big.witnesses.iter().any(|w| w.1 < 0.0));
    }

    #[test]
    fn c1_convex_example() {
        // mu(y) = y^2 - y  <=>  f(r) = 2 r^-3 - r^-2.
        let f = Potential::inverse_power_sum(&[(-1.0, 2.0), (2.0, 3.0)]).unwrap();
        let c = check_c1_criterion(&f, PI).unwrap();
        assert!(c.convex);
        assert_relative_eq!(c.r0.unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.a0.unwrap(), PI, max_relative = 1e-12);
        assert!(c.condition1 && c.condition2);
        let c = check_c1_criterion(&f, 4.0).unwrap();
        assert!(!c.condition1);
    }

    #[test]
    fn c1_positive_transform_and_convex_example() {
        let f = Potential::inverse_power_sum(&[(1.0, 2.0), (2.0, 3.0)]).unwrap();
        for &a in &[0.1, 1.0, 50.0] {
            let c = check_c1_criterion(&f, a).unwrap();
            assert!(c.condition1 && c.condition2);
        }
        let c = check_c1_criterion(&convex_example(), 10.0).unwrap();
        assert!(!c.condition1);
        assert!(!c.convex);
        let y = Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap();
        assert!(matches!(
            check_c1_criterion(&y, 1.0),
            Err(Error::UnsupportedFamily { .. })
        ));
    }
}
