use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::gamma::{gamma, upper_gamma, upper_gamma_regularized};
use super::hurwitz::{hurwitz_zeta, riemann_zeta};
use super::{Precision, SeriesValue};
use crate::error::{Error, Result};
use crate::lattice::{gaussian_tail_bound, ReducedLattice, HALF_SQRT_3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedShape {
    Square,
    Triangular,
}

fn check_two_s(function: &'static str, two_s: f64) -> Result<()> {
    if two_s > 2.0 && two_s.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(function, format!("need two_s > 2, got {two_s}")))
    }
}

/// Epstein zeta of the area-one square or triangular lattice through its
/// Hurwitz-zeta factorisation.
pub fn epstein_zeta_closed(shape: ClosedShape, two_s: f64, p: &Precision) -> Result<f64> {
    check_two_s("epstein_zeta_closed", two_s)?;
    let s = 0.5 * two_s;
    let z = riemann_zeta(s, p)?;
    Ok(match shape {
        ClosedShape::Square => {
            let l = hurwitz_zeta(s, 0.25, p)? - hurwitz_zeta(s, 0.75, p)?;
            4f64.powf(1.0 - s) * z * l
        }
        ClosedShape::Triangular => {
            let l = hurwitz_zeta(s, 1.0 / 3.0, p)? - hurwitz_zeta(s, 2.0 / 3.0, p)?;
            6.0 * HALF_SQRT_3.powf(s) * 3f64.powf(-s) * z * l
        }
    })
}

/// Picks `L` so that `bound(L) <= target`, growing in fixed steps.
fn cutoff_exponent<F: Fn(f64) -> f64>(start: f64, target: f64, bound: F) -> f64 {
    let mut l = start;
    while bound(l) > target && l < 2000.0 {
        l += 2.0;
    }
    l
}

struct EwaldPlan {
    s: f64,
    gamma_s: f64,
}

/// Shared enumeration of the Ewald split for several exponents at once.
///
/// With `eta = 1 / area` the sum becomes
/// `sum_p |p|^(-2s) Q(s, pi eta |p|^2)`
/// `+ (pi/A)^s / Gamma(s) [1/(s-1) - 1/s]`
/// `+ pi^s / (A Gamma(s)) sum_q (pi |q|^2)^(s-1) Gamma(1-s, pi A |q|^2)`
/// where `q` runs over the dual lattice.
pub fn epstein_zeta_many(
    lat: &ReducedLattice,
    two_s: &[f64],
    p: &Precision,
) -> Result<Vec<SeriesValue>> {
    for &t in two_s {
        check_two_s("epstein_zeta_direct", t)?;
    }
    if two_s.is_empty() {
        return Ok(Vec::new());
    }
    let area = lat.area();
    let dual = lat.dual()?;
    let diam = lat.cell_diameter();
    let dual_diam = dual.cell_diameter();
    let plans: Vec<EwaldPlan> = two_s
        .iter()
        .map(|&t| {
            let s = 0.5 * t;
            EwaldPlan { s, gamma_s: gamma(s) }
        })
        .collect();
    let s_max = plans.iter().map(|e| e.s).fold(0.0, f64::max);
    // The sum is at least the contribution of the two shortest vectors.
    let target = plans
        .iter()
        .map(|e| {
            let lower = 2.0 * lat.min_norm2().powf(-e.s);
            (p.abs_tol.min(p.rel_tol * lower)) * 1e-2
        })
        .fold(f64::INFINITY, f64::min);

    let direct_bound = |l: f64, e: &EwaldPlan| {
        // Radius with pi R^2 / A = l.
        let r2 = l * area / PI;
        let c = PI / area;
        2.0 * (PI / area).powf(e.s - 1.0) / e.gamma_s / r2
            * gaussian_tail_bound(c, r2.sqrt(), area, diam)
    };
    let dual_bound = |l: f64, e: &EwaldPlan| {
        let r2 = l / (PI * area);
        let c = PI * area;
        PI.powf(e.s) / (area * e.gamma_s) * area.powf(-e.s) / (PI * r2)
            * gaussian_tail_bound(c, r2.sqrt(), 1.0 / area, dual_diam)
    };
    let l_direct = cutoff_exponent(2.0 * (s_max - 1.0).max(1.0) + 20.0, target, |l| {
        plans.iter().map(|e| direct_bound(l, e)).fold(0.0, f64::max)
    });
    let l_dual = cutoff_exponent(20.0, target, |l| {
        plans.iter().map(|e| dual_bound(l, e)).fold(0.0, f64::max)
    });
    let r2_direct = l_direct * area / PI;
    let r2_dual = l_dual / (PI * area);

    let budget_err = |e: Error| match e {
        Error::BudgetExceeded { estimated, budget } => Error::SlowConvergence(format!(
            "Epstein zeta needs about {estimated:.3e} lattice points, budget {budget:.3e}"
        )),
        other => other,
    };
    let direct_shells = lat
        .shells_with_budget(r2_direct, p.max_terms)
        .map_err(budget_err)?;
    let dual_shells = dual
        .shells_with_budget(r2_dual, p.max_terms)
        .map_err(budget_err)?;

    plans
        .iter()
        .map(|e| {
            let s = e.s;
            let mut direct = 0.0;
            for sh in direct_shells.entries().iter().rev() {
                let q = upper_gamma_regularized(s, PI * sh.norm2 / area)?;
                direct += sh.multiplicity as f64 * sh.norm2.powf(-s) * q;
            }
            let mut recip = 0.0;
            for sh in dual_shells.entries().iter().rev() {
                let g = upper_gamma(1.0 - s, PI * area * sh.norm2)?;
                recip += sh.multiplicity as f64 * (PI * sh.norm2).powf(s - 1.0) * g;
            }
            let constant = (PI / area).powf(s) / e.gamma_s * (1.0 / (s - 1.0) - 1.0 / s);
            let value = direct + constant + PI.powf(s) / (area * e.gamma_s) * recip;
            let error_bound = direct_bound(l_direct, e) + dual_bound(l_dual, e);
            Ok(SeriesValue {
                value,
                error_bound,
                cutoff_r2: r2_direct,
            })
        })
        .collect()
}

/// Epstein zeta `sum_{p != 0} |p|^(-two_s)` with a bound on the truncation error.
pub fn epstein_zeta_with_bound(
    lat: &ReducedLattice,
    two_s: f64,
    p: &Precision,
) -> Result<SeriesValue> {
    Ok(epstein_zeta_many(lat, &[two_s], p)?[0])
}

/// Epstein zeta `sum_{p != 0} |p|^(-two_s)` of an arbitrary lattice.
pub fn epstein_zeta_direct(lat: &ReducedLattice, two_s: f64, p: &Precision) -> Result<f64> {
    Ok(epstein_zeta_with_bound(lat, two_s, p)?.value)
}
