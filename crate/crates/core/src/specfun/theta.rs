use std::f64::consts::PI;

use super::{Precision, SeriesValue};
use crate::error::{Error, Result};
use crate::lattice::{gaussian_tail_bound, ReducedLattice};

/// Sum over the nonzero lattice points only.
fn direct_punctured(lat: &ReducedLattice, alpha: f64, p: &Precision) -> Result<SeriesValue> {
    let c = 2.0 * PI * alpha;
    let area = lat.area();
    let diam = lat.cell_diameter();
    let target = 1e-2 * p.abs_tol.min(p.rel_tol);
    let bound = |l: f64| gaussian_tail_bound(c, (l / c).sqrt(), area, diam);
    let mut l = 30.0;
    while bound(l) > target && l < 2000.0 {
        l += 2.0;
    }
    let r2 = l / c;
    let shells = lat.shells_with_budget(r2, p.max_terms).map_err(|e| match e {
        Error::BudgetExceeded { estimated, budget } => Error::SlowConvergence(format!(
            "theta needs about {estimated:.3e} lattice points, budget {budget:.3e}"
        )),
        other => other,
    })?;
    Ok(SeriesValue {
        value: shells.sum(|n2| (-c * n2).exp()),
        error_bound: bound(l),
        cutoff_r2: r2,
    })
}

fn direct(lat: &ReducedLattice, alpha: f64, p: &Precision) -> Result<SeriesValue> {
    let s = direct_punctured(lat, alpha, p)?;
    Ok(SeriesValue {
        value: 1.0 + s.value,
        ..s
    })
}

/// `theta_L(alpha) - 1`, computed without cancellation when `alpha >= 1 / (2 area)`.
pub fn theta_punctured(lat: &ReducedLattice, alpha: f64, p: &Precision) -> Result<SeriesValue> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("theta", format!("need alpha > 0, got {alpha}")));
    }
    if alpha >= 0.5 / lat.area() {
        direct_punctured(lat, alpha, p)
    } else {
        let t = theta_with_bound(lat, alpha, p)?;
        Ok(SeriesValue {
            value: t.value - 1.0,
            ..t
        })
    }
}

/// `theta_L(alpha) = sum_{p in L} exp(-2 pi alpha |p|^2)`, origin included,
/// with a rigorous truncation bound.
///
/// For `alpha < 1 / (2 area)` the sum is evaluated on the dual lattice through
/// `theta_L(alpha) = theta_{L*}(1 / (4 alpha)) / (2 alpha area)`.
pub fn theta_with_bound(lat: &ReducedLattice, alpha: f64, p: &Precision) -> Result<SeriesValue> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::domain("theta", format!("need alpha > 0, got {alpha}")));
    }
    let area = lat.area();
    if alpha >= 0.5 / area {
        direct(lat, alpha, p)
    } else {
        let scale = 1.0 / (2.0 * alpha * area);
        let d = direct(&lat.dual()?, 0.25 / alpha, p)?;
        Ok(SeriesValue {
            value: scale * d.value,
            error_bound: scale * d.error_bound,
            cutoff_r2: d.cutoff_r2,
        })
    }
}

pub fn theta(lat: &ReducedLattice, alpha: f64, p: &Precision) -> Result<f64> {
    Ok(theta_with_bound(lat, alpha, p)?.value)
}
