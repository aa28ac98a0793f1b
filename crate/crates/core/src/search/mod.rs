//! Numerical minimization over lattice shapes, at fixed area and globally.
//!
//! Shapes are points `(x, y)` of the upper half plane. Every energy here is
//! invariant under change of basis, so the local refinement may wander
//! anywhere with `y > 0`; candidate points are reduced before evaluation and
//! the reported shape is always in the fundamental domain.

mod simplex;

use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::{area_bound_low_density, lj_global_check};
use crate::energy::{energy_direct, EnergyValue};
use crate::error::{Error, Result};
use crate::lattice::{ReducedLattice, HALF_SQRT_3};
use crate::potentials::{Family, Potential};
use crate::specfun::{theta, Precision};

pub use simplex::{nelder_mead, SimplexResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Grid points along `x` and `y` for the fixed-area scan.
    pub grid: (usize, usize),
    /// Initial upper limit of `y`; doubled up to three times when the best grid
    /// point sits on it.
    pub y_cap: f64,
    pub refine_iters: usize,
    pub shape_tol: f64,
    /// Number of best grid points used as refinement starts.
    pub starts: usize,
    /// `(nx, ny, n_area)` grid for the area-free search.
    pub global_grid: (usize, usize, usize),
    pub precision: Precision,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            grid: (60, 60),
            y_cap: 8.0,
            refine_iters: 200,
            shape_tol: 1e-4,
            starts: 5,
            global_grid: (12, 12, 24),
            precision: Precision::default(),
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<()> {
        let (gx, gy) = self.grid;
        let (hx, hy, ha) = self.global_grid;
        if gx < 2 || gy < 2 || hx < 2 || hy < 2 || ha < 2 {
            return Err(Error::domain("SearchOptions", "grids need at least 2 points per axis"));
        }
        if !(self.y_cap > 1.0 && self.y_cap.is_finite()) {
            return Err(Error::domain("SearchOptions", "y_cap must exceed 1"));
        }
        if self.refine_iters == 0 || self.starts == 0 {
            return Err(Error::domain(
                "SearchOptions",
                "refine_iters and starts must be positive",
            ));
        }
        if !(self.shape_tol > 0.0) {
            return Err(Error::domain("SearchOptions", "shape_tol must be positive"));
        }
        self.precision.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeClass {
    Triangular,
    Square,
    Rectangular,
    Rhombic,
    Generic,
}

/// Classifies a reduced shape. Special shapes take precedence over the generic
/// rectangular and rhombic classes.
pub fn classify_shape(x: f64, y: f64, tol: f64) -> ShapeClass {
    if (x - 0.5).hypot(y - HALF_SQRT_3) <= tol {
        ShapeClass::Triangular
    } else if x.hypot(y - 1.0) <= tol {
        ShapeClass::Square
    } else if x <= tol {
        ShapeClass::Rectangular
    } else if (x * x + y * y - 1.0).abs() <= tol || (x - 0.5).abs() <= tol {
        ShapeClass::Rhombic
    } else {
        ShapeClass::Generic
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizationResult {
    pub shape: (f64, f64),
    pub area: f64,
    /// Objective value at the minimizer.
    pub value: f64,
    /// Full energy record when the objective is a potential energy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub energy: Option<EnergyValue>,
    pub classification: ShapeClass,
    pub shape_tol: f64,
    pub distance_to_triangular: f64,
    pub distance_to_square: f64,
    /// Best value on the coarse grid; `value` never exceeds it.
    pub best_grid_value: f64,
    pub y_cap: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

fn grid_coords(nx: usize, ny: usize, y_cap: f64) -> Vec<(usize, usize, f64, f64)> {
    let mut pts = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        let x = 0.5 * i as f64 / (nx - 1) as f64;
        let y_lo = (1.0 - x * x).sqrt();
        for j in 0..ny {
            // Geometric spacing in y: resolution is needed near the bottom edge.
            let t = j as f64 / (ny - 1) as f64;
            let y = y_lo * (y_cap / y_lo).powf(t);
            pts.push((i, j, x, y));
        }
    }
    pts
}

/// Objective values on the `(x, y)` grid of the fundamental domain, in
/// row-major order (`x` outer). Points where the objective fails get `+inf`.
pub fn grid_scan<F>(objective: &F, area: f64, nx: usize, ny: usize, y_cap: f64) -> Vec<GridPoint>
where
    F: Fn(&ReducedLattice) -> Result<f64> + Sync,
{
    grid_coords(nx, ny, y_cap)
        .into_par_iter()
        .map(|(_, _, x, y)| GridPoint {
            x,
            y,
            value: ReducedLattice::new(x.min(0.5), y, area)
                .and_then(|l| objective(&l))
                .unwrap_or(f64::INFINITY),
        })
        .collect()
}

fn by_value(a: &GridPoint, b: &GridPoint) -> std::cmp::Ordering {
    a.value
        .total_cmp(&b.value)
        .then(a.x.total_cmp(&b.x))
        .then(a.y.total_cmp(&b.y))
}

/// Minimizes an arbitrary lattice functional over shapes of the given area.
pub fn minimize_fixed_area_with<F>(
    objective: F,
    area: f64,
    opts: &SearchOptions,
) -> Result<MinimizationResult>
where
    F: Fn(&ReducedLattice) -> Result<f64> + Sync,
{
    opts.validate()?;
    if !(area > 0.0 && area.is_finite()) {
        return Err(Error::NonPositiveArea(area));
    }
    let (nx, ny) = opts.grid;
    let mut y_cap = opts.y_cap;
    let mut evaluations = 0;
    let mut doublings = 0;
    let grid = loop {
        let g = grid_scan(&objective, area, nx, ny, y_cap);
        evaluations += g.len();
        let best = g.iter().min_by(|a, b| by_value(a, b)).copied();
        let Some(best) = best.filter(|b| b.value.is_finite()) else {
            // Surface the objective's own error for a representative point.
            let l = ReducedLattice::triangular(area)?;
            objective(&l)?;
            return Err(Error::SlowConvergence(
                "objective is not finite anywhere on the search grid".into(),
            ));
        };
        let on_ceiling = (best.y - y_cap).abs() <= 1e-12 * y_cap;
        if !on_ceiling {
            break g;
        }
        if doublings == 3 {
            return Err(Error::UnboundedBelow { y_cap });
        }
        doublings += 1;
        y_cap *= 2.0;
    };

    let mut ranked = grid.clone();
    ranked.sort_by(by_value);
    let best_grid_value = ranked[0].value;
    let dx = 0.5 / (nx - 1) as f64;
    let eval_shape = |p: &[f64]| -> f64 {
        if !(p[1] > 0.0) {
            return f64::INFINITY;
        }
        ReducedLattice::from_shape(p[0], p[1], area)
            .and_then(|l| objective(&l))
            .unwrap_or(f64::INFINITY)
    };
    let runs: Vec<SimplexResult> = ranked
        .iter()
        .take(opts.starts)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|g| {
            let step = [dx, dx.max(0.02 * g.y)];
            let first = nelder_mead(eval_shape, &[g.x, g.y], &step, opts.refine_iters, 1e-9);
            // A restart from the result recovers from a collapsed simplex.
            let again = nelder_mead(
                eval_shape,
                &first.point,
                &[0.1 * step[0], 0.1 * step[1]],
                opts.refine_iters,
                1e-10,
            );
            SimplexResult {
                evaluations: first.evaluations + again.evaluations,
                ..if again.value <= first.value { again } else { first }
            }
        })
        .collect();
    evaluations += runs.iter().map(|r| r.evaluations).sum::<usize>();
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.point[0].total_cmp(&b.point[0]))
                .then(a.point[1].total_cmp(&b.point[1]))
        })
        .expect("at least one start");
    let (lat, value) = if best.value <= best_grid_value {
        (ReducedLattice::from_shape(best.point[0], best.point[1], area)?, best.value)
    } else {
        (ReducedLattice::new(ranked[0].x, ranked[0].y, area)?, best_grid_value)
    };
    Ok(finish(lat, value, None, best_grid_value, y_cap, evaluations, opts))
}

fn finish(
    lat: ReducedLattice,
    value: f64,
    energy: Option<EnergyValue>,
    best_grid_value: f64,
    y_cap: f64,
    evaluations: usize,
    opts: &SearchOptions,
) -> MinimizationResult {
    let (x, y) = lat.shape();
    MinimizationResult {
        shape: (x, y),
        area: lat.area(),
        value,
        energy,
        classification: classify_shape(x, y, opts.shape_tol),
        shape_tol: opts.shape_tol,
        distance_to_triangular: (x - 0.5).hypot(y - HALF_SQRT_3),
        distance_to_square: x.hypot(y - 1.0),
        best_grid_value,
        y_cap,
        evaluations,
    }
}

/// Minimizes `E_f` over lattices of area `area`.
pub fn minimize_fixed_area(f: &Potential, area: f64, opts: &SearchOptions) -> Result<MinimizationResult> {
    let p = opts.precision;
    let mut r = minimize_fixed_area_with(|l| Ok(energy_direct(f, l, &p)?.value), area, opts)?;
    let lat = ReducedLattice::new(r.shape.0, r.shape.1, area)?;
    r.energy = Some(energy_direct(f, &lat, &p)?);
    Ok(r)
}

/// Minimizes `theta_L(alpha)` over lattices of area `area`.
pub fn minimize_theta(alpha: f64, area: f64, opts: &SearchOptions) -> Result<MinimizationResult> {
    let p = opts.precision;
    minimize_fixed_area_with(|l| theta(l, alpha, &p), area, opts)
}

/// Result of the area-free search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalMinimization {
    pub result: MinimizationResult,
    /// Upper end of the searched area range.
    pub area_max: f64,
    /// Whether `area_max` is a proven bound on the global minimizer's area.
    pub area_max_proven: bool,
    /// Whether the returned area sits on the upper end of the range.
    pub area_at_upper_end: bool,
}

/// Minimizes `E_f` over all lattices, for families with a potential well.
/// The area range is `(0, A_max]` with `A_max` from the stationary analysis.
pub fn minimize_global(f: &Potential, opts: &SearchOptions) -> Result<GlobalMinimization> {
    opts.validate()?;
    let sa = f.stationary_analysis()?;
    let area_max = sa.global_area_bound.ok_or_else(|| {
        Error::NoWell(format!(
            "the {} radial profile is monotone",
            f.family().name()
        ))
    })?;
    // The contraction argument needs the profile to increase beyond the well,
    // which fails for the Buckingham-type profile.
    let area_max_proven = f.family() != Family::OppBuckingham;
    let p = opts.precision;
    let energy = |x: f64, y: f64, area: f64| -> f64 {
        if !(y > 0.0 && area > 0.0 && area <= area_max * (1.0 + 1e-12)) {
            return f64::INFINITY;
        }
        ReducedLattice::from_shape(x, y, area)
            .and_then(|l| energy_direct(f, &l, &p))
            .map(|e| e.value)
            .unwrap_or(f64::INFINITY)
    };
    let (nx, ny, na) = opts.global_grid;
    let area_min = area_max * 1e-2;
    let areas: Vec<f64> = (0..na)
        .map(|k| area_min * (area_max / area_min).powf(k as f64 / (na - 1) as f64))
        .collect();
    let coords = grid_coords(nx, ny, opts.y_cap);
    let mut cells: Vec<(f64, f64, f64, f64)> = coords
        .par_iter()
        .flat_map_iter(|&(_, _, x, y)| areas.iter().map(move |&a| (x, y, a)))
        .map(|(x, y, a)| (x, y, a, energy(x, y, a)))
        .collect();
    let mut evaluations = cells.len();
    cells.sort_by(|a, b| {
        a.3.total_cmp(&b.3)
            .then(a.0.total_cmp(&b.0))
            .then(a.1.total_cmp(&b.1))
            .then(a.2.total_cmp(&b.2))
    });
    let best_grid_value = cells[0].3;
    if !best_grid_value.is_finite() {
        return Err(Error::SlowConvergence(
            "energy is not finite anywhere on the global search grid".into(),
        ));
    }
    let dx = 0.5 / (nx - 1) as f64;
    let dlog = (area_max / area_min).ln() / (na - 1) as f64;
    let obj = |q: &[f64]| energy(q[0], q[1], q[2].exp());
    let iters = 3 * opts.refine_iters;
    let runs: Vec<SimplexResult> = cells
        .iter()
        .take(opts.starts)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|&(x, y, a, _)| {
            let start = [x, y, a.ln()];
            let step = [dx, dx.max(0.02 * y), dlog];
            let mut run = nelder_mead(obj, &start, &step, iters, 1e-10);
            let mut total = run.evaluations;
            for shrink in [0.1, 0.01] {
                let s = [shrink * step[0], shrink * step[1], shrink * step[2]];
                let next = nelder_mead(obj, &run.point, &s, iters, 1e-11);
                total += next.evaluations;
                if next.value <= run.value {
                    run = next;
                }
            }
            run.evaluations = total;
            run
        })
        .collect();
    evaluations += runs.iter().map(|r| r.evaluations).sum::<usize>();
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                .then(a.point[0].total_cmp(&b.point[0]))
                .then(a.point[1].total_cmp(&b.point[1]))
        })
        .expect("at least one start");
    let area = best.point[2].exp().min(area_max);
    let lat = ReducedLattice::from_shape(best.point[0], best.point[1], area)?;
    let e = energy_direct(f, &lat, &p)?;
    let result = finish(lat, e.value, Some(e), best_grid_value, opts.y_cap, evaluations, opts);
    Ok(GlobalMinimization {
        area_at_upper_end: area >= area_max * (1.0 - 1e-6),
        result,
        area_max,
        area_max_proven,
    })
}

/// `(x1, x2)` cells of the minimizer table.
pub const TABLE1_PAIRS: [(f64, f64); 12] = [
    (1.1, 1.5),
    (1.1, 2.0),
    (1.1, 2.5),
    (1.1, 3.0),
    (1.1, 3.5),
    (1.1, 4.0),
    (1.5, 2.0),
    (1.5, 2.5),
    (1.5, 3.0),
    (1.5, 3.5),
    (2.0, 2.5),
    (2.0, 3.0),
];

const TABLE2_X1: [f64; 10] = [1.1, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0];
const TABLE2_X2: [f64; 12] = [1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];

/// All `(x1, x2)` with `x1 < x2` from the critical-density grid.
pub fn table2_default_grid() -> Vec<(f64, f64)> {
    TABLE2_X2
        .iter()
        .flat_map(|&x2| {
            TABLE2_X1
                .iter()
                .filter(move |&&x1| x1 < x2)
                .map(move |&x1| (x1, x2))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table1Row {
    pub x1: f64,
    pub x2: f64,
    /// Minimum point of the radial profile `R -> V(R^2)`.
    pub y_min: f64,
    /// Side length of the triangular minimizer.
    pub r: f64,
    /// Density `1 / area` of the triangular minimizer.
    pub d: f64,
    /// Whether `h(x2) <= h(x1)`, i.e. the triangular lattice is the proven global minimizer.
    pub certified: bool,
}

/// Lennard-Jones-type global minimizers for each `(x1, x2)`.
pub fn table1(pairs: &[(f64, f64)], a: (f64, f64)) -> Result<Vec<Table1Row>> {
    pairs
        .iter()
        .map(|&(x1, x2)| {
            let f = Potential::lennard_jones(a.0, a.1, x1, x2)?;
            let g = lj_global_check(&f)?;
            Ok(Table1Row {
                x1,
                x2,
                y_min: (a.1 * x2 / (a.0 * x1)).powf(1.0 / (2.0 * (x2 - x1))),
                r: (2.0 * g.minimizer_area / 3f64.sqrt()).sqrt(),
                d: 1.0 / g.minimizer_area,
                certified: g.holds,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Table2Row {
    pub x1: f64,
    pub x2: f64,
    /// Density below which the square lattice beats the triangular one.
    pub d0: f64,
}

/// Critical densities for `a = (1, 1)` with the square lattice as comparison.
pub fn table2(grid: &[(f64, f64)]) -> Result<Vec<Table2Row>> {
    let sq = ReducedLattice::square(1.0)?;
    grid.iter()
        .map(|&(x1, x2)| {
            let f = Potential::lennard_jones(1.0, 1.0, x1, x2)?;
            Ok(Table2Row {
                x1,
                x2,
                d0: 1.0 / area_bound_low_density(&f, &sq)?,
            })
        })
        .collect()
}

/// Fixed-area minimization at each area, in order.
pub fn scan_areas(f: &Potential, areas: &[f64], opts: &SearchOptions) -> Result<Vec<MinimizationResult>> {
    areas.iter().map(|&a| minimize_fixed_area(f, a, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SearchOptions {
        SearchOptions {
            grid: (16, 16),
            ..SearchOptions::default()
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_shape(0.5, 0.8660, 1e-3), ShapeClass::Triangular);
        assert_eq!(classify_shape(0.0, 1.0, 1e-4), ShapeClass::Square);
        assert_eq!(classify_shape(0.2, 1.3, 1e-4), ShapeClass::Generic);
        assert_eq!(classify_shape(0.0, 1.7, 1e-4), ShapeClass::Rectangular);
        assert_eq!(classify_shape(0.5, 1.7, 1e-4), ShapeClass::Rhombic);
        assert_eq!(classify_shape(0.3, (1.0f64 - 0.09).sqrt(), 1e-4), ShapeClass::Rhombic);
    }

    #[test]
    fn theta_minimizer_is_triangular() {
        let r = minimize_theta(1.0, 1.0, &quick()).unwrap();
        assert_eq!(r.classification, ShapeClass::Triangular, "{:?}", r.shape);
        assert!(r.value <= r.best_grid_value);
    }

    #[test]
    fn convex_example_rectangular_at_three_triangular_at_one() {
        let f = Potential::inverse_power_sum(&[(14.0, 2.0), (-40.0, 3.0), (35.0, 4.0)]).unwrap();
        // At this area the optimum is a rectangle, below both square and triangular.
        let r = minimize_fixed_area(&f, 3.0, &quick()).unwrap();
        assert_eq!(r.classification, ShapeClass::Rectangular, "{:?}", r.shape);
        assert!((r.shape.1 - 1.277).abs() < 5e-3);
        let p = Precision::default();
        let sq = energy_direct(&f, &ReducedLattice::square(3.0).unwrap(), &p).unwrap().value;
        assert!(r.value < sq);
        let r = minimize_fixed_area(&f, 1.0, &quick()).unwrap();
        assert_eq!(r.classification, ShapeClass::Triangular, "{:?}", r.shape);
    }

    #[test]
    fn monotone_profile_has_no_well() {
        let f = Potential::opp_buckingham(1.0, 1.0, 5.0, 6.0).unwrap();
        let sa = f.stationary_analysis().unwrap();
        if sa.global_area_bound.is_none() {
            assert!(matches!(minimize_global(&f, &quick()), Err(Error::NoWell(_))));
        }
        let cm = Potential::inverse_power_sum(&[(1.0, 2.0)]).unwrap();
        assert!(minimize_global(&cm, &quick()).is_err());
    }

    #[test]
    fn lj_global_minimizer_is_triangular() {
        let f = Potential::lennard_jones(1.0, 1.0, 3.0, 6.0).unwrap();
        let g = minimize_global(&f, &quick()).unwrap();
        assert!(g.area_max_proven);
        assert_eq!(g.result.classification, ShapeClass::Triangular, "{:?}", g.result.shape);
        let want = lj_global_check(&f).unwrap().minimizer_area;
        assert!((g.result.area - want).abs() < 1e-5 * want, "{} vs {}", g.result.area, want);
    }

    #[test]
    fn table_rows() {
        let rows = table1(&[(2.0, 3.0)], (1.0, 1.0)).unwrap();
        assert!((rows[0].d - 0.93).abs() <= 0.01);
        assert!(rows[0].certified);
        let rows = table2(&[(3.0, 6.0)]).unwrap();
        assert!((rows[0].d0 - 0.697).abs() <= 1e-3);
        assert_eq!(table2_default_grid().len(), 62);
    }

    #[test]
    fn option_validation() {
        let mut o = SearchOptions::default();
        o.grid = (1, 5);
        assert!(o.validate().is_err());
        let mut o = SearchOptions::default();
        o.y_cap = 0.5;
        assert!(o.validate().is_err());
    }
}
