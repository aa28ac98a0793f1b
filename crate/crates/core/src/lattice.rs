//! Two-dimensional Bravais lattices up to rotation.
//!
//! A lattice is stored in reduced form: a shape point `(x, y)` of the modular
//! fundamental domain `0 <= x <= 1/2`, `x^2 + y^2 >= 1`, together with the
//! area of the primitive cell. The lattice it denotes is
//! `sqrt(area / y) * [Z(1, 0) + Z(x, y)]`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};

/// `sqrt(3) / 2`, the ordinate of the triangular shape.
pub const HALF_SQRT_3: f64 = 0.866_025_403_784_438_6;

/// Relative tolerance below which a basis is treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Default cap on the number of lattice points a single enumeration may visit.
pub const DEFAULT_POINT_BUDGET: u64 = 100_000_000;

const DOMAIN_TOL: f64 = 1e-12;

fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// A pair of generating vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Basis2 {
    pub u: [f64; 2],
    pub v: [f64; 2],
}

impl Basis2 {
    pub fn new(u: [f64; 2], v: [f64; 2]) -> Self {
        Basis2 { u, v }
    }

    /// Signed determinant `det(u, v)`.
    pub fn det(&self) -> f64 {
        cross(self.u, self.v)
    }

    /// Applies the integer matrix `[[m00, m01], [m10, m11]]` to the basis:
    /// `u' = m00 u + m01 v`, `v' = m10 u + m11 v`.
    pub fn transform(&self, m: [[i64; 2]; 2]) -> Basis2 {
        let comb = |a: i64, b: i64| {
            [
                a as f64 * self.u[0] + b as f64 * self.v[0],
                a as f64 * self.u[1] + b as f64 * self.v[1],
            ]
        };
        Basis2 {
            u: comb(m[0][0], m[0][1]),
            v: comb(m[1][0], m[1][1]),
        }
    }
}

/// Canonical representative of a Bravais lattice up to rotation and reflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReducedLattice {
    x: f64,
    y: f64,
    area: f64,
}

fn check_area(area: f64) -> Result<()> {
    if area.is_finite() && area > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveArea(area))
    }
}

impl ReducedLattice {
    /// Builds a lattice from a shape already in the fundamental domain.
    pub fn new(x: f64, y: f64, area: f64) -> Result<Self> {
        check_area(area)?;
        let inside = x.is_finite()
            && y.is_finite()
            && y > 0.0
            && x >= -DOMAIN_TOL
            && x <= 0.5 + DOMAIN_TOL
            && x * x + y * y >= 1.0 - DOMAIN_TOL;
        if !inside {
            return Err(Error::OutsideFundamentalDomain { x, y });
        }
        Ok(ReducedLattice {
            x: x.clamp(0.0, 0.5),
            y,
            area,
        })
    }

    /// Builds a lattice from any point `(x, y)` of the upper half-plane,
    /// reducing it into the fundamental domain.
    pub fn from_shape(x: f64, y: f64, area: f64) -> Result<Self> {
        check_area(area)?;
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::OutsideFundamentalDomain { x, y });
        }
        let s = (area / y).sqrt();
        reduce(&Basis2::new([s, 0.0], [s * x, s * y]))
    }

    /// The triangular lattice of the given area.
    pub fn triangular(area: f64) -> Result<Self> {
        check_area(area)?;
        Ok(ReducedLattice {
            x: 0.5,
            y: HALF_SQRT_3,
            area,
        })
    }

    /// The square lattice of the given area.
    pub fn square(area: f64) -> Result<Self> {
        check_area(area)?;
        Ok(ReducedLattice {
            x: 0.0,
            y: 1.0,
            area,
        })
    }

    /// Builds a lattice from the lengths of its two shortest vectors and the
    /// angle between them, `|u| <= |v|`, angle in `[pi/3, pi/2]`.
    pub fn from_lengths_and_angle(len_u: f64, len_v: f64, angle: f64) -> Result<Self> {
        if !(len_u > 0.0 && len_v > 0.0 && angle > 0.0 && angle < PI) {
            return Err(Error::domain(
                "from_lengths_and_angle",
                "lengths must be positive and angle in (0, pi)",
            ));
        }
        reduce(&Basis2::new(
            [len_u, 0.0],
            [len_v * angle.cos(), len_v * angle.sin()],
        ))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn shape(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    /// Length of the shortest nonzero vector.
    pub fn scale(&self) -> f64 {
        (self.area / self.y).sqrt()
    }

    /// Same shape, different area.
    pub fn with_area(&self, area: f64) -> Result<Self> {
        check_area(area)?;
        Ok(ReducedLattice { area, ..*self })
    }

    /// The reduced basis `u = s (1, 0)`, `v = s (x, y)`.
    pub fn basis(&self) -> Basis2 {
        let s = self.scale();
        Basis2::new([s, 0.0], [s * self.x, s * self.y])
    }

    /// Gram entries `(u.u, u.v, v.v)` of the reduced basis.
    pub fn gram(&self) -> (f64, f64, f64) {
        let s2 = self.area / self.y;
        (
            s2,
            s2 * self.x,
            s2 * (self.x * self.x + self.y * self.y),
        )
    }

    /// Squared length of the shortest nonzero vector.
    pub fn min_norm2(&self) -> f64 {
        self.area / self.y
    }

    /// `|u| + |v|`, an upper bound on the diameter of the primitive cell.
    pub fn cell_diameter(&self) -> f64 {
        let (a, _, c) = self.gram();
        a.sqrt() + c.sqrt()
    }

    /// `(|u|, |v|, angle)` in the convention `|u| <= |v|`, angle in `[pi/3, pi/2]`.
    pub fn lengths_and_angle(&self) -> (f64, f64, f64) {
        let s = self.scale();
        let r = (self.x * self.x + self.y * self.y).sqrt();
        let angle = self.y.atan2(self.x).min(FRAC_PI_2);
        (s, s * r, angle)
    }

    /// The dual lattice `{q : q.p in Z for all p}`, of area `1 / area`.
    pub fn dual(&self) -> Result<Self> {
        let b = self.basis();
        let det = b.det();
        let du = [b.v[1] / det, -b.v[0] / det];
        let dv = [-b.u[1] / det, b.u[0] / det];
        reduce(&Basis2::new(du, dv))
    }

    /// Euclidean distance of the shape point to another shape point.
    pub fn shape_distance(&self, x: f64, y: f64) -> f64 {
        ((self.x - x).powi(2) + (self.y - y).powi(2)).sqrt()
    }

    /// Upper bound on the number of lattice points (origin included) with norm at most `r`.
    pub fn count_bound(&self, r: f64) -> f64 {
        PI * (r + self.cell_diameter()).powi(2) / self.area
    }

    /// Calls `f(m, n, |m u + n v|^2)` for every nonzero lattice point with
    /// squared norm at most `r2max`, in a fixed order.
    pub fn for_each_point<F>(&self, r2max: f64, budget: u64, mut f: F) -> Result<()>
    where
        F: FnMut(i64, i64, f64),
    {
        if !(r2max > 0.0 && r2max.is_finite()) {
            return Err(Error::domain("for_each_point", "r2max must be positive"));
        }
        let estimated = self.count_bound(r2max.sqrt());
        if estimated > budget as f64 {
            return Err(Error::BudgetExceeded {
                estimated,
                budget: budget as f64,
            });
        }
        let (a, b, c) = self.gram();
        let det = a * c - b * b;
        let n_max = (r2max * a / det).sqrt().floor() as i64;
        for n in -n_max..=n_max {
            let nf = n as f64;
            let disc = a * r2max - nf * nf * det;
            if disc < 0.0 {
                continue;
            }
            let sq = disc.sqrt();
            let lo = ((-b * nf - sq) / a).ceil() as i64;
            let hi = ((-b * nf + sq) / a).floor() as i64;
            for m in lo..=hi {
                if m == 0 && n == 0 {
                    continue;
                }
                let mf = m as f64;
                let r2 = a * mf * mf + 2.0 * b * mf * nf + c * nf * nf;
                if r2 <= r2max {
                    f(m, n, r2);
                }
            }
        }
        Ok(())
    }

    /// Groups the nonzero lattice points with squared norm at most `r2max`
    /// into shells of equal norm.
    pub fn shells(&self, r2max: f64) -> Result<ShellList> {
        self.shells_with_budget(r2max, DEFAULT_POINT_BUDGET)
    }

    pub fn shells_with_budget(&self, r2max: f64, budget: u64) -> Result<ShellList> {
        let mut norms = Vec::new();
        self.for_each_point(r2max, budget, |_, _, r2| norms.push(r2))?;
        norms.sort_by(f64::total_cmp);
        let mut entries: Vec<Shell> = Vec::new();
        for r2 in norms {
            match entries.last_mut() {
                Some(last) if (r2 - last.norm2) <= 1e-11 * last.norm2 => last.multiplicity += 1,
                _ => entries.push(Shell {
                    norm2: r2,
                    multiplicity: 1,
                }),
            }
        }
        Ok(ShellList { entries })
    }
}

/// Lagrange-Gauss reduction followed by a reflection into `0 <= x <= 1/2`.
pub fn reduce(b: &Basis2) -> Result<ReducedLattice> {
    let det = b.det();
    let (mut u, mut v) = (b.u, b.v);
    let tol = DEGENERACY_TOL * dot(u, u).sqrt() * dot(v, v).sqrt();
    if !(det.abs() > tol) || !det.is_finite() {
        return Err(Error::DegenerateBasis { det, tol });
    }
    if dot(u, u) > dot(v, v) {
        std::mem::swap(&mut u, &mut v);
    }
    for _ in 0..10_000 {
        let uu = dot(u, u);
        let mu = (dot(u, v) / uu).round();
        if mu != 0.0 {
            v = [v[0] - mu * u[0], v[1] - mu * u[1]];
        }
        if dot(v, v) < uu {
            std::mem::swap(&mut u, &mut v);
        } else {
            break;
        }
    }
    let uu = dot(u, u);
    let x = (dot(u, v) / uu).abs().min(0.5);
    let area = det.abs();
    let y = area / uu;
    Ok(ReducedLattice { x, y, area })
}

/// Triangular lattice of the given area.
pub fn make_triangular(area: f64) -> Result<ReducedLattice> {
    ReducedLattice::triangular(area)
}

/// Square lattice of the given area.
pub fn make_square(area: f64) -> Result<ReducedLattice> {
    ReducedLattice::square(area)
}

/// One shell: every lattice vector of the given squared norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shell {
    pub norm2: f64,
    pub multiplicity: u64,
}

/// Nonzero lattice vectors grouped by norm, in increasing order.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ShellList {
    entries: Vec<Shell>,
}

impl ShellList {
    pub fn entries(&self) -> &[Shell] {
        &self.entries
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|s| s.multiplicity).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum mult * f(norm2)`, accumulated from the outermost shell inwards.
    pub fn sum<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.entries
            .iter()
            .rev()
            .map(|s| s.multiplicity as f64 * f(s.norm2))
            .sum()
    }
}

/// Bound on `sum_{|p| > r} exp(-c |p|^2)` over a lattice with the given area
/// and cell diameter.
pub fn gaussian_tail_bound(c: f64, r: f64, area: f64, diam: f64) -> f64 {
    let r = r.max(1e-300);
    PI / area
        * (-c * r * r).exp()
        * (r * r + 1.0 / c + 2.0 * diam * (r + 1.0 / (2.0 * c * r)) + diam * diam)
}

/// Bound on `sum_{|p| > r} exp(-t |p|)`.
pub fn exponential_tail_bound(t: f64, r: f64, area: f64, diam: f64) -> f64 {
    let w = r + diam;
    PI / area * (-t * r).exp() * (w * w + 2.0 * w / t + 2.0 / (t * t))
}

/// Bound on `sum_{|p| > r} |p|^(-two_s)` by comparison with an integral.
pub fn power_tail_bound(two_s: f64, r: f64, area: f64, diam: f64) -> f64 {
    PI / area
        * two_s
        * (r.powf(2.0 - two_s) / (two_s - 2.0)
            + 2.0 * diam * r.powf(1.0 - two_s) / (two_s - 1.0)
            + diam * diam * r.powf(-two_s) / two_s)
}
