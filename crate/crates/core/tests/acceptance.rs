//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Criteria 1, 8 and 9 compare against printed digits that do not match the
//! exact quantities (they come from truncated lattice sums). Those lines are
//! reported honestly and listed as known failures; the process only exits
//! non-zero when some other criterion fails, or when a known failure's
//! underlying exact computation breaks.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use lattice_optima::criteria::{
    area_bound_high_density, cauchy_bound, counterexample_interval, counterexample_interval_box,
    h_analysis, lj_global_check, opp_buckingham_x1_threshold, yukawa_equal_ratio_limit,
    yukawa_global_check, GeneralizedPolynomial,
};
use lattice_optima::energy::{check_sufficient_condition, energy_direct, energy_integral};
use lattice_optima::quadrature::integrate_to_infinity;
use lattice_optima::search::{
    grid_scan, minimize_fixed_area, minimize_global, table1, table2, table2_default_grid,
    SearchOptions, ShapeClass, TABLE1_PAIRS,
};
use lattice_optima::specfun::{
    epstein_zeta_closed, epstein_zeta_direct, gamma, theta, theta_punctured, ClosedShape,
};
use lattice_optima::{Potential, Precision, ReducedLattice};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: [u32; 3] = [1, 8, 9];

struct Outcome {
    pass: bool,
    detail: String,
    /// For known failures: whether the exact computation behind the line is sound.
    sound: bool,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome {
        pass,
        detail,
        sound: true,
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn convex_example() -> Potential {
    Potential::inverse_power_sum(&[(14.0, 2.0), (-40.0, 3.0), (35.0, 4.0)]).unwrap()
}

fn random_shape(rng: &mut ChaCha8Rng, y_max: f64) -> (f64, f64) {
    let x = rng.random_range(0.0..=0.5);
    let lo = (1.0f64 - x * x).sqrt();
    (x, rng.random_range(lo..y_max))
}

fn c1_counterexample() -> Outcome {
    let quoted = (24.231435, 2.3152307, 3.759353);
    let exact = counterexample_interval().unwrap();
    let boxed = counterexample_interval_box(100).unwrap();
    let digits_ok = (exact.discriminant - quoted.0).abs() <= 1e-4
        && (exact.a1 - quoted.1).abs() <= 1e-5
        && (exact.a2 - quoted.2).abs() <= 1e-5;
    let r = minimize_fixed_area(&convex_example(), 3.0, &SearchOptions::default()).unwrap();
    let square_ok = r.classification == ShapeClass::Square;
    let p = Precision::default();
    let e_sq = energy_direct(&convex_example(), &ReducedLattice::square(3.0).unwrap(), &p).unwrap().value;
    let e_tri = energy_direct(&convex_example(), &ReducedLattice::triangular(3.0).unwrap(), &p).unwrap().value;
    let box_matches = (boxed.discriminant - quoted.0).abs() <= 1e-4
        && (boxed.a1 - quoted.1).abs() <= 1e-5
        && (boxed.a2 - quoted.2).abs() <= 1e-5;
    Outcome {
        pass: digits_ok && square_ok,
        detail: format!(
            "exact disc {:.7} A1 {:.8} A2 {:.8}; box-100 sums give {:.7} {:.8} {:.8}; \
             A=3 minimizer {:?} at ({:.4}, {:.4}), E {:.6} < square {:.6} < triangular {:.6}",
            exact.discriminant,
            exact.a1,
            exact.a2,
            boxed.discriminant,
            boxed.a1,
            boxed.a2,
            r.classification,
            r.shape.0,
            r.shape.1,
            r.value,
            e_sq,
            e_tri
        ),
        sound: box_matches && e_sq < e_tri && r.value <= e_sq && exact.a1 < 3.0 && 3.0 < exact.a2,
    }
}

fn c2_closed_vs_direct() -> Outcome {
    let p = Precision::default();
    let mut worst: f64 = 0.0;
    for two_s in [3.0, 4.0, 5.0, 6.0, 8.0, 12.0, 16.0, 18.0, 20.0] {
        for (shape, lat) in [
            (ClosedShape::Square, ReducedLattice::square(1.0).unwrap()),
            (ClosedShape::Triangular, ReducedLattice::triangular(1.0).unwrap()),
        ] {
            let c = epstein_zeta_closed(shape, two_s, &p).unwrap();
            let d = epstein_zeta_direct(&lat, two_s, &p).unwrap();
            worst = worst.max(rel(d, c));
        }
    }
    outcome(worst <= 1e-10, format!("max relative difference {worst:.2e} (limit 1e-10)"))
}

fn c3_theta_modular() -> Outcome {
    let p = Precision::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let (x, y) = random_shape(&mut rng, 3.0);
        let lat = ReducedLattice::new(x, y, 0.5).unwrap();
        for t in [1.5, 3.0, 7.0] {
            let a = theta(&lat, 1.0 / t, &p).unwrap();
            let b = t * theta(&lat, t, &p).unwrap();
            worst = worst.max((a - b).abs() / theta(&lat, t, &p).unwrap());
        }
    }
    outcome(worst <= 1e-12, format!("max |theta(1/y) - y theta(y)| / theta(y) = {worst:.2e} over 20 shapes"))
}

fn c4_riemann() -> Outcome {
    let p = Precision::default();
    let s = 2.0;
    let zeta1 = epstein_zeta_closed(ClosedShape::Square, 2.0 * s, &p).unwrap();
    let prefactor = gamma(s) * (2.0 * PI).powf(-s);

    // Area 1/2, where theta(1/a) = a theta(a).
    let half = ReducedLattice::square(0.5).unwrap();
    let lhs = prefactor * 0.5f64.powf(-s) * zeta1;
    let int = integrate_to_infinity(
        |a| theta_punctured(&half, a, &p).unwrap().value * (a.powf(s) + a.powf(1.0 - s)) / a,
        1.0,
        1.0,
        &[],
        1e-15,
        1e-13,
        1e-17,
    )
    .unwrap();
    let rhs = 1.0 / (s - 1.0) - 1.0 / s + int.value;

    // Area 1, split at 1/(2A).
    let unit = ReducedLattice::square(1.0).unwrap();
    let a0: f64 = 0.5;
    let lhs1 = prefactor * zeta1;
    let int1 = integrate_to_infinity(
        |a| {
            theta_punctured(&unit, a, &p).unwrap().value
                * (a.powf(s - 1.0) + a0.powf(2.0 * s - 1.0) * a.powf(-s))
        },
        a0,
        1.0,
        &[],
        1e-15,
        1e-13,
        1e-17,
    )
    .unwrap();
    let rhs1 = a0.powf(s) * (1.0 / (s - 1.0) - 1.0 / s) + int1.value;
    let d = (lhs - rhs).abs();
    let d1 = (lhs1 - rhs1).abs();
    outcome(
        d <= 1e-8 && d1 <= 1e-8,
        format!("Z^2 at area 1/2: |lhs - rhs| = {d:.2e} ({lhs:.12}); general-area form at area 1: {d1:.2e}"),
    )
}

fn c5_integral() -> Outcome {
    let p = Precision::default();
    let fams = [
        ("LJ(1,1;3,6)", Potential::lennard_jones(1.0, 1.0, 3.0, 6.0).unwrap()),
        ("Yukawa(1,2;1,2)", Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap()),
        ("convex", convex_example()),
    ];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (name, f) in &fams {
        for area in [0.5, 1.0, 2.0] {
            for lat in [
                ReducedLattice::triangular(area).unwrap(),
                ReducedLattice::square(area).unwrap(),
            ] {
                let d = energy_direct(f, &lat, &p).unwrap().value;
                match energy_integral(f, &lat, &p) {
                    Ok(i) => worst = worst.max(rel(i.value, d)),
                    Err(e) => failures.push(format!("{name} A={area}: {e}")),
                }
            }
        }
    }
    outcome(
        worst <= 1e-6 && failures.is_empty(),
        format!("18 cases, max relative difference {worst:.2e} (limit 1e-6), {} errors {failures:?}", failures.len()),
    )
}

fn c6_bounds() -> Outcome {
    let convex_b = area_bound_high_density(&convex_example()).unwrap().area_bound;
    let length = (2.0 * convex_b / 3f64.sqrt()).sqrt();
    let ips = Potential::inverse_power_sum(&[(5.0, 2.0), (-3.0, 4.0), (1.0, 6.0)]).unwrap();
    let ips_b = area_bound_high_density(&ips).unwrap().area_bound;
    let lj = Potential::lennard_jones(2.0, 1.0, 3.0, 6.0).unwrap();
    let lj_b = area_bound_high_density(&lj).unwrap().area_bound;
    let c1 = opp_buckingham_x1_threshold(1.0, 1.0, 12.0, 1.0).unwrap();
    // At x1 = C1 the Buckingham bound is exactly A0 = 1.
    let ob = Potential::opp_buckingham(1.0, 1.0, c1, 12.0).unwrap();
    let ob_b = area_bound_high_density(&ob).unwrap().area_bound;
    let checks = [
        ("7pi/48", convex_b, 7.0 * PI / 48.0),
        ("length", length, 0.7273408),
        ("pi(G4/(6G6))^1/2", ips_b, 0.2867869),
        ("pi/120^1/3", lj_b, PI / 120f64.cbrt()),
        ("C1", c1, 0.0727432),
        ("A0 at x1=C1", ob_b, 1.0),
    ];
    let worst = checks.iter().map(|c| rel(c.1, c.2)).fold(0.0, f64::max);
    let shown: Vec<String> = checks.iter().map(|c| format!("{} {:.7}", c.0, c.1)).collect();
    outcome(worst <= 1e-6, format!("{}; max relative error {worst:.1e}", shown.join(", ")))
}

fn c7_h() -> Outcome {
    let h = h_analysis().unwrap();
    let five = [(1.5, 2.0), (1.5, 2.5), (1.5, 3.0), (2.0, 2.5), (2.0, 3.0)];
    let holds = five.iter().all(|&(x1, x2)| {
        lj_global_check(&Potential::lennard_jones(1.0, 1.0, x1, x2).unwrap())
            .unwrap()
            .holds
    });
    let lj36 = lj_global_check(&Potential::lennard_jones(1.0, 1.0, 3.0, 6.0).unwrap())
        .unwrap()
        .holds;
    outcome(
        (h.argmin - 2.6284732).abs() <= 1e-5
            && (h.conjugate_m - 4.6022909).abs() <= 1e-5
            && holds
            && !lj36,
        format!(
            "argmin {:.7}, M {:.7}, five pairs hold: {holds}, (3,6) holds: {lj36}",
            h.argmin, h.conjugate_m
        ),
    )
}

const TABLE1_REFERENCE: [(f64, f64, f64); 12] = [
    (1.47, 0.64, 2.78),
    (1.39, 0.80, 1.82),
    (1.34, 0.90, 1.45),
    (1.30, 0.95, 1.27),
    (1.27, 0.99, 1.19),
    (1.25, 1.01, 1.14),
    (1.33, 0.95, 1.27),
    (1.29, 1.02, 1.10),
    (1.26, 1.06, 1.03),
    (1.24, 1.08, 1.00),
    (1.25, 1.10, 0.96),
    (1.22, 1.11, 0.93),
];

fn c8_table1() -> Outcome {
    let rows = table1(&TABLE1_PAIRS, (1.0, 1.0)).unwrap();
    let mut bad = Vec::new();
    let mut y_ok = 0;
    for (row, quoted) in rows.iter().zip(TABLE1_REFERENCE) {
        let y_match = (row.y_min - quoted.0).abs() <= 0.01;
        y_ok += y_match as usize;
        if !(y_match && (row.r - quoted.1).abs() <= 0.01 && (row.d - quoted.2).abs() <= 0.01) {
            bad.push(format!(
                "({},{}) got ({:.3},{:.3},{:.3})",
                row.x1, row.x2, row.y_min, row.r, row.d
            ));
        }
    }
    let n = rows.len();
    Outcome {
        pass: bad.is_empty(),
        detail: format!(
            "{}/{n} cells within 0.01 ({y_ok}/{n} y_min components); mismatches: {}",
            n - bad.len(),
            bad.join(" ")
        ),
        // Every y_min is closed form and must match; (2,2.5) and (2,3) are the
        // cells whose printed values agree with exact zeta sums.
        sound: y_ok == n && bad.iter().all(|b| !b.starts_with("(2,")),
    }
}

const TABLE2_REFERENCE: [f64; 62] = [
    0.05, //
    0.14, 0.31, //
    0.21, 0.37, 0.43, //
    0.27, 0.41, 0.47, //
    0.31, 0.45, 0.50, 0.58, //
    0.35, 0.48, 0.53, 0.61, //
    0.42, 0.53, 0.58, 0.65, 0.71, //
    0.47, 0.58, 0.63, 0.69, 0.74, 0.78, //
    0.52, 0.62, 0.66, 0.72, 0.77, 0.80, 0.83, //
    0.56, 0.65, 0.69, 0.75, 0.79, 0.82, 0.84, 0.86, //
    0.60, 0.68, 0.72, 0.77, 0.81, 0.84, 0.86, 0.88, 0.89, //
    0.62, 0.70, 0.74, 0.79, 0.83, 0.85, 0.87, 0.89, 0.90, 0.91,
];

fn c9_table2() -> Outcome {
    let rows = table2(&table2_default_grid()).unwrap();
    let mut ok = 0;
    let mut floor_ok = 0;
    let mut floor_total = 0;
    for (row, quoted) in rows.iter().zip(TABLE2_REFERENCE) {
        ok += ((row.d0 - quoted).abs() <= 0.005) as usize;
        if row.x1 >= 2.0 {
            floor_total += 1;
            floor_ok += (((row.d0 * 100.0 + 1e-9).floor() / 100.0 - quoted).abs() < 1e-9) as usize;
        }
    }
    let n = rows.len();
    Outcome {
        pass: ok == n,
        detail: format!(
            "{ok}/{n} cells within 0.005; for x1 >= 2 the printed value equals the exact \
             density truncated to two decimals in {floor_ok}/{floor_total} cells"
        ),
        sound: floor_ok == floor_total,
    }
}

fn c10_yukawa() -> Outcome {
    let x = yukawa_equal_ratio_limit();
    let chk = yukawa_global_check(&Potential::yukawa(1.0, 2.0, 0.695, 1.0).unwrap())
        .unwrap()
        .holds;
    let g = minimize_global(&Potential::yukawa(1.0, 2.0, 1.0, 2.0).unwrap(), &SearchOptions::default())
        .unwrap();
    let err = g.result.distance_to_triangular;
    outcome(
        x > 2.186 && x < 2.187 && chk && g.result.classification == ShapeClass::Triangular && err <= 1e-4,
        format!(
            "root {x:.7}, check at x1 = 0.695 x2 holds: {chk}, global minimizer {:?} at area {:.6} with shape error {err:.1e}",
            g.result.classification, g.result.area
        ),
    )
}

fn c11_montgomery() -> Outcome {
    let p = Precision::default();
    let mut misses = Vec::new();
    for alpha in [0.25, 0.5, 1.0, 2.0] {
        let grid = grid_scan(&|l: &ReducedLattice| theta(l, alpha, &p), 1.0, 60, 60, 8.0);
        let best = grid
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .unwrap();
        if !((best.x - 0.5).abs() < 1e-12 && (best.y - 3f64.sqrt() / 2.0).abs() < 1e-12) {
            misses.push(format!("alpha {alpha}: ({:.4}, {:.4})", best.x, best.y));
        }
    }
    outcome(
        misses.is_empty(),
        format!("argmin is the triangular cell for {}/4 values of alpha {misses:?}", 4 - misses.len()),
    )
}

/// Positive roots by a dense log scan with bisection on sign changes.
fn scanned_roots(p: &GeneralizedPolynomial) -> Vec<f64> {
    let n = 20_000;
    let (lo, hi): (f64, f64) = (1e-4, 1e4);
    let pts: Vec<f64> = (0..=n)
        .map(|k| lo * (hi / lo).powf(k as f64 / n as f64))
        .collect();
    let mut roots = Vec::new();
    for w in pts.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (fa, fb) = (p.eval(a), p.eval(b));
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() {
            continue;
        }
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if p.eval(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
        }
        roots.push(0.5 * (a + b));
    }
    roots
}

fn c12_cauchy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut violations = 0;
    let mut with_roots = 0;
    let mut cases = 0;
    while cases < 500 {
        let n = rng.random_range(2..=5);
        let mut terms: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-5.0..5.0), rng.random_range(0.0..6.0)))
            .collect();
        // Leading coefficient positive and at least one negative term.
        terms.sort_by(|a, b| a.1.total_cmp(&b.1));
        let last = terms.len() - 1;
        terms[last].0 = terms[last].0.abs() + 0.1;
        terms[0].0 = -(terms[0].0.abs() + 0.1);
        let Ok(p) = GeneralizedPolynomial::new(terms) else {
            continue;
        };
        cases += 1;
        let m = cauchy_bound(&p).unwrap();
        let roots = scanned_roots(&p);
        with_roots += !roots.is_empty() as usize;
        violations += roots.iter().filter(|&&r| r > m * (1.0 + 1e-9)).count();
    }
    outcome(
        violations == 0,
        format!("500 polynomials ({with_roots} with positive roots), {violations} violations"),
    )
}

fn c13_sufficient() -> Outcome {
    let p = Precision::default();
    let fams = [
        ("convex", convex_example()),
        (
            "power(5,-3,1;2,4,6)",
            Potential::inverse_power_sum(&[(5.0, 2.0), (-3.0, 4.0), (1.0, 6.0)]).unwrap(),
        ),
        ("LJ(2,1;3,6)", Potential::lennard_jones(2.0, 1.0, 3.0, 6.0).unwrap()),
        ("Yukawa(1,3;1,2)", Potential::yukawa(1.0, 3.0, 1.0, 2.0).unwrap()),
        (
            "screened(1,-1.5,2;1,2,3)",
            Potential::screened_coulomb_sum(&[(1.0, 1.0), (-1.5, 2.0), (2.0, 3.0)]).unwrap(),
        ),
        (
            "expdecay",
            Potential::exp_decay(&[(-1.0, 2.0), (2.0, 4.0)], &[(1.0, 1.0)]).unwrap(),
        ),
        ("OppBuckingham(1,1;2,12)", Potential::opp_buckingham(1.0, 1.0, 2.0, 12.0).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut bad = Vec::new();
    for (name, f) in &fams {
        let bound = match area_bound_high_density(f) {
            Ok(b) => b.area_bound,
            Err(e) => {
                bad.push(format!("{name}: no bound ({e})"));
                continue;
            }
        };
        let area = 0.99 * bound;
        let status = check_sufficient_condition(f, area).unwrap().status;
        if !status.is_positive() {
            bad.push(format!("{name}: status {status:?}"));
        }
        let tri = energy_direct(f, &ReducedLattice::triangular(area).unwrap(), &p)
            .unwrap()
            .value;
        for _ in 0..50 {
            let (x, y) = random_shape(&mut rng, 4.0);
            let e = match energy_direct(f, &ReducedLattice::new(x, y, area).unwrap(), &p) {
                Ok(e) => e.value,
                Err(err) => {
                    bad.push(format!("{name}: ({x:.4},{y:.4}) {err}"));
                    continue;
                }
            };
            if e < tri - 1e-9 {
                bad.push(format!("{name}: ({x:.4},{y:.4}) has {e} < {tri}"));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} family instances x 50 lattices; problems: {bad:?}", fams.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, fn() -> Outcome); 13] = [
        (1, "counterexample numbers", c1_counterexample),
        (2, "closed-form vs direct Epstein zeta", c2_closed_vs_direct),
        (3, "theta modular identity", c3_theta_modular),
        (4, "Riemann identity", c4_riemann),
        (5, "integral representation", c5_integral),
        (6, "high-density bounds", c6_bounds),
        (7, "h analysis", c7_h),
        (8, "minimizer table", c8_table1),
        (9, "critical density table", c9_table2),
        (10, "Yukawa threshold and global search", c10_yukawa),
        (11, "theta scan argmin", c11_montgomery),
        (12, "Cauchy bound soundness", c12_cauchy),
        (13, "sufficient condition soundness", c13_sufficient),
    ];
    let start = Instant::now();
    let mut unexpected = Vec::new();
    for (id, name, run) in criteria {
        let t = Instant::now();
        let o = run();
        let known = KNOWN_UNATTAINABLE.contains(&id);
        let tag = match (o.pass, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known: printed digits differ from exact values)",
            (false, false) => "FAIL",
        };
        println!(
            "criterion {id:>2} [{name}]: {tag} | {} | {:.1}s",
            o.detail,
            t.elapsed().as_secs_f64()
        );
        if (!o.pass && !known) || !o.sound {
            unexpected.push(id);
        }
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
