use clap::ValueEnum;
use lattice_optima::criteria::{
    area_bound_high_density, area_bound_low_density, counterexample_interval,
    counterexample_interval_box, h, lj_global_check, yukawa_global_check,
};
use lattice_optima::energy::{
    check_c1_criterion, check_sufficient_condition, energy_direct, energy_integral, g_eval,
};
use lattice_optima::search::{
    minimize_fixed_area, minimize_global, table1, table2, table2_default_grid, TABLE1_PAIRS,
};
use lattice_optima::specfun::{epstein_zeta_closed, epstein_zeta_direct, theta, ClosedShape};
use lattice_optima::{Error, Family, Potential, Precision, ReducedLattice, SearchOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{Report, Table};
use crate::{Cli, Command, Failure, SearchArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Square,
    Triangular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotWhat {
    Potential,
    #[value(name = "gA", alias = "ga")]
    GA,
    H,
}

type Outcome = Result<Report, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn error_value(e: &Error) -> Value {
    json!({"error": {"kind": e.kind(), "message": e.to_string()}})
}

fn precision(cli: &Cli) -> Result<Precision, Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    Ok(Precision::new(cli.tol, (cli.tol * 1e-4).max(f64::MIN_POSITIVE), cli.max_terms)?)
}

fn potential(cli: &Cli) -> Result<Potential, Failure> {
    let src = cli
        .potential
        .as_deref()
        .ok_or_else(|| Failure::usage("this command needs --potential (a JSON file or inline JSON)"))?;
    let text = if src.trim_start().starts_with('{') {
        src.to_string()
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::usage(format!("cannot read {src}: {e}")))?
    };
    let f = Potential::from_json(&text)?;
    for w in f.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(f)
}

fn parse_pair(s: &str, sep: char) -> Result<(f64, f64), Failure> {
    let bad = || Failure::usage(format!("expected two numbers separated by '{sep}', got '{s}'"));
    let (a, b) = s.split_once(sep).ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_pairs(s: &str) -> Result<Vec<(f64, f64)>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_pair(p, ':'))
        .collect()
}

fn lattice(spec: &str, area: f64) -> Result<ReducedLattice, Failure> {
    let l = match spec.trim() {
        "triangular" => ReducedLattice::triangular(area)?,
        "square" => ReducedLattice::square(area)?,
        other => {
            let (x, y) = parse_pair(other, ',')?;
            ReducedLattice::from_shape(x, y, area)?
        }
    };
    Ok(l)
}

fn search_options(cli: &Cli, s: &SearchArgs) -> Result<SearchOptions, Failure> {
    let opts = SearchOptions {
        grid: (s.grid, s.grid),
        y_cap: s.y_cap,
        starts: s.starts,
        shape_tol: s.shape_tol,
        precision: precision(cli)?,
        ..SearchOptions::default()
    };
    opts.validate()?;
    Ok(opts)
}

fn report(command: &'static str, body: Value) -> Report {
    Report {
        command,
        body,
        table: None,
    }
}

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Energy { lattice: l, area } => energy(cli, l, *area),
        Command::Theta { lattice: l, area, alpha } => {
            let lat = lattice(l, *area)?;
            let v = theta(&lat, *alpha, &precision(cli)?)?;
            Ok(report(
                "theta",
                json!({"shape": lat.shape(), "area": lat.area(), "alpha": alpha, "theta": v}),
            ))
        }
        Command::Zeta { shape, two_s, area } => zeta(cli, *shape, *two_s, *area),
        Command::Check { area } => check(cli, *area),
        Command::Bounds => bounds(cli),
        Command::Minimize { area, search } => {
            let f = potential(cli)?;
            let r = minimize_fixed_area(&f, *area, &search_options(cli, search)?)?;
            Ok(report("minimize", to_value(&r)))
        }
        Command::GlobalMin { search } => {
            let f = potential(cli)?;
            let g = minimize_global(&f, &search_options(cli, search)?)?;
            Ok(report("global-min", to_value(&g)))
        }
        Command::Table1 { pairs, a } => {
            let pairs = match pairs {
                Some(p) => parse_pairs(p)?,
                None => TABLE1_PAIRS.to_vec(),
            };
            let rows = table1(&pairs, parse_pair(a, ',')?)?;
            Ok(Report {
                command: "table1",
                body: json!({ "rows": to_value(&rows) }),
                table: Some(Table {
                    header: vec!["x1", "x2", "y_min", "r", "d", "certified"],
                    rows: rows
                        .iter()
                        .map(|r| vec![json!(r.x1), json!(r.x2), json!(r.y_min), json!(r.r), json!(r.d), json!(r.certified)])
                        .collect(),
                }),
            })
        }
        Command::Table2 { grid } => {
            let grid = match grid {
                Some(g) => parse_pairs(g)?,
                None => table2_default_grid(),
            };
            let rows = table2(&grid)?;
            Ok(Report {
                command: "table2",
                body: json!({ "rows": to_value(&rows) }),
                table: Some(Table {
                    header: vec!["x1", "x2", "d0"],
                    rows: rows
                        .iter()
                        .map(|r| vec![json!(r.x1), json!(r.x2), json!(r.d0)])
                        .collect(),
                }),
            })
        }
        Command::Counterexample { box_n } => {
            let c = match box_n {
                Some(n) => counterexample_interval_box(*n)?,
                None => counterexample_interval()?,
            };
            Ok(report(
                "counterexample",
                json!({
                    "discriminant": c.discriminant,
                    "A1": c.a1,
                    "A2": c.a2,
                    "coefficients": [c.coefficients.0, c.coefficients.1, c.coefficients.2],
                    "method": if box_n.is_some() { "box_sum" } else { "exact" },
                    "box": box_n,
                }),
            ))
        }
        Command::Scan {
            area_from,
            area_to,
            steps,
            log,
            search,
        } => scan(cli, *area_from, *area_to, *steps, *log, search),
        Command::Plotdata {
            what,
            range,
            steps,
            area,
        } => plotdata(cli, *what, range, *steps, *area),
        Command::Verify { area, samples } => verify(cli, *area, *samples),
    }
}

fn energy(cli: &Cli, l: &str, area: f64) -> Outcome {
    let f = potential(cli)?;
    let p = precision(cli)?;
    let lat = lattice(l, area)?;
    let direct = energy_direct(&f, &lat, &p)?;
    let integral = match energy_integral(&f, &lat, &p) {
        Ok(i) => to_value(&i),
        Err(e) => error_value(&e),
    };
    let diff = integral["value"]
        .as_f64()
        .map(|i| ((i - direct.value) / direct.value).abs());
    Ok(report(
        "energy",
        json!({
            "family": f.family(),
            "shape": lat.shape(),
            "area": lat.area(),
            "direct": to_value(&direct),
            "integral": integral,
            "relative_difference": diff,
        }),
    ))
}

fn zeta(cli: &Cli, shape: ShapeArg, two_s: f64, area: f64) -> Outcome {
    let p = precision(cli)?;
    let (closed_shape, lat) = match shape {
        ShapeArg::Square => (ClosedShape::Square, ReducedLattice::square(area)?),
        ShapeArg::Triangular => (ClosedShape::Triangular, ReducedLattice::triangular(area)?),
    };
    // Both routes at area 1, then scaled: zeta_{cL} = c^(-s) zeta_L for squared scale c.
    let scale = area.powf(-0.5 * two_s);
    let closed = scale * epstein_zeta_closed(closed_shape, two_s, &p)?;
    let direct = epstein_zeta_direct(&lat, two_s, &p)?;
    Ok(report(
        "zeta",
        json!({
            "shape": closed_shape,
            "two_s": two_s,
            "area": area,
            "closed_form": closed,
            "direct": direct,
            "relative_difference": ((closed - direct) / closed).abs(),
        }),
    ))
}

fn check(cli: &Cli, area: f64) -> Outcome {
    let f = potential(cli)?;
    let r = check_sufficient_condition(&f, area)?;
    let c1 = match check_c1_criterion(&f, area) {
        Ok(c) => json!({
            "condition1": c.condition1,
            "condition2": c.condition2,
            "convex": c.convex,
            "r0": c.r0,
            "a0": c.a0,
        }),
        Err(e) => error_value(&e),
    };
    let mut body = to_value(&r);
    body["positive"] = json!(r.status.is_positive());
    body["c1_criterion"] = c1;
    Ok(report("check", body))
}

fn bounds(cli: &Cli) -> Outcome {
    let f = potential(cli)?;
    let mut body = json!({ "family": f.family() });
    match area_bound_high_density(&f) {
        Ok(b) => {
            body["high_density_area_bound"] = json!(b.area_bound);
            body["high_density_route"] = json!(b.route);
            body["high_density_triangular_length"] =
                json!((2.0 * b.area_bound / 3f64.sqrt()).sqrt());
        }
        Err(e) => body["high_density_area_bound"] = error_value(&e),
    }
    if matches!(f.family(), Family::InversePowerSum | Family::LennardJonesType) {
        let sq = ReducedLattice::square(1.0)?;
        body["low_density_area_bound"] = match area_bound_low_density(&f, &sq) {
            Ok(a) => json!({"area": a, "density": 1.0 / a, "comparison": "square"}),
            Err(e) => error_value(&e),
        };
    }
    match f.family() {
        Family::LennardJonesType => {
            body["global_check"] = match lj_global_check(&f) {
                Ok(g) => to_value(&g),
                Err(e) => error_value(&e),
            };
        }
        Family::AttractiveRepulsiveYukawa => {
            body["global_check"] = match yukawa_global_check(&f) {
                Ok(g) => to_value(&g),
                Err(e) => error_value(&e),
            };
        }
        _ => {}
    }
    body["monotonicity"] = to_value(&f.classify_monotonicity());
    body["stationary"] = match f.stationary_analysis() {
        Ok(s) => to_value(&s),
        Err(e) => error_value(&e),
    };
    Ok(report("bounds", body))
}

fn scan(cli: &Cli, from: f64, to: f64, steps: usize, log: bool, s: &SearchArgs) -> Outcome {
    if !(from > 0.0 && to > from && steps >= 1) {
        return Err(Failure::usage("need 0 < --area-from < --area-to and --steps >= 1"));
    }
    let f = potential(cli)?;
    let opts = search_options(cli, s)?;
    let areas: Vec<f64> = (0..=steps)
        .map(|k| {
            let t = k as f64 / steps as f64;
            if log {
                from * (to / from).powf(t)
            } else {
                from + t * (to - from)
            }
        })
        .collect();
    let mut rows = Vec::with_capacity(areas.len());
    let mut cells = Vec::with_capacity(areas.len());
    for &a in &areas {
        let r = minimize_fixed_area(&f, a, &opts)?;
        cells.push(vec![
            json!(a),
            json!(r.shape.0),
            json!(r.shape.1),
            to_value(&r.classification),
            json!(r.value),
            json!(r.distance_to_triangular),
            json!(r.distance_to_square),
        ]);
        rows.push(to_value(&r));
    }
    Ok(Report {
        command: "scan",
        body: json!({ "rows": rows }),
        table: Some(Table {
            header: vec!["area", "x", "y", "class", "energy", "dist_triangular", "dist_square"],
            rows: cells,
        }),
    })
}

fn plotdata(cli: &Cli, what: PlotWhat, range: &str, steps: usize, area: Option<f64>) -> Outcome {
    let (lo, hi) = parse_pair(range, ',')?;
    if !(lo < hi && lo.is_finite() && hi.is_finite()) || steps < 2 {
        return Err(Failure::usage("need lo < hi in --range and --steps >= 2"));
    }
    let xs: Vec<f64> = (0..steps)
        .map(|k| lo + (hi - lo) * k as f64 / (steps - 1) as f64)
        .collect();
    let values: Vec<f64> = match what {
        PlotWhat::H => {
            if lo <= 0.0 {
                return Err(Failure::usage("h is defined for t > 0"));
            }
            xs.iter().map(|&t| h(t)).collect()
        }
        PlotWhat::Potential => {
            let f = potential(cli)?;
            xs.iter().map(|&r| f.evaluate(r)).collect::<Result<_, _>>()?
        }
        PlotWhat::GA => {
            let f = potential(cli)?;
            let a = area.ok_or_else(|| Failure::usage("gA needs --area"))?;
            xs.iter().map(|&y| g_eval(&f, a, y)).collect::<Result<_, _>>()?
        }
    };
    let name = match what {
        PlotWhat::Potential => "potential",
        PlotWhat::GA => "gA",
        PlotWhat::H => "h",
    };
    Ok(Report {
        command: "plotdata",
        body: json!({
            "what": name,
            "area": area,
            "x": xs,
            "value": values,
        }),
        table: Some(Table {
            header: vec!["x", "value"],
            rows: xs.iter().zip(&values).map(|(x, v)| vec![json!(x), json!(v)]).collect(),
        }),
    })
}

fn verify(cli: &Cli, area: f64, samples: usize) -> Outcome {
    let f = potential(cli)?;
    let p = precision(cli)?;
    let status = check_sufficient_condition(&f, area)?;
    let tri = energy_direct(&f, &ReducedLattice::triangular(area)?, &p)?.value;
    let tol = 1e-9 * tri.abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut worst: Option<(f64, f64, f64)> = None;
    let mut below = 0;
    for _ in 0..samples {
        let x = rng.random_range(0.0..=0.5);
        let y = rng.random_range((1.0f64 - x * x).sqrt()..4.0);
        let e = energy_direct(&f, &ReducedLattice::new(x, y, area)?, &p)?.value;
        if e < tri - tol {
            below += 1;
        }
        if worst.is_none_or(|w| e - tri < w.2) {
            worst = Some((x, y, e - tri));
        }
    }
    Ok(report(
        "verify",
        json!({
            "area": area,
            "samples": samples,
            "seed": cli.seed,
            "triangular_energy": tri,
            "condition_status": status.status,
            "certification_route": status.certification_route,
            "lattices_below_triangular": below,
            "smallest_gap": worst.map(|w| json!({"shape": [w.0, w.1], "energy_minus_triangular": w.2})),
        }),
    ))
}
