//! Derivative-free Nelder-Mead minimization.

/// Outcome of a Nelder-Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Minimizes `f` from `start`, with initial simplex edges `step[i]` along each
/// axis. Non-finite values count as `+inf`. Stops when the simplex diameter
/// falls below `xtol` or after `max_iter` iterations. The best vertex never
/// gets worse, so the returned value is at most `f(start)`.
pub fn nelder_mead<F>(f: F, start: &[f64], step: &[f64], max_iter: usize, xtol: f64) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let n = start.len();
    assert_eq!(step.len(), n, "one step per coordinate");
    let eval = |p: &[f64]| {
        let v = f(p);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut evaluations = 0;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), eval(start)));
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step[i];
        let v = eval(&p);
        simplex.push((p, v));
    }
    evaluations += n + 1;

    let order = |s: &mut Vec<(Vec<f64>, f64)>| {
        s.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| lex(&a.0, &b.0)));
    };
    let diameter = |s: &[(Vec<f64>, f64)]| {
        let best = &s[0].0;
        s[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(best)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        order(&mut simplex);
        if diameter(&simplex) < xtol {
            converged = true;
            break;
        }
        iterations += 1;
        let worst = simplex[n].clone();
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(p, _)| p[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let refl = along(1.0);
        let fr = eval(&refl);
        evaluations += 1;
        if fr < simplex[0].1 {
            let exp = along(2.0);
            let fe = eval(&exp);
            evaluations += 1;
            simplex[n] = if fe < fr { (exp, fe) } else { (refl, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (refl, fr);
            continue;
        }
        let (cand, fc) = if fr < worst.1 {
            let c = along(0.5);
            let v = eval(&c);
            (c, v)
        } else {
            let c = along(-0.5);
            let v = eval(&c);
            (c, v)
        };
        evaluations += 1;
        if fc < worst.1.min(fr) {
            simplex[n] = (cand, fc);
            continue;
        }
        // Shrink toward the best vertex.
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let p: Vec<f64> = vertex
                .0
                .iter()
                .zip(&best)
                .map(|(x, b)| b + 0.5 * (x - b))
                .collect();
            let v = eval(&p);
            *vertex = (p, v);
        }
        evaluations += n;
    }
    order(&mut simplex);
    let (point, value) = simplex.swap_remove(0);
    SimplexResult {
        point,
        value,
        iterations,
        evaluations,
        converged,
    }
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}
