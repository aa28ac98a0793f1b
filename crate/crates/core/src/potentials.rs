//! Radial potential families, written as functions of the squared distance
//! `r = |p|^2`, with their inverse Laplace transforms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::{bisect, newton_bracketed};
use crate::specfun::gamma;

/// Smallest admissible gap between consecutive exponents.
pub const EXPONENT_GAP: f64 = 1e-9;

/// Number of log-spaced points used when sampling the sign of `mu_f`.
pub const SAMPLE_POINTS: usize = 10_000;
pub const SAMPLE_RANGE: (f64, f64) = (1e-6, 1e6);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub a: f64,
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpTerm {
    pub b: f64,
    pub t: f64,
}

/// User-facing description of a potential, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    /// `sum a_i exp(-x_i r) / r`
    ScreenedCoulombSum { terms: Vec<Term> },
    /// `sum a_i r^(-x_i)`
    InversePowerSum { terms: Vec<Term> },
    /// `a2 r^(-x2) - a1 r^(-x1)`
    LennardJonesType { a1: f64, a2: f64, x1: f64, x2: f64 },
    /// `a2 exp(-x2 r) / r - a1 exp(-x1 r) / r`
    AttractiveRepulsiveYukawa { a1: f64, a2: f64, x1: f64, x2: f64 },
    /// `sum a_i r^(-x_i) + sum b_j exp(-t_j sqrt(r))`
    ExpDecay {
        power_terms: Vec<Term>,
        exp_terms: Vec<ExpTerm>,
    },
    /// `a2 r^(-x2) - a1 exp(-x1 sqrt(r))`
    OppBuckingham { a1: f64, a2: f64, x1: f64, x2: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ScreenedCoulombSum,
    InversePowerSum,
    LennardJonesType,
    AttractiveRepulsiveYukawa,
    ExpDecay,
    OppBuckingham,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::ScreenedCoulombSum => "screened_coulomb_sum",
            Family::InversePowerSum => "inverse_power_sum",
            Family::LennardJonesType => "lennard_jones_type",
            Family::AttractiveRepulsiveYukawa => "attractive_repulsive_yukawa",
            Family::ExpDecay => "exp_decay",
            Family::OppBuckingham => "opp_buckingham",
        }
    }
}

/// Elementary summands shared by all families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Atom {
    /// `a r^(-x)`
    Power { a: f64, x: f64 },
    /// `a exp(-x r) / r`
    Screened { a: f64, x: f64 },
    /// `b exp(-t sqrt(r))`
    RootExp { b: f64, t: f64 },
}

impl Atom {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            Atom::Power { a, x } => a * r.powf(-x),
            Atom::Screened { a, x } => a * (-x * r).exp() / r,
            Atom::RootExp { b, t } => b * (-t * r.sqrt()).exp(),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidPotential(msg.into())
}

fn finite_nonzero(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v != 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite and nonzero, got {v}")))
    }
}

fn increasing_exponents(xs: &[f64], lower: f64, label: &str) -> Result<()> {
    if xs.is_empty() {
        return Err(invalid(format!("{label}: at least one term is required")));
    }
    for (i, &x) in xs.iter().enumerate() {
        if !(x.is_finite() && x > lower) {
            return Err(invalid(format!("{label}: exponent x_{} = {x} must exceed {lower}", i + 1)));
        }
        if i > 0 && x - xs[i - 1] < EXPONENT_GAP {
            return Err(invalid(format!(
                "{label}: exponents must increase by at least {EXPONENT_GAP}, got {} then {x}",
                xs[i - 1]
            )));
        }
    }
    Ok(())
}

impl PotentialSpec {
    pub fn family(&self) -> Family {
        match self {
            PotentialSpec::ScreenedCoulombSum { .. } => Family::ScreenedCoulombSum,
            PotentialSpec::InversePowerSum { .. } => Family::InversePowerSum,
            PotentialSpec::LennardJonesType { .. } => Family::LennardJonesType,
            PotentialSpec::AttractiveRepulsiveYukawa { .. } => Family::AttractiveRepulsiveYukawa,
            PotentialSpec::ExpDecay { .. } => Family::ExpDecay,
            PotentialSpec::OppBuckingham { .. } => Family::OppBuckingham,
        }
    }

    /// Checks the admissibility constraints; returns non-fatal warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut warnings = Vec::new();
        match self {
            PotentialSpec::ScreenedCoulombSum { terms } => {
                let xs: Vec<f64> = terms.iter().map(|t| t.x).collect();
                increasing_exponents(&xs, 0.0, "screened_coulomb_sum")?;
                for t in terms {
                    finite_nonzero("coefficient a_i", t.a)?;
                }
                let total: f64 = terms.iter().map(|t| t.a).sum();
                let scale: f64 = terms.iter().map(|t| t.a.abs()).sum();
                if total < -1e-15 * scale {
                    return Err(invalid(format!(
                        "screened_coulomb_sum needs sum a_i >= 0, got {total}"
                    )));
                }
                if total.abs() <= 1e-15 * scale {
                    warnings.push(
                        "sum a_i = 0: the high-density area bound degenerates for this potential"
                            .to_string(),
                    );
                }
            }
            PotentialSpec::InversePowerSum { terms } => {
                let xs: Vec<f64> = terms.iter().map(|t| t.x).collect();
                increasing_exponents(&xs, 1.0, "inverse_power_sum")?;
                for t in terms {
                    finite_nonzero("coefficient a_i", t.a)?;
                }
                if terms.last().map(|t| t.a) <= Some(0.0) {
                    return Err(invalid("inverse_power_sum needs a positive last coefficient a_n"));
                }
            }
            PotentialSpec::LennardJonesType { a1, a2, x1, x2 } => {
                if !(*a1 > 0.0 && *a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
                    return Err(invalid("lennard_jones_type needs a1 > 0 and a2 > 0"));
                }
                increasing_exponents(&[*x1, *x2], 1.0, "lennard_jones_type")?;
            }
            PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 } => {
                if !(*a1 > 0.0 && a2 > a1 && a2.is_finite()) {
                    return Err(invalid("attractive_repulsive_yukawa needs 0 < a1 < a2"));
                }
                increasing_exponents(&[*x1, *x2], 0.0, "attractive_repulsive_yukawa")?;
            }
            PotentialSpec::ExpDecay {
                power_terms,
                exp_terms,
            } => {
                let xs: Vec<f64> = power_terms.iter().map(|t| t.x).collect();
                increasing_exponents(&xs, 1.5, "exp_decay power_terms")?;
                for t in power_terms {
                    finite_nonzero("coefficient a_i", t.a)?;
                }
                if power_terms.last().map(|t| t.a) <= Some(0.0) {
                    return Err(invalid("exp_decay needs a positive last power coefficient a_n"));
                }
                for e in exp_terms {
                    finite_nonzero("coefficient b_j", e.b)?;
                    if !(e.t > 0.0 && e.t.is_finite()) {
                        return Err(invalid(format!(
                            "exp_decay needs t_j > 0 (exp(-t sqrt(r)) must decay), got {}",
                            e.t
                        )));
                    }
                }
            }
            PotentialSpec::OppBuckingham { a1, a2, x1, x2 } => {
                if !(*a1 > 0.0 && *a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
                    return Err(invalid("opp_buckingham needs a1 > 0 and a2 > 0"));
                }
                if !(*x1 > 0.0 && x1.is_finite()) {
                    return Err(invalid("opp_buckingham needs x1 > 0"));
                }
                if !(*x2 > 1.5 && x2.is_finite()) {
                    return Err(invalid("opp_buckingham needs x2 > 3/2"));
                }
            }
        }
        Ok(warnings)
    }
}

/// A potential whose parameters passed validation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Potential {
    spec: PotentialSpec,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
}

impl TryFrom<PotentialSpec> for Potential {
    type Error = Error;

    fn try_from(spec: PotentialSpec) -> Result<Self> {
        Potential::new(spec)
    }
}

impl Potential {
    pub fn new(spec: PotentialSpec) -> Result<Self> {
        let warnings = spec.validate()?;
        Ok(Potential { spec, warnings })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: PotentialSpec =
            serde_json::from_str(text).map_err(|e| invalid(format!("potential JSON: {e}")))?;
        Potential::new(spec)
    }

    pub fn spec(&self) -> &PotentialSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Inverse power law sum with the given `(a_i, x_i)` pairs.
    pub fn inverse_power_sum(terms: &[(f64, f64)]) -> Result<Self> {
        Potential::new(PotentialSpec::InversePowerSum {
            terms: terms.iter().map(|&(a, x)| Term { a, x }).collect(),
        })
    }

    pub fn screened_coulomb_sum(terms: &[(f64, f64)]) -> Result<Self> {
        Potential::new(PotentialSpec::ScreenedCoulombSum {
            terms: terms.iter().map(|&(a, x)| Term { a, x }).collect(),
        })
    }

    pub fn lennard_jones(a1: f64, a2: f64, x1: f64, x2: f64) -> Result<Self> {
        Potential::new(PotentialSpec::LennardJonesType { a1, a2, x1, x2 })
    }

    pub fn yukawa(a1: f64, a2: f64, x1: f64, x2: f64) -> Result<Self> {
        Potential::new(PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 })
    }

    pub fn opp_buckingham(a1: f64, a2: f64, x1: f64, x2: f64) -> Result<Self> {
        Potential::new(PotentialSpec::OppBuckingham { a1, a2, x1, x2 })
    }

    pub fn exp_decay(power: &[(f64, f64)], exp: &[(f64, f64)]) -> Result<Self> {
        Potential::new(PotentialSpec::ExpDecay {
            power_terms: power.iter().map(|&(a, x)| Term { a, x }).collect(),
            exp_terms: exp.iter().map(|&(b, t)| ExpTerm { b, t }).collect(),
        })
    }

    /// The potential as a list of elementary summands.
    pub fn atoms(&self) -> Vec<Atom> {
        match &self.spec {
            PotentialSpec::ScreenedCoulombSum { terms } => terms
                .iter()
                .map(|t| Atom::Screened { a: t.a, x: t.x })
                .collect(),
            PotentialSpec::InversePowerSum { terms } => terms
                .iter()
                .map(|t| Atom::Power { a: t.a, x: t.x })
                .collect(),
            PotentialSpec::LennardJonesType { a1, a2, x1, x2 } => vec![
                Atom::Power { a: -a1, x: *x1 },
                Atom::Power { a: *a2, x: *x2 },
            ],
            PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 } => vec![
                Atom::Screened { a: -a1, x: *x1 },
                Atom::Screened { a: *a2, x: *x2 },
            ],
            PotentialSpec::ExpDecay {
                power_terms,
                exp_terms,
            } => power_terms
                .iter()
                .map(|t| Atom::Power { a: t.a, x: t.x })
                .chain(exp_terms.iter().map(|e| Atom::RootExp { b: e.b, t: e.t }))
                .collect(),
            PotentialSpec::OppBuckingham { a1, a2, x1, x2 } => vec![
                Atom::Power { a: *a2, x: *x2 },
                Atom::RootExp { b: -a1, t: *x1 },
            ],
        }
    }

    /// `(a_i, x_i)` of the inverse-power part, in increasing exponent order.
    pub fn power_terms(&self) -> Vec<(f64, f64)> {
        self.atoms()
            .into_iter()
            .filter_map(|at| match at {
                Atom::Power { a, x } => Some((a, x)),
                _ => None,
            })
            .collect()
    }

    /// `{k : a_1 + ... + a_k < 0}` (1-based) for the screened and power families.
    pub fn k_a(&self) -> Vec<usize> {
        let coeffs = self.signed_coefficients();
        let mut acc = 0.0;
        let mut out = Vec::new();
        for (k, a) in coeffs.iter().enumerate() {
            acc += a;
            if acc < 0.0 {
                out.push(k + 1);
            }
        }
        out
    }

    fn signed_coefficients(&self) -> Vec<f64> {
        self.atoms()
            .iter()
            .filter_map(|at| match *at {
                Atom::Power { a, .. } | Atom::Screened { a, .. } => Some(a),
                Atom::RootExp { .. } => None,
            })
            .collect()
    }

    /// 1-based indices of negative coefficients `a_i`.
    pub fn i_minus(&self) -> Vec<usize> {
        self.signed_coefficients()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a < 0.0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// 1-based indices of positive coefficients `a_i`.
    pub fn i_plus(&self) -> Vec<usize> {
        self.signed_coefficients()
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0.0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// `B = sum |b_j| t_j` over the `exp(-t sqrt(r))` terms.
    pub fn b_sum(&self) -> f64 {
        self.atoms()
            .iter()
            .map(|at| match *at {
                Atom::RootExp { b, t } => b.abs() * t,
                _ => 0.0,
            })
            .sum()
    }

    /// `f(r)` at squared distance `r > 0`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::domain("evaluate", format!("need r > 0, got {r}")));
        }
        Ok(self.atoms().iter().map(|at| at.eval(r)).sum())
    }

    pub fn inverse_laplace(&self) -> InverseLaplaceForm {
        InverseLaplaceForm::from_atoms(&self.atoms())
    }

    pub fn classify_monotonicity(&self) -> MonotonicityReport {
        classify_monotonicity(self)
    }

    pub fn stationary_analysis(&self) -> Result<StationaryAnalysis> {
        stationary_analysis(self)
    }
}

/// Free-function form of [`Potential::evaluate`].
pub fn evaluate(f: &Potential, r: f64) -> Result<f64> {
    f.evaluate(r)
}

/// Free-function form of [`Potential::inverse_laplace`].
pub fn inverse_laplace(f: &Potential) -> InverseLaplaceForm {
    f.inverse_laplace()
}

/// `c y^e` with `c = a / Gamma(x)` and `e = x - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub coeff: f64,
    pub exponent: f64,
}

/// `height * 1[threshold, inf)(y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Step {
    pub height: f64,
    pub threshold: f64,
}

/// `coeff * y^(-3/2) * exp(-t^2 / (4 y))` with `coeff = b t / (2 sqrt(pi))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatKernel {
    pub coeff: f64,
    pub t: f64,
}

/// Closed form of `mu_f`, the density with `f(r) = int_0^inf exp(-r y) mu_f(y) dy`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InverseLaplaceForm {
    pub power_terms: Vec<PowerLaw>,
    pub step_terms: Vec<Step>,
    pub heat_terms: Vec<HeatKernel>,
}

impl InverseLaplaceForm {
    pub fn from_atoms(atoms: &[Atom]) -> Self {
        let mut out = InverseLaplaceForm::default();
        for at in atoms {
            match *at {
                Atom::Power { a, x } => out.power_terms.push(PowerLaw {
                    coeff: a / gamma(x),
                    exponent: x - 1.0,
                }),
                Atom::Screened { a, x } => out.step_terms.push(Step {
                    height: a,
                    threshold: x,
                }),
                Atom::RootExp { b, t } => out.heat_terms.push(HeatKernel {
                    coeff: b * t / (2.0 * PI.sqrt()),
                    t,
                }),
            }
        }
        out.power_terms
            .sort_by(|p, q| p.exponent.total_cmp(&q.exponent));
        out.step_terms
            .sort_by(|p, q| p.threshold.total_cmp(&q.threshold));
        out
    }

    pub fn has_steps(&self) -> bool {
        !self.step_terms.is_empty()
    }

    /// `mu_f(y)` for `y > 0`.
    pub fn eval(&self, y: f64) -> f64 {
        let mut s = 0.0;
        for p in &self.power_terms {
            s += p.coeff * y.powf(p.exponent);
        }
        for st in &self.step_terms {
            if y >= st.threshold {
                s += st.height;
            }
        }
        for h in &self.heat_terms {
            s += h.coeff * y.powf(-1.5) * (-h.t * h.t / (4.0 * y)).exp();
        }
        s
    }

    /// Sum of the absolute values of all terms of `mu_f(y)`, used as a rounding scale.
    pub fn magnitude(&self, y: f64) -> f64 {
        let mut s = 0.0;
        for p in &self.power_terms {
            s += (p.coeff * y.powf(p.exponent)).abs();
        }
        for st in &self.step_terms {
            if y >= st.threshold {
                s += st.height.abs();
            }
        }
        for h in &self.heat_terms {
            s += (h.coeff * y.powf(-1.5) * (-h.t * h.t / (4.0 * y)).exp()).abs();
        }
        s
    }

    /// `mu_f'(y)`; step terms have no classical derivative and are rejected.
    pub fn derivative(&self, y: f64) -> Result<f64> {
        if self.has_steps() {
            return Err(Error::UnsupportedFamily {
                operation: "derivative of the inverse Laplace transform",
                family: "screened Coulomb (step transform)",
            });
        }
        let mut s = 0.0;
        for p in &self.power_terms {
            if p.exponent != 0.0 {
                s += p.coeff * p.exponent * y.powf(p.exponent - 1.0);
            }
        }
        for h in &self.heat_terms {
            let e = (-h.t * h.t / (4.0 * y)).exp();
            s += h.coeff * e * y.powf(-2.5) * (h.t * h.t / (4.0 * y) - 1.5);
        }
        Ok(s)
    }

    /// Points where `mu_f` jumps.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.step_terms.iter().map(|s| s.threshold).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityClass {
    CompletelyMonotonic,
    NotCmCertified,
    UnknownSampledNonneg,
    UnknownSampledNegative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub class: MonotonicityClass,
    /// Name of the argument that decided the class.
    pub method: &'static str,
    /// `(y, mu_f(y))` pairs carrying the sign evidence.
    pub witnesses: Vec<(f64, f64)>,
    /// Number of sample points used, zero for analytic decisions.
    pub grid_points: usize,
}

impl MonotonicityReport {
    pub fn is_completely_monotonic(&self) -> bool {
        self.class == MonotonicityClass::CompletelyMonotonic
    }
}

/// `(x2 + 1/2) [1 + ln(x1^2 / (4 x2 + 2))] - ln(a1 x1 Gamma(x2) / (2 sqrt(pi) a2))`;
/// nonnegative exactly when the opposite-Buckingham transform is nonnegative.
pub fn opp_buckingham_cm_margin(a1: f64, a2: f64, x1: f64, x2: f64) -> f64 {
    (x2 + 0.5) * (1.0 + (x1 * x1 / (4.0 * x2 + 2.0)).ln())
        - (a1 * x1 * gamma(x2) / (2.0 * PI.sqrt() * a2)).ln()
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let (l, h) = (lo.ln(), hi.ln());
    (0..n).map(move |i| (l + (h - l) * i as f64 / (n - 1) as f64).exp())
}

pub fn classify_monotonicity(f: &Potential) -> MonotonicityReport {
    let mu = f.inverse_laplace();
    let atoms = f.atoms();
    let all_positive = atoms.iter().all(|at| match *at {
        Atom::Power { a, .. } | Atom::Screened { a, .. } => a > 0.0,
        Atom::RootExp { b, .. } => b > 0.0,
    });
    if all_positive {
        return MonotonicityReport {
            class: MonotonicityClass::CompletelyMonotonic,
            method: "positive_combination",
            witnesses: Vec::new(),
            grid_points: 0,
        };
    }
    match f.spec() {
        PotentialSpec::ScreenedCoulombSum { .. } | PotentialSpec::AttractiveRepulsiveYukawa { .. } => {
            // mu_f is the step function of partial sums.
            let mut acc = 0.0;
            let mut witnesses = Vec::new();
            for st in &mu.step_terms {
                acc += st.height;
                if acc < 0.0 {
                    witnesses.push((st.threshold, acc));
                }
            }
            let class = if witnesses.is_empty() {
                MonotonicityClass::CompletelyMonotonic
            } else {
                MonotonicityClass::NotCmCertified
            };
            return MonotonicityReport {
                class,
                method: "partial_sums",
                witnesses,
                grid_points: 0,
            };
        }
        PotentialSpec::OppBuckingham { a1, a2, x1, x2 } => {
            let margin = opp_buckingham_cm_margin(*a1, *a2, *x1, *x2);
            let y_star = x1 * x1 / (4.0 * x2 + 2.0);
            return if margin >= 0.0 {
                MonotonicityReport {
                    class: MonotonicityClass::CompletelyMonotonic,
                    method: "opp_buckingham_inequality",
                    witnesses: vec![(y_star, mu.eval(y_star))],
                    grid_points: 0,
                }
            } else {
                MonotonicityReport {
                    class: MonotonicityClass::NotCmCertified,
                    method: "opp_buckingham_inequality",
                    witnesses: vec![(y_star, mu.eval(y_star))],
                    grid_points: 0,
                }
            };
        }
        _ => {}
    }
    // Pure power sums whose lowest exponent carries a negative coefficient are
    // negative near zero.
    if mu.heat_terms.is_empty() {
        if let Some(first) = mu.power_terms.first() {
            if first.coeff < 0.0 {
                let others: Vec<&PowerLaw> = mu.power_terms.iter().skip(1).collect();
                // Find y small enough that the first term dominates the rest.
                let mut y = 1.0_f64;
                for _ in 0..2000 {
                    let rest: f64 = others.iter().map(|p| (p.coeff * y.powf(p.exponent)).abs()).sum();
                    if (first.coeff * y.powf(first.exponent)).abs() > 2.0 * rest {
                        break;
                    }
                    y *= 0.5;
                }
                return MonotonicityReport {
                    class: MonotonicityClass::NotCmCertified,
                    method: "leading_small_y_term",
                    witnesses: vec![(y, mu.eval(y))],
                    grid_points: 0,
                };
            }
        }
    }
    let mut worst = (f64::NAN, f64::INFINITY);
    let mut certified_negative = None;
    for y in log_grid(SAMPLE_RANGE.0, SAMPLE_RANGE.1, SAMPLE_POINTS) {
        let v = mu.eval(y);
        if v < worst.1 {
            worst = (y, v);
        }
        if certified_negative.is_none() && v < -1e-12 * mu.magnitude(y) {
            certified_negative = Some((y, v));
        }
    }
    let (class, witnesses) = match certified_negative {
        Some(w) => (MonotonicityClass::NotCmCertified, vec![w, worst]),
        None if worst.1 < 0.0 => (MonotonicityClass::UnknownSampledNegative, vec![worst]),
        None => (MonotonicityClass::UnknownSampledNonneg, vec![worst]),
    };
    MonotonicityReport {
        class,
        method: "log_grid_sampling",
        witnesses,
        grid_points: SAMPLE_POINTS,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    Increasing,
}

/// Monotonicity of the radial profile `R -> f(R^2)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryAnalysis {
    pub family: Family,
    /// Radii (distances, not squared) where the profile changes direction.
    pub stationary_radii: Vec<f64>,
    /// Consecutive `(from, to, trend)` intervals covering `(0, inf)`.
    pub intervals: Vec<(f64, f64, Trend)>,
    /// Radius of the local minimum of the profile, if it has a well.
    pub well_radius: Option<f64>,
    /// Upper bound on the area of any global minimizer among all lattices.
    pub global_area_bound: Option<f64>,
}

/// Root in `r` (squared distance) of
/// `(x2 - x1) r + ln(1 + x1 r) - ln(1 + x2 r) + ln(a1 / a2)`.
pub fn yukawa_threshold(a1: f64, a2: f64, x1: f64, x2: f64) -> Result<f64> {
    let g = |r: f64| {
        (
            (x2 - x1) * r + (x1 * r).ln_1p() - (x2 * r).ln_1p() + (a1 / a2).ln(),
            (x2 - x1) + x1 / (1.0 + x1 * r) - x2 / (1.0 + x2 * r),
        )
    };
    let mut hi = 1.0;
    while g(hi).0 <= 0.0 {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::RootNotBracketed("yukawa threshold".into()));
        }
    }
    newton_bracketed(g, 0.0, hi, 1e-14 * hi)
}

pub fn stationary_analysis(f: &Potential) -> Result<StationaryAnalysis> {
    let family = f.family();
    let make = |radii: Vec<f64>, well: Option<f64>, bound: Option<f64>| {
        let mut intervals = Vec::new();
        let mut from = 0.0;
        let mut trend = Trend::Decreasing;
        for &r in &radii {
            intervals.push((from, r, trend));
            from = r;
            trend = match trend {
                Trend::Decreasing => Trend::Increasing,
                Trend::Increasing => Trend::Decreasing,
            };
        }
        intervals.push((from, f64::INFINITY, trend));
        StationaryAnalysis {
            family,
            stationary_radii: radii,
            intervals,
            well_radius: well,
            global_area_bound: bound,
        }
    };
    match *f.spec() {
        PotentialSpec::LennardJonesType { a1, a2, x1, x2 } => {
            let ratio = a2 * x2 / (a1 * x1);
            let r = ratio.powf(1.0 / (2.0 * (x2 - x1)));
            Ok(make(vec![r], Some(r), Some(ratio.powf(1.0 / (x2 - x1)))))
        }
        PotentialSpec::AttractiveRepulsiveYukawa { a1, a2, x1, x2 } => {
            let alpha = yukawa_threshold(a1, a2, x1, x2)?;
            let r = alpha.sqrt();
            Ok(make(vec![r], Some(r), Some(alpha)))
        }
        PotentialSpec::OppBuckingham { a1, a2, x1, x2 } => {
            let k = (2.0 * a2 * x2 / (a1 * x1)).ln();
            let peak = (2.0 * x2 + 1.0) / x1;
            let g = |r: f64| -x1 * r + (2.0 * x2 + 1.0) * r.ln() - k;
            if g(peak) <= 0.0 {
                return Ok(make(Vec::new(), None, None));
            }
            let mut lo = peak;
            while g(lo) > 0.0 {
                lo *= 0.5;
            }
            let mut hi = peak;
            while g(hi) > 0.0 {
                hi *= 2.0;
            }
            let r_m = bisect(g, lo, peak, 1e-14 * peak)?;
            let r_big = bisect(g, peak, hi, 1e-14 * hi)?;
            Ok(make(vec![r_m, r_big], Some(r_m), Some(r_big * r_big)))
        }
        _ => Err(Error::UnsupportedFamily {
            operation: "stationary_analysis",
            family: family.name(),
        }),
    }
}
