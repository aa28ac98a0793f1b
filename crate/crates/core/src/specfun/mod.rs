//! Scalar special functions and lattice theta/zeta sums.

mod epstein;
mod gamma;
mod hurwitz;
mod theta;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use epstein::{
    epstein_zeta_closed, epstein_zeta_direct, epstein_zeta_many, epstein_zeta_with_bound,
    ClosedShape,
};
pub use gamma::{
    digamma, digamma_inverse, gamma, gamma_like, ln_gamma, trigamma, upper_gamma,
    upper_gamma_regularized, GammaKind, EULER_GAMMA,
};
pub use hurwitz::{hurwitz_zeta, riemann_zeta};
pub use theta::{theta, theta_punctured, theta_with_bound};

/// Accuracy targets for series and quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Precision {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: u64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            max_terms: 1_000_000,
        }
    }
}

impl Precision {
    pub fn new(rel_tol: f64, abs_tol: f64, max_terms: u64) -> Result<Self> {
        let p = Precision {
            rel_tol,
            abs_tol,
            max_terms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |t: f64| t > 0.0 && t < 1.0;
        if !ok(self.rel_tol) || !ok(self.abs_tol) || self.max_terms == 0 {
            return Err(Error::domain(
                "Precision",
                "tolerances must lie in (0, 1) and max_terms must be positive",
            ));
        }
        Ok(())
    }
}

/// A truncated series together with a rigorous bound on the omitted part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub error_bound: f64,
    /// Squared radius of the last enumerated ball.
    pub cutoff_r2: f64,
}
