use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate basis: |det| = {det:e} is below tolerance {tol:e}")]
    DegenerateBasis { det: f64, tol: f64 },

    #[error("area must be positive and finite, got {0}")]
    NonPositiveArea(f64),

    #[error("shape ({x}, {y}) is outside the fundamental domain")]
    OutsideFundamentalDomain { x: f64, y: f64 },

    #[error("enumeration would visit about {estimated:.3e} points, budget is {budget:.3e}")]
    BudgetExceeded { estimated: f64, budget: f64 },

    #[error("domain error in {function}: {message}")]
    Domain {
        function: &'static str,
        message: String,
    },

    #[error("series did not converge: {0}")]
    SlowConvergence(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("operation `{operation}` does not support family {family}")]
    UnsupportedFamily {
        operation: &'static str,
        family: &'static str,
    },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("polynomial has no negative coefficient, root bound undefined")]
    NoNegativeTerm,

    #[error("invalid generalized polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),

    #[error("energy decreases toward the y ceiling {y_cap}; potential looks non-coercive")]
    UnboundedBelow { y_cap: f64 },

    #[error("potential has no well: {0}")]
    NoWell(String),

    #[error("root finding failed: {0}")]
    RootNotBracketed(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, message: impl Into<String>) -> Self {
        Error::Domain {
            function,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than a failed computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DegenerateBasis { .. }
                | Error::NonPositiveArea(_)
                | Error::OutsideFundamentalDomain { .. }
                | Error::Domain { .. }
                | Error::InvalidPotential(_)
                | Error::UnsupportedFamily { .. }
                | Error::NotApplicable(_)
                | Error::NoNegativeTerm
                | Error::InvalidPolynomial(_)
                | Error::NoWell(_)
        )
    }

    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateBasis { .. } => "degenerate_basis",
            Error::NonPositiveArea(_) => "non_positive_area",
            Error::OutsideFundamentalDomain { .. } => "outside_fundamental_domain",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::Domain { .. } => "domain_error",
            Error::SlowConvergence(_) => "slow_convergence",
            Error::InvalidPotential(_) => "invalid_potential",
            Error::UnsupportedFamily { .. } => "unsupported_family",
            Error::NotApplicable(_) => "not_applicable",
            Error::NoNegativeTerm => "no_negative_term",
            Error::InvalidPolynomial(_) => "invalid_polynomial",
            Error::QuadratureFailure(_) => "quadrature_failure",
            Error::UnboundedBelow { .. } => "unbounded_below",
            Error::NoWell(_) => "no_well",
            Error::RootNotBracketed(_) => "root_not_bracketed",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
