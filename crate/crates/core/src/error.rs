use thiserror::Error;

/// Errors raised by the evaluators, estimators and the optimizer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function} has a pole at {at}")]
    Pole { function: &'static str, at: f64 },

    #[error("{function}: argument out of domain ({detail})")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("invalid bath parameters: {0}")]
    InvalidBath(String),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {abs_err:e} after {intervals} intervals"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        abs_err: f64,
        intervals: usize,
    },

    #[error("image series did not converge within {terms} terms (tail bound {tail_bound:e})")]
    SeriesNonConvergence { terms: usize, tail_bound: f64 },

    #[error(
        "finite-difference step collapsed at omega_c = {omega_c}: stencil values indistinguishable"
    )]
    StepCollapse { omega_c: f64 },

    #[error("log-log window [{lo}, {hi}] spans fewer than {required} decades")]
    DegenerateWindow { lo: f64, hi: f64, required: f64 },

    #[error("scaling fit needs at least {required} points spanning one decade, found {found}")]
    InsufficientPoints { found: usize, required: usize },

    #[error("variance bound is unbounded: quantum Fisher information is zero")]
    UnboundedVariance,
}

impl Error {
    /// True for failures caused by a numerical routine not meeting its tolerance.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            Error::QuadratureNonConvergence { .. }
                | Error::SeriesNonConvergence { .. }
                | Error::StepCollapse { .. }
        )
    }

    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
