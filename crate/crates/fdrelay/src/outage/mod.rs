//! Exact and asymptotic outage probability for every scheme.
//!
//! The zero-forcing designs reduce to products of Wishart largest-eigenvalue
//! variables and admit finite Bessel-function sums for the exact outage; the
//! antenna-selection schemes reduce to order statistics of exponentials and
//! are evaluated by semi-infinite quadrature. High-power asymptotics expose
//! the diversity orders and the optimal relay power exponent of each scheme.

pub mod ansel;
pub mod constants;
pub mod wishart;
pub mod zf;

pub use ansel::{
    op_as_asymptotic_bounds, outage_as_asymptotic, outage_as_asymptotic_ln, outage_li_exact,
    outage_mm_exact, outage_pr_exact,
};
pub use constants::{diversity_order, optimal_alpha, selection_complexity};
pub use wishart::{wishart_maxeig_expansion, ExpansionTerm, PolyExpExpansion};
pub use zf::{outage_zf_asymptotic, outage_zf_asymptotic_ln, outage_zf_exact};

use thiserror::Error;

use crate::Scheme;

/// How an outage value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Asymptotic,
    MonteCarlo,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Asymptotic => "asymptotic",
            Method::MonteCarlo => "montecarlo",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Method::Exact),
            "asymptotic" => Ok(Method::Asymptotic),
            "montecarlo" => Ok(Method::MonteCarlo),
            other => Err(format!(
                "unknown method `{other}` (expected exact, asymptotic or montecarlo)"
            )),
        }
    }
}

/// One point of an outage curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutagePoint {
    pub scheme: Scheme,
    pub method: Method,
    /// Source power in dB (the sweep axis).
    pub p_s_db: f64,
    pub p_out: f64,
    /// Binomial standard error for Monte Carlo points; `None` for analytic
    /// methods.
    pub stderr: Option<f64>,
}

#[derive(Debug, Clone, Error)]
pub enum OutageError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("Wishart expansion for {m}x{n} exceeds the supported size")]
    ExpansionTooLarge { m: usize, n: usize },
    #[error("asymptotic selection outage requires a power exponent alpha in (0, 1)")]
    AlphaOutOfRange,
    #[error("{design:?} ZF outage needs {requirement}")]
    UnsupportedConfig {
        design: crate::ZfDesign,
        requirement: &'static str,
    },
    #[error(transparent)]
    Numerics(#[from] crate::numerics::NumericsError),
}

/// Clamps values that sit within `1e-9` of the probability boundaries;
/// anything farther out is a genuine evaluation problem and is returned
/// unchanged so tests can catch it.
pub(crate) fn clamp_probability(p: f64) -> f64 {
    if (-1e-9..0.0).contains(&p) {
        0.0
    } else if (1.0..=1.0 + 1e-9).contains(&p) {
        1.0
    } else {
        p
    }
}
