//! Maximum likelihood estimation and bias correction.
//!
//! Parameter vectors are ordered `(φ, λ)` throughout: scores, information
//! matrices, standard errors and bias vectors.

mod bias;
mod bootstrap;
mod censored;
mod complete;

pub use bias::{bias_matrices, BiasMatrices};
pub use bootstrap::{bootstrap_correction, MIN_BOOT_REPS};
pub(crate) use censored::loglik_and_score;
pub use censored::{
    fit_acmle, fit_boot_censored, fit_mle_censored, loglik_censored, observed_information,
    score_censored, CensoredScore,
};
pub use complete::{fisher_info, fit_boot, fit_cmle, fit_mle, loglik, profile_lambda, score};
pub(crate) use complete::{mle_point, Stats};

use std::fmt;

use crate::normal;
use crate::{Error, IwlParams, Result};

/// Default number of bootstrap resamples.
pub const DEFAULT_BOOT_REPS: usize = 1000;
/// Default confidence level for Wald intervals.
pub const DEFAULT_CI_LEVEL: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Maximum likelihood.
    Mle,
    /// Cox–Snell corrected maximum likelihood (complete data).
    Cmle,
    /// Bootstrap bias-corrected maximum likelihood.
    Boot,
    /// Approximate Cox–Snell correction applied to a censored-data MLE.
    Acmle,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Mle => "MLE",
            Method::Cmle => "CMLE",
            Method::Boot => "BOOT",
            Method::Acmle => "ACMLE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    /// `estimate ± z·se` at the given two-sided level.
    pub fn wald(estimate: f64, se: f64, level: f64) -> Interval {
        let half = normal::two_sided_critical(level) * se;
        Interval {
            lower: estimate - half,
            upper: estimate + half,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Outcome of a fit.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub method: Method,
    pub estimates: IwlParams,
    /// Asymptotic standard errors of `(φ, λ)`; NaN when unavailable.
    pub std_errors: [f64; 2],
    /// Wald intervals for `(φ, λ)` at `ci_level`.
    pub ci: [Interval; 2],
    pub ci_level: f64,
    /// Log-likelihood at `estimates`.
    pub loglik: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Sample size and number of observed failures.
    pub n: usize,
    pub d: usize,
    /// Set when a bias correction produced a nonpositive component and the
    /// uncorrected MLE was reported instead.
    pub fallback: bool,
    /// Bootstrap replicates dropped for failing to converge.
    pub bootstrap_dropped: usize,
    pub notes: Vec<String>,
}

impl FitReport {
    /// Recomputes the intervals at another confidence level.
    pub fn with_ci_level(mut self, level: f64) -> Result<Self> {
        check_level(level)?;
        let est = self.estimates.as_array();
        self.ci = [0, 1].map(|i| Interval::wald(est[i], self.std_errors[i], level));
        self.ci_level = level;
        Ok(self)
    }

    pub fn is_censored(&self) -> bool {
        self.d < self.n
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "confidence level must lie in (0, 1), got {level}"
        )))
    }
}

pub(crate) fn wald_pair(est: &IwlParams, se: [f64; 2], level: f64) -> [Interval; 2] {
    let e = est.as_array();
    [
        Interval::wald(e[0], se[0], level),
        Interval::wald(e[1], se[1], level),
    ]
}

/// Subtracts a bias vector, falling back to the input when a component
/// would become nonpositive. Returns the estimate and the fallback flag.
pub(crate) fn apply_correction(mle: &IwlParams, bias: [f64; 2]) -> (IwlParams, bool) {
    match IwlParams::new(mle.phi() - bias[0], mle.lambda() - bias[1]) {
        Ok(p) => (p, false),
        Err(_) => (*mle, true),
    }
}
