//! Complete (uncensored) samples.
//!
//! The λ score equation `(φ+1)/λ − ξ − 1/(λ+φ) = 0`, with `ξ = mean(1/tᵢ)`,
//! is the quadratic `ξλ² + φ(ξ−1)λ − φ(φ+1) = 0`, so the likelihood profiles
//! onto a single root search in `φ`.

use rand::Rng;

use super::bootstrap::{bootstrap_means, BootstrapOutcome};
use super::{apply_correction, bias_matrices, wald_pair, FitReport, Method, DEFAULT_CI_LEVEL};
use crate::linalg::{self, Mat2};
use crate::optim;
use crate::specfun::{digamma_raw, ln_gamma_raw, trigamma_raw};
use crate::{Error, IwlParams, LifetimeData, Result};

const PHI_TOL: f64 = 1e-12;
const MAX_ITER: usize = 200;

/// `n`, `ξ = (1/n)Σ 1/tᵢ` and `(1/n)Σ ln tᵢ`, plus `(1/n)Σ ln(1 + 1/tᵢ)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stats {
    pub n: f64,
    pub mean_inv: f64,
    pub mean_log: f64,
    pub mean_log1p_inv: f64,
}

impl Stats {
    pub fn of(times: &[f64]) -> Stats {
        let n = times.len() as f64;
        let (mut inv, mut log, mut l1p) = (0.0, 0.0, 0.0);
        for &t in times {
            inv += 1.0 / t;
            log += t.ln();
            l1p += (1.0 / t).ln_1p();
        }
        Stats {
            n,
            mean_inv: inv / n,
            mean_log: log / n,
            mean_log1p_inv: l1p / n,
        }
    }

    fn loglik(&self, theta: &IwlParams) -> f64 {
        let (phi, lambda) = (theta.phi(), theta.lambda());
        self.n
            * ((phi + 1.0) * lambda.ln()
                - (lambda + phi).ln()
                - ln_gamma_raw(phi)
                - lambda * self.mean_inv
                - (phi + 1.0) * self.mean_log
                + self.mean_log1p_inv)
    }

    fn score(&self, theta: &IwlParams) -> [f64; 2] {
        let (phi, lambda) = (theta.phi(), theta.lambda());
        let s = lambda + phi;
        [
            self.n * (lambda.ln() - self.mean_log - 1.0 / s - digamma_raw(phi)),
            self.n * ((phi + 1.0) / lambda - self.mean_inv - 1.0 / s),
        ]
    }
}

fn require_complete(data: &LifetimeData) -> Result<()> {
    if data.is_complete() {
        Ok(())
    } else {
        Err(Error::InvalidData(format!(
            "{} censored observations; use the censored-data estimators",
            data.n() - data.d()
        )))
    }
}

/// Complete-data log-likelihood
/// `n(φ+1)ln λ − n ln(λ+φ) − n ln Γ(φ) − λΣ1/tᵢ − (φ+1)Σ ln tᵢ + Σ ln(1 + 1/tᵢ)`.
pub fn loglik(theta: &IwlParams, data: &LifetimeData) -> Result<f64> {
    require_complete(data)?;
    Ok(Stats::of(data.times()).loglik(theta))
}

/// Complete-data score `(∂l/∂φ, ∂l/∂λ)`.
pub fn score(theta: &IwlParams, data: &LifetimeData) -> Result<[f64; 2]> {
    require_complete(data)?;
    Ok(Stats::of(data.times()).score(theta))
}

/// Maximizer of the likelihood in `λ` for fixed `φ`, given `ξ = mean(1/tᵢ)`.
pub fn profile_lambda(phi: f64, xi: f64) -> f64 {
    let b = phi * (xi - 1.0);
    let disc = (b * b + 4.0 * xi * phi * (phi + 1.0)).sqrt();
    if b <= 0.0 {
        (disc - b) / (2.0 * xi)
    } else {
        // rationalized form avoids cancellation when b > 0
        2.0 * phi * (phi + 1.0) / (b + disc)
    }
}

/// Expected (and observed) information matrix for `n` observations:
///
/// ```text
/// I₁₁ = n ψ′(φ) − n/(λ+φ)²
/// I₁₂ = −n/λ − n/(λ+φ)²
/// I₂₂ = n(φ+1)/λ² − n/(λ+φ)²
/// ```
///
/// It does not depend on the data, so it equals the negative Hessian of
/// the log-likelihood.
pub fn fisher_info(theta: &IwlParams, n: usize) -> Result<Mat2> {
    if n == 0 {
        return Err(Error::domain("information needs n >= 1"));
    }
    let (phi, lambda) = (theta.phi(), theta.lambda());
    let n = n as f64;
    let c = 1.0 / (lambda + phi).powi(2);
    let m = [
        [n * (trigamma_raw(phi) - c), -n * (1.0 / lambda + c)],
        [
            -n * (1.0 / lambda + c),
            n * ((phi + 1.0) / (lambda * lambda) - c),
        ],
    ];
    if !linalg::is_positive_definite(&m) {
        return Err(Error::Singular(format!(
            "information not positive definite at {theta:?}"
        )));
    }
    Ok(m)
}

pub(crate) fn std_errors(info: &Mat2) -> Result<[f64; 2]> {
    let cov = linalg::inverse(info)?;
    Ok([cov[0][0].sqrt(), cov[1][1].sqrt()])
}

/// Root of the profile score in `φ`; returns the estimate and iterations.
pub(crate) fn mle_point(stats: &Stats) -> Result<(IwlParams, usize)> {
    let xi = stats.mean_inv;
    let g = |phi: f64| {
        let lambda = profile_lambda(phi, xi);
        lambda.ln() - stats.mean_log - 1.0 / (lambda + phi) - digamma_raw(phi)
    };
    let (lo, hi) = optim::bracket_decreasing(&g, 1.0, 200)?;
    let root = optim::brent(g, lo, hi, PHI_TOL * lo, MAX_ITER)?;
    let phi = root.x;
    Ok((
        IwlParams::new(phi, profile_lambda(phi, xi))?,
        root.iterations,
    ))
}

fn check_fit_input(data: &LifetimeData) -> Result<()> {
    require_complete(data)?;
    if data.n() < 3 {
        return Err(Error::InvalidData(format!(
            "need at least 3 observations, got {}",
            data.n()
        )));
    }
    let first = data.times()[0];
    if data.times().iter().all(|t| *t == first) {
        return Err(Error::InvalidData("all times are equal".into()));
    }
    Ok(())
}

fn report(
    method: Method,
    estimates: IwlParams,
    se: [f64; 2],
    stats: &Stats,
    data: &LifetimeData,
    iterations: usize,
) -> FitReport {
    FitReport {
        method,
        estimates,
        std_errors: se,
        ci: wald_pair(&estimates, se, DEFAULT_CI_LEVEL),
        ci_level: DEFAULT_CI_LEVEL,
        loglik: stats.loglik(&estimates),
        converged: true,
        iterations,
        n: data.n(),
        d: data.d(),
        fallback: false,
        bootstrap_dropped: 0,
        notes: Vec::new(),
    }
}

/// Maximum likelihood for a complete sample.
///
/// Solves `ln λ̂(φ) − mean(ln t) − 1/(λ̂(φ)+φ) − ψ(φ) = 0` by bracketing from
/// `φ = 1` and Brent's method, with `λ̂(φ)` from [`profile_lambda`].
/// Standard errors come from the inverse of [`fisher_info`].
pub fn fit_mle(data: &LifetimeData) -> Result<FitReport> {
    check_fit_input(data)?;
    let stats = Stats::of(data.times());
    let (theta, iterations) = mle_point(&stats)?;
    let se = std_errors(&fisher_info(&theta, data.n())?)?;
    Ok(report(Method::Mle, theta, se, &stats, data, iterations))
}

/// Cox–Snell corrected MLE: `θ̂ − K̂⁻¹Â vec(K̂⁻¹)` with the matrices of
/// [`bias_matrices`] evaluated at the MLE. Standard errors are those of the
/// MLE.
pub fn fit_cmle(data: &LifetimeData) -> Result<FitReport> {
    let mle = fit_mle(data)?;
    let bias = bias_matrices(&mle.estimates, data.n())?.bias;
    let (estimates, fallback) = apply_correction(&mle.estimates, bias);
    let stats = Stats::of(data.times());
    let mut out = report(
        Method::Cmle,
        estimates,
        mle.std_errors,
        &stats,
        data,
        mle.iterations,
    );
    out.fallback = fallback;
    if fallback {
        out.notes
            .push("corrected estimate was nonpositive; reporting the MLE".into());
    }
    Ok(out)
}

/// Bootstrap bias-corrected MLE `2θ̂ − mean(θ̂*)` over `reps` resamples.
pub fn fit_boot<R: Rng + ?Sized>(
    data: &LifetimeData,
    reps: usize,
    rng: &mut R,
) -> Result<FitReport> {
    let mle = fit_mle(data)?;
    let BootstrapOutcome { mean, dropped } = bootstrap_means(data, reps, rng, |sample| {
        let stats = Stats::of(sample.times());
        mle_point(&stats).map(|(theta, _)| theta)
    })?;
    let bias = [
        mean[0] - mle.estimates.phi(),
        mean[1] - mle.estimates.lambda(),
    ];
    let (estimates, fallback) = apply_correction(&mle.estimates, bias);
    let stats = Stats::of(data.times());
    let mut out = report(
        Method::Boot,
        estimates,
        mle.std_errors,
        &stats,
        data,
        mle.iterations,
    );
    out.fallback = fallback;
    out.bootstrap_dropped = dropped;
    Ok(out)
}
