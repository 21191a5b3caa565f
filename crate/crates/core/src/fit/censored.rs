//! Randomly right-censored samples.
//!
//! A censored time contributes `ln S(t)`, evaluated through the mixture
//! `S = p·P(φ, x) + (1−p)·P(φ+1, x)` with `x = λ/t` and `P` the regularized
//! lower incomplete gamma function. Its gradient uses `∂p/∂φ = −λ/(λ+φ)²`,
//! `∂p/∂λ = φ/(λ+φ)²`, the shape derivative `∂ln P(a, x)/∂a` and
//! `∂P(a, x)/∂λ = g_a(x)/t` with `g_a` the gamma density.

use rand::Rng;

use super::bootstrap::{bootstrap_means, BootstrapOutcome};
use super::complete::{self, mle_point, profile_lambda, std_errors, Stats};
use super::{apply_correction, bias_matrices, wald_pair, FitReport, Method, DEFAULT_CI_LEVEL};
use crate::distribution::log_sum_exp;
use crate::linalg::{self, Mat2};
use crate::optim::{self, Minimum, Options};
use crate::specfun::{digamma_raw, dln_reg_lower_dshape, ln_gamma_density, ln_reg_pair};
use crate::{Error, IwlParams, LifetimeData, Result};

/// Floor for `ln S(t)` at censored points.
const LN_S_FLOOR: f64 = -745.0;

/// Gradient of the censored log-likelihood.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CensoredScore {
    pub d_lambda: f64,
    pub d_phi: f64,
}

impl CensoredScore {
    /// `[∂l/∂φ, ∂l/∂λ]`.
    pub fn as_array(&self) -> [f64; 2] {
        [self.d_phi, self.d_lambda]
    }

    pub fn norm(&self) -> f64 {
        self.d_phi.hypot(self.d_lambda)
    }
}

/// `ln S(t)` and its gradient `[∂/∂φ, ∂/∂λ]`.
fn censored_term(theta: &IwlParams, t: f64) -> (f64, [f64; 2]) {
    let (phi, lambda) = (theta.phi(), theta.lambda());
    let x = lambda / t;
    let p = theta.weight();
    let (ln_p, ln_q) = (p.ln(), (phi / (lambda + phi)).ln());
    let a1 = ln_p + ln_reg_pair(phi, x).0;
    let a2 = ln_q + ln_reg_pair(phi + 1.0, x).0;
    let mut ln_s = log_sum_exp(a1, a2);
    if ln_s.is_nan() || ln_s < LN_S_FLOOR {
        log::warn!("survival underflow at censored time {t} for {theta:?}; clamping ln S");
        ln_s = LN_S_FLOOR;
    }
    let r1 = (a1 - ln_s).exp();
    let r2 = (a2 - ln_s).exp();
    let diff = r1 / p - r2 * (lambda + phi) / phi;
    let dp = 1.0 / (lambda + phi).powi(2);
    let d_phi = -lambda * dp * diff
        + r1 * dln_reg_lower_dshape(phi, x)
        + r2 * dln_reg_lower_dshape(phi + 1.0, x);
    let g = log_sum_exp(
        ln_p + ln_gamma_density(phi, x),
        ln_q + ln_gamma_density(phi + 1.0, x),
    );
    let d_lambda = phi * dp * diff + (g - ln_s).exp() / t;
    let grad = [d_phi, d_lambda].map(|v| if v.is_finite() { v } else { 0.0 });
    (ln_s, grad)
}

pub(crate) fn loglik_and_score(theta: &IwlParams, data: &LifetimeData) -> (f64, [f64; 2]) {
    let (phi, lambda) = (theta.phi(), theta.lambda());
    let ev_phi = lambda.ln() - 1.0 / (lambda + phi) - digamma_raw(phi);
    let ev_lambda = (phi + 1.0) / lambda - 1.0 / (lambda + phi);
    let mut l = 0.0;
    let mut s = [0.0; 2];
    for (t, event) in data.iter() {
        if event {
            l += theta.ln_pdf_unchecked(t);
            s[0] += ev_phi - t.ln();
            s[1] += ev_lambda - 1.0 / t;
        } else {
            let (ls, g) = censored_term(theta, t);
            l += ls;
            s[0] += g[0];
            s[1] += g[1];
        }
    }
    (l, s)
}

/// `Σ δᵢ ln f(tᵢ) + (1−δᵢ) ln S(tᵢ)`.
///
/// `ln S` is clamped at −745 (with a logged warning) when the survival
/// probability underflows.
pub fn loglik_censored(theta: &IwlParams, data: &LifetimeData) -> f64 {
    data.iter()
        .map(|(t, event)| {
            if event {
                theta.ln_pdf_unchecked(t)
            } else {
                censored_term(theta, t).0
            }
        })
        .sum()
}

/// Analytic gradient of [`loglik_censored`].
pub fn score_censored(theta: &IwlParams, data: &LifetimeData) -> CensoredScore {
    let s = loglik_and_score(theta, data).1;
    CensoredScore {
        d_phi: s[0],
        d_lambda: s[1],
    }
}

/// Observed information: central differences of the analytic score,
/// symmetrized.
pub fn observed_information(theta: &IwlParams, data: &LifetimeData) -> Result<Mat2> {
    let x = theta.as_array();
    let mut j = [[0.0; 2]; 2];
    for k in 0..2 {
        let h = 1e-5 * x[k];
        let mut up = x;
        let mut dn = x;
        up[k] += h;
        dn[k] -= h;
        let su = score_censored(&IwlParams::new(up[0], up[1])?, data).as_array();
        let sd = score_censored(&IwlParams::new(dn[0], dn[1])?, data).as_array();
        for i in 0..2 {
            j[i][k] = -(su[i] - sd[i]) / (2.0 * h);
        }
    }
    let off = 0.5 * (j[0][1] + j[1][0]);
    Ok([[j[0][0], off], [off, j[1][1]]])
}

fn check_input(data: &LifetimeData) -> Result<()> {
    if data.n() < 3 || data.d() < 2 {
        return Err(Error::InvalidData(format!(
            "need n >= 3 and at least 2 failures, got n = {}, d = {}",
            data.n(),
            data.d()
        )));
    }
    let first = data.times()[0];
    if data.times().iter().all(|t| *t == first) {
        return Err(Error::InvalidData("all times are equal".into()));
    }
    Ok(())
}

/// Quasi-Newton maximization in `(ln φ, ln λ)` from the complete-data
/// estimate computed on the raw times.
fn mle_censored_point(data: &LifetimeData) -> Result<Minimum<2>> {
    let stats = Stats::of(data.times());
    let start = match mle_point(&stats) {
        Ok((p, _)) => p,
        Err(_) => IwlParams::new(1.0, profile_lambda(1.0, stats.mean_inv))?,
    };
    let objective = |u: &[f64; 2]| {
        let th = IwlParams::new(u[0].exp(), u[1].exp()).ok()?;
        let (l, s) = loglik_and_score(&th, data);
        Some((-l, [-s[0] * th.phi(), -s[1] * th.lambda()]))
    };
    let x0 = [start.phi().ln(), start.lambda().ln()];
    optim::minimize(objective, x0, &Options::default())
}

fn report(method: Method, estimates: IwlParams, se: [f64; 2], data: &LifetimeData) -> FitReport {
    FitReport {
        method,
        estimates,
        std_errors: se,
        ci: wald_pair(&estimates, se, DEFAULT_CI_LEVEL),
        ci_level: DEFAULT_CI_LEVEL,
        loglik: loglik_censored(&estimates, data),
        converged: true,
        iterations: 0,
        n: data.n(),
        d: data.d(),
        fallback: false,
        bootstrap_dropped: 0,
        notes: Vec::new(),
    }
}

/// Maximum likelihood under random right censoring.
///
/// Standard errors invert the [`observed_information`] at the estimate; if
/// it is not positive definite they are NaN and the report is marked
/// unconverged. Complete data are routed through [`complete::fit_mle`].
pub fn fit_mle_censored(data: &LifetimeData) -> Result<FitReport> {
    check_input(data)?;
    if data.is_complete() {
        return complete::fit_mle(data);
    }
    let min = mle_censored_point(data)?;
    let theta = IwlParams::new(min.x[0].exp(), min.x[1].exp())?;
    let info = observed_information(&theta, data)?;
    let mut out = if linalg::is_positive_definite(&info) {
        report(Method::Mle, theta, std_errors(&info)?, data)
    } else {
        let mut r = report(Method::Mle, theta, [f64::NAN; 2], data);
        r.converged = false;
        r.notes
            .push("observed information is not positive definite".into());
        r
    };
    out.iterations = min.iterations;
    Ok(out)
}

/// Complete-data Cox–Snell correction evaluated at the censored MLE with
/// the total sample size `n`. Standard errors are those of the MLE.
pub fn fit_acmle(data: &LifetimeData) -> Result<FitReport> {
    let mle = fit_mle_censored(data)?;
    let bias = bias_matrices(&mle.estimates, data.n())?.bias;
    let (estimates, fallback) = apply_correction(&mle.estimates, bias);
    let mut out = report(Method::Acmle, estimates, mle.std_errors, data);
    out.converged = mle.converged;
    out.iterations = mle.iterations;
    out.fallback = fallback;
    out.notes = mle.notes;
    if fallback {
        out.notes
            .push("corrected estimate was nonpositive; reporting the MLE".into());
    }
    if !data.is_complete() {
        out.notes.push(
            "approximate correction: complete-data bias matrices do not remove the \
             second-order bias under censoring"
                .into(),
        );
    }
    Ok(out)
}

/// Bootstrap bias correction around [`fit_mle_censored`], resampling
/// `(tᵢ, δᵢ)` pairs.
pub fn fit_boot_censored<R: Rng + ?Sized>(
    data: &LifetimeData,
    reps: usize,
    rng: &mut R,
) -> Result<FitReport> {
    if data.is_complete() {
        return complete::fit_boot(data, reps, rng);
    }
    let mle = fit_mle_censored(data)?;
    let BootstrapOutcome { mean, dropped } = bootstrap_means(data, reps, rng, |sample| {
        check_input(sample)?;
        if sample.is_complete() {
            return mle_point(&Stats::of(sample.times())).map(|(p, _)| p);
        }
        let m = mle_censored_point(sample)?;
        IwlParams::new(m.x[0].exp(), m.x[1].exp())
    })?;
    let bias = [
        mean[0] - mle.estimates.phi(),
        mean[1] - mle.estimates.lambda(),
    ];
    let (estimates, fallback) = apply_correction(&mle.estimates, bias);
    let mut out = report(Method::Boot, estimates, mle.std_errors, data);
    out.converged = mle.converged;
    out.iterations = mle.iterations;
    out.fallback = fallback;
    out.bootstrap_dropped = dropped;
    out.notes = mle.notes;
    Ok(out)
}
