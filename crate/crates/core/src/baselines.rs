//! Competing two-parameter lifetime families and information criteria.
//!
//! Parameterizations (all fitted by maximum likelihood under right
//! censoring, positive parameters optimized on the log scale):
//!
//! | id | parameters | survival / density |
//! |----|------------|--------------------|
//! | `iwl` | φ, λ | inverse weighted Lindley |
//! | `ilindley` | λ (φ = 1) | inverse Lindley, `f = λ²/(1+λ)·(1+t)/t³·e^{−λ/t}` |
//! | `weibull` | shape k, scale σ | `S = exp(−(t/σ)^k)` |
//! | `gamma` | shape a, scale s | `f ∝ t^{a−1} e^{−t/s}` |
//! | `lognormal` | μ, σ | `ln T ~ N(μ, σ²)` |
//! | `logistic` | location μ, scale s | `S = 1/(1 + e^{(t−μ)/s})` on the raw times |
//! | `iweibull` | shape k, scale σ | `F = exp(−(σ/t)^k)` |
//!
//! Every model counts `k = 2` parameters in the criteria, the inverse
//! Lindley included.

use std::fmt;
use std::str::FromStr;

use crate::fit::{self, loglik_and_score, mle_point, profile_lambda, Stats};
use crate::normal;
use crate::optim::{self, Options};
use crate::specfun::{
    digamma_raw, dln_reg_upper_dshape, ln_gamma_density, ln_gamma_raw, ln_reg_pair,
};
use crate::{Error, IwlParams, LifetimeData, Result};

/// Parameter count used by the criteria for every family.
pub const PARAMETER_COUNT: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    Iwl,
    InverseLindley,
    Weibull,
    Gamma,
    Lognormal,
    Logistic,
    InverseWeibull,
}

impl ModelId {
    pub const ALL: [ModelId; 7] = [
        ModelId::Iwl,
        ModelId::InverseLindley,
        ModelId::Weibull,
        ModelId::Gamma,
        ModelId::Lognormal,
        ModelId::Logistic,
        ModelId::InverseWeibull,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            ModelId::Iwl => "iwl",
            ModelId::InverseLindley => "ilindley",
            ModelId::Weibull => "weibull",
            ModelId::Gamma => "gamma",
            ModelId::Lognormal => "lognormal",
            ModelId::Logistic => "logistic",
            ModelId::InverseWeibull => "iweibull",
        }
    }

    pub fn param_names(&self) -> [&'static str; 2] {
        match self {
            ModelId::Iwl => ["phi", "lambda"],
            ModelId::InverseLindley => ["lambda", ""],
            ModelId::Weibull | ModelId::InverseWeibull => ["shape", "scale"],
            ModelId::Gamma => ["shape", "scale"],
            ModelId::Lognormal => ["mu", "sigma"],
            ModelId::Logistic => ["location", "scale"],
        }
    }

    /// Number of free parameters actually estimated.
    pub fn free_parameters(&self) -> usize {
        if *self == ModelId::InverseLindley {
            1
        } else {
            2
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ModelId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL
            .iter()
            .find(|m| m.id() == s.trim().to_ascii_lowercase())
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown model '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criteria {
    pub aic: f64,
    pub aicc: f64,
    pub hqic: f64,
    pub caic: f64,
}

/// AIC, AICC, HQIC and CAIC for log-likelihood `loglik` with `k` parameters
/// and `n` observations. Requires `n > k + 1`.
pub fn criteria(loglik: f64, k: usize, n: usize) -> Result<Criteria> {
    if n <= k + 1 {
        return Err(Error::domain(format!(
            "criteria need n > k + 1 (n = {n}, k = {k})"
        )));
    }
    let (kf, nf) = (k as f64, n as f64);
    let aic = -2.0 * loglik + 2.0 * kf;
    Ok(Criteria {
        aic,
        aicc: aic + 2.0 * kf * (kf + 1.0) / (nf - kf - 1.0),
        hqic: -2.0 * loglik + 2.0 * kf * nf.ln().ln(),
        caic: aic + kf * nf.ln() - kf,
    })
}

#[derive(Debug, Clone)]
pub struct ModelFit {
    pub model: ModelId,
    /// Natural-scale parameters; only the first is meaningful for
    /// `ilindley`.
    pub params: [f64; 2],
    pub loglik: f64,
    pub k: usize,
    pub n: usize,
    pub criteria: Criteria,
    pub iterations: usize,
}

/// Censored log-likelihood and its gradient in unconstrained coordinates
/// (log scale for positive parameters, raw for locations).
fn loglik_grad(model: ModelId, u: &[f64; 2], data: &LifetimeData) -> Option<(f64, [f64; 2])> {
    let mut l = 0.0;
    let mut g = [0.0; 2];
    let mut add = |v: f64, d0: f64, d1: f64| {
        l += v;
        g[0] += d0;
        g[1] += d1;
    };
    match model {
        ModelId::Iwl => {
            let th = IwlParams::new(u[0].exp(), u[1].exp()).ok()?;
            let (v, s) = loglik_and_score(&th, data);
            add(v, s[0] * th.phi(), s[1] * th.lambda());
        }
        ModelId::InverseLindley => unreachable!("one-parameter family"),
        ModelId::Weibull => {
            let (k, ln_sigma) = (u[0].exp(), u[1]);
            for (t, event) in data.iter() {
                let ln_z = k * (t.ln() - ln_sigma);
                let z = ln_z.exp();
                if event {
                    add(
                        u[0] + ln_z - t.ln() - z,
                        1.0 + ln_z - z * ln_z,
                        k * (z - 1.0),
                    );
                } else {
                    add(-z, -z * ln_z, k * z);
                }
            }
        }
        ModelId::Gamma => {
            let (a, ln_s) = (u[0].exp(), u[1]);
            let (lg, dg) = (ln_gamma_raw(a), digamma_raw(a));
            for (t, event) in data.iter() {
                let x = t / ln_s.exp();
                if event {
                    add(
                        -lg - a * ln_s + (a - 1.0) * t.ln() - x,
                        a * (x.ln() - dg),
                        x - a,
                    );
                } else {
                    let ln_q = ln_reg_pair(a, x).1;
                    let dx = (ln_gamma_density(a, x) - ln_q).exp() * x;
                    add(ln_q, a * dln_reg_upper_dshape(a, x), dx);
                }
            }
        }
        ModelId::Lognormal => {
            let (mu, sigma) = (u[0], u[1].exp());
            for (t, event) in data.iter() {
                let z = (t.ln() - mu) / sigma;
                if event {
                    add(-t.ln() - u[1] + normal::ln_pdf(z), z / sigma, z * z - 1.0);
                } else {
                    let ln_s = normal::ln_sf(z);
                    let m = (normal::ln_pdf(z) - ln_s).exp();
                    add(ln_s, m / sigma, m * z);
                }
            }
        }
        ModelId::Logistic => {
            let (mu, s) = (u[0], u[1].exp());
            for (t, event) in data.iter() {
                let z = (t - mu) / s;
                if event {
                    let th = (0.5 * z).tanh();
                    let v = -u[1] - z.abs() - 2.0 * (-z.abs()).exp().ln_1p();
                    add(v, th / s, z * th - 1.0);
                } else {
                    let sig = 1.0 / (1.0 + (-z).exp());
                    let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
                    add(-softplus, sig / s, sig * z);
                }
            }
        }
        ModelId::InverseWeibull => {
            let (k, ln_sigma) = (u[0].exp(), u[1]);
            for (t, event) in data.iter() {
                let ln_w = k * (ln_sigma - t.ln());
                let w = ln_w.exp();
                if event {
                    add(
                        u[0] - t.ln() + ln_w - w,
                        1.0 + ln_w - w * ln_w,
                        k * (1.0 - w),
                    );
                } else {
                    let r = 1.0 / w.exp_m1();
                    add((-(-w).exp_m1()).ln(), w * ln_w * r, k * w * r);
                }
            }
        }
    }
    (l.is_finite() && g.iter().all(|v| v.is_finite())).then_some((l, g))
}

fn log_moments(data: &LifetimeData) -> (f64, f64) {
    let n = data.n() as f64;
    let m = data.times().iter().map(|t| t.ln()).sum::<f64>() / n;
    let v = data
        .times()
        .iter()
        .map(|t| (t.ln() - m).powi(2))
        .sum::<f64>()
        / n;
    (m, v.sqrt().max(1e-3))
}

fn raw_moments(data: &LifetimeData) -> (f64, f64) {
    let n = data.n() as f64;
    let m = data.times().iter().sum::<f64>() / n;
    let v = data.times().iter().map(|t| (t - m).powi(2)).sum::<f64>() / n;
    (m, v.max(1e-12 * m * m))
}

/// Crude starting point in unconstrained coordinates, ignoring censoring.
fn start(model: ModelId, data: &LifetimeData) -> [f64; 2] {
    // sd of a standard Gumbel variate is π/√6
    const GUMBEL_SD: f64 = 1.282_549_830_161_864;
    match model {
        ModelId::Iwl | ModelId::InverseLindley => {
            let stats = Stats::of(data.times());
            let th = mle_point(&stats).map(|(p, _)| p).unwrap_or_else(|_| {
                IwlParams::new(1.0, profile_lambda(1.0, stats.mean_inv)).expect("positive")
            });
            [th.phi().ln(), th.lambda().ln()]
        }
        ModelId::Weibull | ModelId::InverseWeibull => {
            let (m, sd) = log_moments(data);
            [(GUMBEL_SD / sd).ln(), m]
        }
        ModelId::Gamma => {
            let (m, v) = raw_moments(data);
            [(m * m / v).ln(), (v / m).ln()]
        }
        ModelId::Lognormal => {
            let (m, sd) = log_moments(data);
            [m, sd.ln()]
        }
        ModelId::Logistic => {
            let (m, v) = raw_moments(data);
            [m, (v.sqrt() * 3f64.sqrt() / std::f64::consts::PI).ln()]
        }
    }
}

fn natural(model: ModelId, u: [f64; 2]) -> [f64; 2] {
    match model {
        ModelId::Lognormal => [u[0], u[1].exp()],
        ModelId::Logistic => [u[0], u[1].exp()],
        _ => [u[0].exp(), u[1].exp()],
    }
}

/// Fits `model` by maximum likelihood; requires `n ≥ 3` and `d ≥ 2`.
pub fn fit_baseline(model: ModelId, data: &LifetimeData) -> Result<ModelFit> {
    if data.n() < 3 || data.d() < 2 {
        return Err(Error::InvalidData(format!(
            "need n >= 3 and at least 2 failures, got n = {}, d = {}",
            data.n(),
            data.d()
        )));
    }
    let opts = Options::default();
    let (params, loglik, iterations) = if model == ModelId::InverseLindley {
        let x0 = [start(model, data)[1]];
        let objective = |u: &[f64; 1]| {
            let th = IwlParams::new(1.0, u[0].exp()).ok()?;
            let (l, s) = loglik_and_score(&th, data);
            Some((-l, [-s[1] * th.lambda()]))
        };
        let m = optim::minimize(objective, x0, &opts)?;
        ([m.x[0].exp(), f64::NAN], -m.value, m.iterations)
    } else if model == ModelId::Iwl {
        let f = fit::fit_mle_censored(data)?;
        if !f.converged {
            return Err(Error::NonConvergence {
                iterations: f.iterations,
                detail: f.notes.join("; "),
            });
        }
        (f.estimates.as_array(), f.loglik, f.iterations)
    } else {
        let objective =
            |u: &[f64; 2]| loglik_grad(model, u, data).map(|(l, g)| (-l, [-g[0], -g[1]]));
        let m = optim::minimize(objective, start(model, data), &opts)?;
        (natural(model, m.x), -m.value, m.iterations)
    };
    Ok(ModelFit {
        model,
        params,
        loglik,
        k: PARAMETER_COUNT,
        n: data.n(),
        criteria: criteria(loglik, PARAMETER_COUNT, data.n())?,
        iterations,
    })
}

/// Per-family log-density and log-survival at natural parameters, used to
/// cross-check the fitted log-likelihood.
pub fn ln_density_survival(model: ModelId, params: [f64; 2], t: f64) -> Result<(f64, f64)> {
    let u = match model {
        ModelId::InverseLindley => {
            let th = IwlParams::new(1.0, params[0])?;
            return Ok((th.ln_pdf(t)?, th.ln_survival(t)?));
        }
        ModelId::Lognormal | ModelId::Logistic => [params[0], params[1].ln()],
        _ => [params[0].ln(), params[1].ln()],
    };
    let ev = LifetimeData::new(vec![t], vec![true])?;
    let ce = LifetimeData::new(vec![t], vec![false])?;
    let lf = loglik_grad(model, &u, &ev)
        .map(|x| x.0)
        .unwrap_or(f64::NEG_INFINITY);
    let ls = loglik_grad(model, &u, &ce)
        .map(|x| x.0)
        .unwrap_or(f64::NEG_INFINITY);
    Ok((lf, ls))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criteria_published_row() {
        let c = criteria(-694.33, 2, 194).unwrap();
        assert!((c.aic - 1392.66).abs() < 1e-9);
        assert!((c.aicc - (1392.66 + 12.0 / 191.0)).abs() < 1e-9);
        assert!((c.hqic - 1395.31).abs() < 0.01);
        assert!((c.caic - 1401.19).abs() < 0.01);
    }

    #[test]
    fn criteria_zero_parameters() {
        let c = criteria(-10.0, 0, 5).unwrap();
        assert_eq!([c.aic, c.aicc, c.hqic, c.caic], [20.0; 4]);
        assert!(criteria(-10.0, 2, 3).is_err());
    }

    #[test]
    fn model_ids_round_trip() {
        for m in ModelId::ALL {
            assert_eq!(m.id().parse::<ModelId>().unwrap(), m);
        }
        assert!("frechet".parse::<ModelId>().is_err());
    }

    #[test]
    fn gradients_match_difference_quotients() {
        let data = LifetimeData::new(
            vec![0.5, 1.7, 2.2, 3.9, 0.9, 6.5, 1.1],
            vec![true, true, false, true, false, true, false],
        )
        .unwrap();
        let u = [0.3, 0.4];
        for m in ModelId::ALL
            .into_iter()
            .filter(|m| *m != ModelId::InverseLindley)
        {
            let (_, g) = loglik_grad(m, &u, &data).unwrap();
            for i in 0..2 {
                let h = 1e-6;
                let mut up = u;
                let mut dn = u;
                up[i] += h;
                dn[i] -= h;
                let fd = (loglik_grad(m, &up, &data).unwrap().0
                    - loglik_grad(m, &dn, &data).unwrap().0)
                    / (2.0 * h);
                assert!(
                    (g[i] - fd).abs() < 1e-6 * fd.abs().max(1.0),
                    "{m} {i}: {g:?} {fd}"
                );
            }
        }
    }
}
