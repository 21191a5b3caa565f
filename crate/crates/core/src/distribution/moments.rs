use super::{log_sum_exp, IwlParams};
use crate::quad;
use crate::specfun::{digamma_raw, ln_gamma_raw, ln_reg_pair};
use crate::{Error, Result};

const ENTROPY_REL_TOL: f64 = 1e-11;

impl IwlParams {
    /// Raw moment `E[T^r] = λ^r (φ + λ − r) / ((λ + φ)(φ − 1)⋯(φ − r))`,
    /// finite only for `φ > r`.
    pub fn moment(&self, r: u32) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        if r == 0 {
            return Ok(1.0);
        }
        if phi <= r as f64 {
            return Err(Error::MomentUndefined { order: r, phi });
        }
        let falling: f64 = (1..=r).map(|k| phi - k as f64).product();
        Ok(lambda.powi(r as i32) * (phi + lambda - r as f64) / ((lambda + phi) * falling))
    }

    /// `E[(T − μ)^r]` by binomial expansion of the raw moments.
    pub fn central_moment(&self, r: u32) -> Result<f64> {
        let mu = self.mean()?;
        self.moment(r)?;
        let mut total = 0.0;
        let mut binom = 1.0;
        for i in 0..=r {
            total += binom * (-mu).powi((r - i) as i32) * self.moment(i)?;
            binom = binom * (r - i) as f64 / (i + 1) as f64;
        }
        Ok(total)
    }

    /// `μ = λ(φ + λ − 1) / ((λ + φ)(φ − 1))` for `φ > 1`.
    pub fn mean(&self) -> Result<f64> {
        self.moment(1)
    }

    /// Variance for `φ > 2`:
    ///
    /// ```text
    /// σ² = λ² [(φ+λ−2)(φ−1)(λ+φ) − (φ+λ−1)²(φ−2)] / ((λ+φ)² (φ−2)(φ−1)²)
    /// ```
    pub fn variance(&self) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        if phi <= 2.0 {
            return Err(Error::MomentUndefined { order: 2, phi });
        }
        let s = lambda + phi;
        let num =
            (phi + lambda - 2.0) * (phi - 1.0) * s - (phi + lambda - 1.0).powi(2) * (phi - 2.0);
        Ok(lambda * lambda * num / (s * s * (phi - 2.0) * (phi - 1.0).powi(2)))
    }

    /// Mean residual life `E[T − t | T > t]`, defined for `φ > 1`.
    ///
    /// Built from the inverse gamma partial expectations
    /// `∫_t^∞ y f_j(y) dy = λ γ(φ + j − 2, λ/t) / Γ(φ + j − 1)`, `j = 1, 2`.
    pub fn mean_residual_life(&self, t: f64) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        if phi <= 1.0 {
            return Err(Error::MomentUndefined { order: 1, phi });
        }
        super::check_time(t)?;
        let x = lambda / t;
        let p = self.weight();
        // p λ/(φ−1) P(φ−1, x) + (1−p) λ/φ P(φ, x), over S(t), in log space.
        let ln_tail = log_sum_exp(
            p.ln() + lambda.ln() - (phi - 1.0).ln() + ln_reg_pair(phi - 1.0, x).0,
            (-p).ln_1p() + lambda.ln() - phi.ln() + ln_reg_pair(phi, x).0,
        );
        Ok((ln_tail - self.ln_survival_unchecked(t)).exp() - t)
    }

    /// Shannon entropy `−∫ f ln f`, by adaptive quadrature in `ln t`.
    pub fn shannon_entropy(&self) -> Result<f64> {
        let center = (self.lambda / (self.phi + 1.0)).ln();
        let est = quad::integrate_real_line(
            |s| {
                let t = s.exp();
                let lf = self.ln_pdf_unchecked(t);
                let f = lf.exp();
                if f == 0.0 {
                    0.0
                } else {
                    -f * lf * t
                }
            },
            center,
            2.0,
            1e-14,
            ENTROPY_REL_TOL,
        );
        if !est.converged {
            return Err(Error::NonConvergence {
                iterations: 0,
                detail: format!("entropy quadrature error estimate {:e}", est.abs_error),
            });
        }
        Ok(est.value)
    }

    /// Entropy through the closed-form decomposition
    ///
    /// ```text
    /// H = ln(λ+φ) + ln Γ(φ) + φ(λ+φ+1)/(λ+φ) − (φ+1)(1/(λ+φ) + ψ(φ))
    ///     − λ^{φ+1} Ω(φ, λ) / ((λ+φ) Γ(φ))
    /// ```
    ///
    /// where the last term is `E[ln(1 + 1/T)]`. This is an independent
    /// cross-check of [`IwlParams::shannon_entropy`], sharing only the final
    /// one-dimensional integral.
    pub fn entropy_decomposition(&self) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        let s = lambda + phi;
        let expected_log1p = self.expected_log1p_reciprocal()?;
        Ok(s.ln() + ln_gamma_raw(phi) + phi * (s + 1.0) / s
            - (phi + 1.0) * (1.0 / s + digamma_raw(phi))
            - expected_log1p)
    }

    /// `Ω(φ, λ) = ∫₀^∞ (x + 1) ln(x + 1) x^{φ−1} e^{−λx} dx`.
    pub fn omega(&self) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        let ln_scale = (phi + lambda).ln() + ln_gamma_raw(phi) - (phi + 1.0) * lambda.ln();
        Ok(self.expected_log1p_reciprocal()? * ln_scale.exp())
    }

    /// `E[ln(1 + X)]` for `X = 1/T`, integrating against the weighted
    /// Lindley density of `X`.
    fn expected_log1p_reciprocal(&self) -> Result<f64> {
        let (phi, lambda) = (self.phi, self.lambda);
        let ln_norm = (phi + 1.0) * lambda.ln() - (phi + lambda).ln() - ln_gamma_raw(phi);
        let est = quad::integrate_positive(
            |x| {
                let ln_density = ln_norm + (phi - 1.0) * x.ln() + x.ln_1p() - lambda * x;
                ln_density.exp() * x.ln_1p()
            },
            ((phi + 1.0) / lambda).ln(),
            1e-15,
            ENTROPY_REL_TOL,
        );
        if !est.converged {
            return Err(Error::NonConvergence {
                iterations: 0,
                detail: format!("omega quadrature error estimate {:e}", est.abs_error),
            });
        }
        Ok(est.value)
    }
}
