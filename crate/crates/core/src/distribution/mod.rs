//! The IWL(φ, λ) distribution.
//!
//! Density
//!
//! ```text
//! f(t | φ, λ) = λ^{φ+1} / ((φ + λ) Γ(φ)) · t^{−φ−1} (1 + 1/t) e^{−λ/t},   t > 0
//! ```
//!
//! which is the mixture `p·IG(φ, λ) + (1 − p)·IG(φ + 1, λ)` with
//! `p = λ / (λ + φ)`. The CDF and survival function are evaluated through
//! that mixture using regularized incomplete gamma functions, which avoids
//! the cancellation in the closed form `[(λ+φ)γ(φ, λ/t) − (λ/t)^φ e^{−λ/t}]`.

mod moments;
mod sample;

pub use sample::{sample, sample_gamma, sample_inverse_gamma};

use crate::optim;
use crate::specfun::{ln_gamma_raw, ln_reg_pair, reg_pair};
use crate::{Error, Result};

/// Shape `φ` and scale `λ`, both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwlParams {
    phi: f64,
    lambda: f64,
}

/// The two inverse gamma components of an IWL law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureView {
    /// Weight `p = λ/(λ+φ)` of the first component.
    pub weight: f64,
    pub component1_shape: f64,
    pub component2_shape: f64,
    pub scale: f64,
}

impl IwlParams {
    pub fn new(phi: f64, lambda: f64) -> Result<Self> {
        if !(phi.is_finite() && phi > 0.0) {
            return Err(Error::domain(format!(
                "phi must be finite and positive, got {phi}"
            )));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::domain(format!(
                "lambda must be finite and positive, got {lambda}"
            )));
        }
        Ok(IwlParams { phi, lambda })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.phi, self.lambda]
    }

    /// Mixture weight `p = λ/(λ+φ)`.
    pub fn weight(&self) -> f64 {
        self.lambda / (self.lambda + self.phi)
    }

    pub fn mixture(&self) -> MixtureView {
        MixtureView {
            weight: self.weight(),
            component1_shape: self.phi,
            component2_shape: self.phi + 1.0,
            scale: self.lambda,
        }
    }

    fn ln_norm(&self) -> f64 {
        (self.phi + 1.0) * self.lambda.ln() - (self.phi + self.lambda).ln() - ln_gamma_raw(self.phi)
    }

    pub(crate) fn ln_pdf_unchecked(&self, t: f64) -> f64 {
        self.ln_norm() - (self.phi + 1.0) * t.ln() + (1.0 / t).ln_1p() - self.lambda / t
    }

    /// `(ln P(φ, x), ln P(φ+1, x))` at `x = λ/t`.
    fn ln_components(&self, t: f64) -> (f64, f64) {
        let x = self.lambda / t;
        (ln_reg_pair(self.phi, x).0, ln_reg_pair(self.phi + 1.0, x).0)
    }

    pub(crate) fn ln_survival_unchecked(&self, t: f64) -> f64 {
        let p = self.weight();
        let (l1, l2) = self.ln_components(t);
        log_sum_exp(p.ln() + l1, (-p).ln_1p() + l2)
    }

    pub fn ln_pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ln_pdf_unchecked(t))
    }

    pub fn pdf(&self, t: f64) -> Result<f64> {
        self.ln_pdf(t).map(f64::exp)
    }

    /// `F(t) = p·Q(φ, λ/t) + (1 − p)·Q(φ + 1, λ/t)`.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let x = self.lambda / t;
        let p = self.weight();
        Ok(p * reg_pair(self.phi, x).1 + (1.0 - p) * reg_pair(self.phi + 1.0, x).1)
    }

    /// `S(t) = p·P(φ, λ/t) + (1 − p)·P(φ + 1, λ/t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let x = self.lambda / t;
        let p = self.weight();
        Ok(p * reg_pair(self.phi, x).0 + (1.0 - p) * reg_pair(self.phi + 1.0, x).0)
    }

    pub fn ln_survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ln_survival_unchecked(t))
    }

    pub fn ln_hazard(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.ln_pdf_unchecked(t) - self.ln_survival_unchecked(t))
    }

    /// `h(t) = f(t)/S(t)`, evaluated in log space.
    pub fn hazard(&self, t: f64) -> Result<f64> {
        self.ln_hazard(t).map(f64::exp)
    }

    /// Smallest `t` with `F(t) = q`.
    ///
    /// The bracket starts at the mean (or at `λ` when the mean is infinite)
    /// and grows geometrically; Brent's method then solves in `ln t`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::domain(format!(
                "quantile level must lie in (0, 1), got {q}"
            )));
        }
        let start = self.mean().unwrap_or(self.lambda);
        // F is increasing in t, so cdf - q is decreasing in 1/t; bracket on u = 1/t.
        let g = |u: f64| self.cdf(1.0 / u).map(|f| f - q).unwrap_or(f64::NAN);
        let (lo, hi) = optim::bracket_decreasing(&g, 1.0 / start, 1100)?;
        let root = optim::brent(
            |s: f64| self.cdf((-s).exp()).map(|f| f - q).unwrap_or(f64::NAN),
            lo.ln(),
            hi.ln(),
            1e-15,
            200,
        )?;
        Ok((-root.x).exp())
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "time must be finite and positive, got {t}"
        )))
    }
}

pub(crate) fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(phi: f64, lambda: f64) -> IwlParams {
        IwlParams::new(phi, lambda).unwrap()
    }

    #[test]
    fn construction_validates() {
        assert!(IwlParams::new(0.0, 1.0).is_err());
        assert!(IwlParams::new(1.0, -1.0).is_err());
        assert!(IwlParams::new(f64::NAN, 1.0).is_err());
        let m = params(2.0, 4.0).mixture();
        assert_eq!(m.weight, 4.0 / 6.0);
        assert_eq!(m.component2_shape - m.component1_shape, 1.0);
    }

    #[test]
    fn pdf_at_unit_point() {
        let v = params(1.0, 1.0).pdf(1.0).unwrap();
        assert!((v - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn bad_times_rejected() {
        let th = params(2.0, 4.0);
        for t in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(th.pdf(t).is_err());
            assert!(th.cdf(t).is_err());
            assert!(th.survival(t).is_err());
            assert!(th.hazard(t).is_err());
        }
        assert!(th.quantile(0.0).is_err());
        assert!(th.quantile(1.0).is_err());
    }

    #[test]
    fn cdf_limits() {
        let th = params(0.7, 3.0);
        assert!(th.cdf(1e-6).unwrap() < 1e-300);
        assert!(th.cdf(1e12).unwrap() > 1.0 - 1e-6);
        assert!((th.cdf(2.0).unwrap() + th.survival(2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn large_phi_does_not_overflow() {
        let th = params(300.0, 250.0);
        let f = th.pdf(0.8).unwrap();
        assert!(f.is_finite() && f > 0.0);
        assert!(th.ln_survival(1e4).unwrap().is_finite());
    }

    #[test]
    fn quantile_roundtrip_and_median() {
        let th = params(2.0, 4.0);
        for t0 in [0.1, 1.0, 10.0] {
            let q = th.cdf(t0).unwrap();
            let t = th.quantile(q).unwrap();
            assert!((t - t0).abs() < 1e-8 * t0, "{t} vs {t0}");
        }
        let med = th.quantile(0.5).unwrap();
        assert!((th.cdf(med).unwrap() - 0.5).abs() < 1e-10);
        // mean undefined: start from lambda
        let heavy = params(0.5, 2.0);
        let med = heavy.quantile(0.5).unwrap();
        assert!((heavy.cdf(med).unwrap() - 0.5).abs() < 1e-10);
        let q = heavy.quantile(0.999_999).unwrap();
        assert!((heavy.cdf(q).unwrap() - 0.999_999).abs() < 1e-10);
    }

    #[test]
    fn log_sum_exp_handles_infinities() {
        assert_eq!(
            log_sum_exp(f64::NEG_INFINITY, f64::NEG_INFINITY),
            f64::NEG_INFINITY
        );
        assert!((log_sum_exp(0.0, f64::NEG_INFINITY)).abs() < 1e-300);
        assert!((log_sum_exp(1000.0, 1000.0) - (1000.0 + 2f64.ln())).abs() < 1e-12);
    }
}
