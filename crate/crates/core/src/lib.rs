//! The inverse weighted Lindley (IWL) lifetime distribution.
//!
//! A positive random variable `T` is IWL(φ, λ) when `1/T` follows the
//! weighted Lindley distribution. Equivalently, `T` is a two-component
//! mixture of inverse gamma laws `IG(φ, λ)` and `IG(φ + 1, λ)` with weight
//! `p = λ / (λ + φ)` on the first component.
//!
//! The crate covers:
//!
//! - [`specfun`]: log-gamma, polygamma and incomplete gamma kernels.
//! - [`distribution`]: density, survival, hazard, moments, entropy, sampling.
//! - [`fit`]: maximum likelihood for complete and randomly right-censored
//!   data, Cox–Snell and bootstrap bias corrections.
//! - [`baselines`]: competing two-parameter lifetime families and
//!   information criteria.
//! - [`nonparam`]: Kaplan–Meier and total-time-on-test curves.
//! - [`simlab`]: Monte Carlo comparison of estimators.

pub mod baselines;
pub mod data;
pub mod distribution;
mod error;
pub mod fit;
pub mod fixture;
pub mod linalg;
pub mod nonparam;
pub mod normal;
pub mod optim;
pub mod quad;
pub mod simlab;
pub mod specfun;

pub use data::LifetimeData;
pub use distribution::{IwlParams, MixtureView};
pub use error::{Error, Result};
pub use fit::{FitReport, Interval, Method};
