//! Incomplete gamma functions and their shape derivatives.
//!
//! Power series for `x < a + 1`, modified Lentz continued fraction otherwise.

use super::gamma::{digamma, ln_gamma};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_TERMS: usize = 100_000;

/// Sums of the lower series `Σ x^n / (a(a+1)…(a+n))` and its `a`-derivative
/// weights `Σ c_n H_n` with `H_n = Σ_{k≤n} 1/(a+k)`.
struct Series {
    sum: f64,
    weighted: f64,
}

fn lower_series(a: f64, x: f64) -> Series {
    let mut term = 1.0 / a;
    let mut harmonic = 1.0 / a;
    let mut sum = term;
    let mut weighted = term * harmonic;
    let mut ap = a;
    for _ in 0..MAX_TERMS {
        ap += 1.0;
        term *= x / ap;
        harmonic += 1.0 / ap;
        sum += term;
        weighted += term * harmonic;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    Series { sum, weighted }
}

/// Continued fraction `h` with `Γ(a, x) = x^a e^{-x} h`.
fn upper_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_TERMS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[inline]
fn use_series(a: f64, x: f64) -> bool {
    x < a + 1.0
}

/// `ln P(a, x)` and `ln Q(a, x)` for the regularized functions.
pub(crate) fn ln_reg_pair(a: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (f64::NEG_INFINITY, 0.0);
    }
    if x.is_infinite() {
        return (0.0, f64::NEG_INFINITY);
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if use_series(a, x) {
        let ln_p = log_prefactor + lower_series(a, x).sum.ln();
        (ln_p, (-ln_p.exp()).ln_1p())
    } else {
        let ln_q = log_prefactor + upper_fraction(a, x).ln();
        ((-ln_q.exp()).ln_1p(), ln_q)
    }
}

/// Regularized `P(a, x) = γ(a, x) / Γ(a)` and `Q(a, x) = 1 − P(a, x)`.
pub(crate) fn reg_pair(a: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 1.0);
    }
    if x.is_infinite() {
        return (1.0, 0.0);
    }
    let log_prefactor = a * x.ln() - x - ln_gamma(a);
    if use_series(a, x) {
        let p = (log_prefactor.exp() * lower_series(a, x).sum).min(1.0);
        (p, 1.0 - p)
    } else {
        let q = (log_prefactor.exp() * upper_fraction(a, x)).min(1.0);
        (1.0 - q, q)
    }
}

/// Unregularized `γ(a, x)` and `Γ(a, x)`.
pub(crate) fn unreg_pair(a: f64, x: f64) -> (f64, f64) {
    let gamma_a = ln_gamma(a).exp();
    if x == 0.0 {
        return (0.0, gamma_a);
    }
    if x.is_infinite() {
        return (gamma_a, 0.0);
    }
    let log_prefactor = a * x.ln() - x;
    if use_series(a, x) {
        let lower = log_prefactor.exp() * lower_series(a, x).sum;
        (lower, gamma_a - lower)
    } else {
        let upper = log_prefactor.exp() * upper_fraction(a, x);
        (gamma_a - upper, upper)
    }
}

/// Richardson-extrapolated central difference of `f` at `a`.
fn richardson<F: Fn(f64) -> f64>(f: F, a: f64, h: f64) -> f64 {
    let d = |h: f64| (f(a + h) - f(a - h)) / (2.0 * h);
    let coarse = d(h);
    let fine = d(0.5 * h);
    (4.0 * fine - coarse) / 3.0
}

fn shape_step(a: f64) -> f64 {
    (1e-5 * a.max(1.0)).min(0.5 * a)
}

/// `∂γ(a, x)/∂a` (unregularized).
pub(crate) fn dlower_dshape(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if use_series(a, x) {
        let s = lower_series(a, x);
        (a * x.ln() - x).exp() * (x.ln() * s.sum - s.weighted)
    } else {
        richardson(|b| unreg_pair(b, x).0, a, shape_step(a))
    }
}

/// `∂ ln P(a, x)/∂a`. Well scaled even where `P` itself underflows.
pub(crate) fn dln_reg_lower_dshape(a: f64, x: f64) -> f64 {
    if use_series(a, x) {
        let s = lower_series(a, x);
        x.ln() - digamma(a) - s.weighted / s.sum
    } else {
        richardson(|b| ln_reg_pair(b, x).0, a, shape_step(a))
    }
}

/// `∂ ln Q(a, x)/∂a`.
pub(crate) fn dln_reg_upper_dshape(a: f64, x: f64) -> f64 {
    if use_series(a, x) {
        // ∂Q = -∂P = -P ∂lnP, so ∂lnQ = -(P/Q) ∂lnP.
        let (ln_p, ln_q) = ln_reg_pair(a, x);
        -(ln_p - ln_q).exp() * dln_reg_lower_dshape(a, x)
    } else {
        richardson(|b| ln_reg_pair(b, x).1, a, shape_step(a))
    }
}

/// Log of the gamma(shape `a`, rate 1) density at `x`, i.e. `∂P(a, x)/∂x`.
pub(crate) fn ln_gamma_density(a: f64, x: f64) -> f64 {
    (a - 1.0) * x.ln() - x - ln_gamma(a)
}
