//! Exact sampling.
//!
//! Gamma variates use Marsaglia & Tsang (2000): for shape `a ≥ 1` set
//! `d = a − 1/3`, `c = 1/√(9d)`, draw `x ~ N(0, 1)` and `u ~ U(0, 1)`, accept
//! `d·v` with `v = (1 + c x)³` when `u < 1 − 0.0331 x⁴` or
//! `ln u < x²/2 + d(1 − v + ln v)`. Shapes `a < 1` are boosted:
//! `G(a) = G(a + 1)·U^{1/a}`. Normals come from `rand_distr`'s ziggurat.
//! Output is reproducible for a given seeded generator.

use rand::Rng;
use rand_distr::StandardNormal;

use super::IwlParams;

/// Gamma(shape, 1) variate.
pub fn sample_gamma<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape < 1.0 {
        let u: f64 = rng.random();
        return sample_gamma(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * x;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        let x2 = x * x;
        if u < 1.0 - 0.0331 * x2 * x2 || u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// Inverse gamma `IG(shape, scale)` variate, `scale / Gamma(shape, 1)`.
pub fn sample_inverse_gamma<R: Rng + ?Sized>(shape: f64, scale: f64, rng: &mut R) -> f64 {
    scale / sample_gamma(shape, rng)
}

/// `n` independent IWL(φ, λ) draws.
///
/// Per draw: `U ~ U(0, 1)`; if `U ≤ p` return an `IG(φ, λ)` variate,
/// otherwise an `IG(φ + 1, λ)` variate. Only the selected component is
/// generated.
pub fn sample<R: Rng + ?Sized>(theta: &IwlParams, n: usize, rng: &mut R) -> Vec<f64> {
    let p = theta.weight();
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            let shape = if u <= p {
                theta.phi()
            } else {
                theta.phi() + 1.0
            };
            sample_inverse_gamma(shape, theta.lambda(), rng)
        })
        .collect()
}
