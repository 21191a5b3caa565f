//! Numerical oracles for tests.
//!
//! Nothing here depends on the `iwl` crate: the quadrature is tanh-sinh
//! (the library uses Gauss–Kronrod), and the remaining helpers are direct
//! textbook formulas.

/// Tanh-sinh quadrature of `f` over the finite interval `[a, b]`.
///
/// Handles integrable endpoint singularities. Refines the step until two
/// successive levels agree to `rel_tol`.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    // One node pair at parameter tau: returns (weight, left point, right point).
    let node = |tau: f64| {
        let s = FRAC_PI_2 * tau.sinh();
        let c = s.cosh();
        let w = FRAC_PI_2 * tau.cosh() / (c * c);
        // distance of the abscissa from the nearest endpoint, 1 - tanh(s)
        let gap = 2.0 / ((2.0 * s).exp() + 1.0);
        (w, a + half * gap, b - half * gap)
    };
    let eval = |x: f64| {
        if x <= a || x >= b {
            0.0
        } else {
            f(x)
        }
    };
    // far enough that nodes reach the endpoints to within f64 resolution
    let tau_max = 6.0;
    let term = |w: f64, fx: f64| {
        if w == 0.0 || !fx.is_finite() {
            0.0
        } else {
            w * fx
        }
    };
    let mut h = 0.5;
    let mut sum = eval(mid) * FRAC_PI_2;
    let mut k = 1;
    while (k as f64) * h <= tau_max {
        let (w, l, r) = node(k as f64 * h);
        sum += term(w, eval(l) + eval(r));
        k += 1;
    }
    let mut estimate = half * h * sum;
    for _level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= tau_max {
            let (w, l, r) = node(k as f64 * h);
            sum += term(w, eval(l) + eval(r));
            k += 2;
        }
        let next = half * h * sum;
        if (next - estimate).abs() <= rel_tol * next.abs() {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// `∫ f` over `[a, b]` split into `panels` equal pieces, each by tanh-sinh.
pub fn panels<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, rel_tol: f64) -> f64 {
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|i| tanh_sinh(&f, a + i as f64 * w, a + (i + 1) as f64 * w, rel_tol))
        .sum()
}

/// `∫₀^∞ g(t) dt` computed as `∫ g(eˢ) eˢ ds` over `s ∈ [s_lo, s_hi]`
/// with unit-width panels. The caller picks bounds where the integrand is
/// negligible.
pub fn positive_line<F: Fn(f64) -> f64>(g: F, s_lo: f64, s_hi: f64) -> f64 {
    let n = ((s_hi - s_lo).ceil() as usize).max(1);
    panels(
        |s| {
            let t = s.exp();
            g(t) * t
        },
        s_lo,
        s_hi,
        n,
        1e-14,
    )
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut xs = sample.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let lo = f - i as f64 / n;
            let hi = (i + 1) as f64 / n - f;
            lo.max(hi)
        })
        .fold(0.0, f64::max)
}

/// Central difference derivative with step `h`.
pub fn central_diff<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second-order mixed partial of a two-argument function by central
/// differences with steps `h`.
pub fn hessian2<F: Fn(f64, f64) -> f64>(f: F, x: f64, y: f64, h: [f64; 2]) -> [[f64; 2]; 2] {
    let (hx, hy) = (h[0], h[1]);
    let f0 = f(x, y);
    let dxx = (f(x + hx, y) - 2.0 * f0 + f(x - hx, y)) / (hx * hx);
    let dyy = (f(x, y + hy) - 2.0 * f0 + f(x, y - hy)) / (hy * hy);
    let dxy = (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy))
        / (4.0 * hx * hy);
    [[dxx, dxy], [dxy, dyy]]
}

/// `ln Γ(m + 1/2)` for integer `m ≥ 0` from `Γ(1/2) = √π` and the recurrence.
pub fn ln_gamma_half_integer(m: u32) -> f64 {
    let mut acc = 0.5 * std::f64::consts::PI.ln();
    for k in 0..m {
        acc += (k as f64 + 0.5).ln();
    }
    acc
}

/// `ln Γ(m)` for integer `m ≥ 1` by summing logs.
pub fn ln_factorial_shift(m: u32) -> f64 {
    (1..m).map(|k| (k as f64).ln()).sum()
}

/// Relative difference `|a − b| / max(|b|, floor)`.
pub fn rel_diff(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / b.abs().max(floor)
}
