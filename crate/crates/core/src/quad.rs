//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

#![allow(clippy::excessive_precision)]

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SEGMENTS: usize = 4000;

#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the total
/// error is below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Estimate {
    let mut segments = vec![kronrod(&f, a, b)];
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        let target = abs_tol.max(rel_tol * value.abs());
        if error <= target || !error.is_finite() {
            return Estimate {
                value,
                abs_error: error,
                converged: error <= target,
            };
        }
        if segments.len() >= MAX_SEGMENTS {
            return Estimate {
                value,
                abs_error: error,
                converged: false,
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // cannot split further in floating point
            segments.push(seg);
            let value: f64 = segments.iter().map(|s| s.value).sum();
            return Estimate {
                value,
                abs_error: error,
                converged: false,
            };
        }
        segments.push(kronrod(&f, seg.a, mid));
        segments.push(kronrod(&f, mid, seg.b));
    }
}

/// Integral of `f` over the whole real line.
///
/// Uses the substitution `s = center + scale·u/(1 − u²)` on `u ∈ (−1, 1)`;
/// `center` and `scale` should locate the bulk of the integrand.
pub fn integrate_real_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    scale: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate {
    let g = |u: f64| {
        let d = 1.0 - u * u;
        let s = center + scale * u / d;
        let jac = scale * (1.0 + u * u) / (d * d);
        let v = f(s) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    // Split at the center so the peak sits on a segment boundary region.
    let left = integrate(g, -1.0, 0.0, 0.5 * abs_tol, rel_tol);
    let right = integrate(g, 0.0, 1.0, 0.5 * abs_tol, rel_tol);
    Estimate {
        value: left.value + right.value,
        abs_error: left.abs_error + right.abs_error,
        converged: left.converged && right.converged,
    }
}

/// Integral of `g` over `(0, ∞)`, computed in the log variable `t = eˢ`.
/// `log_center` is a typical value of `ln t`.
pub fn integrate_positive<F: Fn(f64) -> f64>(
    g: F,
    log_center: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Estimate {
    integrate_real_line(
        |s| {
            let t = s.exp();
            if t == 0.0 || !t.is_finite() {
                0.0
            } else {
                g(t) * t
            }
        },
        log_center,
        2.0,
        abs_tol,
        rel_tol,
    )
}
