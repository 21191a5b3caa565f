//! Root finding and small-dimensional unconstrained minimization.

use crate::{Error, Result};

/// Result of a successful one-dimensional root solve.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Brent's method on a sign-changing bracket `[a, b]`.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> Result<Root> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            iterations: 0,
        });
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoBracket(format!(
            "f({a}) = {fa}, f({b}) = {fb} do not change sign"
        )));
    }
    let (mut c, mut fc) = (b, fb);
    let (mut d, mut e) = (b - a, b - a);
    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root {
                x: b,
                iterations: iter,
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NonConvergence {
        iterations: max_iter,
        detail: format!("brent stopped at x = {b}, f = {fb}"),
    })
}

/// Grows a multiplicative bracket around `start` for a function that is
/// positive to the left of its root and negative to the right (on `(0, ∞)`).
pub fn bracket_decreasing<F: Fn(f64) -> f64>(
    f: &F,
    start: f64,
    max_doublings: usize,
) -> Result<(f64, f64)> {
    let f0 = f(start);
    if f0.is_nan() {
        return Err(Error::NoBracket(format!("objective is NaN at {start}")));
    }
    let (mut lo, mut hi) = (start, start);
    if f0 > 0.0 {
        for _ in 0..max_doublings {
            lo = hi;
            hi *= 2.0;
            let v = f(hi);
            if v <= 0.0 {
                return Ok((lo, hi));
            }
            if v.is_nan() {
                break;
            }
        }
    } else {
        for _ in 0..max_doublings {
            hi = lo;
            lo *= 0.5;
            let v = f(lo);
            if v >= 0.0 {
                return Ok((lo, hi));
            }
            if v.is_nan() {
                break;
            }
        }
    }
    Err(Error::NoBracket(format!(
        "no sign change in [{lo:e}, {hi:e}] after {max_doublings} doublings from {start}"
    )))
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Convergence requires the sup-norm of the gradient below this.
    pub grad_tol: f64,
    /// ... and the last (or predicted) step below this.
    pub step_tol: f64,
    pub max_iter: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            grad_tol: 1e-8,
            step_tol: 1e-10,
            max_iter: 500,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Minimum<const N: usize> {
    pub x: [f64; N],
    pub value: f64,
    pub grad: [f64; N],
    pub iterations: usize,
    pub converged: bool,
}

fn dot<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sup<const N: usize>(a: &[f64; N]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

fn identity<const N: usize>(s: f64) -> [[f64; N]; N] {
    let mut m = [[0.0; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = s;
    }
    m
}

fn mat_vec<const N: usize>(m: &[[f64; N]; N], v: &[f64; N]) -> [f64; N] {
    let mut out = [0.0; N];
    for i in 0..N {
        out[i] = dot(&m[i], v);
    }
    out
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
fn solve<const N: usize>(mut m: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let piv = (col..N).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..N {
            let factor = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= factor * m[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / m[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Minimizes a smooth function with BFGS and a backtracking line search,
/// then polishes with Newton steps on a finite-difference Hessian of the
/// supplied gradient.
///
/// `objective` returns `None` outside its domain; the line search then backs
/// off.
#[allow(clippy::needless_range_loop)]
pub fn minimize<const N: usize, F>(objective: F, x0: [f64; N], opts: &Options) -> Result<Minimum<N>>
where
    F: Fn(&[f64; N]) -> Option<(f64, [f64; N])>,
{
    let eval = |x: &[f64; N]| {
        objective(x).filter(|(v, g)| v.is_finite() && g.iter().all(|c| c.is_finite()))
    };
    let (mut fx, mut g) = eval(&x0)
        .ok_or_else(|| Error::domain(format!("objective undefined at starting point {x0:?}")))?;
    let mut x = x0;
    let mut h = identity::<N>(1.0 / sup(&g).max(1.0));
    let mut first_update = true;
    let mut last_step = f64::INFINITY;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        let mut p = mat_vec(&h, &g).map(|v| -v);
        let predicted = sup(&p);
        if sup(&g) < opts.grad_tol && (last_step < opts.step_tol || predicted < opts.step_tol) {
            return Ok(Minimum {
                x,
                value: fx,
                grad: g,
                iterations,
                converged: true,
            });
        }
        iterations += 1;
        let mut slope = dot(&g, &p);
        if slope >= 0.0 {
            h = identity(1.0 / sup(&g).max(1.0));
            first_update = true;
            p = mat_vec(&h, &g).map(|v| -v);
            slope = dot(&g, &p);
        }
        let mut alpha = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let mut trial = x;
            for i in 0..N {
                trial[i] += alpha * p[i];
            }
            if let Some((ft, gt)) = eval(&trial) {
                let armijo = ft <= fx + 1e-4 * alpha * slope;
                // Near the optimum the objective is flat to rounding; accept
                // steps that reduce the gradient without raising the value.
                let noise = ft <= fx + 4.0 * f64::EPSILON * fx.abs() && sup(&gt) < sup(&g);
                if armijo || noise {
                    accepted = Some((trial, ft, gt));
                    break;
                }
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new, g_new)) = accepted else {
            break;
        };
        let mut s = [0.0; N];
        let mut y = [0.0; N];
        for i in 0..N {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        let sy = dot(&s, &y);
        if sy > 1e-14 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() {
            if first_update {
                h = identity(sy / dot(&y, &y));
                first_update = false;
            }
            let rho = 1.0 / sy;
            let hy = mat_vec(&h, &y);
            let yhy = dot(&y, &hy);
            for i in 0..N {
                for j in 0..N {
                    h[i][j] += -rho * (hy[i] * s[j] + s[i] * hy[j])
                        + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
        }
        last_step = sup(&s);
        x = x_new;
        fx = f_new;
        g = g_new;
    }

    // Newton polish.
    for _ in 0..10 {
        let mut hess = [[0.0; N]; N];
        let mut ok = true;
        for j in 0..N {
            let step = 1e-5 * x[j].abs().max(1.0);
            let mut up = x;
            let mut down = x;
            up[j] += step;
            down[j] -= step;
            match (eval(&up), eval(&down)) {
                (Some((_, gu)), Some((_, gd))) => {
                    for i in 0..N {
                        hess[i][j] = (gu[i] - gd[i]) / (2.0 * step);
                    }
                }
                _ => ok = false,
            }
        }
        if !ok {
            break;
        }
        for i in 0..N {
            for j in 0..i {
                let m = 0.5 * (hess[i][j] + hess[j][i]);
                hess[i][j] = m;
                hess[j][i] = m;
            }
        }
        let Some(step) = solve(hess, g) else { break };
        let mut trial = x;
        for i in 0..N {
            trial[i] -= step[i];
        }
        match eval(&trial) {
            Some((ft, gt)) if sup(&gt) < sup(&g) && ft <= fx + 1e-9 * fx.abs().max(1.0) => {
                last_step = sup(&step);
                x = trial;
                fx = ft;
                g = gt;
                iterations += 1;
            }
            _ => break,
        }
        if sup(&g) < opts.grad_tol && last_step < opts.step_tol {
            break;
        }
    }
    let converged = sup(&g) < opts.grad_tol && last_step < opts.step_tol.max(1e3 * opts.grad_tol);
    if converged {
        Ok(Minimum {
            x,
            value: fx,
            grad: g,
            iterations,
            converged,
        })
    } else {
        Err(Error::NonConvergence {
            iterations,
            detail: format!("last iterate {x:?}, gradient {g:?}"),
        })
    }
}
