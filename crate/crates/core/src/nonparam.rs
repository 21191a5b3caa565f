//! Kaplan–Meier and total-time-on-test curves.

use crate::{Error, LifetimeData, Result};

/// Right-continuous step function given by its jump points.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCurve {
    pub points: Vec<(f64, f64)>,
}

impl StepCurve {
    /// Value at `x`: the `y` of the last point with abscissa `≤ x`, or the
    /// first `y` before the curve starts.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 <= x);
        self.points[i.saturating_sub(1)].1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn sorted(data: &LifetimeData) -> Vec<(f64, bool)> {
    let mut obs: Vec<(f64, bool)> = data.iter().collect();
    // events before censorings at equal times
    obs.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    obs
}

/// Product-limit estimate `Ŝ(t) = Π_{tᵢ ≤ t} (1 − dᵢ/nᵢ)`, starting at
/// `(0, 1)` with one point per distinct failure time.
pub fn kaplan_meier(data: &LifetimeData) -> StepCurve {
    let obs = sorted(data);
    let mut points = vec![(0.0, 1.0)];
    let mut at_risk = obs.len();
    let mut s = 1.0;
    let mut i = 0;
    while i < obs.len() {
        let t = obs[i].0;
        let (mut deaths, mut leaving) = (0usize, 0usize);
        while i < obs.len() && obs[i].0 == t {
            deaths += usize::from(obs[i].1);
            leaving += 1;
            i += 1;
        }
        if deaths > 0 {
            s *= 1.0 - deaths as f64 / at_risk as f64;
            points.push((t, s));
        }
        at_risk -= leaving;
    }
    StepCurve { points }
}

/// Scaled TTT transform `(r/n, G(r/n))`, `r = 1..n`, with
/// `G(r/n) = (Σ_{i≤r} t₍ᵢ₎ + (n−r) t₍ᵣ₎) / Σ tᵢ`. Censoring flags are
/// ignored.
pub fn ttt_curve(data: &LifetimeData) -> Result<StepCurve> {
    let n = data.n();
    if n < 2 {
        return Err(Error::InvalidData(
            "TTT curve needs at least 2 observations".into(),
        ));
    }
    let mut t = data.times().to_vec();
    t.sort_by(f64::total_cmp);
    let total: f64 = t.iter().sum();
    let mut partial = 0.0;
    let points = t
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            partial += x;
            let r = i + 1;
            let g = if r == n {
                1.0
            } else {
                (partial + (n - r) as f64 * x) / total
            };
            (r as f64 / n as f64, g)
        })
        .collect();
    Ok(StepCurve { points })
}
