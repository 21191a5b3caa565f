use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use iwl::baselines::{fit_baseline, ModelFit, ModelId};
use iwl::fit::{self, FitReport};
use iwl::nonparam;
use iwl::simlab::{self, ExperimentConfig};
use iwl::{Error, IwlParams, LifetimeData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: String) -> Self {
        Failure {
            code: EXIT_USAGE,
            message,
        }
    }

    fn numeric(message: String) -> Self {
        Failure {
            code: EXIT_NUMERIC,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoBracket(_)
            | Error::NonConvergence { .. }
            | Error::Singular(_)
            | Error::Bootstrap { .. } => Failure::numeric(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn emit(text: &str, out: Option<&Path>) -> Outcome {
    let res = match out {
        Some(p) => std::fs::write(p, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::usage(format!("cannot write output: {e}")))
}

pub fn sample(phi: f64, lambda: f64, n: usize, seed: u64, out: Option<PathBuf>) -> Outcome {
    let theta = IwlParams::new(phi, lambda)?;
    if n == 0 {
        return Err(Failure::usage("--n must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::from("time\n");
    for t in iwl::distribution::sample(&theta, n, &mut rng) {
        let _ = writeln!(text, "{t}");
    }
    emit(&text, out.as_deref())
}

pub enum FitChoice {
    Mle,
    Cmle,
    Boot { reps: usize, seed: u64 },
}

/// Dispatches to the library estimator, picking the censored variant when
/// the data carry censoring flags.
pub fn run_fit(data: &LifetimeData, choice: &FitChoice, ci_level: f64) -> Result<FitReport, Error> {
    let report = match (choice, data.is_complete()) {
        (FitChoice::Mle, true) => fit::fit_mle(data)?,
        (FitChoice::Mle, false) => fit::fit_mle_censored(data)?,
        (FitChoice::Cmle, true) => fit::fit_cmle(data)?,
        (FitChoice::Cmle, false) => fit::fit_acmle(data)?,
        (FitChoice::Boot { reps, seed }, complete) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            if complete {
                fit::fit_boot(data, *reps, &mut rng)?
            } else {
                fit::fit_boot_censored(data, *reps, &mut rng)?
            }
        }
    };
    report.with_ci_level(ci_level)
}

fn fit_json(r: &FitReport) -> serde_json::Value {
    let aic = iwl::baselines::criteria(r.loglik, 2, r.n)
        .map(|c| c.aic)
        .ok();
    json!({
        "method": r.method.label(),
        "phi": r.estimates.phi(),
        "lambda": r.estimates.lambda(),
        "se_phi": r.std_errors[0],
        "se_lambda": r.std_errors[1],
        "ci_phi": [r.ci[0].lower, r.ci[0].upper],
        "ci_lambda": [r.ci[1].lower, r.ci[1].upper],
        "loglik": r.loglik,
        "aic": aic,
        "converged": r.converged,
    })
}

fn fit_text(r: &FitReport) -> String {
    let mut s = String::new();
    let pct = 100.0 * r.ci_level;
    let _ = writeln!(s, "method     {}", r.method);
    let _ = writeln!(s, "n          {} ({} censored)", r.n, r.n - r.d);
    for (i, name) in ["phi", "lambda"].iter().enumerate() {
        let _ = writeln!(
            s,
            "{name:<10} {:.6}  se {:.6}  {pct}% CI ({:.6}, {:.6})",
            r.estimates.as_array()[i],
            r.std_errors[i],
            r.ci[i].lower,
            r.ci[i].upper
        );
    }
    let _ = writeln!(s, "loglik     {:.4}", r.loglik);
    if let Ok(c) = iwl::baselines::criteria(r.loglik, 2, r.n) {
        let _ = writeln!(s, "aic        {:.4}", c.aic);
    }
    let _ = writeln!(
        s,
        "converged  {} ({} iterations)",
        r.converged, r.iterations
    );
    if r.fallback {
        let _ = writeln!(s, "note       correction fell back to the MLE");
    }
    if r.bootstrap_dropped > 0 {
        let _ = writeln!(
            s,
            "note       {} bootstrap replicates dropped",
            r.bootstrap_dropped
        );
    }
    for n in &r.notes {
        let _ = writeln!(s, "note       {n}");
    }
    s
}

pub fn fit(data: &LifetimeData, choice: FitChoice, ci_level: f64, json: bool) -> Outcome {
    if !(ci_level > 0.0 && ci_level < 1.0) {
        return Err(Failure::usage(format!(
            "--ci-level must lie in (0, 1), got {ci_level}"
        )));
    }
    let report = run_fit(data, &choice, ci_level)?;
    let text = if json {
        format!("{}\n", fit_json(&report))
    } else {
        fit_text(&report)
    };
    emit(&text, None)?;
    if report.converged {
        Ok(())
    } else {
        Err(Failure::numeric(format!(
            "fit did not converge: {}",
            report.notes.join("; ")
        )))
    }
}

pub fn compare(data: &LifetimeData, models: Option<Vec<String>>, json: bool) -> Outcome {
    let ids: Vec<ModelId> = match models {
        None => ModelId::ALL.to_vec(),
        Some(list) => list.iter().map(|m| m.parse()).collect::<Result<_, _>>()?,
    };
    if ids.is_empty() {
        return Err(Failure::usage("--models is empty".into()));
    }
    let mut results: Vec<(ModelId, Result<ModelFit, Error>)> =
        ids.iter().map(|&m| (m, fit_baseline(m, data))).collect();
    results.sort_by(|a, b| {
        let key =
            |r: &Result<ModelFit, Error>| r.as_ref().map_or(f64::INFINITY, |f| f.criteria.aic);
        key(&a.1).total_cmp(&key(&b.1))
    });
    let best = results
        .iter()
        .find_map(|(m, r)| r.as_ref().ok().map(|_| *m));
    let Some(best) = best else {
        return Err(Failure::numeric("no model could be fitted".into()));
    };
    let text = if json {
        let rows: Vec<serde_json::Value> = results
            .iter()
            .map(|(m, r)| match r {
                Ok(f) => json!({
                    "model": m.id(),
                    "status": "ok",
                    "params": f.params.iter().take(m.free_parameters()).collect::<Vec<_>>(),
                    "loglik": f.loglik,
                    "k": f.k,
                    "aic": f.criteria.aic,
                    "aicc": f.criteria.aicc,
                    "hqic": f.criteria.hqic,
                    "caic": f.criteria.caic,
                    "best": *m == best,
                }),
                Err(e) => json!({ "model": m.id(), "status": "failed", "error": e.to_string(), "best": false }),
            })
            .collect();
        format!("{}\n", serde_json::Value::Array(rows))
    } else {
        let mut s = String::from("model,status,param1,param2,loglik,aic,aicc,hqic,caic,best\n");
        for (m, r) in &results {
            match r {
                Ok(f) => {
                    let p2 = if m.free_parameters() == 2 {
                        f.params[1].to_string()
                    } else {
                        String::new()
                    };
                    let c = f.criteria;
                    let _ = writeln!(
                        s,
                        "{m},ok,{},{p2},{},{},{},{},{},{}",
                        f.params[0],
                        f.loglik,
                        c.aic,
                        c.aicc,
                        c.hqic,
                        c.caic,
                        *m == best
                    );
                }
                Err(e) => {
                    let _ = writeln!(
                        s,
                        "{m},failed: {},,,,,,,,false",
                        e.to_string().replace(',', ";")
                    );
                }
            }
        }
        s
    };
    emit(&text, None)
}

fn curve_csv(header: &str, curve: &nonparam::StepCurve) -> String {
    let mut s = format!("{header}\n");
    for (x, y) in &curve.points {
        let _ = writeln!(s, "{x},{y}");
    }
    s
}

pub fn km(data: &LifetimeData) -> Outcome {
    emit(
        &curve_csv("time,survival", &nonparam::kaplan_meier(data)),
        None,
    )
}

pub fn ttt(data: &LifetimeData) -> Outcome {
    emit(&curve_csv("u,ttt", &nonparam::ttt_curve(data)?), None)
}

/// Grid of `points` times from `tmin` to `tmax`.
pub fn time_grid(
    tmin: f64,
    tmax: f64,
    points: usize,
    log_spaced: bool,
) -> Result<Vec<f64>, Failure> {
    if !(tmin > 0.0 && tmax > tmin && tmax.is_finite()) || points < 2 {
        return Err(Failure::usage(
            "need 0 < tmin < tmax and at least 2 points".into(),
        ));
    }
    let step = |i: usize| i as f64 / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if log_spaced {
                (tmin.ln() + step(i) * (tmax / tmin).ln()).exp()
            } else {
                tmin + step(i) * (tmax - tmin)
            }
        })
        .collect())
}

pub fn hazard(
    phi: f64,
    lambda: f64,
    tmin: f64,
    tmax: f64,
    points: usize,
    log_spaced: bool,
) -> Outcome {
    let theta = IwlParams::new(phi, lambda)?;
    let mut s = String::from("time,hazard\n");
    for t in time_grid(tmin, tmax, points, log_spaced)? {
        let _ = writeln!(s, "{t},{}", theta.hazard(t)?);
    }
    emit(&s, None)
}

pub fn simulate(config: &Path, out: Option<PathBuf>) -> Outcome {
    let cfg = ExperimentConfig::from_path(config).map_err(|e| Failure::usage(e.to_string()))?;
    let result = simlab::run_experiment(&cfg)?;
    emit(&result.to_csv(), out.as_deref())
}
