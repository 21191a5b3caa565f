//! Monte Carlo comparison of the MLE and its bias-corrected variants.
//!
//! Each replicate gets its own generator, seeded with
//! `splitmix64(splitmix64(splitmix64(master_seed) ^ n) ^ rep)`, so cells and
//! replicates can run in any order (and in parallel) with identical output.
//!
//! Random censoring draws `C ~ Exp(μ*)` independently of `T`, with `μ*`
//! calibrated so that `P(C < T)` hits the requested fraction. The
//! calibration solves `1 − mean(e^{−μ Tᵢ}) = target` over a fixed set of
//! 10⁵ lifetime draws, which is the Monte Carlo estimate of
//! `P(C < T)` with the inner expectation over `C` done exactly.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::distribution::sample;
use crate::fit::{self, check_level, FitReport, Method, DEFAULT_BOOT_REPS, DEFAULT_CI_LEVEL};
use crate::optim;
use crate::{Error, IwlParams, LifetimeData, Result};

/// Lifetime draws used to calibrate the censoring rate.
pub const CALIBRATION_DRAWS: usize = 100_000;
const CALIBRATION_SEED: u64 = 0x1f2e_3d4c_5b6a_7980;
/// Cells whose failure rate exceeds this are reported with NaN metrics.
pub const MAX_CELL_FAILURE_RATE: f64 = 0.20;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of replicate `rep` in the cell of sample size `n`.
pub fn replicate_seed(master_seed: u64, n: usize, rep: usize) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ n as u64) ^ rep as u64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub theta_true: IwlParams,
    pub n_grid: Vec<usize>,
    pub reps: usize,
    /// Subset of `Mle`, `Cmle` and `Boot`; `Cmle` becomes the approximate
    /// correction when `censor_target > 0`.
    pub methods: Vec<Method>,
    pub boot_b: usize,
    pub censor_target: f64,
    pub ci_level: f64,
    pub master_seed: u64,
}

impl ExperimentConfig {
    pub fn new(theta_true: IwlParams, n_grid: Vec<usize>, reps: usize) -> Self {
        ExperimentConfig {
            theta_true,
            n_grid,
            reps,
            methods: vec![Method::Mle, Method::Cmle, Method::Boot],
            boot_b: DEFAULT_BOOT_REPS,
            censor_target: 0.0,
            ci_level: DEFAULT_CI_LEVEL,
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.n_grid.is_empty() {
            return bad("n_grid is empty".into());
        }
        if let Some(n) = self.n_grid.iter().find(|&&n| n < 5) {
            return bad(format!("sample sizes must be at least 5, got {n}"));
        }
        if self.methods.is_empty() {
            return bad("no methods selected".into());
        }
        if !(0.0..1.0).contains(&self.censor_target) {
            return bad(format!(
                "censor_target must lie in [0, 1), got {}",
                self.censor_target
            ));
        }
        check_level(self.ci_level).map_err(|e| Error::Config(e.to_string()))?;
        if self.methods.contains(&Method::Boot) && self.boot_b < fit::MIN_BOOT_REPS {
            return bad(format!("boot_b must be at least {}", fit::MIN_BOOT_REPS));
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    ///
    /// Keys: `phi`, `lambda` (required), `n_grid` (comma list or
    /// `start:stop:step`), `reps`, `methods` (comma list of `mle`, `cmle`,
    /// `acmle`, `boot`), `boot_b`, `censor_target`, `ci_level`, `seed`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: HashMap<String, String> = HashMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", no + 1)))?;
            let key = k.trim().to_ascii_lowercase();
            if kv.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(Error::Config(format!(
                    "line {}: duplicate key '{key}'",
                    no + 1
                )));
            }
        }
        fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Config(format!("invalid value for {key}: '{v}'")))
        }
        let mut take = |key: &str| kv.remove(key);
        let phi: f64 = num(
            "phi",
            &take("phi").ok_or_else(|| Error::Config("missing phi".into()))?,
        )?;
        let lambda: f64 = num(
            "lambda",
            &take("lambda").ok_or_else(|| Error::Config("missing lambda".into()))?,
        )?;
        let theta = IwlParams::new(phi, lambda).map_err(|e| Error::Config(e.to_string()))?;
        let n_grid = match take("n_grid") {
            Some(v) => parse_grid(&v)?,
            None => return Err(Error::Config("missing n_grid".into())),
        };
        let reps = num(
            "reps",
            &take("reps").ok_or_else(|| Error::Config("missing reps".into()))?,
        )?;
        let mut cfg = ExperimentConfig::new(theta, n_grid, reps);
        if let Some(v) = take("methods") {
            let mut methods = Vec::new();
            for m in v.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let method = match m.to_ascii_lowercase().as_str() {
                    "mle" => Method::Mle,
                    "cmle" | "acmle" => Method::Cmle,
                    "boot" => Method::Boot,
                    other => return Err(Error::Config(format!("unknown method '{other}'"))),
                };
                if !methods.contains(&method) {
                    methods.push(method);
                }
            }
            cfg.methods = methods;
        }
        if let Some(v) = take("boot_b") {
            cfg.boot_b = num("boot_b", &v)?;
        }
        if let Some(v) = take("censor_target") {
            cfg.censor_target = num("censor_target", &v)?;
        }
        if let Some(v) = take("ci_level") {
            cfg.ci_level = num("ci_level", &v)?;
        }
        if let Some(v) = take("seed") {
            cfg.master_seed = num("seed", &v)?;
        }
        if let Some(k) = kv.keys().min() {
            return Err(Error::Config(format!("unknown key '{k}'")));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        ExperimentConfig::parse(&std::fs::read_to_string(path)?)
    }
}

fn parse_grid(v: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("invalid n_grid '{v}'"));
    if v.contains(':') {
        let parts: Vec<usize> = v
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(bad());
        };
        if step == 0 || stop < start {
            return Err(bad());
        }
        Ok((start..=stop).step_by(step).collect())
    } else {
        v.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

type CalibrationCache = Mutex<HashMap<(u64, u64, u64), f64>>;

fn calibration_cache() -> &'static CalibrationCache {
    static CACHE: OnceLock<CalibrationCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Exponential censoring rate giving `P(C < T) = target`, memoized per
/// `(θ, target)`.
pub fn censoring_rate(theta: &IwlParams, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::domain(format!(
            "censoring target must lie in (0, 1), got {target}"
        )));
    }
    let key = (
        theta.phi().to_bits(),
        theta.lambda().to_bits(),
        target.to_bits(),
    );
    if let Some(&mu) = calibration_cache()
        .lock()
        .expect("calibration cache")
        .get(&key)
    {
        return Ok(mu);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(CALIBRATION_SEED);
    let mut t = sample(theta, CALIBRATION_DRAWS, &mut rng);
    t.sort_by(f64::total_cmp);
    let m = t.len() as f64;
    let excess = |mu: f64| target - (1.0 - t.iter().map(|x| (-mu * x).exp()).sum::<f64>() / m);
    let start = 1.0 / t[t.len() / 2];
    let (lo, hi) = optim::bracket_decreasing(&excess, start, 400)?;
    let mu = optim::brent(excess, lo, hi, 1e-12 * lo, 200)?.x;
    calibration_cache()
        .lock()
        .expect("calibration cache")
        .insert(key, mu);
    Ok(mu)
}

/// IWL sample with independent exponential censoring calibrated to
/// `censor_target`; a target of 0 gives complete data.
pub fn gen_censored_sample<R: Rng + ?Sized>(
    theta: &IwlParams,
    n: usize,
    censor_target: f64,
    rng: &mut R,
) -> Result<LifetimeData> {
    if n == 0 {
        return Err(Error::domain("sample size must be at least 1"));
    }
    let t = sample(theta, n, rng);
    if censor_target == 0.0 {
        return LifetimeData::complete(t);
    }
    let mu = censoring_rate(theta, censor_target)?;
    let exp = Exp::new(mu).map_err(|e| Error::domain(e.to_string()))?;
    let (times, events) = t
        .into_iter()
        .map(|ti| {
            let c: f64 = exp.sample(rng);
            if ti <= c {
                (ti, true)
            } else {
                (c, false)
            }
        })
        .unzip();
    LifetimeData::new(times, events)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parameter {
    Phi,
    Lambda,
}

impl Parameter {
    pub fn name(&self) -> &'static str {
        match self {
            Parameter::Phi => "phi",
            Parameter::Lambda => "lambda",
        }
    }
}

/// One `(n, method, parameter)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SimRow {
    pub n: usize,
    pub method: Method,
    pub parameter: Parameter,
    /// `mean(θ̂/θ)`.
    pub mre: f64,
    /// `mean((θ̂ − θ)²/θ²)`.
    pub rmse: f64,
    pub coverage: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub rows: Vec<SimRow>,
    /// Mean realized censored fraction per sample size.
    pub censored_fraction: Vec<(usize, f64)>,
}

impl SimResult {
    pub const CSV_HEADER: &'static str = "n,method,parameter,mre,rmse,coverage,failures";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.n,
                r.method,
                r.parameter.name(),
                r.mre,
                r.rmse,
                r.coverage,
                r.failures
            );
        }
        out
    }

    pub fn row(&self, n: usize, method: Method, parameter: Parameter) -> Option<&SimRow> {
        self.rows
            .iter()
            .find(|r| r.n == n && r.method == method && r.parameter == parameter)
    }
}

/// Estimate and coverage indicators of one fit.
type Outcome = Option<([f64; 2], [bool; 2])>;

fn run_method(
    method: Method,
    data: &LifetimeData,
    censored: bool,
    cfg: &ExperimentConfig,
    rng: &mut ChaCha8Rng,
) -> Outcome {
    let fitted: Result<FitReport> = match (method, censored) {
        (Method::Mle, false) => fit::fit_mle(data),
        (Method::Mle, true) => fit::fit_mle_censored(data),
        (Method::Cmle, false) => fit::fit_cmle(data),
        (Method::Cmle | Method::Acmle, _) => fit::fit_acmle(data),
        (Method::Boot, false) => fit::fit_boot(data, cfg.boot_b, rng),
        (Method::Boot, true) => fit::fit_boot_censored(data, cfg.boot_b, rng),
    };
    let report = fitted
        .ok()
        .filter(|r| r.converged)?
        .with_ci_level(cfg.ci_level)
        .ok()?;
    let truth = cfg.theta_true.as_array();
    let est = report.estimates.as_array();
    Some((
        est,
        [
            report.ci[0].contains(truth[0]),
            report.ci[1].contains(truth[1]),
        ],
    ))
}

fn run_replicate(cfg: &ExperimentConfig, n: usize, rep: usize) -> (f64, Vec<Outcome>) {
    let mut rng = ChaCha8Rng::seed_from_u64(replicate_seed(cfg.master_seed, n, rep));
    let censored = cfg.censor_target > 0.0;
    let data = match gen_censored_sample(&cfg.theta_true, n, cfg.censor_target, &mut rng) {
        Ok(d) => d,
        Err(_) => return (f64::NAN, vec![None; cfg.methods.len()]),
    };
    let outcomes = cfg
        .methods
        .iter()
        .map(|&m| run_method(m, &data, censored, cfg, &mut rng))
        .collect();
    (data.censored_fraction(), outcomes)
}

/// Runs every `(n, method)` cell of the design.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<SimResult> {
    cfg.validate()?;
    if cfg.censor_target > 0.0 {
        censoring_rate(&cfg.theta_true, cfg.censor_target)?;
    }
    let truth = cfg.theta_true.as_array();
    let mut rows = Vec::new();
    let mut censored_fraction = Vec::new();
    for &n in &cfg.n_grid {
        let reps: Vec<(f64, Vec<Outcome>)> = (0..cfg.reps)
            .into_par_iter()
            .map(|rep| run_replicate(cfg, n, rep))
            .collect();
        let frac = reps.iter().map(|r| r.0).sum::<f64>() / cfg.reps as f64;
        censored_fraction.push((n, frac));
        for (k, &method) in cfg.methods.iter().enumerate() {
            let label = if method == Method::Cmle && cfg.censor_target > 0.0 {
                Method::Acmle
            } else {
                method
            };
            let ok: Vec<([f64; 2], [bool; 2])> = reps.iter().filter_map(|r| r.1[k]).collect();
            let failures = cfg.reps - ok.len();
            let abort = failures as f64 > MAX_CELL_FAILURE_RATE * cfg.reps as f64;
            if abort {
                log::warn!(
                    "n = {n}, {label}: {failures} of {} replicates failed",
                    cfg.reps
                );
            }
            let m = ok.len() as f64;
            for (i, parameter) in [Parameter::Phi, Parameter::Lambda].into_iter().enumerate() {
                let (mut mre, mut rmse, mut cover) = (0.0, 0.0, 0.0);
                for (est, cov) in &ok {
                    let rel = est[i] / truth[i];
                    mre += rel;
                    rmse += (rel - 1.0).powi(2);
                    cover += f64::from(u8::from(cov[i]));
                }
                let (mre, rmse, coverage) = if abort {
                    (f64::NAN, f64::NAN, f64::NAN)
                } else {
                    (mre / m, rmse / m, cover / m)
                };
                rows.push(SimRow {
                    n,
                    method: label,
                    parameter,
                    mre,
                    rmse,
                    coverage,
                    failures,
                });
            }
        }
    }
    Ok(SimResult {
        rows,
        censored_fraction,
    })
}
