//! Nonparametric bootstrap over observations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, IwlParams, LifetimeData, Result};

/// Smallest accepted number of resamples.
pub const MIN_BOOT_REPS: usize = 100;
/// Largest tolerated fraction of failed replicates.
const MAX_FAILED_FRACTION: f64 = 0.10;

pub(crate) struct BootstrapOutcome {
    pub mean: [f64; 2],
    pub dropped: usize,
}

/// Bias-corrected estimate `2θ̂ − mean(θ̂*)` as a raw pair (components may
/// be nonpositive).
pub fn bootstrap_correction(estimate: &IwlParams, replicates: &[IwlParams]) -> [f64; 2] {
    let m = replicates.len() as f64;
    let mut mean = [0.0; 2];
    for r in replicates {
        mean[0] += r.phi() / m;
        mean[1] += r.lambda() / m;
    }
    [
        2.0 * estimate.phi() - mean[0],
        2.0 * estimate.lambda() - mean[1],
    ]
}

/// Fits `reps` resamples drawn with replacement (pairs `(tᵢ, δᵢ)` are kept
/// together). One seed per replicate is drawn from `rng` up front, so the
/// result does not depend on scheduling.
pub(crate) fn bootstrap_means<R, F>(
    data: &LifetimeData,
    reps: usize,
    rng: &mut R,
    fit: F,
) -> Result<BootstrapOutcome>
where
    R: Rng + ?Sized,
    F: Fn(&LifetimeData) -> Result<IwlParams> + Sync,
{
    if reps < MIN_BOOT_REPS {
        return Err(Error::Config(format!(
            "bootstrap needs at least {MIN_BOOT_REPS} resamples, got {reps}"
        )));
    }
    let n = data.n();
    let seeds: Vec<u64> = (0..reps).map(|_| rng.random()).collect();
    let fits: Vec<Option<IwlParams>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let idx: Vec<usize> = (0..n).map(|_| r.random_range(0..n)).collect();
            fit(&data.resample(&idx)).ok()
        })
        .collect();
    let ok: Vec<IwlParams> = fits.iter().flatten().copied().collect();
    let failed = reps - ok.len();
    if failed as f64 > MAX_FAILED_FRACTION * reps as f64 || ok.is_empty() {
        return Err(Error::Bootstrap {
            failed,
            total: reps,
        });
    }
    let m = ok.len() as f64;
    let mean = ok.iter().fold([0.0; 2], |acc, p| {
        [acc[0] + p.phi() / m, acc[1] + p.lambda() / m]
    });
    Ok(BootstrapOutcome {
        mean,
        dropped: failed,
    })
}
