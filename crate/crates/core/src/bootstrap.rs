//! Percentile bootstrap for the sentiment-bias statistic.
//!
//! Resample `i` draws from ChaCha8 seeded with the run seed on stream `i`,
//! so the set of resampled values does not depend on the number of worker
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sentiment::{sentiment_bias, LabeledMention, SentimentTally};

pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), one stream per resample";
pub const DEFAULT_RESAMPLES: usize = 10_000;
pub const DEFAULT_GAMMA: f64 = 0.95;
const MIN_RESAMPLES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub gamma: f64,
    /// Fraction of resamples with SB ≤ 0.
    pub p_sign: f64,
    /// Standard deviation of the resampled values.
    pub stderr: f64,
    pub ci_half_width: f64,
    pub resamples: usize,
    pub seed: u64,
    pub n: usize,
}

fn check(mentions: &[LabeledMention], resamples: usize) -> Result<()> {
    if mentions.is_empty() {
        return Err(Error::invalid("bootstrap of an empty mention list"));
    }
    if resamples < MIN_RESAMPLES {
        return Err(Error::invalid(format!(
            "at least {MIN_RESAMPLES} resamples are required, got {resamples}"
        )));
    }
    Ok(())
}

/// SB of each of `resamples` draws of `n` mentions with replacement, in
/// resample order.
pub fn resample_sbs(mentions: &[LabeledMention], resamples: usize, seed: u64) -> Vec<f64> {
    let contrib: Vec<i64> = mentions.iter().map(|m| m.contribution()).collect();
    let n = contrib.len();
    (0..resamples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let sum: i64 = (0..n).map(|_| contrib[rng.gen_range(0..n)]).sum();
            sum as f64 / n as f64
        })
        .collect()
}

/// Linear-interpolation quantile of sorted data (Hyndman–Fan type 7).
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn std_dev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

pub fn bootstrap_sb(
    mentions: &[LabeledMention],
    resamples: usize,
    gamma: f64,
    seed: u64,
) -> Result<BootstrapResult> {
    check(mentions, resamples)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    let point = sentiment_bias(&SentimentTally::from_labels(mentions))?.value;
    let mut sbs = resample_sbs(mentions, resamples, seed);
    let stderr = std_dev(&sbs);
    let p_sign = sbs.iter().filter(|&&v| v <= 0.0).count() as f64 / resamples as f64;
    sbs.sort_by(f64::total_cmp);
    let ci_low = quantile_sorted(&sbs, (1.0 - gamma) / 2.0);
    let ci_high = quantile_sorted(&sbs, (1.0 + gamma) / 2.0);
    Ok(BootstrapResult {
        point,
        ci_low,
        ci_high,
        gamma,
        p_sign,
        stderr,
        ci_half_width: (ci_high - ci_low) / 2.0,
        resamples,
        seed,
        n: mentions.len(),
    })
}

pub fn bootstrap_stderr(mentions: &[LabeledMention], resamples: usize, seed: u64) -> Result<f64> {
    check(mentions, resamples)?;
    Ok(std_dev(&resample_sbs(mentions, resamples, seed)))
}
