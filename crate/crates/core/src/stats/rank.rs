//! Spearman rank correlation and lagged scans with permutation p-values.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::detrend_values;
use crate::error::{Error, Result};
use crate::series::{align, DatedSeries};

/// Minimum overlap for a lag to be reported.
pub const MIN_LAG_OVERLAP: usize = 10;

/// 1-based ranks with ties sharing the average of their positions.
pub fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // Positions i..j (0-based) share rank mean((i+1)..=j).
        let rank = (i + j + 1) as f64 / 2.0;
        for &k in &order[i..j] {
            ranks[k] = rank;
        }
        i = j;
    }
    ranks
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("{} vs {} values", x.len(), y.len())));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::Undefined("correlation with a constant series".into()));
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn spearman_values(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!("{} vs {} values", x.len(), y.len())));
    }
    if x.len() < 3 {
        return Err(Error::invalid("rank correlation needs at least 3 points"));
    }
    pearson(&mid_ranks(x), &mid_ranks(y))
}

/// Spearman's rho between two series of equal length.
pub fn spearman(x: &DatedSeries, y: &DatedSeries) -> Result<f64> {
    spearman_values(&x.values, &y.values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagCorrelation {
    pub lag: usize,
    pub rho: f64,
    pub p_value: f64,
    pub n_effective: usize,
}

fn centered(v: &[f64]) -> Vec<f64> {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| x - m).collect()
}

/// Permutation p-value of a rank correlation: the share of shuffles whose
/// |rho| reaches the observed one, counting the observation itself.
fn permutation_p(rx: &[f64], ry: &[f64], n_perm: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let cx = centered(rx);
    let mut cy = centered(ry);
    let sxx: f64 = cx.iter().map(|v| v * v).sum();
    let syy: f64 = cy.iter().map(|v| v * v).sum();
    let denom = (sxx * syy).sqrt();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let rho = (dot(&cx, &cy) / denom).clamp(-1.0, 1.0);
    let threshold = rho.abs() - 1e-12;
    let mut hits = 0usize;
    for _ in 0..n_perm {
        cy.shuffle(rng);
        if (dot(&cx, &cy) / denom).abs() >= threshold {
            hits += 1;
        }
    }
    (rho, (hits + 1) as f64 / (n_perm + 1) as f64)
}

/// Spearman's rho between `x(t)` and `y(t + lag)` for each lag in
/// `0..=max_lag`, after removing each series' linear trend.
///
/// Series are first restricted to their common dates. Each lag draws its
/// shuffles from its own ChaCha8 stream (`stream = lag`), so results do not
/// depend on how lags are scheduled across threads.
pub fn lagged_correlation_scan(
    x: &DatedSeries,
    y: &DatedSeries,
    max_lag: usize,
    n_perm: usize,
    seed: u64,
) -> Result<Vec<LagCorrelation>> {
    let (x, y) = align(x, y)?;
    let n = x.len();
    if 2 * max_lag >= n {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be below half the series length {n}"
        )));
    }
    let dx = detrend_values(&x.values)?;
    let dy = detrend_values(&y.values)?;
    let results: Vec<Result<Option<LagCorrelation>>> = (0..=max_lag)
        .into_par_iter()
        .map(|lag| {
            let overlap = n - lag;
            if overlap < MIN_LAG_OVERLAP {
                log::warn!("lag {lag}: overlap of {overlap} points is too short; omitted");
                return Ok(None);
            }
            let xs = &dx[..overlap];
            let ys = &dy[lag..];
            let rx = mid_ranks(xs);
            let ry = mid_ranks(ys);
            if rx.iter().all(|&r| r == rx[0]) || ry.iter().all(|&r| r == ry[0]) {
                return Err(Error::Undefined(format!("constant series at lag {lag}")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(lag as u64);
            let (rho, p_value) = permutation_p(&rx, &ry, n_perm, &mut rng);
            Ok(Some(LagCorrelation {
                lag,
                rho,
                p_value,
                n_effective: overlap,
            }))
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(c) = r? {
            out.push(c);
        }
    }
    Ok(out)
}
