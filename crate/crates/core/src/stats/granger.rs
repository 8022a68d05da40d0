//! Lagged β-regression of spread changes on topic-coverage changes:
//! `ΔCT(t+τ) = α + β·ΔT_i(t) + w_{t+τ}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::adf::{adf_test, schwert_max_lag, AdfResult};
use super::first_difference;
use crate::coverage::TopicCoverage;
use crate::error::{Error, Result};
use crate::series::DatedSeries;

/// Significance threshold for flagging a (topic, τ) cell.
pub const GRANGER_ALPHA: f64 = 0.01;

const MIN_OVERLAP: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaFit {
    pub tau: usize,
    pub beta: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Regresses `dct(t + tau)` on `dt(t)` with an intercept, pairing values by
/// calendar date.
pub fn granger_beta(dct: &DatedSeries, dt: &DatedSeries, tau: usize) -> Result<BetaFit> {
    let shift = chrono::Duration::days(tau as i64);
    let (x, y): (Vec<f64>, Vec<f64>) = dt
        .dates()
        .zip(&dt.values)
        .filter_map(|(d, &v)| dct.value_on(d + shift).map(|w| (v, w)))
        .unzip();
    let n = x.len();
    if n < MIN_OVERLAP {
        return Err(Error::invalid(format!(
            "lag {tau}: overlap of {n} points is below {MIN_OVERLAP}"
        )));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Undefined(format!("`{}` has zero variance", dt.label)));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let beta = sxy / sxx;
    let intercept = my - beta * mx;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(a, b)| {
            let e = b - intercept - beta * a;
            e * e
        })
        .sum();
    let df = nf - 2.0;
    let stderr = (rss / df / sxx).sqrt();
    let (t_stat, p_value) = if stderr > 0.0 {
        let t = beta / stderr;
        let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| Error::invalid(e.to_string()))?;
        (t, (2.0 * dist.sf(t.abs())).min(1.0))
    } else if beta == 0.0 {
        (0.0, 1.0)
    } else {
        (beta.signum() * f64::INFINITY, 0.0)
    };
    Ok(BetaFit {
        tau,
        beta,
        intercept,
        stderr,
        t_stat,
        p_value,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrangerResult {
    pub topic_id: usize,
    pub tau: usize,
    pub beta: f64,
    pub stderr: f64,
    pub t_stat: f64,
    pub p_value: f64,
    pub n: usize,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrangerScan {
    pub results: Vec<GrangerResult>,
    /// ADF check of the differenced spread; `None` when it is too short.
    pub adf: Option<AdfResult>,
    pub unit_root_warning: bool,
    pub cells_tested: usize,
}

impl GrangerScan {
    pub fn significant(&self) -> impl Iterator<Item = &GrangerResult> {
        self.results.iter().filter(|r| r.significant)
    }
}

/// Differences the spread and every coverage series, checks the differenced
/// spread for a unit root, and fits [`granger_beta`] for each topic and each
/// `τ ∈ 0..=max_lag`. Results are ordered by topic, then τ.
pub fn granger_scan(
    spread: &DatedSeries,
    coverage: &TopicCoverage,
    max_lag: usize,
) -> Result<GrangerScan> {
    if 2 * max_lag >= spread.len() {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be below half the series length {}",
            spread.len()
        )));
    }
    let dct = first_difference(spread)?;
    let adf = if dct.len() >= 25 {
        let max_order = schwert_max_lag(dct.len()).min((dct.len() - 13) / 2);
        match adf_test(&dct, max_order) {
            Ok(r) => Some(r),
            Err(e) => {
                log::warn!("ADF check of the differenced spread failed: {e}");
                None
            }
        }
    } else {
        None
    };
    let unit_root_warning = adf.map_or(true, |r| !r.reject_5pct);
    if unit_root_warning {
        log::warn!("differenced spread is not shown to be stationary at 5%");
    }

    let diffs: Vec<DatedSeries> = coverage
        .series
        .iter()
        .map(first_difference)
        .collect::<Result<_>>()?;
    let cells: Vec<(usize, usize)> = (0..diffs.len())
        .flat_map(|k| (0..=max_lag).map(move |tau| (k, tau)))
        .collect();
    let results = cells
        .par_iter()
        .map(|&(k, tau)| {
            let fit = granger_beta(&dct, &diffs[k], tau)?;
            Ok(GrangerResult {
                topic_id: coverage.topic_ids[k],
                tau,
                beta: fit.beta,
                stderr: fit.stderr,
                t_stat: fit.t_stat,
                p_value: fit.p_value,
                n: fit.n,
                significant: fit.p_value < GRANGER_ALPHA,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GrangerScan {
        cells_tested: results.len(),
        results,
        adf,
        unit_root_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverage::Normalization;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn series(values: Vec<f64>, label: &str) -> DatedSeries {
        DatedSeries::new("2016-08-01".parse().unwrap(), values, label).unwrap()
    }

    fn gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
        (0..n).map(|_| rng.sample(StandardNormal)).collect()
    }

    /// Solves the 2×2 normal equations by Cramer's rule.
    fn normal_equations(x: &[f64], y: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        let sx: f64 = x.iter().sum();
        let sy: f64 = y.iter().sum();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
        let det = n * sxx - sx * sx;
        let a = (sxx * sy - sx * sxy) / det;
        let b = (n * sxy - sx * sy) / det;
        let rss: f64 = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
        (b, (rss / (n - 2.0) * n / det).sqrt())
    }

    fn planted(seed: u64, n: usize, tau: usize, beta: f64, sigma: f64) -> (DatedSeries, DatedSeries) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dt = gaussian(&mut rng, n);
        let noise = gaussian(&mut rng, n);
        let dct: Vec<f64> = (0..n)
            .map(|t| {
                let driven = if t >= tau { beta * dt[t - tau] } else { 0.0 };
                driven + sigma * noise[t]
            })
            .collect();
        (series(dct, "dct"), series(dt, "dt"))
    }

    #[test]
    fn matches_normal_equations() {
        for seed in 0..20 {
            let (dct, dt) = planted(seed, 80, 3, 0.5, 1.0);
            for tau in [0, 3, 7] {
                let fit = granger_beta(&dct, &dt, tau).unwrap();
                let x = &dt.values[..80 - tau];
                let y = &dct.values[tau..];
                let (b, se) = normal_equations(x, y);
                assert!((fit.beta - b).abs() < 1e-8);
                assert!((fit.stderr - se).abs() < 1e-8);
                assert_eq!(fit.n, 80 - tau);
                assert!((fit.t_stat - fit.beta / fit.stderr).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn recovers_planted_beta() {
        let (dct, dt) = planted(42, 200, 5, 0.8, 0.1);
        let fit = granger_beta(&dct, &dt, 5).unwrap();
        assert!((fit.beta - 0.8).abs() < 0.1);
        assert!(fit.p_value < 0.01);
    }

    #[test]
    fn noise_free_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let v = gaussian(&mut rng, 50);
        let fit = granger_beta(&series(v.clone(), "a"), &series(v, "b"), 0).unwrap();
        assert!((fit.beta - 1.0).abs() < 1e-12);
        assert!(fit.stderr < 1e-7);
    }

    #[test]
    fn errors() {
        let flat = series(vec![0.5; 40], "flat");
        let other = series((0..40).map(f64::from).collect(), "x");
        assert!(matches!(granger_beta(&other, &flat, 0), Err(Error::Undefined(_))));
        assert!(granger_beta(&other, &other, 25).is_err());
    }

    fn coverage_of(series: Vec<DatedSeries>) -> TopicCoverage {
        TopicCoverage {
            mode: Normalization::UnitArea,
            topic_ids: (1..=series.len()).collect(),
            raw: series.clone(),
            series,
        }
    }

    fn cumsum(v: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        v.iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect()
    }

    #[test]
    fn scan_flags_planted_topic() {
        // One of five topics drives the spread at τ = 10. The planted cell
        // must be flagged every time; the other 104 cells are null and are
        // flagged at about the nominal 1% rate.
        let (n, tau) = (200, 10);
        let mut false_flags = 0;
        let mut null_cells = 0;
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let topics: Vec<Vec<f64>> = (0..5).map(|_| gaussian(&mut rng, n)).collect();
            let noise = gaussian(&mut rng, n);
            let dct: Vec<f64> = (0..n)
                .map(|t| if t >= tau { 0.8 * topics[2][t - tau] } else { 0.0 } + 0.1 * noise[t])
                .collect();
            let spread = series(cumsum(&dct), "spread");
            let cov = coverage_of(
                topics
                    .iter()
                    .enumerate()
                    .map(|(k, d)| series(cumsum(d), &format!("t{k}")))
                    .collect(),
            );
            let scan = granger_scan(&spread, &cov, 20).unwrap();
            assert_eq!(scan.cells_tested, 5 * 21);
            let planted = scan.results.iter().find(|r| r.topic_id == 3 && r.tau == 10).unwrap();
            assert!(planted.significant && (planted.beta - 0.8).abs() < 0.1);
            false_flags += scan.significant().filter(|r| (r.topic_id, r.tau) != (3, 10)).count();
            null_cells += scan.cells_tested - 1;
        }
        let rate = false_flags as f64 / null_cells as f64;
        assert!(rate < 0.025, "false positive rate {rate}");
    }

    #[test]
    fn empty_topic_set_gives_empty_scan() {
        let spread = series((0..60).map(|t| ((t * 7) % 11) as f64).collect(), "spread");
        let scan = granger_scan(&spread, &coverage_of(vec![]), 10).unwrap();
        assert!(scan.results.is_empty());
        assert_eq!(scan.cells_tested, 0);
    }

    #[test]
    fn independent_topics_flag_about_one_percent() {
        let (mut flagged, mut total) = (0, 0);
        for seed in 0..40 {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
            let spread = series(cumsum(&gaussian(&mut rng, 150)), "spread");
            let cov = coverage_of(
                (0..5)
                    .map(|k| series(cumsum(&gaussian(&mut rng, 150)), &format!("t{k}")))
                    .collect(),
            );
            let scan = granger_scan(&spread, &cov, 10).unwrap();
            flagged += scan.significant().count();
            total += scan.cells_tested;
        }
        let rate = flagged as f64 / total as f64;
        assert!(rate < 0.03, "false positive rate {rate}");
    }
}
