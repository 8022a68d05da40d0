//! Augmented Dickey–Fuller unit-root test with a constant term.

use serde::{Deserialize, Serialize};

use super::regression::{ols, OlsFit};
use crate::error::{Error, Result};
use crate::series::DatedSeries;

/// Asymptotic critical values of the constant-only ADF statistic at 1%, 5%
/// and 10%.
pub const ADF_CRITICAL_VALUES: [f64; 3] = [-3.43, -2.86, -2.57];

const MIN_LENGTH: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    pub statistic: f64,
    pub lag_order: usize,
    pub n_obs: usize,
    pub reject_1pct: bool,
    pub reject_5pct: bool,
    pub reject_10pct: bool,
}

/// Schwert's rule `⌊12·(n/100)^{1/4}⌋`.
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Regression rows `t ∈ first..n` of
/// `Δy_t = α + γ·y_{t−1} + Σ_{i=1..p} δ_i·Δy_{t−i}`.
fn fit(y: &[f64], p: usize, first: usize) -> Result<OlsFit> {
    let n = y.len();
    let dy = |t: usize| y[t] - y[t - 1];
    let rows = first..n;
    let response: Vec<f64> = rows.clone().map(dy).collect();
    let mut columns = vec![vec![1.0; rows.len()], rows.clone().map(|t| y[t - 1]).collect()];
    for i in 1..=p {
        columns.push(rows.clone().map(|t| dy(t - i)).collect());
    }
    ols(&response, &columns)
}

/// Tests for a unit root, choosing the number of lagged differences in
/// `0..=max_lag_order` by AIC on a common sample and refitting the chosen
/// order on every usable observation.
pub fn adf_test(s: &DatedSeries, max_lag_order: usize) -> Result<AdfResult> {
    let y = &s.values;
    let n = y.len();
    if n < MIN_LENGTH {
        return Err(Error::invalid(format!("ADF needs at least {MIN_LENGTH} points, got {n}")));
    }
    // Keep at least ten residual degrees of freedom at the largest order.
    let usable = n - 1 - max_lag_order;
    if usable < max_lag_order + 2 + 10 {
        return Err(Error::invalid(format!(
            "max_lag_order {max_lag_order} is too large for {n} points"
        )));
    }

    let mut best: Option<(usize, f64)> = None;
    for p in 0..=max_lag_order {
        let aic = match fit(y, p, max_lag_order + 1) {
            Ok(f) => f.aic(),
            Err(Error::Singular(_)) => continue,
            Err(e) => return Err(e),
        };
        if best.map_or(true, |(_, b)| aic < b) {
            best = Some((p, aic));
        }
    }
    let (lag_order, _) =
        best.ok_or_else(|| Error::Singular("every candidate lag order is singular".into()))?;
    let f = fit(y, lag_order, lag_order + 1)?;
    let (gamma, se) = (f.coef[1], f.stderr[1]);
    let statistic = if se > 0.0 {
        gamma / se
    } else if gamma < 0.0 {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    };
    Ok(AdfResult {
        statistic,
        lag_order,
        n_obs: f.n_obs,
        reject_1pct: statistic < ADF_CRITICAL_VALUES[0],
        reject_5pct: statistic < ADF_CRITICAL_VALUES[1],
        reject_10pct: statistic < ADF_CRITICAL_VALUES[2],
    })
}
