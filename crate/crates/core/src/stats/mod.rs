//! Time-series statistics: detrending, rank correlation with lag scans,
//! autocorrelation diagnostics, the augmented Dickey–Fuller test and the
//! lagged β-regression on differenced series.
//!
//! The general ARMA form `x_t = Σ φ_i x_{t−i} + Σ θ_j w_{t−j} + w_t` is only
//! used diagnostically here (through [`acf_pacf`]); the spread's first
//! difference is treated as white noise `w_t`, and a topic's influence is
//! estimated through the single coefficient of [`granger_beta`]. The moving
//! average terms `θ_j` are not estimated.

mod acf;
mod adf;
mod granger;
mod rank;
pub mod regression;

pub use acf::acf_pacf;
pub use adf::{adf_test, schwert_max_lag, AdfResult, ADF_CRITICAL_VALUES};
pub use granger::{granger_beta, granger_scan, BetaFit, GrangerResult, GrangerScan, GRANGER_ALPHA};
pub use rank::{lagged_correlation_scan, mid_ranks, pearson, spearman, spearman_values, LagCorrelation};

use crate::error::{Error, Result};
use crate::series::DatedSeries;

/// Residuals of the least-squares line through `(i, values[i])`.
pub fn detrend_values(values: &[f64]) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(Error::invalid(format!("detrending needs at least 3 points, got {n}")));
    }
    let nf = n as f64;
    let mean_t = (nf - 1.0) / 2.0;
    let mean_y = values.iter().sum::<f64>() / nf;
    let mut sty = 0.0;
    let mut stt = 0.0;
    for (i, &y) in values.iter().enumerate() {
        let dt = i as f64 - mean_t;
        sty += dt * (y - mean_y);
        stt += dt * dt;
    }
    let slope = sty / stt;
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &y)| y - mean_y - slope * (i as f64 - mean_t))
        .collect())
}

pub fn linear_detrend(s: &DatedSeries) -> Result<DatedSeries> {
    Ok(DatedSeries {
        start_date: s.start_date,
        values: detrend_values(&s.values)?,
        label: s.label.clone(),
    })
}

/// Consecutive differences; the result starts one day later.
pub fn first_difference(s: &DatedSeries) -> Result<DatedSeries> {
    if s.len() < 2 {
        return Err(Error::invalid("differencing needs at least 2 points"));
    }
    Ok(DatedSeries {
        start_date: s.date_at(1),
        values: s.values.windows(2).map(|w| w[1] - w[0]).collect(),
        label: format!("d_{}", s.label),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: Vec<f64>) -> DatedSeries {
        DatedSeries::new("2016-08-01".parse().unwrap(), values, "s").unwrap()
    }

    fn slope_and_mean(v: &[f64]) -> (f64, f64) {
        let n = v.len() as f64;
        let mt = (n - 1.0) / 2.0;
        let my = v.iter().sum::<f64>() / n;
        let num: f64 = v.iter().enumerate().map(|(i, y)| (i as f64 - mt) * (y - my)).sum();
        let den: f64 = (0..v.len()).map(|i| (i as f64 - mt).powi(2)).sum();
        (num / den, my)
    }

    #[test]
    fn exact_line_detrends_to_zero() {
        let s = series((0..20).map(|t| 2.0 * t as f64 + 3.0).collect());
        assert!(linear_detrend(&s).unwrap().values.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn flat_zero_mean_series_unchanged() {
        let v = vec![1.0, -1.0, -1.0, 1.0];
        let out = linear_detrend(&series(v.clone())).unwrap().values;
        for (a, b) in out.iter().zip(&v) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn quadratic_residuals_match_normal_equations() {
        let v: Vec<f64> = (0..10).map(|t| (t * t) as f64).collect();
        // Normal equations for y = a + b t over t = 0..9:
        // [10 45; 45 285] [a b]ᵀ = [285 2025]ᵀ  →  b = 9, a = −12.
        let expected: Vec<f64> = (0..10).map(|t| (t * t) as f64 - (-12.0 + 9.0 * t as f64)).collect();
        let out = detrend_values(&v).unwrap();
        for (a, b) in out.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-10);
        }
        let (slope, mean) = slope_and_mean(&out);
        assert!(slope.abs() < 1e-9 && mean.abs() < 1e-9);
        let again = detrend_values(&out).unwrap();
        for (a, b) in again.iter().zip(&out) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn short_series_rejected() {
        assert!(detrend_values(&[1.0, 2.0]).is_err());
        assert!(first_difference(&series(vec![1.0])).is_err());
    }

    #[test]
    fn differences() {
        let c = first_difference(&series(vec![4.0; 5])).unwrap();
        assert_eq!(c.values, vec![0.0; 4]);
        let q = first_difference(&series((0..5).map(|t| (t * t) as f64).collect())).unwrap();
        assert_eq!(q.values, vec![1.0, 3.0, 5.0, 7.0]);
        assert_eq!(q.start_date, "2016-08-02".parse().unwrap());
    }

    proptest::proptest! {
        #[test]
        fn cumulative_sum_then_difference_recovers(v in proptest::collection::vec(-50.0f64..50.0, 1..40)) {
            let mut cum = vec![0.0];
            for x in &v {
                cum.push(cum.last().unwrap() + x);
            }
            let d = first_difference(&series(cum)).unwrap();
            for (a, b) in d.values.iter().zip(&v) {
                proptest::prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn detrend_leaves_zero_mean_and_slope(v in proptest::collection::vec(-1e3f64..1e3, 3..60)) {
            let out = detrend_values(&v).unwrap();
            let (slope, mean) = slope_and_mean(&out);
            proptest::prop_assert!(slope.abs() < 1e-9 && mean.abs() < 1e-9);
        }
    }
}
