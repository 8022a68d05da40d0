use crate::error::{Error, Result};
use crate::series::DatedSeries;

/// Sample autocorrelations and partial autocorrelations for lags
/// `0..=max_lag`. Both vectors start with 1 at lag 0; partial
/// autocorrelations come from the Durbin–Levinson recursion.
pub fn acf_pacf(s: &DatedSeries, max_lag: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let x = &s.values;
    let n = x.len();
    if 2 * max_lag >= n {
        return Err(Error::invalid(format!(
            "max_lag {max_lag} must be below half the series length {n}"
        )));
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0: f64 = c.iter().map(|v| v * v).sum();
    if c0 == 0.0 {
        return Err(Error::Undefined("autocorrelation of a constant series".into()));
    }
    let acf: Vec<f64> = (0..=max_lag)
        .map(|k| c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / c0)
        .collect();

    let mut pacf = vec![1.0];
    let mut phi: Vec<f64> = Vec::new();
    for k in 1..=max_lag {
        let num = acf[k] - (1..k).map(|j| phi[j - 1] * acf[k - j]).sum::<f64>();
        let den = 1.0 - (1..k).map(|j| phi[j - 1] * acf[j]).sum::<f64>();
        let phi_kk = num / den;
        let next: Vec<f64> = (1..k)
            .map(|j| phi[j - 1] - phi_kk * phi[k - j - 1])
            .chain(std::iter::once(phi_kk))
            .collect();
        phi = next;
        pacf.push(phi_kk);
    }
    Ok((acf, pacf))
}
