//! Ordinary least squares through a Householder QR factorization.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coef: Vec<f64>,
    pub stderr: Vec<f64>,
    pub rss: f64,
    pub n_obs: usize,
}

impl OlsFit {
    pub fn n_params(&self) -> usize {
        self.coef.len()
    }

    /// Akaike criterion `n·ln(RSS/n) + 2k`.
    pub fn aic(&self) -> f64 {
        let n = self.n_obs as f64;
        n * (self.rss / n).ln() + 2.0 * self.n_params() as f64
    }
}

/// Regresses `y` on the given columns (include a column of ones for an
/// intercept).
pub fn ols(y: &[f64], columns: &[Vec<f64>]) -> Result<OlsFit> {
    let n = y.len();
    let k = columns.len();
    if k == 0 || columns.iter().any(|c| c.len() != n) {
        return Err(Error::Dimension("regressor columns must match the response".into()));
    }
    if n <= k {
        return Err(Error::Singular(format!("{n} observations for {k} parameters")));
    }
    let x = DMatrix::from_fn(n, k, |r, c| columns[c][r]);
    let qr = x.qr();
    let r = qr.r();
    let scale = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE)) {
        return Err(Error::Singular("regressors are collinear".into()));
    }
    let qty = qr.q().transpose() * DVector::from_column_slice(y);
    let coef = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Singular("triangular solve failed".into()))?;
    let fitted = DMatrix::from_fn(n, k, |row, c| columns[c][row]) * &coef;
    let rss: f64 = y.iter().zip(fitted.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    let sigma2 = rss / (n - k) as f64;
    let r_inv = r
        .solve_upper_triangular(&DMatrix::identity(k, k))
        .ok_or_else(|| Error::Singular("triangular inverse failed".into()))?;
    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ, so its diagonal is the squared row norms of R⁻¹.
    let stderr = (0..k)
        .map(|i| (sigma2 * r_inv.row(i).iter().map(|v| v * v).sum::<f64>()).sqrt())
        .collect();
    Ok(OlsFit {
        coef: coef.iter().copied().collect(),
        stderr,
        rss,
        n_obs: n,
    })
}
