//! Design-matrix standardization.
//!
//! The samplers and closed-form fits all assume columns of X scaled to mean 0
//! and standard deviation 1 and a centered response. [`Dataset`] performs that
//! transformation once and keeps the statistics needed to undo it.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum DataError {
    #[error("column {0} is constant (zero standard deviation)")]
    ConstantColumn(usize),
    #[error("dimension mismatch: x has {x_rows} rows but y has {y_len} entries")]
    DimensionMismatch { x_rows: usize, y_len: usize },
    #[error("need at least 2 observations, got {0}")]
    TooFewRows(usize),
    #[error("need at least 1 predictor column")]
    NoColumns,
}

/// A regression problem in both raw and standardized form.
///
/// Column statistics use the population convention (divisor n).
#[derive(Debug, Clone)]
pub struct Dataset {
    pub x_raw: DMatrix<f64>,
    pub y_raw: DVector<f64>,
    pub x_std: DMatrix<f64>,
    pub y_centered: DVector<f64>,
    pub col_means: DVector<f64>,
    pub col_sds: DVector<f64>,
    pub y_mean: f64,
    pub n: usize,
    pub p: usize,
}

/// Standardize the columns of `x_raw` and center `y_raw`.
pub fn standardize(x_raw: DMatrix<f64>, y_raw: DVector<f64>) -> Result<Dataset, DataError> {
    let (n, p) = (x_raw.nrows(), x_raw.ncols());
    if y_raw.len() != n {
        return Err(DataError::DimensionMismatch { x_rows: n, y_len: y_raw.len() });
    }
    if n < 2 {
        return Err(DataError::TooFewRows(n));
    }
    if p == 0 {
        return Err(DataError::NoColumns);
    }

    let mut x_std = x_raw.clone();
    let mut col_means = DVector::zeros(p);
    let mut col_sds = DVector::zeros(p);
    for j in 0..p {
        let mut col = x_std.column_mut(j);
        let mean = col.iter().sum::<f64>() / n as f64;
        col.iter_mut().for_each(|v| *v -= mean);
        // Second centering pass sweeps out the rounding residue so the
        // standardized mean lands at machine precision.
        let residue = col.iter().sum::<f64>() / n as f64;
        col.iter_mut().for_each(|v| *v -= residue);
        let sd = (col.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        if sd == 0.0 {
            return Err(DataError::ConstantColumn(j));
        }
        col.iter_mut().for_each(|v| *v /= sd);
        col_means[j] = mean + residue;
        col_sds[j] = sd;
    }

    let y_mean = y_raw.iter().sum::<f64>() / n as f64;
    let mut y_centered = y_raw.map(|v| v - y_mean);
    let y_residue = y_centered.iter().sum::<f64>() / n as f64;
    y_centered.iter_mut().for_each(|v| *v -= y_residue);

    Ok(Dataset {
        x_raw,
        y_raw,
        x_std,
        y_centered,
        col_means,
        col_sds,
        y_mean: y_mean + y_residue,
        n,
        p,
    })
}

impl Dataset {
    /// Map coefficients on the standardized scale to the original scale.
    /// Returns (coefficients, intercept).
    pub fn to_raw_scale(&self, beta_std: &DVector<f64>) -> (DVector<f64>, f64) {
        let beta_raw =
            DVector::from_fn(self.p, |j, _| beta_std[j] / self.col_sds[j]);
        let intercept = self.y_mean
            - (0..self.p)
                .map(|j| beta_raw[j] * self.col_means[j])
                .sum::<f64>();
        (beta_raw, intercept)
    }
}
