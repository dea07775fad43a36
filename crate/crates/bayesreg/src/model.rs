//! Least squares, ridge, and conditioning diagnostics for the linear model.
//!
//! All conditioning quantities are stated on the Gram matrix XᵀX, so the
//! contract here is a symmetric eigendecomposition of XᵀX rather than an SVD
//! of X.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::dataset::Dataset;

/// Eigenvalue-ratio floor below which the plain least-squares solve refuses.
pub const OLS_RANK_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("design is numerically singular: lambda_min/lambda_max = {ratio:e}")]
    SingularDesign { ratio: f64 },
    #[error("ridge penalty must be nonnegative, got {0}")]
    NegativePenalty(f64),
    #[error("gradient vector X'y is zero; sensitivity bound undefined")]
    ZeroGradient,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Which estimator produced a [`LinearFit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitMethod {
    Ols,
    Ridge,
    MapLasso,
}

impl FitMethod {
    pub fn label(&self) -> &'static str {
        match self {
            FitMethod::Ols => "ols",
            FitMethod::Ridge => "ridge",
            FitMethod::MapLasso => "map-lasso",
        }
    }
}

/// A fitted linear model on the standardized scale together with its
/// original-scale counterpart.
#[derive(Debug, Clone)]
pub struct LinearFit {
    /// Coefficients for the standardized design.
    pub beta: DVector<f64>,
    /// Coefficients for the raw design.
    pub beta_raw: DVector<f64>,
    /// Intercept accompanying `beta_raw`.
    pub intercept: f64,
    /// Mean squared residual (divisor n) on the standardized problem.
    pub residual_variance: f64,
    pub method: FitMethod,
}

/// Condition diagnostics for XᵀX with and without a spectrum shift.
#[derive(Debug, Clone, Copy)]
pub struct ConditioningReport {
    pub kappa: f64,
    pub kappa_shifted: f64,
    pub alpha: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

fn gram_eigenvalues(x: &DMatrix<f64>) -> DVector<f64> {
    let xtx = x.transpose() * x;
    SymmetricEigen::new(xtx).eigenvalues
}

/// Solve the normal equations (XᵀX)β = Xᵀy for an arbitrary design.
///
/// Refuses when the eigenvalue ratio of XᵀX falls below [`OLS_RANK_TOL`].
pub fn ols_solve(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::DimensionMismatch(format!(
            "x has {} rows, y has {}",
            x.nrows(),
            y.len()
        )));
    }
    let xtx = x.transpose() * x;
    let eig = SymmetricEigen::new(xtx.clone());
    let lmax = eig.eigenvalues.max();
    let lmin = eig.eigenvalues.min();
    let ratio = if lmax > 0.0 { lmin / lmax } else { 0.0 };
    if !(ratio > OLS_RANK_TOL) {
        return Err(ModelError::SingularDesign { ratio });
    }
    let xty = x.transpose() * y;
    let chol = nalgebra::Cholesky::new(xtx)
        .ok_or(ModelError::SingularDesign { ratio })?;
    Ok(chol.solve(&xty))
}

/// Solve the ridge system (XᵀX + λI)β = Xᵀy for an arbitrary design.
pub fn ridge_solve(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    lambda: f64,
) -> Result<DVector<f64>, ModelError> {
    if lambda < 0.0 {
        return Err(ModelError::NegativePenalty(lambda));
    }
    if lambda == 0.0 {
        return ols_solve(x, y);
    }
    if x.nrows() != y.len() {
        return Err(ModelError::DimensionMismatch(format!(
            "x has {} rows, y has {}",
            x.nrows(),
            y.len()
        )));
    }
    let p = x.ncols();
    let mut a = x.transpose() * x;
    for j in 0..p {
        a[(j, j)] += lambda;
    }
    let xty = x.transpose() * y;
    let chol = nalgebra::Cholesky::new(a).ok_or(ModelError::SingularDesign {
        ratio: 0.0,
    })?;
    Ok(chol.solve(&xty))
}

fn finish_fit(d: &Dataset, beta: DVector<f64>, method: FitMethod) -> LinearFit {
    let residual = &d.y_centered - &d.x_std * &beta;
    let residual_variance = residual.norm_squared() / d.n as f64;
    let (beta_raw, intercept) = d.to_raw_scale(&beta);
    LinearFit { beta, beta_raw, intercept, residual_variance, method }
}

/// Ordinary least squares on the standardized problem.
pub fn ols_fit(d: &Dataset) -> Result<LinearFit, ModelError> {
    let beta = ols_solve(&d.x_std, &d.y_centered)?;
    Ok(finish_fit(d, beta, FitMethod::Ols))
}

/// Ridge regression on the standardized problem: minimizes
/// ‖y − Xβ‖² + λ‖β‖².
pub fn ridge_fit(d: &Dataset, lambda: f64) -> Result<LinearFit, ModelError> {
    let beta = ridge_solve(&d.x_std, &d.y_centered, lambda)?;
    Ok(finish_fit(
        d,
        beta,
        if lambda == 0.0 { FitMethod::Ols } else { FitMethod::Ridge },
    ))
}

/// Condition number of XᵀX, and of XᵀX + αI after a spectrum shift.
///
/// A singular Gram matrix reports `kappa = +inf` rather than an error.
pub fn condition_number(x: &DMatrix<f64>, alpha: f64) -> ConditioningReport {
    let eigs = gram_eigenvalues(x);
    // Symmetric eigensolvers can return tiny negative values for PSD input.
    let lambda_max = eigs.max().max(0.0);
    let lambda_min = eigs.min().max(0.0);
    let kappa = if lambda_min > 0.0 {
        lambda_max / lambda_min
    } else {
        f64::INFINITY
    };
    let kappa_shifted = if lambda_min + alpha > 0.0 {
        (lambda_max + alpha) / (lambda_min + alpha)
    } else {
        f64::INFINITY
    };
    ConditioningReport { kappa, kappa_shifted, alpha, lambda_min, lambda_max }
}

/// Right-hand side of the least-squares sensitivity bound
/// ‖Δβ‖/‖β‖ ≤ (κ(XᵀX)/cos θ) · ‖δXᵀy‖/‖Xᵀy‖,
/// where θ is the angle between Xᵀy and the range of XᵀX and `delta_rhs`
/// is the perturbation of Xᵀy. Norms are Euclidean.
pub fn sensitivity_bound(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    delta_rhs: &DVector<f64>,
) -> Result<f64, ModelError> {
    if x.nrows() != y.len() {
        return Err(ModelError::DimensionMismatch(format!(
            "x has {} rows, y has {}",
            x.nrows(),
            y.len()
        )));
    }
    if delta_rhs.len() != x.ncols() {
        return Err(ModelError::DimensionMismatch(format!(
            "delta_rhs has {} entries, x has {} columns",
            delta_rhs.len(),
            x.ncols()
        )));
    }
    let gradient = x.transpose() * y;
    let gnorm = gradient.norm();
    if gnorm == 0.0 {
        return Err(ModelError::ZeroGradient);
    }
    let xtx = x.transpose() * x;
    let eig = SymmetricEigen::new(xtx);
    let lambda_max = eig.eigenvalues.max().max(0.0);
    let rank_tol = OLS_RANK_TOL * lambda_max;
    // Project the gradient onto the span of eigenvectors with nonnegligible
    // eigenvalues; cos θ compares that projection with the full gradient.
    let mut proj_sq = 0.0;
    for (j, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam > rank_tol {
            let c = eig.eigenvectors.column(j).dot(&gradient);
            proj_sq += c * c;
        }
    }
    let cos_theta = (proj_sq.sqrt() / gnorm).min(1.0);
    let lambda_min_range = eig
        .eigenvalues
        .iter()
        .copied()
        .filter(|&l| l > rank_tol)
        .fold(f64::INFINITY, f64::min);
    let kappa = if lambda_min_range.is_finite() && lambda_min_range > 0.0 {
        lambda_max / lambda_min_range
    } else {
        f64::INFINITY
    };
    if cos_theta == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(kappa / cos_theta * delta_rhs.norm() / gnorm)
}

/// The 2×2 family ((1,1),(1,1+ε)) whose Gram matrix degenerates as ε → 0.
pub fn correlated_design(eps: f64) -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0 + eps])
}

/// Closed-form condition number of the Gram matrix of [`correlated_design`].
///
/// Algebraically equal to
/// (ε² + (ε+2)√(ε²+4) + 2ε + 4) / (ε² − (ε+2)√(ε²+4) + 2ε + 4);
/// evaluated here as (T + s)²/(4ε²) with T = ε²+2ε+4, s = (ε+2)√(ε²+4),
/// which avoids the catastrophic cancellation in the denominator for small ε.
pub fn correlated_design_kappa(eps: f64) -> f64 {
    if eps == 0.0 {
        return f64::INFINITY;
    }
    let t = eps * eps + 2.0 * eps + 4.0;
    let s = (eps + 2.0) * (eps * eps + 4.0).sqrt();
    (t + s) * (t + s) / (4.0 * eps * eps)
}

/// One row of a [`condition_scan`].
#[derive(Debug, Clone, Copy)]
pub struct ConditionScanRow {
    pub eps: f64,
    pub kappa: f64,
    pub kappa_shifted: f64,
}

/// Sweep the 2×2 correlated family over `eps_grid`, reporting κ(XᵀX) and
/// κ(XᵀX + αI) per point.
pub fn condition_scan(eps_grid: &[f64], alpha: f64) -> Vec<ConditionScanRow> {
    eps_grid
        .iter()
        .map(|&eps| {
            let report = condition_number(&correlated_design(eps), alpha);
            ConditionScanRow {
                eps,
                kappa: report.kappa,
                kappa_shifted: report.kappa_shifted,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::standardize;
    use approx::assert_relative_eq;

    fn design_2x2(eps: f64, delta: f64) -> (DMatrix<f64>, DVector<f64>) {
        (
            correlated_design(eps),
            DVector::from_column_slice(&[2.0, delta + 2.0]),
        )
    }

    #[test]
    fn ols_correlated_family_eps_eq_delta() {
        // beta = (2 - delta/eps, delta/eps) = (1, 1) when eps = delta = 1e-3.
        let (x, y) = design_2x2(1e-3, 1e-3);
        let beta = ols_solve(&x, &y).unwrap();
        assert_relative_eq!(beta[0], 1.0, max_relative = 1e-6);
        assert_relative_eq!(beta[1], 1.0, max_relative = 1e-6);
    }

    #[test]
    fn ols_correlated_family_delta_zero() {
        let (x, y) = design_2x2(1e-3, 0.0);
        let beta = ols_solve(&x, &y).unwrap();
        assert_relative_eq!(beta[0], 2.0, max_relative = 1e-6);
        assert!(beta[1].abs() < 1e-6);
    }

    #[test]
    fn ols_orthonormal_columns() {
        // Orthonormal columns: beta = X'y for any y.
        let x = DMatrix::from_column_slice(
            4,
            2,
            &[0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5],
        );
        let y = DVector::from_column_slice(&[1.0, -2.0, 0.5, 3.0]);
        let beta = ols_solve(&x, &y).unwrap();
        let expect = x.transpose() * &y;
        assert_relative_eq!(beta[0], expect[0], max_relative = 1e-12);
        assert_relative_eq!(beta[1], expect[1], max_relative = 1e-12);
    }

    #[test]
    fn ols_refuses_singular() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let y = DVector::from_column_slice(&[1.0, 2.0]);
        assert!(matches!(
            ols_solve(&x, &y),
            Err(ModelError::SingularDesign { .. })
        ));
    }

    #[test]
    fn ols_residual_orthogonal_and_variance() {
        use rand::Rng;
        let mut rng = crate::rng::RngStream::new(21, 0).rng();
        let x = DMatrix::from_fn(30, 4, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(30, |_, _| rng.gen_range(-1.0..1.0));
        let d = standardize(x, y).unwrap();
        let fit = ols_fit(&d).unwrap();
        let r = &d.y_centered - &d.x_std * &fit.beta;
        let xtr = d.x_std.transpose() * &r;
        assert!(xtr.norm() < 1e-8 * d.y_centered.norm().max(1.0));
        assert_relative_eq!(
            fit.residual_variance,
            r.norm_squared() / 30.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn ridge_zero_matches_ols() {
        use rand::Rng;
        let mut rng = crate::rng::RngStream::new(22, 0).rng();
        let x = DMatrix::from_fn(25, 3, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(25, |_, _| rng.gen_range(-1.0..1.0));
        let d = standardize(x, y).unwrap();
        let ols = ols_fit(&d).unwrap();
        let ridge = ridge_fit(&d, 0.0).unwrap();
        for j in 0..3 {
            assert!((ols.beta[j] - ridge.beta[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn ridge_total_shrinkage_limit() {
        use rand::Rng;
        let mut rng = crate::rng::RngStream::new(23, 0).rng();
        let x = DMatrix::from_fn(25, 3, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(25, |_, _| rng.gen_range(-1.0..1.0));
        let d = standardize(x, y).unwrap();
        let fit = ridge_fit(&d, 1e12).unwrap();
        assert!(fit.beta.norm() < 1e-6, "norm {}", fit.beta.norm());
    }

    #[test]
    fn ridge_two_by_two_hand_solve() {
        // Independent oracle: Cramer's rule on (X'X + I)beta = X'y.
        let x = correlated_design(1e-3);
        let y = DVector::from_column_slice(&[2.0, 2.001]);
        let beta = ridge_solve(&x, &y, 1.0).unwrap();
        let xtx = x.transpose() * &x;
        let (a, b, c, dd) = (xtx[(0, 0)] + 1.0, xtx[(0, 1)], xtx[(1, 0)], xtx[(1, 1)] + 1.0);
        let rhs = x.transpose() * &y;
        let det = a * dd - b * c;
        let oracle0 = (rhs[0] * dd - b * rhs[1]) / det;
        let oracle1 = (a * rhs[1] - c * rhs[0]) / det;
        assert_relative_eq!(beta[0], oracle0, max_relative = 1e-12);
        assert_relative_eq!(beta[1], oracle1, max_relative = 1e-12);
    }

    #[test]
    fn ridge_gradient_stationarity() {
        use rand::Rng;
        let mut rng = crate::rng::RngStream::new(24, 0).rng();
        for lambda in [0.5, 1.0, 10.0] {
            let x = DMatrix::from_fn(20, 5, |_, _| rng.gen_range(-1.0..1.0));
            let y = DVector::from_fn(20, |_, _| rng.gen_range(-1.0..1.0));
            let beta = ridge_solve(&x, &y, lambda).unwrap();
            let xty = x.transpose() * &y;
            let grad = x.transpose() * &x * &beta + lambda * &beta - &xty;
            assert!(grad.norm() <= 1e-8 * xty.norm());
        }
    }

    #[test]
    fn ridge_rejects_negative_penalty() {
        let x = DMatrix::identity(2, 2);
        let y = DVector::from_column_slice(&[1.0, 1.0]);
        assert_eq!(
            ridge_solve(&x, &y, -1.0),
            Err(ModelError::NegativePenalty(-1.0))
        );
    }

    #[test]
    fn condition_identity() {
        let report = condition_number(&DMatrix::identity(2, 2), 0.0);
        assert_relative_eq!(report.kappa, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn condition_closed_form_matches_eigensolver() {
        let report = condition_number(&correlated_design(0.1), 0.0);
        assert_relative_eq!(
            report.kappa,
            correlated_design_kappa(0.1),
            max_relative = 1e-10
        );
    }

    #[test]
    fn condition_spectrum_shift_identity() {
        let x = correlated_design(0.5);
        let report = condition_number(&x, 1.0);
        assert_relative_eq!(
            report.kappa_shifted,
            (report.lambda_max + 1.0) / (report.lambda_min + 1.0),
            max_relative = 1e-12
        );
        assert!(report.kappa_shifted < report.kappa);
    }

    #[test]
    fn condition_singular_is_infinite() {
        let x = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let report = condition_number(&x, 1.0);
        assert!(report.kappa.is_infinite());
        assert!(report.kappa_shifted.is_finite());
    }

    #[test]
    fn sensitivity_full_rank_reduces_to_kappa_ratio() {
        use rand::Rng;
        let mut rng = crate::rng::RngStream::new(25, 0).rng();
        let x = DMatrix::from_fn(12, 3, |_, _| rng.gen_range(-1.0..1.0));
        let y = DVector::from_fn(12, |_, _| rng.gen_range(-1.0..1.0));
        let delta = DVector::from_column_slice(&[0.01, -0.02, 0.005]);
        let bound = sensitivity_bound(&x, &y, &delta).unwrap();
        let kappa = condition_number(&x, 0.0).kappa;
        let expect = kappa * delta.norm() / (x.transpose() * &y).norm();
        assert_relative_eq!(bound, expect, max_relative = 1e-10);
    }

    #[test]
    fn sensitivity_nearly_orthogonal_observation() {
        // One column x = (1, 0): flipping the epsilon entry of y flips the fit.
        let eps = 1e-4;
        let x = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let y1 = DVector::from_column_slice(&[eps, 1.0]);
        let y2 = DVector::from_column_slice(&[-eps, 1.0]);
        let b1 = ols_solve(&x, &y1).unwrap()[0];
        let b2 = ols_solve(&x, &y2).unwrap()[0];
        let observed = (b1 - b2).abs() / b1.abs();
        assert_relative_eq!(observed, 2.0, max_relative = 1e-8);
        let rel_y = (&y1 - &y2).norm() / y1.norm();
        assert!(rel_y < 3.0 * eps);
        // The bound with delta_rhs = X'(y2 - y1) is tight here.
        let delta = x.transpose() * (&y2 - &y1);
        let bound = sensitivity_bound(&x, &y1, &delta).unwrap();
        assert_relative_eq!(bound, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn sensitivity_zero_perturbation() {
        let x = DMatrix::identity(2, 2);
        let y = DVector::from_column_slice(&[1.0, 2.0]);
        let bound = sensitivity_bound(&x, &y, &DVector::zeros(2)).unwrap();
        assert_eq!(bound, 0.0);
    }

    #[test]
    fn sensitivity_zero_gradient_errors() {
        let x = DMatrix::from_column_slice(2, 1, &[1.0, -1.0]);
        let y = DVector::from_column_slice(&[1.0, 1.0]);
        assert_eq!(
            sensitivity_bound(&x, &y, &DVector::zeros(1)),
            Err(ModelError::ZeroGradient)
        );
    }

    #[test]
    fn scan_matches_eigensolver_and_shift() {
        let rows = condition_scan(&[2.0], 0.0);
        assert_relative_eq!(
            rows[0].kappa,
            correlated_design_kappa(2.0),
            max_relative = 1e-8
        );
        assert_relative_eq!(rows[0].kappa_shifted, rows[0].kappa, max_relative = 1e-12);
    }

    #[test]
    fn scan_diverges_at_zero() {
        let rows = condition_scan(&[1e-300], 1.0);
        // Far below machine resolution of the Gram entries: singular.
        assert!(rows[0].kappa > 1e20 || rows[0].kappa.is_infinite());
        assert!(rows[0].kappa_shifted.is_finite());
    }

    #[test]
    fn scan_monotone_below_two() {
        // kappa decreases on (0, 2]; its minimum over the family sits at eps = 2.
        let grid: Vec<f64> = (1..40).map(|i| 0.05 * i as f64).collect();
        let rows = condition_scan(&grid, 0.0);
        for w in rows.windows(2) {
            assert!(w[1].kappa < w[0].kappa, "eps {} -> {}", w[0].eps, w[1].eps);
        }
    }
}
