//! Pieces shared by the three Gibbs samplers.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::SamplerError;
use crate::dataset::Dataset;

/// Division-by-β² guard: coefficients closer to zero than this are clamped
/// before entering a conditional's scale, preserving the shrinkage direction
/// while keeping the draw finite.
pub const ZERO_COEF_GUARD: f64 = 1e-12;

/// Jitter ladder for a failing symmetric factorization.
const JITTERS: [f64; 4] = [0.0, 1e-10, 1e-8, 1e-6];

/// The sufficient statistics the samplers need from a regression problem.
///
/// Built from a [`Dataset`]'s standardized design, or from raw parts when a
/// caller (usually a test oracle) wants full control of the design.
#[derive(Debug, Clone)]
pub struct GibbsDesign {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub xtx: DMatrix<f64>,
    pub xty: DVector<f64>,
    pub n: usize,
    pub p: usize,
}

impl GibbsDesign {
    pub fn from_dataset(d: &Dataset) -> Self {
        Self::from_parts(d.x_std.clone(), d.y_centered.clone())
    }

    pub fn from_parts(x: DMatrix<f64>, y: DVector<f64>) -> Self {
        assert_eq!(x.nrows(), y.len(), "design rows must match response length");
        let xtx = x.transpose() * &x;
        let xty = x.transpose() * &y;
        let (n, p) = (x.nrows(), x.ncols());
        GibbsDesign { x, y, xtx, xty, n, p }
    }

    pub fn residual(&self, beta: &DVector<f64>) -> DVector<f64> {
        &self.y - &self.x * beta
    }
}

fn cholesky_with_jitter(
    a: &DMatrix<f64>,
) -> Result<Cholesky<f64, nalgebra::Dyn>, SamplerError> {
    for &eps in &JITTERS {
        let trial = if eps == 0.0 {
            a.clone()
        } else {
            let mut t = a.clone();
            for j in 0..t.nrows() {
                t[(j, j)] += eps;
            }
            t
        };
        if let Some(chol) = Cholesky::new(trial) {
            return Ok(chol);
        }
    }
    Err(SamplerError::NumericalBreakdown(
        "coefficient precision matrix is not positive definite after jitter escalation".into(),
    ))
}

/// Mean of the coefficient conditional: solves (XᵀX + diag(prec))m = Xᵀy.
pub fn mvn_conditional_mean(
    design: &GibbsDesign,
    prior_prec_diag: &DVector<f64>,
) -> Result<DVector<f64>, SamplerError> {
    let mut a = design.xtx.clone();
    for j in 0..design.p {
        a[(j, j)] += prior_prec_diag[j];
    }
    let chol = cholesky_with_jitter(&a)?;
    Ok(chol.solve(&design.xty))
}

/// Draw β ~ N(A⁻¹Xᵀy, σ²A⁻¹) with A = XᵀX + diag(prec), via the Cholesky
/// factor of A: β = m + σ L⁻ᵀ z.
pub fn draw_beta_conditional<R: Rng + ?Sized>(
    rng: &mut R,
    design: &GibbsDesign,
    prior_prec_diag: &DVector<f64>,
    sigma2: f64,
) -> Result<DVector<f64>, SamplerError> {
    let mut a = design.xtx.clone();
    for j in 0..design.p {
        a[(j, j)] += prior_prec_diag[j];
    }
    let chol = cholesky_with_jitter(&a)?;
    let mean = chol.solve(&design.xty);
    let z = DVector::from_fn(design.p, |_, _| rng.sample::<f64, _>(StandardNormal));
    let lt = chol.l().transpose();
    let noise = lt.solve_upper_triangular(&z).ok_or_else(|| {
        SamplerError::NumericalBreakdown("triangular solve failed in coefficient draw".into())
    })?;
    Ok(mean + sigma2.sqrt() * noise)
}

/// Ridge-style initialization shared by all samplers:
/// β = (XᵀX + I)⁻¹Xᵀy, σ² = ‖y − Xβ‖²/n.
pub fn ridge_start(design: &GibbsDesign) -> Result<(DVector<f64>, f64), SamplerError> {
    let ones = DVector::from_element(design.p, 1.0);
    let beta = mvn_conditional_mean(design, &ones)?;
    let sigma2 = design.residual(&beta).norm_squared() / design.n as f64;
    // A noiseless response would start the chain at sigma2 = 0, violating
    // positivity; floor it.
    Ok((beta, sigma2.max(ZERO_COEF_GUARD)))
}
