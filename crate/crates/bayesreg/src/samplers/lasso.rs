//! Bayesian lasso Gibbs sampler.
//!
//! The Laplace prior enters through its normal scale mixture: per-coefficient
//! variances τ_j² with exponential priors, giving the full conditionals
//!
//!   β | ·    ~ N(A⁻¹Xᵀy, σ²A⁻¹),  A = XᵀX + D_τ⁻¹,  D_τ = diag(τ_j²)
//!   σ² | ·   ~ InvGamma((n−1)/2 + p/2, ‖y−Xβ‖²/2 + βᵀD_τ⁻¹β/2)
//!   1/τ_j²|· ~ InvGaussian(√(λ²σ²/β_j²), λ²)
//!
//! and, in `hyper` mode, the conjugate refresh λ² ~ Gamma(p + a, Στ_j²/2 + b).

use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::common::{draw_beta_conditional, ridge_start, GibbsDesign, ZERO_COEF_GUARD};
use super::{check_run_config, retain, ChainState, PosteriorSamples, PriorState, SamplerError};
use crate::dataset::Dataset;
use crate::dist::{sample_inverse_gamma, sample_inverse_gaussian};
use crate::priors::PriorSpec;
use crate::rng::RngStream;

/// How the global shrinkage rate λ evolves across sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaMode {
    /// λ stays at the given value.
    Fixed(f64),
    /// λ² ~ Gamma(p + a, Στ_j²/2 + b) each sweep.
    Hyper { a: f64, b: f64 },
}

impl Default for LambdaMode {
    fn default() -> Self {
        LambdaMode::Hyper { a: 1.0, b: 1.0 }
    }
}

impl LambdaMode {
    fn validate(&self) -> Result<(), SamplerError> {
        match *self {
            LambdaMode::Fixed(v) if !(v > 0.0) => Err(SamplerError::InvalidConfig(format!(
                "fixed lambda must be > 0, got {v}"
            ))),
            LambdaMode::Hyper { a, b } if !(a > 0.0 && b > 0.0) => Err(
                SamplerError::InvalidConfig(format!("hyper (a, b) must be > 0, got ({a}, {b})")),
            ),
            _ => Ok(()),
        }
    }
}

/// Empirical initialization: β = (XᵀX+I)⁻¹Xᵀy, σ² = rᵀr/n, τ_j² = β_j²,
/// λ = p√σ²/Σ|β_j|. Exact zeros in β are perturbed to 1e-8 so the
/// reciprocal local scales exist.
pub fn lasso_init_with_design(design: &GibbsDesign) -> Result<ChainState, SamplerError> {
    let (mut beta, _) = ridge_start(design)?;
    for b in beta.iter_mut() {
        if *b == 0.0 {
            *b = 1e-8;
        }
    }
    let sigma2 = (design.residual(&beta).norm_squared() / design.n as f64).max(ZERO_COEF_GUARD);
    let tau2 = DVector::from_fn(design.p, |j, _| beta[j] * beta[j]);
    let abs_sum: f64 = beta.iter().map(|b| b.abs()).sum();
    let lambda = design.p as f64 * sigma2.sqrt() / abs_sum;
    Ok(ChainState { beta, sigma2, params: PriorState::Lasso { tau2, lambda } })
}

/// [`lasso_init_with_design`] on a standardized dataset.
pub fn lasso_gibbs_init(d: &Dataset) -> Result<ChainState, SamplerError> {
    lasso_init_with_design(&GibbsDesign::from_dataset(d))
}

/// One full sweep in the order β → σ² → {τ_j²} → λ.
pub fn lasso_step_with_design<R: Rng + ?Sized>(
    rng: &mut R,
    state: &ChainState,
    design: &GibbsDesign,
    lambda_mode: LambdaMode,
) -> Result<ChainState, SamplerError> {
    let PriorState::Lasso { tau2, lambda } = &state.params else {
        return Err(SamplerError::InvalidConfig("state does not carry lasso parameters".into()));
    };
    let (p, n) = (design.p, design.n);
    let prior_prec = DVector::from_fn(p, |j, _| 1.0 / tau2[j]);

    let beta = draw_beta_conditional(rng, design, &prior_prec, state.sigma2)?;

    let residual = design.residual(&beta);
    let quad_form: f64 = (0..p).map(|j| beta[j] * beta[j] / tau2[j]).sum();
    let shape = (n as f64 - 1.0) / 2.0 + p as f64 / 2.0;
    let rate = residual.norm_squared() / 2.0 + quad_form / 2.0;
    let sigma2 = sample_inverse_gamma(rng, shape, rate.max(f64::MIN_POSITIVE));

    let mut new_tau2 = DVector::zeros(p);
    for j in 0..p {
        let bj = beta[j].abs().max(ZERO_COEF_GUARD);
        let mean = (lambda * lambda * sigma2 / (bj * bj)).sqrt();
        let inv_tau2 = sample_inverse_gaussian(rng, mean, lambda * lambda);
        new_tau2[j] = 1.0 / inv_tau2;
    }

    let new_lambda = match lambda_mode {
        LambdaMode::Fixed(v) => v,
        LambdaMode::Hyper { a, b } => {
            let rate = new_tau2.iter().sum::<f64>() / 2.0 + b;
            let g = Gamma::new(p as f64 + a, 1.0 / rate).expect("valid gamma parameters");
            g.sample(rng).sqrt().max(f64::MIN_POSITIVE)
        }
    };

    Ok(ChainState {
        beta,
        sigma2,
        params: PriorState::Lasso { tau2: new_tau2, lambda: new_lambda },
    })
}

/// [`lasso_step_with_design`] on a standardized dataset.
pub fn lasso_gibbs_step<R: Rng + ?Sized>(
    rng: &mut R,
    state: &ChainState,
    d: &Dataset,
    lambda_mode: LambdaMode,
) -> Result<ChainState, SamplerError> {
    lasso_step_with_design(rng, state, &GibbsDesign::from_dataset(d), lambda_mode)
}

/// Run the Bayesian lasso chain and keep every `thin`-th state past burn-in.
pub fn lasso_gibbs_run(
    stream: RngStream,
    d: &Dataset,
    iters: usize,
    burn_in: usize,
    thin: usize,
    lambda_mode: LambdaMode,
) -> Result<PosteriorSamples, SamplerError> {
    check_run_config(iters, burn_in, thin)?;
    lambda_mode.validate()?;
    let start = Instant::now();
    let design = GibbsDesign::from_dataset(d);
    let mut rng = stream.rng();
    let mut state = lasso_init_with_design(&design)?;
    let init_lambda = match (&state.params, lambda_mode) {
        (_, LambdaMode::Fixed(v)) => v,
        (PriorState::Lasso { lambda, .. }, _) => *lambda,
        _ => unreachable!(),
    };
    let prior = PriorSpec::Lasso { tau: state.sigma2.sqrt() / init_lambda };
    let mut states = Vec::with_capacity((iters - burn_in) / thin);
    for t in 1..=iters {
        state = lasso_step_with_design(&mut rng, &state, &design, lambda_mode)?;
        if retain(t, burn_in, thin) {
            states.push(state.clone());
        }
    }
    Ok(PosteriorSamples {
        states,
        burn_in,
        thin,
        seed: stream,
        prior,
        elapsed: start.elapsed().as_secs_f64(),
    })
}
