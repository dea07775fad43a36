//! Spike-and-slab Gibbs sampler.
//!
//! The prior reparametrizes β_i = γ_i α_i with γ_i ~ Bernoulli(θ) and
//! α_i ~ N(0, σ_slab²). A naive joint sweep over (γ, α) sticks at γ_i = 0
//! because the excluded α_i never moves, so the inclusion odds are computed
//! with α_i marginalized out of the likelihood:
//!
//!   odds(γ_i = 1) = θ/(1−θ) · exp(s_i μ_i²/2) / (σ_slab √s_i),
//!   s_i = x_iᵀx_i/σ_e² + 1/σ_slab²,   μ_i = (x_iᵀ r_{−i}/σ_e²)/s_i,
//!
//! where r_{−i} is the residual with coefficient i removed. Included
//! coefficients are then drawn from N(μ_i, 1/s_i); excluded ones are set to
//! zero. The noise variance closes the sweep with
//! σ_e² ~ InvGamma(n/2, ‖y − X_γ α_γ‖²/2).

use std::time::Instant;

use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use super::common::{ridge_start, GibbsDesign, ZERO_COEF_GUARD};
use super::{check_run_config, retain, ChainState, PosteriorSamples, PriorState, SamplerError};
use crate::dataset::Dataset;
use crate::dist::sample_inverse_gamma;
use crate::priors::PriorSpec;
use crate::rng::RngStream;

/// Spike-and-slab hyperparameters.
#[derive(Debug, Clone, Copy)]
pub struct SpikeSlabParams {
    /// Prior inclusion probability θ ∈ (0, 1).
    pub theta: f64,
    /// Slab variance σ_slab².
    pub sigma2_slab: f64,
}

impl SpikeSlabParams {
    pub fn validate(&self) -> Result<(), SamplerError> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(SamplerError::InvalidConfig(format!(
                "theta must lie in (0,1), got {}",
                self.theta
            )));
        }
        if !(self.sigma2_slab > 0.0) {
            return Err(SamplerError::InvalidConfig(format!(
                "slab variance must be > 0, got {}",
                self.sigma2_slab
            )));
        }
        Ok(())
    }
}

/// Start fully included at the unit-penalty ridge coefficients.
pub fn spike_slab_init_with_design(design: &GibbsDesign) -> Result<ChainState, SamplerError> {
    let (alpha, sigma2) = ridge_start(design)?;
    Ok(ChainState {
        beta: alpha.clone(),
        sigma2,
        params: PriorState::SpikeSlab { gamma: vec![true; design.p], alpha },
    })
}

/// [`spike_slab_init_with_design`] on a standardized dataset.
pub fn spike_slab_gibbs_init(d: &Dataset) -> Result<ChainState, SamplerError> {
    spike_slab_init_with_design(&GibbsDesign::from_dataset(d))
}

fn bernoulli_from_log_odds<R: Rng + ?Sized>(rng: &mut R, log_odds: f64) -> bool {
    let p = if log_odds >= 0.0 {
        1.0 / (1.0 + (-log_odds).exp())
    } else {
        let e = log_odds.exp();
        e / (1.0 + e)
    };
    rng.gen::<f64>() < p
}

/// One sweep: per-coordinate joint (γ_i, α_i) updates, then σ_e².
pub fn spike_slab_step_with_design<R: Rng + ?Sized>(
    rng: &mut R,
    state: &ChainState,
    design: &GibbsDesign,
    params: SpikeSlabParams,
) -> Result<ChainState, SamplerError> {
    params.validate()?;
    let PriorState::SpikeSlab { gamma, alpha } = &state.params else {
        return Err(SamplerError::InvalidConfig(
            "state does not carry spike-and-slab parameters".into(),
        ));
    };
    let p = design.p;
    let sigma2_e = state.sigma2;
    let slab = params.sigma2_slab;
    let prior_log_odds = (params.theta / (1.0 - params.theta)).ln();

    let mut gamma = gamma.clone();
    let mut alpha = alpha.clone();
    let included = DVector::from_fn(p, |i, _| if gamma[i] { alpha[i] } else { 0.0 });
    let mut residual = design.residual(&included);

    for i in 0..p {
        let xi = design.x.column(i);
        if gamma[i] && alpha[i] != 0.0 {
            residual += xi * alpha[i];
        }
        let s_i = design.xtx[(i, i)] / sigma2_e + 1.0 / slab;
        let mu_i = xi.dot(&residual) / sigma2_e / s_i;
        // Marginal likelihood ratio: exp(s μ²/2) / (σ_slab √s).
        let log_odds =
            prior_log_odds + 0.5 * s_i * mu_i * mu_i - 0.5 * slab.ln() - 0.5 * s_i.ln();
        let include = bernoulli_from_log_odds(rng, log_odds);
        gamma[i] = include;
        if include {
            let z: f64 = rng.sample(StandardNormal);
            alpha[i] = mu_i + z / s_i.sqrt();
            residual -= xi * alpha[i];
        } else {
            alpha[i] = 0.0;
        }
    }

    let rate = residual.norm_squared() / 2.0;
    let sigma2 = sample_inverse_gamma(
        rng,
        design.n as f64 / 2.0,
        rate.max(ZERO_COEF_GUARD),
    );

    let beta = DVector::from_fn(p, |i, _| if gamma[i] { alpha[i] } else { 0.0 });
    Ok(ChainState { beta, sigma2, params: PriorState::SpikeSlab { gamma, alpha } })
}

/// [`spike_slab_step_with_design`] on a standardized dataset.
pub fn spike_slab_gibbs_step<R: Rng + ?Sized>(
    rng: &mut R,
    state: &ChainState,
    d: &Dataset,
    params: SpikeSlabParams,
) -> Result<ChainState, SamplerError> {
    spike_slab_step_with_design(rng, state, &GibbsDesign::from_dataset(d), params)
}

/// Run the spike-and-slab chain and keep every `thin`-th state past burn-in.
pub fn spike_slab_gibbs_run(
    stream: RngStream,
    d: &Dataset,
    theta: f64,
    sigma2_slab: f64,
    iters: usize,
    burn_in: usize,
    thin: usize,
) -> Result<PosteriorSamples, SamplerError> {
    check_run_config(iters, burn_in, thin)?;
    let params = SpikeSlabParams { theta, sigma2_slab };
    params.validate()?;
    let start = Instant::now();
    let design = GibbsDesign::from_dataset(d);
    let mut rng = stream.rng();
    let mut state = spike_slab_init_with_design(&design)?;
    let mut states = Vec::with_capacity((iters - burn_in) / thin);
    for t in 1..=iters {
        state = spike_slab_step_with_design(&mut rng, &state, &design, params)?;
        if retain(t, burn_in, thin) {
            states.push(state.clone());
        }
    }
    Ok(PosteriorSamples {
        states,
        burn_in,
        thin,
        seed: stream,
        prior: PriorSpec::SpikeSlab { theta, sigma_beta: sigma2_slab.sqrt() },
        elapsed: start.elapsed().as_secs_f64(),
    })
}

/// Posterior inclusion frequency of each coefficient over retained states.
pub fn inclusion_probabilities(samples: &PosteriorSamples) -> Option<DVector<f64>> {
    let first = samples.states.first()?;
    let PriorState::SpikeSlab { gamma, .. } = &first.params else {
        return None;
    };
    let p = gamma.len();
    let mut counts = vec![0usize; p];
    for state in &samples.states {
        let PriorState::SpikeSlab { gamma, .. } = &state.params else {
            return None;
        };
        for (i, &g) in gamma.iter().enumerate() {
            if g {
                counts[i] += 1;
            }
        }
    }
    let total = samples.states.len() as f64;
    Some(DVector::from_fn(p, |i, _| counts[i] as f64 / total))
}
