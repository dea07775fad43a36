//! Gibbs samplers for the shrinkage priors, plus chain summaries.
//!
//! Three samplers share the same skeleton: a multivariate normal draw for the
//! coefficient block from N(A⁻¹Xᵀy, σ²A⁻¹) with A = XᵀX + D⁻¹ for a
//! prior-specific diagonal D, followed by conjugate updates of the
//! scale/selection parameters. One chain is strictly sequential; separate
//! chains own separate [`RngStream`]s and can run on separate threads.

mod common;
mod horseshoe;
mod lasso;
mod spike_slab;
mod summary;

pub use common::{draw_beta_conditional, mvn_conditional_mean, GibbsDesign};
pub use horseshoe::{
    horseshoe_gibbs_init, horseshoe_gibbs_run, horseshoe_gibbs_step, horseshoe_init_with_design,
    horseshoe_step_with_design,
};
pub use lasso::{
    lasso_gibbs_init, lasso_gibbs_run, lasso_gibbs_step, lasso_init_with_design,
    lasso_step_with_design, LambdaMode,
};
pub use spike_slab::{
    inclusion_probabilities, spike_slab_gibbs_init, spike_slab_gibbs_run, spike_slab_gibbs_step,
    spike_slab_init_with_design, spike_slab_step_with_design, SpikeSlabParams,
};
pub use summary::{
    summarize, summarize_rescaled, summarize_series, CoefficientSummary, SummaryReport,
    MIN_RETAINED,
};

use nalgebra::DVector;
use thiserror::Error;

use crate::priors::PriorSpec;
use crate::rng::RngStream;

#[derive(Debug, Error, PartialEq)]
pub enum SamplerError {
    #[error("numerical breakdown: {0}")]
    NumericalBreakdown(String),
    #[error("need at least {need} retained states, got {got}")]
    InsufficientSamples { got: usize, need: usize },
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
}

/// Parameters a sampler carries besides the coefficient block.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorState {
    /// Bayesian lasso: local variances τ_j² and the global rate λ.
    Lasso { tau2: DVector<f64>, lambda: f64 },
    /// Horseshoe: local scales λ_i², global τ², and the inverse-gamma
    /// auxiliaries ν_i and ξ of the half-Cauchy decomposition.
    Horseshoe { lambda2: DVector<f64>, tau2: f64, nu: DVector<f64>, xi: f64 },
    /// Spike-and-slab: inclusion indicators and slab coefficients.
    SpikeSlab { gamma: Vec<bool>, alpha: DVector<f64> },
}

/// One Gibbs iteration's full parameter state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub beta: DVector<f64>,
    pub sigma2: f64,
    pub params: PriorState,
}

impl ChainState {
    /// Check the positivity/binary invariants of every stored parameter.
    pub fn check_invariants(&self) -> Result<(), SamplerError> {
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SamplerError::NumericalBreakdown(format!("{what} = {v} is not positive")))
            }
        };
        positive(self.sigma2, "sigma2")?;
        match &self.params {
            PriorState::Lasso { tau2, lambda } => {
                for (j, &t) in tau2.iter().enumerate() {
                    positive(t, &format!("tau2[{j}]"))?;
                }
                positive(*lambda, "lambda")?;
            }
            PriorState::Horseshoe { lambda2, tau2, nu, xi } => {
                for (j, &l) in lambda2.iter().enumerate() {
                    positive(l, &format!("lambda2[{j}]"))?;
                }
                positive(*tau2, "tau2")?;
                for (j, &v) in nu.iter().enumerate() {
                    positive(v, &format!("nu[{j}]"))?;
                }
                positive(*xi, "xi")?;
            }
            PriorState::SpikeSlab { gamma, alpha } => {
                if gamma.len() != alpha.len() {
                    return Err(SamplerError::NumericalBreakdown(
                        "gamma/alpha length mismatch".into(),
                    ));
                }
                for (i, (&g, &a)) in gamma.iter().zip(alpha.iter()).enumerate() {
                    if !g && a != 0.0 {
                        return Err(SamplerError::NumericalBreakdown(format!(
                            "alpha[{i}] = {a} nonzero while excluded"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// CSV cell values in the order of [`PosteriorSamples::csv_header`].
    pub fn csv_row(&self) -> String {
        let mut cells: Vec<String> = self.beta.iter().map(|v| format!("{v}")).collect();
        cells.push(format!("{}", self.sigma2));
        match &self.params {
            PriorState::Lasso { tau2, lambda } => {
                cells.extend(tau2.iter().map(|v| format!("{v}")));
                cells.push(format!("{lambda}"));
            }
            PriorState::Horseshoe { lambda2, tau2, nu, xi } => {
                cells.extend(lambda2.iter().map(|v| format!("{v}")));
                cells.push(format!("{tau2}"));
                cells.extend(nu.iter().map(|v| format!("{v}")));
                cells.push(format!("{xi}"));
            }
            PriorState::SpikeSlab { gamma, alpha } => {
                cells.extend(gamma.iter().map(|&g| if g { "1" } else { "0" }.to_string()));
                cells.extend(alpha.iter().map(|v| format!("{v}")));
            }
        }
        cells.join(",")
    }
}

/// Retained draws of one chain plus the metadata needed to reproduce them.
#[derive(Debug, Clone)]
pub struct PosteriorSamples {
    pub states: Vec<ChainState>,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: RngStream,
    pub prior: PriorSpec,
    /// Wall-clock seconds spent sampling. Informational only; never written
    /// into artifacts, which must be byte-identical across reruns.
    pub elapsed: f64,
}

impl PosteriorSamples {
    pub fn retained(&self) -> usize {
        self.states.len()
    }

    /// Column names matching [`ChainState::csv_row`].
    pub fn csv_header(&self) -> String {
        let p = self.states.first().map(|s| s.beta.len()).unwrap_or(0);
        let mut cols: Vec<String> = (1..=p).map(|j| format!("beta_{j}")).collect();
        cols.push("sigma2".into());
        match self.states.first().map(|s| &s.params) {
            Some(PriorState::Lasso { .. }) => {
                cols.extend((1..=p).map(|j| format!("tau2_{j}")));
                cols.push("lambda".into());
            }
            Some(PriorState::Horseshoe { .. }) => {
                cols.extend((1..=p).map(|j| format!("lambda2_{j}")));
                cols.push("tau2_global".into());
                cols.extend((1..=p).map(|j| format!("nu_{j}")));
                cols.push("xi".into());
            }
            Some(PriorState::SpikeSlab { .. }) => {
                cols.extend((1..=p).map(|j| format!("gamma_{j}")));
                cols.extend((1..=p).map(|j| format!("alpha_{j}")));
            }
            None => {}
        }
        cols.join(",")
    }

    /// Write all retained states as CSV.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", self.csv_header())?;
        for state in &self.states {
            writeln!(out, "{}", state.csv_row())?;
        }
        Ok(())
    }
}

/// Shared run-loop configuration checks and retention rule.
pub(crate) fn check_run_config(iters: usize, burn_in: usize, thin: usize) -> Result<(), SamplerError> {
    if thin == 0 {
        return Err(SamplerError::InvalidConfig("thin must be >= 1".into()));
    }
    if iters <= burn_in {
        return Err(SamplerError::InvalidConfig(format!(
            "iters ({iters}) must exceed burn_in ({burn_in})"
        )));
    }
    Ok(())
}

/// Keep sweep `t` (1-based) iff it is past burn-in and on the thinning grid.
/// Retained count is (iters - burn_in) / thin, integer division.
pub(crate) fn retain(t: usize, burn_in: usize, thin: usize) -> bool {
    t > burn_in && (t - burn_in) % thin == 0
}
