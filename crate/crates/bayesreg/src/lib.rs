//! Bayesian regularization toolkit for linear regression.
//!
//! The pieces:
//!
//! - [`dataset`]: design standardization and back-transformation.
//! - [`model`]: OLS and ridge solves, condition numbers, spectrum shifts,
//!   and the sensitivity bound for ill-conditioned least squares.
//! - [`priors`]: the prior/penalty catalogue (ridge, lasso, Cauchy,
//!   horseshoe, spike-and-slab), the horseshoe penalty bound, and the
//!   scale-mixture identities verified by quadrature.
//! - [`samplers`]: seeded Gibbs samplers for the Bayesian lasso, horseshoe,
//!   and spike-and-slab priors, with chain summaries (mean/median/mode,
//!   intervals, effective sample size).
//! - [`risk`]: James-Stein and thresholding estimators with Monte Carlo risk
//!   evaluation on sparse spike signals.
//! - [`quad`]: the adaptive Gauss–Kronrod integrator backing the numerical
//!   density work.
//! - [`rng`]: reproducible `(seed, stream)` random streams.

pub mod dataset;
pub mod dist;
pub mod model;
pub mod priors;
pub mod quad;
pub mod risk;
pub mod rng;
pub mod samplers;

pub use dataset::{standardize, Dataset};
pub use priors::PriorSpec;
pub use rng::RngStream;
