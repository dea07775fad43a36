//! Run configuration: flag/file merging, prior selection, and the config
//! hash embedded in artifact headers.

use std::path::{Path, PathBuf};

use bayesreg::samplers::LambdaMode;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Which prior(s) a fit works with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PriorChoice {
    Ridge,
    Lasso,
    Horseshoe,
    SpikeSlab,
    All,
}

impl PriorChoice {
    pub fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "ridge" => Ok(PriorChoice::Ridge),
            "lasso" => Ok(PriorChoice::Lasso),
            "horseshoe" => Ok(PriorChoice::Horseshoe),
            "spike-slab" => Ok(PriorChoice::SpikeSlab),
            "all" => Ok(PriorChoice::All),
            other => Err(CliError::Usage(format!(
                "unknown prior {other:?}; expected ridge|lasso|horseshoe|spike-slab|all"
            ))),
        }
    }

    /// The concrete priors this choice expands to.
    pub fn expand(&self) -> Vec<PriorChoice> {
        match self {
            PriorChoice::All => vec![
                PriorChoice::Ridge,
                PriorChoice::Lasso,
                PriorChoice::Horseshoe,
                PriorChoice::SpikeSlab,
            ],
            one => vec![*one],
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            PriorChoice::Ridge => "ridge",
            PriorChoice::Lasso => "lasso",
            PriorChoice::Horseshoe => "horseshoe",
            PriorChoice::SpikeSlab => "spike-slab",
            PriorChoice::All => "all",
        }
    }
}

/// Parse `fixed:<v>` or `hyper` into a [`LambdaMode`].
pub fn parse_lambda_mode(s: &str) -> Result<LambdaMode, CliError> {
    if s == "hyper" {
        return Ok(LambdaMode::Hyper { a: 1.0, b: 1.0 });
    }
    if let Some(v) = s.strip_prefix("fixed:") {
        let v: f64 = v
            .parse()
            .map_err(|_| CliError::Usage(format!("cannot parse lambda value in {s:?}")))?;
        if !(v > 0.0) {
            return Err(CliError::Usage(format!("fixed lambda must be > 0, got {v}")));
        }
        return Ok(LambdaMode::Fixed(v));
    }
    Err(CliError::Usage(format!(
        "unknown lambda mode {s:?}; expected fixed:<v> or hyper"
    )))
}

fn lambda_mode_label(mode: LambdaMode) -> String {
    match mode {
        LambdaMode::Fixed(v) => format!("fixed:{v}"),
        LambdaMode::Hyper { a, b } => format!("hyper(a={a},b={b})"),
    }
}

/// Optional values loadable from a JSON config file. Explicit flags override
/// whatever the file provides.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub prior: Option<String>,
    pub iters: Option<usize>,
    pub burn_in: Option<usize>,
    pub thin: Option<usize>,
    pub seed: Option<u64>,
    pub chains: Option<usize>,
    pub lambda_mode: Option<String>,
    pub theta: Option<f64>,
    pub slab_variance: Option<f64>,
    pub ridge_lambda: Option<f64>,
    pub input: Option<PathBuf>,
    pub p: Option<usize>,
    pub r: Option<usize>,
    pub d: Option<f64>,
    pub replications: Option<usize>,
    pub seeds: Option<usize>,
    pub alpha: Option<f64>,
    pub eps_min: Option<f64>,
    pub eps_max: Option<f64>,
    pub points: Option<usize>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub budget: Option<f64>,
    pub tau: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Sampler settings shared by the fitting commands, fully resolved.
#[derive(Debug, Clone, Serialize)]
pub struct SamplerConfig {
    pub iters: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub chains: usize,
    #[serde(serialize_with = "serialize_lambda_mode")]
    pub lambda_mode: LambdaMode,
    pub theta: f64,
    pub slab_variance: f64,
    pub ridge_lambda: f64,
    pub tau: f64,
}

fn serialize_lambda_mode<S: serde::Serializer>(
    mode: &LambdaMode,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&lambda_mode_label(*mode))
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            iters: 10_000,
            burn_in: 2_000,
            thin: 1,
            seed: 42,
            chains: 1,
            lambda_mode: LambdaMode::Hyper { a: 1.0, b: 1.0 },
            theta: 0.5,
            slab_variance: 1.0,
            ridge_lambda: 1.0,
            tau: 1.0,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.iters <= self.burn_in {
            return Err(CliError::Usage(format!(
                "iters ({}) must exceed burn-in ({})",
                self.iters, self.burn_in
            )));
        }
        if self.thin == 0 {
            return Err(CliError::Usage("thin must be >= 1".into()));
        }
        if self.chains == 0 {
            return Err(CliError::Usage("chains must be >= 1".into()));
        }
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(CliError::Usage(format!(
                "theta must lie in (0,1), got {}",
                self.theta
            )));
        }
        if !(self.slab_variance > 0.0) {
            return Err(CliError::Usage(format!(
                "slab variance must be > 0, got {}",
                self.slab_variance
            )));
        }
        if !(self.ridge_lambda >= 0.0) {
            return Err(CliError::Usage(format!(
                "ridge lambda must be >= 0, got {}",
                self.ridge_lambda
            )));
        }
        if !(self.tau > 0.0) {
            return Err(CliError::Usage(format!("tau must be > 0, got {}", self.tau)));
        }
        Ok(())
    }
}

/// First 12 hex digits of the SHA-256 of the serialized resolved config.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prior_parsing() {
        assert_eq!(PriorChoice::parse("horseshoe").unwrap(), PriorChoice::Horseshoe);
        assert_eq!(PriorChoice::parse("all").unwrap().expand().len(), 4);
        assert!(PriorChoice::parse("bogus").is_err());
    }

    #[test]
    fn lambda_mode_parsing() {
        assert_eq!(parse_lambda_mode("hyper").unwrap(), LambdaMode::Hyper { a: 1.0, b: 1.0 });
        assert_eq!(parse_lambda_mode("fixed:1.5").unwrap(), LambdaMode::Fixed(1.5));
        assert!(parse_lambda_mode("fixed:-2").is_err());
        assert!(parse_lambda_mode("nope").is_err());
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = SamplerConfig::default();
        let mut b = SamplerConfig::default();
        assert_eq!(config_hash(&a), config_hash(&b));
        b.seed = 43;
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 12);
    }

    #[test]
    fn validation_catches_bad_settings() {
        let mut c = SamplerConfig::default();
        c.burn_in = c.iters;
        assert!(c.validate().is_err());
        let mut c = SamplerConfig::default();
        c.theta = 1.5;
        assert!(c.validate().is_err());
    }
}
