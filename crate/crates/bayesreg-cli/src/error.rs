//! CLI error classes with a stable exit-code contract:
//! 0 success, 1 acceptance-threshold failure, 2 usage/validation,
//! 3 I/O, 4 numerical failure.

use bayesreg::dataset::DataError;
use bayesreg::model::ModelError;
use bayesreg::priors::PriorError;
use bayesreg::quad::QuadError;
use bayesreg::risk::RiskError;
use bayesreg::samplers::SamplerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    ThresholdFailure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ThresholdFailure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<DataError> for CliError {
    fn from(e: DataError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::SingularDesign { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<PriorError> for CliError {
    fn from(e: PriorError) -> Self {
        match e {
            PriorError::Quadrature(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<QuadError> for CliError {
    fn from(e: QuadError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<SamplerError> for CliError {
    fn from(e: SamplerError) -> Self {
        match e {
            SamplerError::InvalidConfig(_) | SamplerError::InsufficientSamples { .. } => {
                CliError::Usage(e.to_string())
            }
            SamplerError::NumericalBreakdown(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<RiskError> for CliError {
    fn from(e: RiskError) -> Self {
        CliError::Usage(e.to_string())
    }
}
