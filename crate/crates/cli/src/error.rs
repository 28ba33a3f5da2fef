use streamscope::estimators::{EstimatorError, OracleError};
use streamscope::verify::VerifyError;
use streamscope::GraphError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("bad weight: {0}")]
    Weight(String),
    #[error("{0}")]
    ComponentTooLarge(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Input(_) | CliError::Io(_) => 3,
            CliError::Weight(_) => 4,
            CliError::ComponentTooLarge(_) => 5,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::BadWeight { .. } => CliError::Weight(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::InvalidParams(_) | EstimatorError::BadW => CliError::Config(e.to_string()),
            EstimatorError::BadWeight { .. } => CliError::Weight(e.to_string()),
            EstimatorError::Oracle(OracleError::ComponentTooLarge { .. }) => CliError::ComponentTooLarge(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::ComponentTooLarge { .. } => CliError::ComponentTooLarge(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
