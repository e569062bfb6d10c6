//! Experiment harness: seeded trial batches, scoring against exact oracles,
//! scaling fits, and the validation and lower-bound reports behind the
//! `pricing` command.

mod config;
mod experiment;
mod lowerbound;
mod slope;
mod validate;

use thiserror::Error;

use crate::dist::{DistError, ParseError};
use crate::estimators::EstimatorError;

pub use config::{parse_key_values, EstimatorKind, ExperimentConfig};
pub use experiment::{
    meta_path, run_experiment, EpsSummary, ExperimentOutput, ExperimentRecord, RecordSink, TrialContext,
};
pub use lowerbound::{emit_lowerbound_family, LowerBoundFamily, LowerBoundReport};
pub use slope::{fit_slope, fit_slope_points, median, SlopeFit};
pub use validate::{validate_distribution, ValidationReport};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("bad distribution spec: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
    #[error("insufficient data for a slope fit: {0}")]
    InsufficientData(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    /// Process exit status for this error: 2 for configuration problems,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Parse(_) | BenchError::Dist(_) | BenchError::Construction(_) => 2,
            _ => 1,
        }
    }
}
