//! Reporting layer: built-in corpus, config-driven sweeps, tightness
//! aggregation, and the self-check suite behind `amtrap verify`.

pub mod corpus;
pub mod sweep;
pub mod tightness;
pub mod verify;

use thiserror::Error;

use crate::bounds::BoundError;

/// A row passing the convexity gate must not undercut any bound by more
/// than this.
pub const DOMINANCE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {fields}")]
    InvalidConfig { fields: String },
    #[error("unknown function id {id:?}")]
    UnknownFunction { id: String },
    #[error("cannot read config {path}: {source}")]
    ConfigIo {
        path: String,
        source: std::io::Error,
    },
    #[error("cannot parse config {path}: {source}")]
    ConfigParse {
        path: String,
        source: serde_json::Error,
    },
    #[error("cannot write output {path}: {source}")]
    OutputIo {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// 17 significant digits; round-trips every finite f64.
pub(crate) fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}
