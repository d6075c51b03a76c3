use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cost matrix entry ({row}, {col}) is not a finite non-negative number")]
    BadCost { row: usize, col: usize },

    #[error("cost matrix rows have unequal lengths")]
    RaggedMatrix,

    #[error("instance too large for exhaustive search: {size} > {cap}")]
    Oversize { size: usize, cap: usize },

    #[error("invalid preference profile: {0}")]
    Profile(String),

    #[error("pair (driver {driver}, passenger {passenger}) is not admissible")]
    Inadmissible { driver: usize, passenger: usize },

    #[error("seed {seed} has no result for mechanism `{mechanism}`")]
    MissingMechanism { seed: u64, mechanism: &'static str },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
