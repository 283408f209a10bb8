use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Flag values that parse but describe no valid quench.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] xyquench::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
    #[error("{failed} of {total} rows failed")]
    RowsFailed { failed: usize, total: usize },
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
