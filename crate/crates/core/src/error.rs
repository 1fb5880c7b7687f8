use std::io;
use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty spectrum: cutoff {cutoff} is below the ground-state energy {ground}")]
    EmptySpectrum { cutoff: f64, ground: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("trial state is void: no interval of length >= 3")]
    VoidTrialState,

    #[error("density {density} is not below the critical density {critical} for hard-core radius {radius}")]
    AboveCriticalDensity { density: f64, critical: f64, radius: f64 },

    #[error("thermo check infeasible at N = {n}: the exact recursion is limited to N <= {limit}; drop the thermo check or shrink the schedule")]
    InfeasibleThermo { n: u64, limit: u64 },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("report is empty: {0}")]
    EmptyReport(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
