use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("moment of order {order} is undefined for phi = {phi} (requires phi > {order})")]
    MomentUndefined { order: u32, phi: f64 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("could not bracket a root: {0}")]
    NoBracket(String),

    #[error("no convergence after {iterations} iterations: {detail}")]
    NonConvergence { iterations: usize, detail: String },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("bootstrap failed: {failed} of {total} replicates did not converge")]
    Bootstrap { failed: usize, total: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
