use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("Gamma pole while differentiating grade {grade}: 1 + (k-1)*alpha = {argument} <= 0")]
    GammaPole { grade: f64, argument: f64 },

    #[error("series did not converge within {terms} terms")]
    NonConvergent { terms: usize },

    #[error("Muntz fit with max grade {max_grade} is ill-conditioned (condition {condition:.3e}); use a smaller max grade")]
    IllConditioned { max_grade: usize, condition: f64 },

    #[error("series contexts differ (alpha {left} vs {right})")]
    ContextMismatch { left: f64, right: f64 },

    #[error("parse error at position {position}: expected {expected}, found {found:?}")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("serialization error: {0}")]
    Serialize(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            op,
            detail: detail.into(),
        }
    }
}
