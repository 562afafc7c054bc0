use thiserror::Error;

use crate::lp_beamformer::PowerAllocation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("device {device} has a zero mean channel (kappa = 0 carries no line-of-sight component)")]
    ZeroMeanChannel { device: usize },

    #[error("input matrix {index} is not Hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { index: usize, asymmetry: f64 },

    #[error("singular normal equations at affine-scaling iteration {iteration}")]
    SingularSystem { iteration: usize },

    #[error("affine scaling did not converge within {} iterations", best.iterations)]
    NotConverged { best: Box<PowerAllocation> },

    #[error("SDP solver stopped at relative gap {gap:.3e} after {iterations} Newton steps")]
    SdpNotConverged { gap: f64, iterations: usize, xi: f64 },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("config error at `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("config parse error: {0}")]
    ConfigSyntax(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn dimension(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }

    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn in_trial(self, trial: usize) -> Self {
        Error::Trial {
            trial,
            source: Box::new(self),
        }
    }
}
