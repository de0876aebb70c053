//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {func} at {at}")]
    Pole { func: &'static str, at: f64 },

    #[error("{func}: argument {value} outside domain ({expected})")]
    Domain {
        func: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{0}")]
    Divergence(String),

    #[error("{what} did not converge (estimated error {est_error:e})")]
    NonConvergence { what: String, est_error: f64 },

    #[error("critical point reached: {0}")]
    CriticalPoint(String),

    #[error("local kernel has no pointwise real-space density")]
    DeltaProfile,

    #[error("time ordering violated: t1 = {t1} > t2 = {t2}")]
    Ordering { t1: f64, t2: f64 },

    #[error("solution blew up near t = {t}")]
    BlowUp { t: f64 },

    #[error("particle count {count} exceeds cap {cap}")]
    CapExceeded { count: usize, cap: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no non-negative root: {0}")]
    NoRoot(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Numerical failures (divergence, tolerance, blow-up) as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Pole { .. }
                | Error::Divergence(_)
                | Error::NonConvergence { .. }
                | Error::CriticalPoint(_)
                | Error::BlowUp { .. }
                | Error::CapExceeded { .. }
                | Error::NoRoot(_)
        )
    }

    /// Short machine-readable tag used in CLI error records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Domain { .. } => "domain",
            Error::Divergence(_) => "divergence",
            Error::NonConvergence { .. } => "non_convergence",
            Error::CriticalPoint(_) => "critical_point",
            Error::DeltaProfile => "delta_profile",
            Error::Ordering { .. } => "ordering",
            Error::BlowUp { .. } => "blow_up",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::InsufficientData(_) => "insufficient_data",
            Error::NoRoot(_) => "no_root",
            Error::Invalid(_) => "invalid",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
