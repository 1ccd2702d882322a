use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("closed form requires a symmetric lossless filter (kappa1 == kappa2, kappa_loss == 0)")]
    ClosedFormInapplicable,

    #[error("singular feedback loop at omega = {omega}")]
    SingularLoop { omega: f64 },

    #[error("no net cooling: A+ = {a_plus}, A- = {a_minus}, gamma_m = {gamma_m}")]
    NoNetCooling {
        a_plus: f64,
        a_minus: f64,
        gamma_m: f64,
    },

    #[error("objective is not bracketed on [{lo}, {hi}]: {reason}")]
    BracketError { lo: f64, hi: f64, reason: String },

    #[error("network: {0}")]
    MalformedNetwork(String),

    #[error("loop delay tau = {tau} has no finite-dimensional state-space realization")]
    UnsupportedDelay { tau: f64 },

    #[error("state-space model is unstable (max Re(eig) = {max_real_part})")]
    UnstableModel { max_real_part: f64 },

    #[error("negative phonon number {0} from covariance")]
    NegativeOccupation(f64),

    #[error("Lyapunov solve failed: {0}")]
    SolverFailure(String),
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParam {
        name,
        reason: reason.into(),
    }
}
