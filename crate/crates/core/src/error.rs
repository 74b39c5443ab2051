use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "Bogoliubov frame undefined: squeezing strength lambda = {lambda:.6e} rad/s must stay below \
         the effective detuning delta_b' = {delta_b_prime:.6e} rad/s"
    )]
    FrameUndefined { lambda: f64, delta_b_prime: f64 },

    #[error("self-Kerr coefficient is zero, no squeezing can be generated")]
    NoSqueezing,

    #[error("bare tripartite coupling g is zero")]
    NoCoupling,

    #[error("mechanical response is singular for the {component} sideband (omega_c = |delta_d| with kappa_c = 0)")]
    SingularResponse { component: &'static str },

    #[error("steady-amplitude solve did not converge after {iterations} iterations (scaled residual {residual:.3e}); the Kerr system may be bistable here")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("drift matrix is singular, no unique steady state")]
    NoSteadyState,

    #[error("moment dynamics unstable: eigenvalue {eigenvalue} has non-negative real part")]
    Unstable { eigenvalue: Complex64 },

    #[error("time step {dt:.3e} s too large: spectral radius * dt = {product:.3} exceeds {limit}")]
    StepSize { dt: f64, product: f64, limit: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
