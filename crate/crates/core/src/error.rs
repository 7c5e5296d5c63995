use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("equilibrium solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },
    #[error("structural instability: transverse Hessian eigenvalue {eigenvalue:.6e} is negative")]
    Instability { eigenvalue: f64 },
    #[error("detuning {mu} resonant with mode {mode} at {omega}")]
    Resonance { mode: usize, omega: f64, mu: f64 },
    #[error("division by zero in {0}")]
    Division(&'static str),
    #[error("integration failed at t = {t}: step {step:.3e} below minimum (error estimate {error:.3e})")]
    Integration { t: f64, step: f64, error: f64 },
    #[error("spectral solver failed: {0}")]
    Spectral(String),
    #[error("gap closes on the ramp path at B = {field} (gap {gap:.3e})")]
    Divergence { field: f64, gap: f64 },
    #[error("undefined quantity: {0}")]
    Undefined(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad inputs rather than numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Dimension { .. })
    }
}
