use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the laboratory.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Parameters outside the admissible set.
    Domain(String),
    /// Derivative of a non-Lipschitz power requested at the origin.
    Singularity(String),
    /// An iterative or fitting procedure did not reach its tolerance.
    Convergence(String),
    /// A fitted model left a residual above tolerance.
    Fit(String),
    /// An ODE solution exceeded the overflow guard before the horizon.
    Blowup { time: f64, value: f64 },
    /// The indicial denominator vanished while lifting a monomial.
    Resonance { exponent: f64 },
    /// A monomial sum grew past the configured cap.
    Overflow { terms: usize, cap: usize },
    /// Adaptive stepping shrank the step below the floor.
    StepSizeUnderflow { time: f64, step: f64 },
    /// Requested horizon cannot contain the event being simulated.
    Horizon(String),
}

impl Error {
    /// Stable machine-readable code, used by the command line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Singularity(_) => "singularity",
            Error::Convergence(_) => "convergence",
            Error::Fit(_) => "fit",
            Error::Blowup { .. } => "blowup",
            Error::Resonance { .. } => "resonance",
            Error::Overflow { .. } => "overflow",
            Error::StepSizeUnderflow { .. } => "step_size_underflow",
            Error::Horizon(_) => "horizon",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Singularity(msg) => write!(f, "singularity: {msg}"),
            Error::Convergence(msg) => write!(f, "no convergence: {msg}"),
            Error::Fit(msg) => write!(f, "fit failed: {msg}"),
            Error::Blowup { time, value } => {
                write!(f, "solution exceeded guard ({value:e}) at t = {time}")
            }
            Error::Resonance { exponent } => {
                write!(f, "indicial resonance at exponent {exponent}")
            }
            Error::Overflow { terms, cap } => {
                write!(f, "monomial sum has {terms} terms, cap is {cap}")
            }
            Error::StepSizeUnderflow { time, step } => {
                write!(f, "step size {step:e} underflowed at t = {time}")
            }
            Error::Horizon(msg) => write!(f, "horizon too short: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
