use thiserror::Error;

/// Failures reported by the library. Every public fallible operation returns this type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("value out of representable range: {0}")]
    Range(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("arg {arg} lies within 1e-12 of the boundary of the window ({lo}, {hi})")]
    BranchCut { arg: f64, lo: f64, hi: f64 },
    #[error("gamma pole near {0}")]
    Pole(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("series did not reach the target accuracy within {0} terms")]
    Truncation(usize),
    #[error("z = {z} is outside the window of sector {sector}")]
    Sector { sector: u8, z: String },
    #[error("parameters lie on the Hastings-McLeod boundary: {0}")]
    Boundary(String),
    #[error("solution exceeded the blow-up threshold at x = {x}")]
    BlowUp { x: f64 },
    #[error("step budget exhausted at x = {x}")]
    Budget { x: f64 },
    #[error("step size underflow at x = {x}")]
    StepSize { x: f64 },
    #[error("trajectory does not cover {0}")]
    Coverage(String),
    #[error("insufficient resolution: {0}")]
    Resolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
