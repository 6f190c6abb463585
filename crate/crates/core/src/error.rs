use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid guessing list: {0}")]
    InvalidList(String),
    #[error("invalid order parameter: {0}")]
    InvalidOrder(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("full-support Q required")]
    SupportRequired,
    #[error("side information not supported here: {0}")]
    SideInformation(&'static str),
    #[error("kraft window violated for y index {y}: sum = {sum}")]
    KraftWindow { y: usize, sum: f64 },
    #[error("enumeration cap exceeded: {size} > {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infinite divergence: {0}")]
    Infinite(String),
    #[error("projection undefined: no hull point has finite divergence to the reference")]
    ProjectionUndefined,
    #[error("solver did not converge after {iterations} iterations (duality gap {gap:e})")]
    NoConvergence {
        iterations: usize,
        gap: f64,
        best_weights: Vec<f64>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
