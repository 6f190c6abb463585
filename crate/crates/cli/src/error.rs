use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Input {
        path: PathBuf,
        #[source]
        source: guesslab::Error,
    },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write report: {0}")]
    Write(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] guesslab::Error),
    #[error("csv export failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 2 for solver non-convergence, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(guesslab::Error::NoConvergence { .. }) => 2,
            _ => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_convergence_maps_to_two() {
        let e = CliError::Core(guesslab::Error::NoConvergence { iterations: 10, gap: 1e-3, best_weights: vec![1.0] });
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::Usage("x".into()).exit_code(), 1);
    }
}
