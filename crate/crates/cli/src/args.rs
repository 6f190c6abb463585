use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use guesslab::LogBase;
use serde::Serialize;

/// Guessing moments, L_α divergences, minimax centers and projections for
/// finite PMF families.
///
/// Inputs are JSON documents: a PMF is {"x": [...], "y": [...], "mass": [[...], ...]}
/// with one mass row per side-information symbol ("y" may be omitted); a
/// guessing list uses "rank" rows instead of "mass"; a family is
/// {"members": [pmf, ...]}; a hull is {"vertices": [pmf, ...]}.
///
/// Exit status: 0 on success, 1 on invalid input or arguments, 2 when a
/// solver fails to converge. Set GUESSLAB_LOG (e.g. `debug`) for diagnostics.
#[derive(Debug, Parser)]
#[command(name = "guesslab", version, max_term_width = 100)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Order α of the divergence (0 < α, α ≠ 1); conflicts with --rho
    #[arg(long, global = true, conflicts_with = "rho")]
    pub alpha: Option<f64>,
    /// Moment order ρ = 1/α − 1 (ρ > −1, ρ ≠ 0); conflicts with --alpha
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    /// Base of reported logarithmic quantities: 2 (bits) or e (nats)
    #[arg(long, global = true, default_value = "2")]
    pub log_base: LogBase,
    /// Solver tolerance (duality gap for centers, value for projections)
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Seed for randomized restarts
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report format; CSV exports a flat table of per-member values
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for per-member evaluations [default: available parallelism]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditional Rényi entropy H_α(X|Y) and the scaled norm h(P)
    Entropy {
        #[arg(long)]
        pmf: PathBuf,
    },
    /// L_α(P, Q), I(P, Q) and the α → 1 limit (conditional KL)
    Divergence {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    /// Guessing moments and redundancies (ρ > 0)
    #[command(subcommand)]
    Guess(GuessCommand),
    /// Campbell's exponentiated code lengths
    #[command(subcommand)]
    Code(CodeCommand),
    /// Minimax L_α center of a finite family
    #[command(subcommand)]
    Center(CenterCommand),
    /// Discrete memoryless sources over strings of length n
    #[command(subcommand)]
    Dms(DmsCommand),
    /// Arbitrarily varying sources
    #[command(subcommand)]
    Avs(AvsCommand),
    /// L_α projections onto convex hulls
    #[command(subcommand)]
    Geom(GeomCommand),
}

#[derive(Debug, Subcommand)]
pub enum GuessCommand {
    /// E[G^ρ] and its exponent for a list (default: the matched list of P)
    Moment {
        #[arg(long)]
        pmf: PathBuf,
        #[arg(long)]
        list: Option<PathBuf>,
    },
    /// Redundancy of a list next to L_α(P, Q_G)
    Redundancy {
        #[arg(long)]
        pmf: PathBuf,
        #[arg(long)]
        list: PathBuf,
    },
    /// Matched exponent with its Rényi-entropy bounds
    Sandwich {
        #[arg(long)]
        pmf: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Optimal lengths by exhaustive search (|X| ≤ 6); with --q, also the
    /// lengths designed for Q and their redundancy on P
    Campbell {
        #[arg(long)]
        pmf: PathBuf,
        #[arg(long)]
        q: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CenterCommand {
    /// Solve for μ*, Q* and the radius C
    Solve {
        #[arg(long)]
        family: PathBuf,
        /// Extra solves from seeded random weights, reporting their spread
        #[arg(long, default_value_t = 0)]
        restarts: usize,
    },
    /// Evaluate a candidate center against the solved radius
    Check {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum DmsCommand {
    /// Empirical-entropy guessing order, with its redundancy when --p is given
    Universal {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        letters: Vec<String>,
        /// Letter probabilities, comma separated
        #[arg(long, value_delimiter = ',')]
        p: Option<Vec<f64>>,
    },
    /// Closed-form radius growth term for m letters and length n
    RadiusBound {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum AvsCommand {
    /// Closed-form center and radius of one state type (spec needs "counts")
    Center {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Stitch the centers of every state type and check the redundancy bound
    Stitch {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Asymptotic per-letter rate for a state distribution
    Rate {
        #[arg(long)]
        spec: PathBuf,
        /// State probabilities, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        u: Vec<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeomCommand {
    /// Project a reference PMF onto a hull
    Project {
        #[arg(long)]
        hull: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
    /// Per-vertex Pythagorean terms at the projection
    Pythagoras {
        #[arg(long)]
        hull: PathBuf,
        #[arg(long)]
        reference: PathBuf,
    },
}
