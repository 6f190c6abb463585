//! Guessing strategies under source uncertainty.
//!
//! The crate computes guessing moments and redundancies, the `L_α`
//! divergence family, `L_α`-centers and radii of finite PMF families,
//! closed-form centers for arbitrarily varying sources, universal guessing
//! lists, and `L_α`-projections onto polytopes of PMFs.
//!
//! Every logarithmic quantity is reported in bits; convert with
//! [`LogBase::from_bits`].

pub mod center;
pub mod error;
pub mod families;
pub mod geometry;
pub mod guessing;
pub mod infomeasures;
pub mod io;
pub(crate) mod optim;
pub mod probkit;

pub use error::{Error, Result};
pub use infomeasures::Divergence;
pub use probkit::{sort_to_list, Alphabet, Axis, GuessingList, JointPmf, LogBase, OrderParam};

/// `log(1 + ln k)` in bits, the guessing nuisance term for an alphabet of size `k`.
pub fn nuisance(k: usize) -> f64 {
    (1.0 + (k as f64).ln()).log2()
}
