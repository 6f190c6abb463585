//! Probability containers, alphabets, guessing lists and enumeration helpers.

mod alphabet;
pub mod enumerate;
mod list;
mod order;
mod pmf;

pub use alphabet::{Alphabet, Axis, MixedRadix};
pub use list::{guess_rank_bound, sort_to_list, GuessingList};
pub use order::{LogBase, OrderParam, ALPHA_ONE_GUARD};
pub use pmf::{JointPmf, MASS_TOL};
