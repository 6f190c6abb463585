//! Deterministic instances shared by the criterion benchmarks in `benches/`.

use std::sync::Arc;

use guesslab::center::FamilySpec;
use guesslab::geometry::ConvexHullSet;
use guesslab::{Alphabet, Axis, JointPmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly positive PMF on `nx × ny` indexed symbols.
pub fn pmf(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointPmf {
    let al = Arc::new(Alphabet::new(Axis::indexed(nx), Axis::indexed(ny)));
    let w = (0..nx * ny).map(|_| rng.random_range(0.01..1.0)).collect();
    JointPmf::normalized(al, w).unwrap()
}

pub fn family(seed: u64, members: usize, nx: usize, ny: usize) -> FamilySpec {
    let mut r = rng(seed);
    FamilySpec::new((0..members).map(|_| pmf(&mut r, nx, ny)).collect()).unwrap()
}

pub fn hull(seed: u64, vertices: usize, nx: usize) -> (ConvexHullSet, JointPmf) {
    let mut r = rng(seed);
    let hull = ConvexHullSet::new((0..vertices).map(|_| pmf(&mut r, nx, 1)).collect()).unwrap();
    (hull, pmf(&mut r, nx, 1))
}
