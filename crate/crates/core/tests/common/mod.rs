#![allow(dead_code)]

use std::sync::Arc;
use std::time::Instant;

use guesslab::probkit::enumerate::permutations;
use guesslab::{Alphabet, Axis, GuessingList, JointPmf};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn alphabet(nx: usize, ny: usize) -> Arc<Alphabet> {
    Arc::new(Alphabet::new(Axis::indexed(nx), Axis::indexed(ny)))
}

/// Flat Dirichlet sample on `nx × ny` cells.
pub fn full_pmf(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointPmf {
    let w: Vec<f64> = (0..nx * ny).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    JointPmf::normalized(alphabet(nx, ny), w).unwrap()
}

/// Like [`full_pmf`], but each cell is zeroed with probability `zero_prob`
/// (at least one cell keeps its mass).
pub fn sparse_pmf(rng: &mut ChaCha8Rng, nx: usize, ny: usize, zero_prob: f64) -> JointPmf {
    let mut w: Vec<f64> = (0..nx * ny).map(|_| rng.sample::<f64, _>(Exp1) + 1e-3).collect();
    let keep = rng.random_range(0..w.len());
    for (i, v) in w.iter_mut().enumerate() {
        if i != keep && rng.random_bool(zero_prob) {
            *v = 0.0;
        }
    }
    JointPmf::normalized(alphabet(nx, ny), w).unwrap()
}

pub fn random_list(rng: &mut ChaCha8Rng, al: &Arc<Alphabet>) -> GuessingList {
    let orders: Vec<Vec<usize>> = (0..al.ny())
        .map(|_| {
            let mut o: Vec<usize> = (0..al.nx()).collect();
            o.shuffle(rng);
            o
        })
        .collect();
    GuessingList::from_orders(al.clone(), &orders).unwrap()
}

/// Every guessing list on the alphabet (product of per-`y` permutations).
pub fn all_lists(al: &Arc<Alphabet>) -> Vec<GuessingList> {
    let perms = permutations(al.nx());
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for _ in 0..al.ny() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                perms.iter().map(move |p| {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(|o| GuessingList::from_orders(al.clone(), &o).unwrap()).collect()
}

/// Points of the simplex on `k` vertices with barycentric step `1/steps`.
pub fn simplex_grid(k: usize, steps: usize) -> Vec<Vec<f64>> {
    guesslab::probkit::enumerate::compositions(steps, k)
        .into_iter()
        .map(|c| c.into_iter().map(|v| v as f64 / steps as f64).collect())
        .collect()
}

/// Prints the one-line verdict of an acceptance criterion and returns `ok`.
pub fn verdict(id: u32, name: &str, ok: bool, detail: &str, started: Instant) -> bool {
    println!(
        "acceptance {id:>2} [{}] {name}: {detail} ({:.2?})",
        if ok { "PASS" } else { "FAIL" },
        started.elapsed()
    );
    ok
}

/// Minimizes `f` over the `k`-simplex: a barycentric grid of step `1/steps`,
/// followed by `levels` rounds of local zoom (step ÷ 10 over ±2 old steps)
/// around the incumbent. Returns `(coarse minimum, refined minimum)`; every
/// value is attained at an evaluated point, so both are upper bounds on the
/// true minimum.
pub fn grid_minimum(k: usize, steps: usize, levels: usize, f: impl Fn(&[f64]) -> f64) -> (f64, f64) {
    let mut best = (f64::INFINITY, vec![1.0 / k as f64; k]);
    for w in simplex_grid(k, steps) {
        let v = f(&w);
        if v < best.0 {
            best = (v, w);
        }
    }
    let coarse = best.0;
    let mut step = 1.0 / steps as f64;
    for _ in 0..levels {
        let fine = step / 10.0;
        let center = best.1.clone();
        let offsets: Vec<f64> = (-20..=20).map(|i| i as f64 * fine).collect();
        let mut idx = vec![0usize; k - 1];
        loop {
            let mut w: Vec<f64> = (0..k - 1).map(|j| center[j] + offsets[idx[j]]).collect();
            let last = 1.0 - w.iter().sum::<f64>();
            w.push(last);
            if w.iter().all(|&v| v >= -1e-15) {
                let w: Vec<f64> = w.into_iter().map(|v| v.max(0.0)).collect();
                let v = f(&w);
                if v < best.0 {
                    best = (v, w);
                }
            }
            // odometer over the free coordinates
            let mut j = 0;
            while j < k - 1 {
                idx[j] += 1;
                if idx[j] < offsets.len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == k - 1 {
                break;
            }
        }
        step = fine;
    }
    (coarse, best.0)
}
