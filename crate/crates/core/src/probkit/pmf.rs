use std::sync::Arc;

use super::alphabet::{Alphabet, Axis};
use crate::error::{Error, Result};

/// Validation tolerance on total mass.
pub const MASS_TOL: f64 = 1e-12;

/// Probability mass function on `𝕏 × 𝕐`, stored row-major (`y` outer, `x` inner).
#[derive(Debug, Clone)]
pub struct JointPmf {
    alphabet: Arc<Alphabet>,
    mass: Vec<f64>,
}

impl PartialEq for JointPmf {
    fn eq(&self, other: &Self) -> bool {
        self.same_alphabet(other) && self.mass == other.mass
    }
}

impl JointPmf {
    pub fn new(alphabet: Arc<Alphabet>, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != alphabet.cells() {
            return Err(Error::InvalidPmf(format!(
                "expected {} cells, got {}",
                alphabet.cells(),
                mass.len()
            )));
        }
        if let Some(bad) = mass.iter().find(|m| !m.is_finite() || **m < 0.0) {
            return Err(Error::InvalidPmf(format!("entry {bad} is not a finite nonnegative number")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidPmf(format!("mass sums to {total}, not 1")));
        }
        Ok(JointPmf { alphabet, mass })
    }

    /// Scales nonnegative weights to unit mass.
    pub fn normalized(alphabet: Arc<Alphabet>, mut weights: Vec<f64>) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidPmf(format!("cannot normalize total mass {total}")));
        }
        weights.iter_mut().for_each(|w| *w /= total);
        JointPmf::new(alphabet, weights)
    }

    /// PMF on numerically labelled symbols with no side information.
    pub fn from_probs(probs: &[f64]) -> Result<Self> {
        JointPmf::new(Arc::new(Alphabet::indexed(probs.len())), probs.to_vec())
    }

    /// One row per `y`, each row indexed by `x`.
    pub fn from_rows(alphabet: Arc<Alphabet>, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != alphabet.ny() || rows.iter().any(|r| r.len() != alphabet.nx()) {
            return Err(Error::InvalidPmf("row shape does not match alphabet".into()));
        }
        JointPmf::new(alphabet, rows.concat())
    }

    pub fn uniform(alphabet: Arc<Alphabet>) -> Self {
        let n = alphabet.cells();
        JointPmf { alphabet, mass: vec![1.0 / n as f64; n] }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn nx(&self) -> usize {
        self.alphabet.nx()
    }

    pub fn ny(&self) -> usize {
        self.alphabet.ny()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.mass[y * self.nx() + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        let nx = self.nx();
        &self.mass[y * nx..(y + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.mass.chunks(self.nx())
    }

    /// Cells with strictly positive mass, as `(x, y)` pairs.
    pub fn support(&self) -> Vec<(usize, usize)> {
        let nx = self.nx();
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(i, _)| (i % nx, i / nx))
            .collect()
    }

    pub fn is_full_support(&self) -> bool {
        self.mass.iter().all(|&m| m > 0.0)
    }

    pub fn same_alphabet(&self, other: &JointPmf) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    pub fn check_same_alphabet(&self, other: &JointPmf) -> Result<()> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch("PMFs live on different alphabets".into()))
        }
    }

    pub fn max_abs_diff(&self, other: &JointPmf) -> f64 {
        self.mass.iter().zip(&other.mass).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Convex combination `Σ wᵢ Pᵢ`; weights are renormalized.
    pub fn mixture(weights: &[f64], members: &[&JointPmf]) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("mixture of zero members".into()))?;
        if weights.len() != members.len() {
            return Err(Error::InvalidArgument("weights and members differ in length".into()));
        }
        let mut acc = vec![0.0; first.mass.len()];
        for (w, p) in weights.iter().zip(members) {
            first.check_same_alphabet(p)?;
            if *w < 0.0 {
                return Err(Error::InvalidArgument("negative mixture weight".into()));
            }
            for (a, m) in acc.iter_mut().zip(&p.mass) {
                *a += w * m;
            }
        }
        JointPmf::normalized(first.alphabet.clone(), acc)
    }

    /// Pushforward through a cell map `(x, y) -> (x', y')` onto `target`.
    pub fn push_forward(
        &self,
        target: Arc<Alphabet>,
        map: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Self> {
        let mut out = vec![0.0; target.cells()];
        for y in 0..self.ny() {
            for x in 0..self.nx() {
                let (tx, ty) = map(x, y);
                if tx >= target.nx() || ty >= target.ny() {
                    return Err(Error::InvalidArgument(format!("cell ({x},{y}) maps outside target")));
                }
                out[ty * target.nx() + tx] += self.get(x, y);
            }
        }
        JointPmf::normalized(target, out)
    }

    /// Same mass viewed without side information: `x` becomes the pair `(x, y)`.
    pub fn flatten(&self) -> Self {
        let alphabet = if self.ny() == 1 {
            self.alphabet.clone()
        } else {
            Arc::new(Alphabet::plain(Axis::indexed(self.alphabet.cells())))
        };
        JointPmf { alphabet, mass: self.mass.clone() }
    }
}
