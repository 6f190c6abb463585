use std::collections::HashSet;

use crate::error::{Error, Result};

/// One axis of a product alphabet.
///
/// Product axes (`𝔸ⁿ`) are never materialized: symbol `i` is the n-digit
/// mixed-radix expansion of `i` over `letters`, most significant digit first,
/// so index order is lexicographic string order.
#[derive(Debug, Clone, Eq)]
pub enum Axis {
    Labels(Vec<String>),
    Product { letters: Vec<String>, n: usize },
}

impl Axis {
    pub fn labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("axis must be nonempty".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {l:?}")));
            }
        }
        Ok(Axis::Labels(labels))
    }

    /// Numeric labels `"0"`, `"1"`, ...
    pub fn indexed(len: usize) -> Self {
        Axis::Labels((0..len.max(1)).map(|i| i.to_string()).collect())
    }

    pub fn product<S: Into<String>>(letters: impl IntoIterator<Item = S>, n: usize) -> Result<Self> {
        let letters = match Axis::labels(letters)? {
            Axis::Labels(l) => l,
            Axis::Product { .. } => unreachable!(),
        };
        if n == 0 {
            return Err(Error::InvalidAlphabet("string length must be >= 1".into()));
        }
        (letters.len() as u128)
            .checked_pow(n as u32)
            .filter(|&s| s <= usize::MAX as u128)
            .ok_or_else(|| Error::InvalidAlphabet("product alphabet too large".into()))?;
        Ok(Axis::Product { letters, n })
    }

    pub fn len(&self) -> usize {
        match self {
            Axis::Labels(l) => l.len(),
            Axis::Product { letters, n } => letters.len().pow(*n as u32),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> String {
        match self {
            Axis::Labels(l) => l[i].clone(),
            Axis::Product { letters, n } => {
                let digits = MixedRadix::new(letters.len(), *n).digits(i);
                let sep = if letters.iter().all(|l| l.chars().count() == 1) { "" } else { "," };
                digits.iter().map(|&d| letters[d].as_str()).collect::<Vec<_>>().join(sep)
            }
        }
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        match self {
            Axis::Labels(l) => l.iter().position(|s| s == label),
            Axis::Product { .. } => (0..self.len()).find(|&i| self.label(i) == label),
        }
    }

    pub fn all_labels(&self) -> Vec<String> {
        (0..self.len()).map(|i| self.label(i)).collect()
    }
}

/// Axes are equal when they list the same labels in the same order, whether
/// or not either is stored as a product.
impl PartialEq for Axis {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Axis::Labels(a), Axis::Labels(b)) => a == b,
            (Axis::Product { letters: a, n: m }, Axis::Product { letters: b, n }) => a == b && m == n,
            _ => self.len() == other.len() && (0..self.len()).all(|i| self.label(i) == other.label(i)),
        }
    }
}

/// Finite alphabet `𝕏 × 𝕐`. A singleton `y` axis means no side information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    x: Axis,
    y: Axis,
}

impl Alphabet {
    pub fn new(x: Axis, y: Axis) -> Self {
        Alphabet { x, y }
    }

    /// Alphabet without side information.
    pub fn plain(x: Axis) -> Self {
        Alphabet { x, y: Axis::Labels(vec!["·".into()]) }
    }

    /// `len` numerically labelled symbols, no side information.
    pub fn indexed(len: usize) -> Self {
        Alphabet::plain(Axis::indexed(len))
    }

    pub fn x(&self) -> &Axis {
        &self.x
    }

    pub fn y(&self) -> &Axis {
        &self.y
    }

    pub fn nx(&self) -> usize {
        self.x.len()
    }

    pub fn ny(&self) -> usize {
        self.y.len()
    }

    pub fn cells(&self) -> usize {
        self.nx() * self.ny()
    }
}

/// Mixed-radix (fixed base) positional codec used for product alphabets.
#[derive(Debug, Clone, Copy)]
pub struct MixedRadix {
    base: usize,
    digits: usize,
}

impl MixedRadix {
    pub fn new(base: usize, digits: usize) -> Self {
        MixedRadix { base, digits }
    }

    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.digits];
        for slot in out.iter_mut().rev() {
            *slot = index % self.base;
            index /= self.base;
        }
        out
    }

    pub fn index(&self, digits: &[usize]) -> usize {
        digits.iter().fold(0, |acc, &d| acc * self.base + d)
    }

    /// Letter counts of the string at `index`.
    pub fn counts(&self, index: usize) -> Vec<usize> {
        let mut c = vec![0; self.base];
        for d in self.digits(index) {
            c[d] += 1;
        }
        c
    }
}
