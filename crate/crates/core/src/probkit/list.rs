use std::sync::Arc;

use super::alphabet::Alphabet;
use super::pmf::JointPmf;
use crate::error::{Error, Result};

/// A guessing strategy: for each `y`, a bijection from `𝕏` onto ranks `1..=|𝕏|`.
#[derive(Debug, Clone)]
pub struct GuessingList {
    alphabet: Arc<Alphabet>,
    rank: Vec<usize>,
}

impl PartialEq for GuessingList {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet)
            && self.rank == other.rank
    }
}

impl Eq for GuessingList {}

impl GuessingList {
    /// Builds a list from ranks stored row-major like [`JointPmf`].
    pub fn new(alphabet: Arc<Alphabet>, rank: Vec<usize>) -> Result<Self> {
        let nx = alphabet.nx();
        if rank.len() != alphabet.cells() {
            return Err(Error::InvalidList(format!(
                "expected {} ranks, got {}",
                alphabet.cells(),
                rank.len()
            )));
        }
        for (y, row) in rank.chunks(nx).enumerate() {
            let mut seen = vec![false; nx];
            for &r in row {
                if r == 0 || r > nx || std::mem::replace(&mut seen[r - 1], true) {
                    return Err(Error::InvalidList(format!(
                        "ranks for y index {y} are not a permutation of 1..={nx}"
                    )));
                }
            }
        }
        Ok(GuessingList { alphabet, rank })
    }

    /// Builds a list from guess orders: `orders[y]` lists `x` indices in guessing order.
    pub fn from_orders(alphabet: Arc<Alphabet>, orders: &[Vec<usize>]) -> Result<Self> {
        let nx = alphabet.nx();
        if orders.len() != alphabet.ny() {
            return Err(Error::InvalidList("one order per y value required".into()));
        }
        let mut rank = vec![0; alphabet.cells()];
        for (y, order) in orders.iter().enumerate() {
            if order.len() != nx {
                return Err(Error::InvalidList(format!("order for y index {y} has wrong length")));
            }
            for (pos, &x) in order.iter().enumerate() {
                if x >= nx {
                    return Err(Error::InvalidList(format!("symbol index {x} out of range")));
                }
                rank[y * nx + x] = pos + 1;
            }
        }
        GuessingList::new(alphabet, rank)
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

    pub fn rank(&self, x: usize, y: usize) -> usize {
        self.rank[y * self.nx() + x]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank
    }

    /// Symbols in guessing order for side information `y`.
    pub fn order(&self, y: usize) -> Vec<usize> {
        let nx = self.nx();
        let mut order = vec![0; nx];
        for x in 0..nx {
            order[self.rank(x, y) - 1] = x;
        }
        order
    }

    pub fn check_alphabet(&self, pmf: &JointPmf) -> Result<()> {
        if Arc::ptr_eq(&self.alphabet, pmf.alphabet()) || *self.alphabet == **pmf.alphabet() {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch("guessing list and PMF alphabets differ".into()))
        }
    }
}

/// `G_P`: guess in decreasing order of `P(·, y)`, ties broken by alphabet index.
pub fn sort_to_list(p: &JointPmf) -> GuessingList {
    let nx = p.nx();
    let mut rank = vec![0; p.alphabet().cells()];
    let mut order: Vec<usize> = (0..nx).collect();
    for (y, row) in p.rows().enumerate() {
        order.iter_mut().enumerate().for_each(|(i, o)| *o = i);
        // stable sort keeps lower index first on exact ties
        order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
        for (pos, &x) in order.iter().enumerate() {
            rank[y * nx + x] = pos + 1;
        }
    }
    GuessingList { alphabet: p.alphabet().clone(), rank }
}

/// Checks `G(x,y) ≤ Σₐ 1{Q(a,y) ≥ Q(x,y)}` on every cell.
pub fn guess_rank_bound(g: &GuessingList, q: &JointPmf) -> bool {
    if g.check_alphabet(q).is_err() {
        return false;
    }
    q.rows().enumerate().all(|(y, row)| {
        row.iter()
            .enumerate()
            .all(|(x, &qx)| g.rank(x, y) <= row.iter().filter(|&&qa| qa >= qx).count())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probkit::alphabet::Axis;

    #[test]
    fn sorted_with_alphabet_tie_break() {
        let p = JointPmf::from_probs(&[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(sort_to_list(&p).ranks(), &[1, 2, 3]);
        let u = JointPmf::from_probs(&[0.5, 0.5]).unwrap();
        assert_eq!(sort_to_list(&u).ranks(), &[1, 2]);
    }

    #[test]
    fn sorts_each_side_information_row() {
        let al = Arc::new(Alphabet::new(Axis::labels(["a", "b"]).unwrap(), Axis::indexed(2)));
        let p = JointPmf::from_rows(al, &[vec![0.05, 0.45], vec![0.45, 0.05]]).unwrap();
        let g = sort_to_list(&p);
        assert_eq!(g.order(0), vec![1, 0]);
        assert_eq!(g.order(1), vec![0, 1]);
    }

    #[test]
    fn rank_bound_self_test() {
        for probs in [vec![1.0 / 3.0; 3], vec![0.5, 0.3, 0.2], vec![0.1, 0.6, 0.1, 0.2]] {
            let q = JointPmf::from_probs(&probs).unwrap();
            assert!(guess_rank_bound(&sort_to_list(&q), &q));
        }
    }

    #[test]
    fn rejects_non_bijection() {
        let al = Arc::new(Alphabet::indexed(3));
        assert!(GuessingList::new(al.clone(), vec![1, 1, 3]).is_err());
        assert!(GuessingList::new(al.clone(), vec![1, 2, 4]).is_err());
        assert!(GuessingList::new(al, vec![3, 1, 2]).is_ok());
    }
}
