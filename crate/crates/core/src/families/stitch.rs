use serde::Serialize;

use crate::error::{Error, Result};
use crate::probkit::GuessingList;

/// A merged list built from `N` component lists; every symbol's merged rank is
/// at most `N` times its rank in any component.
#[derive(Debug, Clone, Serialize)]
pub struct StitchedList {
    pub components: Vec<GuessingList>,
    pub merged: GuessingList,
}

impl StitchedList {
    pub fn count(&self) -> usize {
        self.components.len()
    }

    /// Checks `merged ≤ N · component` cell by cell in integer arithmetic.
    pub fn factor_bound_holds(&self) -> bool {
        let n = self.count();
        self.components
            .iter()
            .all(|c| self.merged.ranks().iter().zip(c.ranks()).all(|(&m, &k)| m <= n * k))
    }
}

/// Interleaves the lists position by position (raster order), skipping
/// symbols already placed, separately for each `y`.
pub fn stitch_lists(lists: &[GuessingList]) -> Result<StitchedList> {
    let first = lists.first().ok_or_else(|| Error::InvalidArgument("nothing to stitch".into()))?;
    let al = first.alphabet().clone();
    if lists.iter().any(|g| g.alphabet() != &al) {
        return Err(Error::AlphabetMismatch("stitched lists must share an alphabet".into()));
    }
    let nx = al.nx();
    let mut orders = Vec::with_capacity(al.ny());
    for y in 0..al.ny() {
        let comps: Vec<Vec<usize>> = lists.iter().map(|g| g.order(y)).collect();
        let mut placed = vec![false; nx];
        let mut order = Vec::with_capacity(nx);
        for pos in 0..nx {
            for c in &comps {
                let x = c[pos];
                if !placed[x] {
                    placed[x] = true;
                    order.push(x);
                }
            }
        }
        orders.push(order);
    }
    Ok(StitchedList { components: lists.to_vec(), merged: GuessingList::from_orders(al, &orders)? })
}
