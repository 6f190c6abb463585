//! Discrete memoryless sources on `𝔸ⁿ`.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::stitch::{stitch_lists, StitchedList};
use crate::error::{Error, Result};
use crate::infomeasures::{ln_power_sum, tilt};
use crate::probkit::{Alphabet, Axis, GuessingList, JointPmf, MixedRadix, OrderParam};
use crate::Divergence;

/// Largest product alphabet that is enumerated explicitly.
pub const ENUMERATION_CAP: u128 = 2_000_000;

/// Strings of length `n` over `letters`, optionally with a letter PMF.
#[derive(Debug, Clone)]
pub struct DmsSpec {
    pub letters: Vec<String>,
    pub n: usize,
    pub p: Option<Vec<f64>>,
}

impl DmsSpec {
    pub fn binary(n: usize) -> Self {
        DmsSpec { letters: vec!["0".into(), "1".into()], n, p: None }
    }

    pub fn with_p(mut self, p: Vec<f64>) -> Self {
        self.p = Some(p);
        self
    }

    pub fn alphabet(&self) -> Result<Arc<Alphabet>> {
        if self.letters.len() < 2 {
            return Err(Error::InvalidAlphabet("a memoryless source needs at least two letters".into()));
        }
        check_cap(self.letters.len(), self.n, 1)?;
        Ok(Arc::new(Alphabet::plain(Axis::product(self.letters.iter().cloned(), self.n)?)))
    }
}

pub(crate) fn check_cap(m: usize, n: usize, multiplier: u128) -> Result<()> {
    let size = (m as u128)
        .checked_pow(n as u32)
        .and_then(|s| s.checked_mul(multiplier))
        .unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        Err(Error::CapExceeded { size, cap: ENUMERATION_CAP })
    } else {
        Ok(())
    }
}

/// `P(xⁿ) = Π_a p_a^{N(a|xⁿ)}`, evaluated from letter counts so that all
/// strings of one type get bit-identical mass.
pub fn dms_pmf(spec: &DmsSpec) -> Result<JointPmf> {
    let al = spec.alphabet()?;
    let p = spec.p.as_ref().ok_or_else(|| Error::InvalidArgument("letter PMF required".into()))?;
    if p.len() != spec.letters.len() {
        return Err(Error::InvalidPmf("letter PMF does not match the letter alphabet".into()));
    }
    JointPmf::new(Arc::new(Alphabet::new(Axis::indexed(p.len()), Axis::indexed(1))), p.clone())?;
    let radix = MixedRadix::new(p.len(), spec.n);
    let mass = (0..al.nx())
        .map(|i| radix.counts(i).iter().zip(p).map(|(&c, &pa)| pa.powi(c as i32)).product())
        .collect();
    JointPmf::normalized(al, mass)
}

/// Empirical entropy (nats) of a type, computed from sorted counts so that
/// permuted types tie exactly.
fn type_entropy(counts: &[usize]) -> f64 {
    let mut c: Vec<usize> = counts.to_vec();
    c.sort_unstable();
    let n: usize = c.iter().sum();
    c.iter()
        .filter(|&&k| k > 0)
        .map(|&k| {
            let q = k as f64 / n as f64;
            -q * q.ln()
        })
        .sum()
}

/// The universal guesser: strings by ascending empirical entropy of their type.
///
/// Each type is guessed as a contiguous block in lexicographic string order;
/// types of equal entropy are ordered by their lexicographically first string.
pub fn empirical_entropy_list(spec: &DmsSpec) -> Result<GuessingList> {
    let al = spec.alphabet()?;
    let radix = MixedRadix::new(spec.letters.len(), spec.n);
    let mut keyed: Vec<(f64, Vec<usize>, usize)> = (0..al.nx())
        .map(|i| {
            let c = radix.counts(i);
            (type_entropy(&c), c, i)
        })
        .collect();
    // descending count vectors put the type with the earliest first string first
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
    let order: Vec<usize> = keyed.into_iter().map(|k| k.2).collect();
    GuessingList::from_orders(al, &[order])
}

/// `r_n = (m−1)/2 · log(n/2π) + u_m` with `u_m = log(Γ(1/2)^m / Γ(m/2))`.
#[derive(Debug, Clone, Serialize)]
pub struct DmsRadiusBound {
    pub m: usize,
    pub n: usize,
    pub log_term: f64,
    pub u_m: f64,
    pub bound: f64,
    /// The vanishing correction `ε_n` is not computed.
    pub epsilon_n_omitted: bool,
}

pub fn dms_radius_bound(m: usize, n: usize) -> Result<DmsRadiusBound> {
    if m < 2 || n < 1 {
        return Err(Error::InvalidArgument(format!("need m >= 2 and n >= 1, got m = {m}, n = {n}")));
    }
    let log_term = (m as f64 - 1.0) / 2.0 * (n as f64 / (2.0 * PI)).log2();
    let u_m = (m as f64 * ln_gamma(0.5) - ln_gamma(m as f64 / 2.0)) / LN_2;
    Ok(DmsRadiusBound { m, n, log_term, u_m, bound: log_term + u_m, epsilon_n_omitted: true })
}

/// `Σ_y w(y) D(P'(·|y) ‖ Q'(·|y))` in bits, the Jensen lower bound on `L_α(P, Q)`.
pub fn jensen_lower_bound(p: &JointPmf, q: &JointPmf, op: OrderParam) -> Result<Divergence> {
    op.require_positive_rho()?;
    p.check_same_alphabet(q)?;
    let alpha = op.alpha();
    let pt = tilt(p, op);
    let qt = tilt(q, op);
    let ln_w: Vec<f64> = p.rows().map(|r| ln_power_sum(r, alpha) / alpha).collect();
    let ln_h = ln_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let norm: f64 = ln_w.iter().map(|l| (l - ln_h).exp()).sum();
    let mut total = 0.0;
    for (y, lw) in ln_w.iter().enumerate() {
        let w = (lw - ln_h).exp() / norm;
        if w == 0.0 {
            continue;
        }
        for (&a, &b) in pt.row(y).iter().zip(qt.row(y)) {
            if a > 0.0 {
                if b == 0.0 {
                    return Ok(Divergence::INFINITE);
                }
                total += w * a * (a / b).log2();
            }
        }
    }
    Ok(Divergence::from_bits(total))
}

/// Two-list strategy for binary strings: one list by descending number of
/// ones, the other by ascending number of ones, each lexicographic within a
/// weight class, stitched together.
///
/// Each component is `G_{P_n}` for some `p` (`p > 1/2` or `p < 1/2`), so the
/// merged list is within a factor two of the optimal list for every `p`.
pub fn binary_two_list(n: usize) -> Result<StitchedList> {
    if !(1..=20).contains(&n) {
        return Err(Error::InvalidArgument(format!("binary two-list supports 1 <= n <= 20, got {n}")));
    }
    let al = DmsSpec::binary(n).alphabet()?;
    let ones = |i: &usize| i.count_ones();
    let mut desc: Vec<usize> = (0..al.nx()).collect();
    desc.sort_by(|a, b| ones(b).cmp(&ones(a)).then(a.cmp(b)));
    let mut asc: Vec<usize> = (0..al.nx()).collect();
    asc.sort_by(|a, b| ones(a).cmp(&ones(b)).then(a.cmp(b)));
    let lists = [
        GuessingList::from_orders(al.clone(), &[desc])?,
        GuessingList::from_orders(al, &[asc])?,
    ];
    stitch_lists(&lists)
}
