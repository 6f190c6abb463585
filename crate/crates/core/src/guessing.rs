//! Guessing moments, mismatch bounds, the converse PMF `Q_G`, guessing
//! redundancy, and Campbell's exponentiated code lengths.

use std::f64::consts::LN_2;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::infomeasures::{renyi_entropy, tilt};
use crate::nuisance;
use crate::probkit::{sort_to_list, Alphabet, GuessingList, JointPmf, OrderParam};

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > -1.0 && rho != 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(format!("rho must lie in (-1, inf) minus 0, got {rho}")))
    }
}

fn check_positive_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && rho > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidOrder(format!("rho > 0 required, got {rho}")))
    }
}

/// `E[G(X,Y)^ρ]` under `P`.
pub fn guessing_moment(p: &JointPmf, g: &GuessingList, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    g.check_alphabet(p)?;
    Ok(p.mass()
        .iter()
        .zip(g.ranks())
        .filter(|(&m, _)| m > 0.0)
        .map(|(&m, &r)| m * (r as f64).powf(rho))
        .sum())
}

/// `(1/ρ) log E[G^ρ]` in bits.
pub fn guessing_exponent(p: &JointPmf, g: &GuessingList, rho: f64) -> Result<f64> {
    Ok(guessing_moment(p, g, rho)?.log2() / rho)
}

/// `(1/ρ) log Σ P(x,y) [Σₐ (Q(a,y)/Q(x,y))^{1/(1+ρ)}]^ρ`, the common right side of
/// the mismatch and converse bounds.
fn mismatch_expression(p: &JointPmf, q: &JointPmf, rho: f64) -> f64 {
    let a = 1.0 / (1.0 + rho);
    let total: f64 = p
        .rows()
        .zip(q.rows())
        .map(|(prow, qrow)| {
            let norm: f64 = qrow.iter().map(|v| v.powf(a)).sum();
            prow.iter()
                .zip(qrow)
                .filter(|(&pv, _)| pv > 0.0)
                .map(|(&pv, &qv)| pv * (norm / qv.powf(a)).powf(rho))
                .sum::<f64>()
        })
        .sum();
    total.log2() / rho
}

/// Upper bound on the exponent of guessing `P` with the list `G_Q`.
pub fn mismatch_upper_bound(p: &JointPmf, q: &JointPmf, rho: f64) -> Result<f64> {
    check_positive_rho(rho)?;
    p.check_same_alphabet(q)?;
    if !q.is_full_support() {
        return Err(Error::SupportRequired);
    }
    Ok(mismatch_expression(p, q, rho))
}

/// `Q_G(x,y) = 1/(|𝕐| c G(x,y)^{1+ρ})`, a full-support PMF whose sorted list is `G`.
pub fn converse_pmf(g: &GuessingList, rho: f64) -> Result<JointPmf> {
    check_positive_rho(rho)?;
    let nx = g.nx();
    let ny = g.ny() as f64;
    let c: f64 = (1..=nx).map(|i| (i as f64).powf(-(1.0 + rho))).sum();
    let mass = g.ranks().iter().map(|&r| (r as f64).powf(-(1.0 + rho)) / (c * ny)).collect();
    JointPmf::normalized(g.alphabet().clone(), mass)
}

/// Lower bound on the exponent of an arbitrary list `G`:
/// the mismatch expression at `Q_G` minus `log(1 + ln|𝕏|)`.
pub fn converse_lower_bound(p: &JointPmf, g: &GuessingList, rho: f64) -> Result<f64> {
    let qg = converse_pmf(g, rho)?;
    g.check_alphabet(p)?;
    Ok(mismatch_expression(p, &qg, rho) - nuisance(p.nx()))
}

/// `R(P, G)`: exponent of `G` minus exponent of the matched list `G_P`, in bits.
pub fn redundancy(p: &JointPmf, g: &GuessingList, rho: f64) -> Result<f64> {
    check_positive_rho(rho)?;
    let matched = sort_to_list(p);
    Ok(guessing_exponent(p, g, rho)? - guessing_exponent(p, &matched, rho)?)
}

/// Moment of the matched list next to its Rényi-entropy sandwich.
#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub rho: f64,
    pub moment: f64,
    pub exponent: f64,
    pub lower: f64,
    pub upper: f64,
}

impl MomentReport {
    pub fn holds(&self, slack: f64) -> bool {
        self.exponent >= self.lower - slack && self.exponent <= self.upper + slack
    }
}

/// The matched exponent with bounds `[H_α − log(1+ln|𝕏|), H_α]`.
pub fn arikan_sandwich(p: &JointPmf, rho: f64) -> Result<MomentReport> {
    check_positive_rho(rho)?;
    let op = OrderParam::from_rho(rho)?;
    let moment = guessing_moment(p, &sort_to_list(p), rho)?;
    let h = renyi_entropy(p, op);
    Ok(MomentReport {
        rho,
        moment,
        exponent: moment.log2() / rho,
        lower: h - nuisance(p.nx()),
        upper: h,
    })
}

/// Integer code lengths `l(x, y)` with `1/2 < Σ_x 2^{-l(x,y)} ≤ 1` for every `y`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthFunction {
    alphabet: Arc<Alphabet>,
    lengths: Vec<u32>,
}

/// Longest length the exact Kraft arithmetic supports.
pub const MAX_CODE_LENGTH: u32 = 126;

/// Exact Kraft sum of one row as `(numerator, exponent)` meaning `numerator / 2^exponent`.
fn kraft_exact(row: &[u32]) -> Result<(u128, u32)> {
    let lmax = row.iter().copied().max().unwrap_or(0);
    if lmax > MAX_CODE_LENGTH {
        return Err(Error::InvalidArgument(format!("code length {lmax} exceeds {MAX_CODE_LENGTH}")));
    }
    let num = row.iter().map(|&l| 1u128 << (lmax - l)).sum();
    Ok((num, lmax))
}

fn in_kraft_window(row: &[u32]) -> Result<bool> {
    let (num, e) = kraft_exact(row)?;
    // 2^{e-1} < num ≤ 2^e, i.e. 2·num > 2^e
    let full = 1u128 << e;
    Ok(num <= full && 2 * num > full)
}

impl LengthFunction {
    pub fn new(alphabet: Arc<Alphabet>, lengths: Vec<u32>) -> Result<Self> {
        if lengths.len() != alphabet.cells() {
            return Err(Error::InvalidArgument("length table does not match alphabet".into()));
        }
        for (y, row) in lengths.chunks(alphabet.nx()).enumerate() {
            if !in_kraft_window(row)? {
                return Err(Error::KraftWindow { y, sum: kraft_sum_f64(row) });
            }
        }
        Ok(LengthFunction { alphabet, lengths })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn lengths(&self) -> &[u32] {
        &self.lengths
    }

    pub fn get(&self, x: usize, y: usize) -> u32 {
        self.lengths[y * self.alphabet.nx() + x]
    }

    pub fn kraft_sum(&self, y: usize) -> f64 {
        let nx = self.alphabet.nx();
        kraft_sum_f64(&self.lengths[y * nx..(y + 1) * nx])
    }
}

fn kraft_sum_f64(row: &[u32]) -> f64 {
    row.iter().map(|&l| 2f64.powi(-(l as i32))).sum()
}

/// Guard against `-log2` of a dyadic value landing just above an integer.
const CEIL_NUDGE: f64 = 1e-12;

/// `l_Q(x,y) = ⌈−log Q'(x|y)⌉` with the tilt taken at `α = 1/(1+ρ)`.
pub fn campbell_length(q: &JointPmf, rho: f64) -> Result<LengthFunction> {
    let op = OrderParam::from_rho(rho)?;
    if !q.is_full_support() {
        return Err(Error::SupportRequired);
    }
    let qt = tilt(q, op);
    let lengths = qt
        .rows()
        .flat_map(|row| row.iter().map(|&v| (-v.log2() - CEIL_NUDGE).ceil().max(0.0) as u32))
        .collect();
    LengthFunction::new(q.alphabet().clone(), lengths)
}

/// `Q_l(x,y) ∝ 2^{−(1+ρ) l(x,y)}` per row, each row carrying mass `1/|𝕐|`.
pub fn length_pmf(l: &LengthFunction, rho: f64) -> Result<JointPmf> {
    check_rho(rho)?;
    let nx = l.alphabet.nx();
    let ny = l.alphabet.ny() as f64;
    let mut mass = Vec::with_capacity(l.lengths.len());
    for row in l.lengths.chunks(nx) {
        if !in_kraft_window(row)? {
            return Err(Error::KraftWindow { y: mass.len() / nx, sum: kraft_sum_f64(row) });
        }
        let w: Vec<f64> = row.iter().map(|&li| 2f64.powf(-(1.0 + rho) * li as f64)).collect();
        let total: f64 = w.iter().sum();
        mass.extend(w.into_iter().map(|v| v / (total * ny)));
    }
    JointPmf::normalized(l.alphabet.clone(), mass)
}

/// `(1/ρ) log E[2^{ρ l(X,Y)}]` in bits, evaluated as a log-sum-exp.
pub fn campbell_exponent(p: &JointPmf, l: &LengthFunction, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if p.alphabet() != l.alphabet() {
        return Err(Error::AlphabetMismatch("PMF and length function alphabets differ".into()));
    }
    let terms: Vec<f64> = p
        .mass()
        .iter()
        .zip(&l.lengths)
        .filter(|(&m, _)| m > 0.0)
        .map(|(&m, &li)| m.ln() + rho * li as f64 * LN_2)
        .collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln();
    Ok(lse / (rho * LN_2))
}

/// Largest `|𝕏|` accepted by the exhaustive Campbell search.
pub const CAMPBELL_SEARCH_MAX_SYMBOLS: usize = 6;

/// Minimizes the Campbell exponent over all length functions in the Kraft
/// window by exhaustive enumeration. Returns the optimal lengths and exponent.
///
/// An incomplete code can always shorten its longest word, so optimal codes
/// are complete and every length lies in `0..|𝕏|`.
pub fn campbell_min_exponent(p: &JointPmf, rho: f64) -> Result<(LengthFunction, f64)> {
    check_rho(rho)?;
    let nx = p.nx();
    if nx > CAMPBELL_SEARCH_MAX_SYMBOLS {
        return Err(Error::Unsupported(format!(
            "oracle limited to small alphabets (|X| <= {CAMPBELL_SEARCH_MAX_SYMBOLS}, got {nx})"
        )));
    }
    let lmax = nx.saturating_sub(1) as u32;
    let mut lengths = Vec::with_capacity(p.mass().len());
    for row in p.rows() {
        lengths.extend(best_row_lengths(row, rho, lmax));
    }
    let l = LengthFunction::new(p.alphabet().clone(), lengths)?;
    let e = campbell_exponent(p, &l, rho)?;
    Ok((l, e))
}

/// Per-row search: minimize `Σ P 2^{ρl}` for `ρ > 0`, maximize it for `ρ < 0`.
fn best_row_lengths(row: &[f64], rho: f64, lmax: u32) -> Vec<u32> {
    struct Search<'a> {
        row: &'a [f64],
        rho: f64,
        lmax: u32,
        cur: Vec<u32>,
        best: Option<(f64, Vec<u32>)>,
    }
    impl Search<'_> {
        // kraft is the partial sum scaled by 2^lmax
        fn go(&mut self, i: usize, kraft: u128) {
            let full = 1u128 << self.lmax;
            if i == self.row.len() {
                if 2 * kraft <= full {
                    return;
                }
                let s: f64 = self
                    .row
                    .iter()
                    .zip(&self.cur)
                    .map(|(&pv, &l)| pv * 2f64.powf(self.rho * l as f64))
                    .sum();
                let better = match &self.best {
                    None => true,
                    Some((b, _)) => (self.rho > 0.0 && s < *b) || (self.rho < 0.0 && s > *b),
                };
                if better {
                    self.best = Some((s, self.cur.clone()));
                }
                return;
            }
            for l in 0..=self.lmax {
                let k = kraft + (1u128 << (self.lmax - l));
                if k > full {
                    continue;
                }
                self.cur.push(l);
                self.go(i + 1, k);
                self.cur.pop();
            }
        }
    }
    let mut s = Search { row, rho, lmax, cur: Vec::new(), best: None };
    s.go(0, 0);
    s.best.expect("a complete code always exists").1
}

/// `R_c(P, l)`: exponent of `l` minus the optimal exponent.
pub fn campbell_redundancy(p: &JointPmf, l: &LengthFunction, rho: f64) -> Result<f64> {
    let (_, best) = campbell_min_exponent(p, rho)?;
    Ok(campbell_exponent(p, l, rho)? - best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infomeasures::l_alpha;
    use crate::probkit::Axis;

    fn pmf(p: &[f64]) -> JointPmf {
        JointPmf::from_probs(p).unwrap()
    }

    #[test]
    fn moment_examples() {
        let u = pmf(&[0.25; 4]);
        let g = sort_to_list(&u);
        assert!((guessing_moment(&u, &g, 1.0).unwrap() - 2.5).abs() < 1e-15);
        let m = 7usize;
        let u7 = pmf(&[1.0 / m as f64; 7]);
        let second = guessing_moment(&u7, &sort_to_list(&u7), 2.0).unwrap();
        assert!((second - ((m + 1) * (2 * m + 1)) as f64 / 6.0).abs() < 1e-12);
        let p = pmf(&[0.5, 0.25, 0.25]);
        assert!((guessing_moment(&p, &sort_to_list(&p), 1.0).unwrap() - 1.75).abs() < 1e-15);
    }

    #[test]
    fn moment_rejects_bad_rho() {
        let u = pmf(&[0.5, 0.5]);
        assert!(guessing_moment(&u, &sort_to_list(&u), 0.0).is_err());
        assert!(guessing_moment(&u, &sort_to_list(&u), -1.0).is_err());
    }

    #[test]
    fn mismatch_bound_matches_entropy_when_matched() {
        let u = pmf(&[0.2; 5]);
        assert!((mismatch_upper_bound(&u, &u, 1.0).unwrap() - 5f64.log2()).abs() < 1e-12);
        let p = pmf(&[0.6, 0.3, 0.1]);
        let h = renyi_entropy(&p, OrderParam::from_rho(0.5).unwrap());
        assert!((mismatch_upper_bound(&p, &p, 0.5).unwrap() - h).abs() < 1e-12);
        assert!(matches!(mismatch_upper_bound(&p, &pmf(&[0.5, 0.5, 0.0]), 1.0), Err(Error::SupportRequired)));
    }

    #[test]
    fn converse_pmf_binary() {
        let g = sort_to_list(&pmf(&[0.7, 0.3]));
        let q = converse_pmf(&g, 1.0).unwrap();
        assert!((q.get(0, 0) - 0.8).abs() < 1e-15 && (q.get(1, 0) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn converse_pmf_splits_mass_across_y() {
        let al = Arc::new(Alphabet::new(Axis::indexed(3), Axis::indexed(2)));
        let g = GuessingList::from_orders(al, &[vec![2, 0, 1], vec![0, 1, 2]]).unwrap();
        let q = converse_pmf(&g, 2.0).unwrap();
        for y in 0..2 {
            assert!((q.row(y).iter().sum::<f64>() - 0.5).abs() < 1e-15);
        }
        assert_eq!(sort_to_list(&q), g);
    }

    #[test]
    fn sandwich_examples() {
        let r = arikan_sandwich(&pmf(&[0.25; 4]), 1.0).unwrap();
        assert!((r.exponent - 2.5f64.log2()).abs() < 1e-12);
        assert!((r.upper - 2.0).abs() < 1e-12);
        assert!((r.lower - (2.0 - (1.0 + 4f64.ln()).log2())).abs() < 1e-12);
        assert!(r.holds(0.0));
        let d = arikan_sandwich(&pmf(&[1.0, 0.0, 0.0]), 1.0).unwrap();
        assert_eq!(d.exponent, 0.0);
        assert_eq!(d.upper, 0.0);
    }

    #[test]
    fn campbell_examples() {
        let l = campbell_length(&pmf(&[0.25; 4]), 0.7).unwrap();
        assert_eq!(l.lengths(), &[2, 2, 2, 2]);
        let l = campbell_length(&pmf(&[0.5, 0.5]), -0.3).unwrap();
        assert_eq!(l.lengths(), &[1, 1]);
        let q = length_pmf(&l, 1.0).unwrap();
        assert_eq!(q.mass(), &[0.5, 0.5]);
        assert!(campbell_length(&pmf(&[1.0, 0.0]), 1.0).is_err());
        let p = pmf(&[0.5, 0.5]);
        assert!(campbell_redundancy(&p, &l, 1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn kraft_window_is_exact() {
        let al = Arc::new(Alphabet::indexed(3));
        assert!(LengthFunction::new(al.clone(), vec![1, 2, 2]).is_ok());
        assert!(LengthFunction::new(al.clone(), vec![1, 1, 1]).is_err());
        // sum exactly 1/2 is outside the open lower end
        assert!(LengthFunction::new(al.clone(), vec![2, 3, 3]).is_err());
        assert!(LengthFunction::new(al, vec![1, 2, 60]).is_ok());
    }

    #[test]
    fn length_pmf_rejects_window_violation() {
        let al = Arc::new(Alphabet::indexed(2));
        let bad = LengthFunction { alphabet: al, lengths: vec![2, 2] };
        assert!(matches!(length_pmf(&bad, 1.0), Err(Error::KraftWindow { .. })));
    }

    #[test]
    fn campbell_fixed_point() {
        let q = pmf(&[0.45, 0.3, 0.15, 0.07, 0.03]);
        for rho in [-0.6, -0.2, 0.5, 1.0, 3.0] {
            let l = campbell_length(&q, rho).unwrap();
            let again = campbell_length(&length_pmf(&l, rho).unwrap(), rho).unwrap();
            assert_eq!(l, again);
        }
    }

    #[test]
    fn redundancy_of_matched_list_is_zero() {
        let p = pmf(&[0.1, 0.5, 0.4]);
        assert_eq!(redundancy(&p, &sort_to_list(&p), 1.0).unwrap(), 0.0);
        let l = l_alpha(&p, &p, OrderParam::from_rho(1.0).unwrap());
        assert!(l.value() < 1e-12);
    }
}
