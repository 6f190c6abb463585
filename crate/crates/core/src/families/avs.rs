//! Finite-state arbitrarily varying sources: letters are drawn independently
//! through a channel `P(x|s)` driven by an adversarial state sequence.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dms::check_cap;
use super::stitch::stitch_lists;
use crate::center::{member_i_values, CenterResult, FamilySpec, MixtureWeights};
use crate::error::{Error, Result};
use crate::guessing::redundancy;
use crate::infomeasures::{h_value, renyi_entropy};
use crate::nuisance;
use crate::probkit::enumerate::{compositions, multinomial, type_class};
use crate::probkit::{sort_to_list, Alphabet, Axis, JointPmf, MixedRadix, OrderParam, MASS_TOL};

/// `{"states": [...], "letters": [...], "channel": [[...]], "n": N, "counts": [...]}`;
/// `channel` has one row `P(·|s)` per state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvsSpec {
    pub states: Vec<String>,
    pub letters: Vec<String>,
    pub channel: Vec<Vec<f64>>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<Vec<usize>>,
}

impl AvsSpec {
    pub fn validate(&self) -> Result<()> {
        Axis::labels(self.states.iter().cloned())?;
        Axis::labels(self.letters.iter().cloned())?;
        if self.channel.len() != self.states.len() {
            return Err(Error::InvalidArgument("channel needs one row per state".into()));
        }
        for (s, row) in self.channel.iter().enumerate() {
            if row.len() != self.letters.len() {
                return Err(Error::InvalidPmf(format!("channel row {s} has wrong length")));
            }
            let total: f64 = row.iter().sum();
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) || (total - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidPmf(format!("channel row {s} is not a PMF")));
            }
        }
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if let Some(c) = &self.counts {
            if c.len() != self.states.len() || c.iter().sum::<usize>() != self.n {
                return Err(Error::InvalidArgument("type counts must cover every state and sum to n".into()));
            }
        }
        Ok(())
    }

    fn counts(&self) -> Result<&[usize]> {
        self.counts
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("type counts required".into()))
    }

    pub fn with_counts(&self, counts: Vec<usize>) -> Self {
        AvsSpec { counts: Some(counts), ..self.clone() }
    }

    fn alphabet(&self) -> Result<Arc<Alphabet>> {
        Ok(Arc::new(Alphabet::plain(Axis::product(self.letters.iter().cloned(), self.n)?)))
    }
}

fn check_positive_alpha_below_one(op: OrderParam) -> Result<()> {
    if op.rho() > 0.0 {
        Ok(())
    } else {
        Err(Error::Unsupported("the arbitrarily varying source results need 0 < alpha < 1".into()))
    }
}

/// `P_n(xⁿ|sⁿ) = Π_i P(x_i|s_i)`, evaluated from `(s, x)` pair counts so that
/// equal joint types get bit-identical mass.
fn conditional_product(spec: &AvsSpec, al: &Arc<Alphabet>, states: &[usize]) -> Result<JointPmf> {
    let m = spec.letters.len();
    let radix = MixedRadix::new(m, spec.n);
    let k = spec.states.len();
    let mass = (0..al.nx())
        .map(|i| {
            let mut pairs = vec![0i32; k * m];
            for (s, x) in states.iter().zip(radix.digits(i)) {
                pairs[s * m + x] += 1;
            }
            pairs
                .iter()
                .enumerate()
                .map(|(j, &c)| spec.channel[j / m][j % m].powi(c))
                .product()
        })
        .collect();
    JointPmf::normalized(al.clone(), mass)
}

/// One member `P_n(·|sⁿ)` per state sequence `sⁿ` of the type class, in
/// lexicographic order of `sⁿ`.
pub fn avs_type_members(spec: &AvsSpec) -> Result<FamilySpec> {
    spec.validate()?;
    let counts = spec.counts()?;
    check_cap(spec.letters.len(), spec.n, multinomial(counts))?;
    let al = spec.alphabet()?;
    let members = type_class(counts)
        .into_par_iter()
        .map(|s| conditional_product(spec, &al, &s))
        .collect::<Result<Vec<_>>>()?;
    FamilySpec::new(members)
}

/// Closed-form center and radius of a type family: the center is the plain
/// average of the members and `R_n = H_α(Q*) − mean_i H_α(P_i)`.
pub fn avs_center_radius(spec: &AvsSpec, op: OrderParam) -> Result<CenterResult> {
    check_positive_alpha_below_one(op)?;
    let fam = avs_type_members(spec)?;
    center_of_type_family(&fam, op)
}

fn center_of_type_family(fam: &FamilySpec, op: OrderParam) -> Result<CenterResult> {
    let m = fam.len();
    let mu = MixtureWeights::uniform(m);
    let refs: Vec<&JointPmf> = fam.members().iter().collect();
    let q_star = JointPmf::mixture(mu.as_slice(), &refs)?;
    let mean_h = fam.members().iter().map(|p| renyi_entropy(p, op)).sum::<f64>() / m as f64;
    let radius = (renyi_entropy(&q_star, op) - mean_h).max(0.0);
    let h = fam.members().iter().map(|p| h_value(p, op)).sum::<f64>() / m as f64;
    let i_vals = member_i_values(fam, &q_star, op)?;
    let k_minus = i_vals.iter().sum::<f64>() / m as f64;
    let k_plus = i_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(CenterResult {
        mu_star: mu,
        q_star,
        radius,
        k_plus,
        k_minus,
        nasc_residuals: i_vals.iter().map(|i| k_minus - i).collect(),
        normalizer_d: 1.0 / h,
        iterations: 0,
    })
}

/// Per-type line of an [`AvsStitchReport`].
#[derive(Debug, Clone, Serialize)]
pub struct TypeStitchLine {
    pub counts: Vec<usize>,
    pub members: usize,
    /// `R_n(T_U)` in bits.
    pub radius: f64,
    /// Largest redundancy of the stitched list over the members of this type.
    pub max_redundancy: f64,
    /// `R_n(T_U) + log(1 + n ln|𝔸|) + |𝕊| log(n + 1)`.
    pub bound: f64,
}

impl TypeStitchLine {
    pub fn holds(&self, slack: f64) -> bool {
        self.max_redundancy <= self.bound + slack
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AvsStitchReport {
    pub n: usize,
    pub rho: f64,
    pub lists: usize,
    pub types: Vec<TypeStitchLine>,
}

/// Stitches the center lists of every state type and evaluates the stitched
/// list's redundancy on each type family against its bound.
pub fn avs_stitch(spec: &AvsSpec, op: OrderParam) -> Result<AvsStitchReport> {
    check_positive_alpha_below_one(op)?;
    spec.validate()?;
    let types = compositions(spec.n, spec.states.len());
    let families = types
        .par_iter()
        .map(|c| {
            let fam = avs_type_members(&spec.with_counts(c.clone()))?;
            let center = center_of_type_family(&fam, op)?;
            Ok((fam, center))
        })
        .collect::<Result<Vec<_>>>()?;
    let lists: Vec<_> = families.iter().map(|(_, c)| sort_to_list(&c.q_star)).collect();
    let stitched = stitch_lists(&lists)?;
    debug_assert!(stitched.factor_bound_holds());
    let extra = nuisance(stitched.merged.nx()) + spec.states.len() as f64 * ((spec.n + 1) as f64).log2();
    let lines = types
        .into_iter()
        .zip(&families)
        .map(|(counts, (fam, center))| {
            let max_redundancy = fam
                .members()
                .iter()
                .map(|p| redundancy(p, &stitched.merged, op.rho()))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max);
            Ok(TypeStitchLine {
                counts,
                members: fam.len(),
                radius: center.radius,
                max_redundancy,
                bound: center.radius + extra,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AvsStitchReport { n: spec.n, rho: op.rho(), lists: stitched.count(), types: lines })
}

/// Asymptotic per-letter rate `R = H_α(V*) − Σ_s U*(s) H_α(P(·|s))` with
/// `V* = Σ_s U*(s) P(·|s)`.
pub fn avs_rate(channel: &[Vec<f64>], u_star: &[f64], op: OrderParam) -> Result<f64> {
    check_positive_alpha_below_one(op)?;
    if channel.len() != u_star.len() || channel.is_empty() {
        return Err(Error::InvalidArgument("state PMF must match the channel rows".into()));
    }
    let u = JointPmf::from_probs(u_star)?;
    let rows = channel.iter().map(|r| JointPmf::from_probs(r)).collect::<Result<Vec<_>>>()?;
    let refs: Vec<&JointPmf> = rows.iter().collect();
    let v = JointPmf::mixture(u.mass(), &refs)?;
    let mean: f64 = u.mass().iter().zip(&rows).map(|(w, r)| w * renyi_entropy(r, op)).sum();
    Ok((renyi_entropy(&v, op) - mean).max(0.0))
}
