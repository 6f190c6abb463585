//! Finite-family `L_α`-centers: maximize the informativity `J(μ)` over mixture
//! weights, then read off the center `Q*`, the radius `C` and the
//! equalization (NASC) residuals.
//!
//! `J` and `I` are kept in their native units (`sign(ρ)·h`), where the saddle
//! value `K₋ = J(μ*)` and `K₊ = max_i I(P_i, Q*)` are compared; the radius
//! itself is reported in bits.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::infomeasures::{h_gradient, h_hessian, h_raw, h_value, l_alpha, Divergence};
use crate::optim::{fw_gap, maximize_on_simplex, FwOptions, SimplexObjective};
use crate::probkit::{sort_to_list, Alphabet, GuessingList, JointPmf, OrderParam};

/// Default duality-gap tolerance for [`solve_center`].
pub const DEFAULT_TOL: f64 = 1e-8;
/// Iteration budget before the solver gives up.
pub const MAX_ITERATIONS: usize = 100_000;

const SIMPLEX_TOL: f64 = 1e-12;

/// A finite uncertainty set of PMFs sharing one alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilySpec {
    members: Vec<JointPmf>,
}

impl FamilySpec {
    pub fn new(members: Vec<JointPmf>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidArgument("family needs at least one member".into()))?;
        for (i, m) in members.iter().enumerate().skip(1) {
            if !m.same_alphabet(first) {
                return Err(Error::AlphabetMismatch(format!("member {i} differs from member 0")));
            }
        }
        Ok(FamilySpec { members })
    }

    pub fn members(&self) -> &[JointPmf] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.members[0].alphabet()
    }
}

/// Mixture weights on the members of a family.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MixtureWeights(Vec<f64>);

impl MixtureWeights {
    pub fn new(mu: Vec<f64>) -> Result<Self> {
        if mu.is_empty() || mu.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument("mixture weights must be finite and nonnegative".into()));
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidArgument(format!("mixture weights sum to {total}, not 1")));
        }
        Ok(MixtureWeights(mu))
    }

    pub fn uniform(m: usize) -> Self {
        MixtureWeights(vec![1.0 / m as f64; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_len(&self, fam: &FamilySpec) -> Result<()> {
        if self.0.len() == fam.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("{} weights for {} members", self.0.len(), fam.len())))
        }
    }
}

/// Output of [`solve_center`].
#[derive(Debug, Clone, Serialize)]
pub struct CenterResult {
    pub mu_star: MixtureWeights,
    pub q_star: JointPmf,
    /// `C = (1/ρ) log(d·h(Q*))` in bits.
    pub radius: f64,
    pub k_plus: f64,
    pub k_minus: f64,
    /// `K₋ − I(P_i, Q*)`: nonnegative up to the gap, near zero on the support of `μ*`.
    pub nasc_residuals: Vec<f64>,
    pub normalizer_d: f64,
    pub iterations: usize,
}

impl CenterResult {
    pub fn duality_gap(&self) -> f64 {
        self.k_plus - self.k_minus
    }
}

/// Precomputed per-member data for repeated `J`/`∇J` evaluation.
struct Problem<'a> {
    members: Vec<&'a [f64]>,
    h: Vec<f64>,
    nx: usize,
    cells: usize,
    op: OrderParam,
}

/// Above this many `member × cell` products the gradient is evaluated in parallel.
const PARALLEL_WORK: usize = 1 << 16;

impl<'a> Problem<'a> {
    fn new(fam: &'a FamilySpec, op: OrderParam) -> Self {
        let h: Vec<f64> = fam.members.iter().map(|p| h_value(p, op)).collect();
        debug_assert!(h.iter().all(|v| v.is_finite() && *v > 0.0));
        Problem {
            members: fam.members.iter().map(|p| p.mass()).collect(),
            h,
            nx: fam.alphabet().nx(),
            cells: fam.alphabet().cells(),
            op,
        }
    }

    /// `F = Σ μ_i P_i / h(P_i)`, unnormalized.
    fn mixture(&self, mu: &[f64]) -> Vec<f64> {
        let mut f = vec![0.0; self.cells];
        for ((p, h), &w) in self.members.iter().zip(&self.h).zip(mu) {
            if w > 0.0 {
                let c = w / h;
                f.iter_mut().zip(p.iter()).for_each(|(fi, pi)| *fi += c * pi);
            }
        }
        f
    }

    fn normalizer(&self, mu: &[f64]) -> f64 {
        mu.iter().zip(&self.h).map(|(w, h)| w / h).sum()
    }

    fn informativity(&self, mu: &[f64]) -> f64 {
        self.op.sign() * h_raw(&self.mixture(mu), self.nx, self.op.alpha())
    }

    /// `I(P_i, Q)` for every member, where `Q` is the tilt source.
    fn i_values(&self, q_unnormalized: &[f64]) -> Vec<f64> {
        let weights = h_gradient(q_unnormalized, self.nx, self.op);
        let sign = self.op.sign();
        let one = |(p, h): (&&[f64], &f64)| {
            let s: f64 = p.iter().zip(&weights).filter(|(&pi, _)| pi > 0.0).map(|(pi, w)| pi * w).sum();
            sign * s / h
        };
        if self.members.len() * self.cells >= PARALLEL_WORK {
            self.members.par_iter().zip(self.h.par_iter()).map(one).collect()
        } else {
            self.members.iter().zip(&self.h).map(one).collect()
        }
    }

}

impl SimplexObjective for Problem<'_> {
    fn gradient(&self, mu: &[f64]) -> Vec<f64> {
        self.i_values(&self.mixture(mu))
    }

    fn hessian(&self, mu: &[f64], idx: &[usize]) -> Option<nalgebra::DMatrix<f64>> {
        let dirs: Vec<Vec<f64>> =
            idx.iter().map(|&i| self.members[i].iter().map(|p| p / self.h[i]).collect()).collect();
        let refs: Vec<&[f64]> = dirs.iter().map(Vec::as_slice).collect();
        let h = h_hessian(&self.mixture(mu), self.nx, self.op.alpha(), &refs)?;
        Some(h * self.op.sign())
    }
}

/// `J(μ) = sign(ρ)·h(Σ μ_i P_i / h(P_i))`.
pub fn informativity(mu: &MixtureWeights, fam: &FamilySpec, op: OrderParam) -> Result<f64> {
    mu.check_len(fam)?;
    Ok(Problem::new(fam, op).informativity(&mu.0))
}

/// `Q = d⁻¹ Σ μ_i P_i / h(P_i)` with `d = Σ μ_i / h(P_i)`.
pub fn mixture_center(mu: &MixtureWeights, fam: &FamilySpec, op: OrderParam) -> Result<JointPmf> {
    mu.check_len(fam)?;
    let prob = Problem::new(fam, op);
    JointPmf::normalized(fam.alphabet().clone(), prob.mixture(&mu.0))
}

/// `I(P_i, Q)` for every member of the family.
pub fn member_i_values(fam: &FamilySpec, q: &JointPmf, op: OrderParam) -> Result<Vec<f64>> {
    q.check_same_alphabet(&fam.members[0])?;
    Ok(Problem::new(fam, op).i_values(q.mass()))
}

/// `L_α(P_i, Q)` for every member of the family.
pub fn member_divergences(fam: &FamilySpec, q: &JointPmf, op: OrderParam) -> Vec<Divergence> {
    fam.members.iter().map(|p| l_alpha(p, q, op)).collect()
}

/// Solves for the `L_α`-center starting from uniform weights.
pub fn solve_center(fam: &FamilySpec, op: OrderParam, tol: f64) -> Result<CenterResult> {
    solve_center_from(fam, op, tol, MixtureWeights::uniform(fam.len()))
}

/// Solves for the `L_α`-center starting from the given weights.
///
/// Starting weights that leave part of the family's support uncovered are
/// allowed; the first steps pull mass onto the offending members.
pub fn solve_center_from(
    fam: &FamilySpec,
    op: OrderParam,
    tol: f64,
    start: MixtureWeights,
) -> Result<CenterResult> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    start.check_len(fam)?;
    let prob = Problem::new(fam, op);
    let out = maximize_on_simplex(start.0, &prob, FwOptions { tol, max_iter: MAX_ITERATIONS });
    if !out.converged {
        return Err(Error::NoConvergence { iterations: out.iterations, gap: out.gap, best_weights: out.x });
    }
    log::debug!("center solved in {} iterations, gap {:e}", out.iterations, out.gap);
    let mu = out.x;
    let f = prob.mixture(&mu);
    let d = prob.normalizer(&mu);
    let q_star = JointPmf::normalized(fam.alphabet().clone(), f.clone())?;
    let i_vals = prob.i_values(&f);
    let k_minus = prob.informativity(&mu);
    let k_plus = i_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    debug_assert!((k_plus - k_minus - fw_gap(&mu, &i_vals)).abs() <= 1e-9 * k_minus.abs().max(1.0));
    let radius = (d * h_value(&q_star, op)).log2() / op.rho();
    Ok(CenterResult {
        mu_star: MixtureWeights(mu),
        q_star,
        radius: radius.max(0.0),
        k_plus,
        k_minus,
        nasc_residuals: i_vals.iter().map(|i| k_minus - i).collect(),
        normalizer_d: d,
        iterations: out.iterations,
    })
}

/// `max_i L_α(P_i, Q*) − C` in bits.
pub fn radius_check(fam: &FamilySpec, res: &CenterResult, op: OrderParam) -> f64 {
    let worst = member_divergences(fam, &res.q_star, op)
        .into_iter()
        .map(Divergence::value)
        .fold(f64::NEG_INFINITY, f64::max);
    worst - res.radius
}

/// `G* = G_{Q*}`, whose redundancy on every member is at most `C + log(1 + ln|𝕏|)`.
pub fn minsup_guesser(fam: &FamilySpec, op: OrderParam) -> Result<GuessingList> {
    op.require_positive_rho()?;
    Ok(sort_to_list(&solve_center(fam, op, DEFAULT_TOL)?.q_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guessing::redundancy;
    use crate::infomeasures::renyi_entropy;
    use crate::nuisance;

    fn fam(rows: &[&[f64]]) -> FamilySpec {
        FamilySpec::new(rows.iter().map(|r| JointPmf::from_probs(r).unwrap()).collect()).unwrap()
    }

    #[test]
    fn singleton_has_zero_radius() {
        let f = fam(&[&[0.6, 0.3, 0.1]]);
        let op = OrderParam::from_alpha(0.5).unwrap();
        let r = solve_center(&f, op, 1e-10).unwrap();
        assert_eq!(r.radius, 0.0);
        assert!(r.q_star.max_abs_diff(&f.members()[0]) < 1e-15);
        assert!(radius_check(&f, &r, op).abs() < 1e-12);
        assert_eq!(minsup_guesser(&f, op).unwrap(), sort_to_list(&f.members()[0]));
    }

    #[test]
    fn symmetric_pair() {
        let f = fam(&[&[0.8, 0.2], &[0.2, 0.8]]);
        for alpha in [0.5, 0.8, 2.0] {
            let op = OrderParam::from_alpha(alpha).unwrap();
            let r = solve_center(&f, op, 1e-10).unwrap();
            assert!((r.mu_star.as_slice()[0] - 0.5).abs() < 1e-9);
            assert!((r.q_star.mass()[0] - 0.5).abs() < 1e-9);
            let expected = 1.0 - renyi_entropy(&f.members()[0], op);
            assert!((r.radius - expected).abs() < 1e-9, "{alpha}: {} vs {expected}", r.radius);
            assert!(radius_check(&f, &r, op).abs() < 1e-6);
            assert!(r.duality_gap() <= 1e-10);
        }
        let op = OrderParam::from_alpha(0.5).unwrap();
        let g = minsup_guesser(&f, op).unwrap();
        assert_eq!(g.ranks(), &[1, 2]);
        for p in f.members() {
            let r = redundancy(p, &g, op.rho()).unwrap();
            assert!(r <= 1.0 - renyi_entropy(p, op) + nuisance(2) + 1e-9);
        }
    }

    #[test]
    fn mixture_center_examples() {
        let f = fam(&[&[0.8, 0.2], &[0.2, 0.8]]);
        let op = OrderParam::from_alpha(0.3).unwrap();
        let q = mixture_center(&MixtureWeights::uniform(2), &f, op).unwrap();
        assert!((q.mass()[0] - 0.5).abs() < 1e-15);
        // identical members: J does not depend on μ
        let same = fam(&[&[0.7, 0.3], &[0.7, 0.3]]);
        let j1 = informativity(&MixtureWeights::new(vec![0.1, 0.9]).unwrap(), &same, op).unwrap();
        let j2 = informativity(&MixtureWeights::uniform(2), &same, op).unwrap();
        assert!((j1 - j2).abs() < 1e-14);
        assert!((j1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn informativity_is_concave_on_a_grid() {
        let f = fam(&[&[0.9, 0.1], &[0.35, 0.65]]);
        for alpha in [0.4, 3.0] {
            let op = OrderParam::from_alpha(alpha).unwrap();
            let vals: Vec<f64> = (0..=1000)
                .map(|k| {
                    let t = k as f64 / 1000.0;
                    informativity(&MixtureWeights::new(vec![t, 1.0 - t]).unwrap(), &f, op).unwrap()
                })
                .collect();
            for w in vals.windows(3) {
                assert!(w[1] >= 0.5 * (w[0] + w[2]) - 1e-13);
            }
        }
    }

    #[test]
    fn rejects_mixed_alphabets_and_bad_weights() {
        let a = JointPmf::from_probs(&[0.5, 0.5]).unwrap();
        let b = JointPmf::from_probs(&[0.2, 0.3, 0.5]).unwrap();
        assert!(matches!(FamilySpec::new(vec![a, b]), Err(Error::AlphabetMismatch(_))));
        assert!(MixtureWeights::new(vec![0.5, 0.6]).is_err());
        assert!(FamilySpec::new(vec![]).is_err());
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let f = fam(&[&[0.7, 0.2, 0.1], &[0.1, 0.3, 0.6], &[0.3, 0.4, 0.3]]);
        for alpha in [0.35, 0.8, 1.7] {
            let op = OrderParam::from_alpha(alpha).unwrap();
            let prob = Problem::new(&f, op);
            let mu = [0.5, 0.3, 0.2];
            let h = prob.hessian(&mu, &[0, 1, 2]).unwrap();
            let eps = 1e-6;
            for j in 0..3 {
                let mut up = mu;
                up[j] += eps;
                let mut down = mu;
                down[j] -= eps;
                let (gu, gd) = (prob.gradient(&up), prob.gradient(&down));
                for i in 0..3 {
                    let fd = (gu[i] - gd[i]) / (2.0 * eps);
                    assert!((fd - h[(i, j)]).abs() < 1e-6 * fd.abs().max(1.0), "{alpha} {i} {j}: {fd} vs {}", h[(i, j)]);
                }
            }
        }
    }

    #[test]
    fn support_gaps_in_start_weights_recover() {
        let f = fam(&[&[1.0, 0.0, 0.0], &[0.0, 0.5, 0.5], &[0.2, 0.2, 0.6]]);
        let op = OrderParam::from_alpha(0.5).unwrap();
        let start = MixtureWeights::new(vec![0.0, 0.0, 1.0]).unwrap();
        let a = solve_center_from(&f, op, 1e-10, start).unwrap();
        let b = solve_center(&f, op, 1e-10).unwrap();
        assert!(a.q_star.max_abs_diff(&b.q_star) < 1e-7);
    }
}
