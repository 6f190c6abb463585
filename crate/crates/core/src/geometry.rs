//! `L_α`-balls, projections onto polytopes of PMFs, and the Pythagorean
//! relations between a reference, its projection and the points of the set.
//!
//! Writing `N_R(P) = Σ P(x,y) R'(x|y)^{-ρ}`, which is linear in `P`, we have
//! `L_α(P, R) = (1/ρ) log(N_R(P) / h(P))`. The sublevel set `{L_α(·, R) ≤ r}`
//! is therefore `{sign(ρ)(t·h(P) − N_R(P)) ≥ 0}` with `t = 2^{ρr}`, a convex
//! set because `sign(ρ)·h` is concave. Projections bisect on `r` and decide
//! each level by maximizing that concave function over the hull weights.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::center::{CenterResult, FamilySpec};
use crate::error::{Error, Result};
use crate::infomeasures::{h_gradient, h_hessian, h_raw, l_alpha, tilt, untilt, Divergence};
use crate::optim::{maximize_on_simplex, FwOptions, SimplexObjective};
use crate::probkit::{Alphabet, JointPmf, OrderParam};

/// Most vertices a hull may have.
pub const MAX_VERTICES: usize = 16;
/// Distance below which a point counts as a member of a hull.
pub const HULL_TOL: f64 = 1e-9;
/// Default outer (bisection) tolerance of [`project`], in bits.
pub const DEFAULT_TOL: f64 = 1e-7;
/// Duality-gap tolerance of each inner level problem.
const LEVEL_TOL: f64 = 1e-9;
const MAX_INNER_ITERATIONS: usize = 100_000;

/// The convex hull of up to [`MAX_VERTICES`] PMFs on one alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexHullSet {
    vertices: Vec<JointPmf>,
}

impl ConvexHullSet {
    pub fn new(vertices: Vec<JointPmf>) -> Result<Self> {
        if vertices.is_empty() || vertices.len() > MAX_VERTICES {
            return Err(Error::InvalidArgument(format!(
                "a hull needs 1 to {MAX_VERTICES} vertices, got {}",
                vertices.len()
            )));
        }
        if vertices.iter().any(|v| !v.same_alphabet(&vertices[0])) {
            return Err(Error::AlphabetMismatch("hull vertices live on different alphabets".into()));
        }
        Ok(ConvexHullSet { vertices })
    }

    pub fn vertices(&self) -> &[JointPmf] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.vertices[0].alphabet()
    }

    /// The hull point with the given convex weights.
    pub fn point(&self, weights: &[f64]) -> Result<JointPmf> {
        let refs: Vec<&JointPmf> = self.vertices.iter().collect();
        JointPmf::mixture(weights, &refs)
    }

    /// Euclidean distance from `p` to the hull, with the convex weights of the
    /// closest point found.
    pub fn distance(&self, p: &JointPmf) -> Result<(f64, Vec<f64>)> {
        p.check_same_alphabet(&self.vertices[0])?;
        let cols: Vec<&[f64]> = self.vertices.iter().map(JointPmf::mass).collect();
        Ok(hull_distance(&cols, p.mass()))
    }

    pub fn contains(&self, p: &JointPmf) -> Result<bool> {
        Ok(self.distance(p)?.0 <= HULL_TOL)
    }
}

/// Nonnegative least squares `min ‖Ax − b‖, x ≥ 0` (Lawson–Hanson active set).
pub fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut x = DVector::zeros(n);
    let mut passive = vec![false; n];
    let scale = a.amax().max(1.0) * b.amax().max(1.0);
    let tol = 1e-13 * scale;
    for _ in 0..3 * n + 3 {
        let w = a.transpose() * (b - a * &x);
        let Some(j) = (0..n).filter(|&j| !passive[j] && w[j] > tol).max_by(|&i, &j| w[i].total_cmp(&w[j]))
        else {
            break;
        };
        passive[j] = true;
        for _ in 0..3 * n + 3 {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(&idx);
            let Ok(z) = sub.svd(true, true).solve(b, 1e-14) else {
                return x;
            };
            if z.iter().all(|&v| v > 0.0) {
                for (k, &i) in idx.iter().enumerate() {
                    x[i] = z[k];
                }
                break;
            }
            let mut step = 1.0f64;
            for (k, &i) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    step = step.min(x[i] / (x[i] - z[k]));
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                x[i] += step * (z[k] - x[i]);
                if x[i] <= tol * 1e-3 {
                    x[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    x
}

/// Distance from `b` to the convex hull of `cols`, solved as NNLS with an
/// appended sum-to-one row. The weights are renormalized before measuring, so
/// the reported distance is attained by a genuine convex combination (and is
/// exact whenever `b` lies in the hull).
fn hull_distance(cols: &[&[f64]], b: &[f64]) -> (f64, Vec<f64>) {
    const SUM_WEIGHT: f64 = 1.0;
    let rows = b.len();
    let a = DMatrix::from_fn(rows + 1, cols.len(), |i, j| if i < rows { cols[j][i] } else { SUM_WEIGHT });
    let rhs = DVector::from_fn(rows + 1, |i, _| if i < rows { b[i] } else { SUM_WEIGHT });
    let w = nnls(&a, &rhs);
    let total: f64 = w.iter().sum();
    let weights: Vec<f64> = if total > 0.0 {
        w.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / cols.len() as f64; cols.len()]
    };
    let dist = (0..rows)
        .map(|i| {
            let v: f64 = cols.iter().zip(&weights).map(|(c, w)| c[i] * w).sum();
            (v - b[i]).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    (dist, weights)
}

/// Whether `p` lies in the open ball `{L_α(·, R) < r}`.
pub fn in_ball(p: &JointPmf, reference: &JointPmf, r: f64, op: OrderParam) -> Result<bool> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {r}")));
    }
    p.check_same_alphabet(reference)?;
    Ok(l_alpha(p, reference, op).value() < r)
}

/// Output of [`project`].
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionResult {
    pub q: JointPmf,
    /// `L_α(Q, R)` in bits.
    pub value: Divergence,
    /// Convex weights over the hull vertices reproducing `Q`.
    pub weights: Vec<f64>,
    /// Per-vertex Pythagorean slack `L_α(P,R) − L_α(P,Q) − L_α(Q,R)`; `+∞`
    /// where `L_α(P,R)` is infinite.
    pub certificate: Vec<f64>,
    pub bisection_steps: usize,
}

/// `max_w sign(ρ)(t·h(P_w) − N_R(P_w))` over hull weights `w`.
struct LevelProblem<'a> {
    vertices: Vec<&'a [f64]>,
    n_values: Vec<f64>,
    nx: usize,
    op: OrderParam,
    t: f64,
    decide: bool,
}

impl LevelProblem<'_> {
    fn point(&self, w: &[f64]) -> Vec<f64> {
        let mut p = vec![0.0; self.vertices[0].len()];
        for (v, &wk) in self.vertices.iter().zip(w) {
            if wk > 0.0 {
                p.iter_mut().zip(v.iter()).for_each(|(pi, vi)| *pi += wk * vi);
            }
        }
        p
    }

    fn value(&self, w: &[f64]) -> f64 {
        let h = h_raw(&self.point(w), self.nx, self.op.alpha());
        let n: f64 = w.iter().zip(&self.n_values).filter(|(&wk, _)| wk > 0.0).map(|(wk, nk)| wk * nk).sum();
        self.op.sign() * (self.t * h - n)
    }
}

impl SimplexObjective for LevelProblem<'_> {
    fn gradient(&self, w: &[f64]) -> Vec<f64> {
        let hg = h_gradient(&self.point(w), self.nx, self.op);
        let sign = self.op.sign();
        self.vertices
            .iter()
            .zip(&self.n_values)
            .map(|(v, nk)| {
                let dh: f64 = v.iter().zip(&hg).filter(|(&vi, _)| vi > 0.0).map(|(vi, gi)| vi * gi).sum();
                sign * (self.t * dh - nk)
            })
            .collect()
    }

    fn hessian(&self, w: &[f64], idx: &[usize]) -> Option<DMatrix<f64>> {
        let dirs: Vec<&[f64]> = idx.iter().map(|&k| self.vertices[k]).collect();
        let h = h_hessian(&self.point(w), self.nx, self.op.alpha(), &dirs)?;
        Some(h * (self.op.sign() * self.t))
    }

    fn settled(&self, w: &[f64], gap: f64) -> bool {
        if !self.decide {
            return false;
        }
        let v = self.value(w);
        v >= 0.0 || v + gap < 0.0
    }
}

/// `L_α`-projection of `reference` onto the hull, starting the level problems
/// from uniform weights.
pub fn project(reference: &JointPmf, hull: &ConvexHullSet, op: OrderParam, tol: f64) -> Result<ProjectionResult> {
    project_from(reference, hull, op, tol, &vec![1.0; hull.len()])
}

/// As [`project`], with explicit (unnormalized, nonnegative) starting weights.
pub fn project_from(
    reference: &JointPmf,
    hull: &ConvexHullSet,
    op: OrderParam,
    tol: f64,
    start: &[f64],
) -> Result<ProjectionResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if start.len() != hull.len() || start.iter().any(|w| !(*w >= 0.0)) {
        return Err(Error::InvalidArgument("one nonnegative start weight per vertex required".into()));
    }
    reference.check_same_alphabet(&hull.vertices[0])?;
    let weights_r = h_gradient(reference.mass(), reference.nx(), op);
    let n_of = |v: &JointPmf| -> f64 {
        v.mass().iter().zip(&weights_r).filter(|(&p, _)| p > 0.0).map(|(p, w)| p * w).sum()
    };
    let all_n: Vec<f64> = hull.vertices.iter().map(n_of).collect();
    // vertices at infinite divergence are excluded for ρ > 0: any mixture using them is infinite too
    let usable: Vec<usize> = (0..hull.len()).filter(|&k| op.rho() < 0.0 || all_n[k].is_finite()).collect();
    let vertex_l: Vec<f64> = hull.vertices.iter().map(|v| l_alpha(v, reference, op).value()).collect();
    if usable.iter().all(|&k| !vertex_l[k].is_finite()) && (op.rho() > 0.0 || all_n.iter().all(|&n| n == 0.0)) {
        return Err(Error::ProjectionUndefined);
    }
    let mut prob = LevelProblem {
        vertices: usable.iter().map(|&k| hull.vertices[k].mass()).collect(),
        n_values: usable.iter().map(|&k| all_n[k]).collect(),
        nx: reference.nx(),
        op,
        t: 1.0,
        decide: true,
    };
    let mut w: Vec<f64> = usable.iter().map(|&k| start[k]).collect();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|v| *v /= total);
    } else {
        w = vec![1.0 / usable.len() as f64; usable.len()];
    }
    let best_vertex = usable
        .iter()
        .copied()
        .min_by(|&a, &b| vertex_l[a].total_cmp(&vertex_l[b]))
        .expect("at least one usable vertex");
    let (mut lo, mut hi) = (0.0, vertex_l[best_vertex]);
    let mut steps = 0;
    let mut final_w = None;
    if hi.is_finite() && hi > 0.0 && usable.len() > 1 {
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            prob.t = (op.rho() * mid).exp2();
            let out = maximize_on_simplex(w.clone(), &prob, FwOptions { tol: LEVEL_TOL, max_iter: MAX_INNER_ITERATIONS });
            if prob.value(&out.x) >= -LEVEL_TOL {
                hi = mid;
                w = out.x;
            } else {
                lo = mid;
            }
            steps += 1;
        }
        // the maximizer at the final feasible level, solved to full accuracy
        prob.t = (op.rho() * hi).exp2();
        prob.decide = false;
        let out = maximize_on_simplex(w, &prob, FwOptions { tol: 1e-13, max_iter: MAX_INNER_ITERATIONS });
        final_w = Some(out.x);
    }
    let mut weights = vec![0.0; hull.len()];
    let mut q = match final_w {
        Some(fw) => {
            usable.iter().zip(fw).for_each(|(&k, v)| weights[k] = v);
            hull.point(&weights)?
        }
        None => {
            weights[best_vertex] = 1.0;
            hull.vertices[best_vertex].clone()
        }
    };
    let mut value = l_alpha(&q, reference, op);
    if value.value() > vertex_l[best_vertex] {
        // never report worse than the best vertex
        weights = vec![0.0; hull.len()];
        weights[best_vertex] = 1.0;
        q = hull.vertices[best_vertex].clone();
        value = Divergence::from_bits(vertex_l[best_vertex]);
    }
    let certificate = hull
        .vertices
        .iter()
        .map(|p| match pythagorean_residual(p, &q, reference, op) {
            Ok(v) => v,
            Err(_) if !l_alpha(p, reference, op).is_finite() => f64::INFINITY,
            Err(_) => f64::NEG_INFINITY,
        })
        .collect();
    Ok(ProjectionResult { q, value, weights, certificate, bisection_steps: steps })
}

/// `L_α(P,R) − L_α(P,Q) − L_α(Q,R)` in bits.
pub fn pythagorean_residual(p: &JointPmf, q: &JointPmf, r: &JointPmf, op: OrderParam) -> Result<f64> {
    p.check_same_alphabet(q)?;
    p.check_same_alphabet(r)?;
    let terms = [("L(P,R)", l_alpha(p, r, op)), ("L(P,Q)", l_alpha(p, q, op)), ("L(Q,R)", l_alpha(q, r, op))];
    let infinite: Vec<&str> = terms.iter().filter(|(_, d)| !d.is_finite()).map(|(n, _)| *n).collect();
    if !infinite.is_empty() {
        return Err(Error::Infinite(infinite.join(", ")));
    }
    Ok(terms[0].1.value() - terms[1].1.value() - terms[2].1.value())
}

/// A reference `R` whose projection onto the segment `[P, S]` is the algebraic
/// inner point `Q = λP + (1−λ)S`, with Pythagorean equality at both ends.
///
/// `R'^{-ρ}` is chosen in the hyperplane `{v : v·(bP − aS) = 0}` with
/// `a = N_Q(P)`, `b = N_Q(S)`, which makes `N_R/N_Q` constant on the segment.
pub fn inner_point_reference(p: &JointPmf, s: &JointPmf, lambda: f64, op: OrderParam) -> Result<JointPmf> {
    if p.ny() != 1 {
        return Err(Error::SideInformation("inner-point references are built without side information"));
    }
    p.check_same_alphabet(s)?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidArgument(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    let q = JointPmf::mixture(&[lambda, 1.0 - lambda], &[p, s])?;
    if !q.is_full_support() {
        return Err(Error::SupportRequired);
    }
    let v0 = h_gradient(q.mass(), q.nx(), op);
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(a, b)| a * b).sum::<f64>();
    let (a, b) = (dot(p.mass(), &v0), dot(s.mass(), &v0));
    let d: Vec<f64> = p.mass().iter().zip(s.mass()).map(|(pi, si)| b * pi - a * si).collect();
    let n = d.len();
    // a fixed zig-zag direction, made orthogonal to d
    let u: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 } * (1.0 + i as f64 / n as f64)).collect();
    let dd = dot(&d, &d);
    let z: Vec<f64> = if dd > 0.0 {
        let c = dot(&u, &d) / dd;
        u.iter().zip(&d).map(|(ui, di)| ui - c * di).collect()
    } else {
        u
    };
    let zmax = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let vmin = v0.iter().copied().fold(f64::INFINITY, f64::min);
    let eps = if zmax > 0.0 { 0.5 * vmin / zmax } else { 0.0 };
    let tilted: Vec<f64> = v0.iter().zip(&z).map(|(vi, zi)| (vi + eps * zi).powf(-1.0 / op.rho())).collect();
    let tilted = JointPmf::normalized(q.alphabet().clone(), tilted)?;
    let r = untilt(&tilted, op)?;
    debug_assert!(tilt(&r, op).row(0).iter().all(|&v| v > 0.0));
    Ok(r)
}

/// Outcome of [`transitivity_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Transitivity {
    /// `project(Q, E₁)` and `project(R, E₁)` agree; `distance` is their max-norm gap.
    Holds { distance: f64 },
    Fails { distance: f64 },
    /// The theorem's hypotheses are not met.
    Skipped { reason: String },
}

/// Tolerance on the Pythagorean equality hypothesis, in bits.
const EQUALITY_TOL: f64 = 1e-6;
/// Max-norm agreement required between the two projections onto `E₁`.
const AGREEMENT_TOL: f64 = 1e-5;

/// With `Q` the projection of `R` on `E`: if Pythagorean equality holds on `E`
/// and `E₁ ⊆ E`, then the projection of `Q` on `E₁` is the projection of `R`.
///
/// The equality `L(P,R) = L(P,Q) + L(Q,R)` is the linear condition
/// `N_R(P) = 2^{ρL(Q,R)} N_Q(P)`, so checking it at the vertices of `E` covers
/// the whole hull.
pub fn transitivity_check(
    reference: &JointPmf,
    e: &ConvexHullSet,
    e1: &ConvexHullSet,
    op: OrderParam,
) -> Result<Transitivity> {
    for (k, v) in e1.vertices.iter().enumerate() {
        let (dist, _) = e.distance(v)?;
        if dist > HULL_TOL {
            return Ok(Transitivity::Skipped {
                reason: format!("vertex {k} of the inner set lies {dist:e} outside the outer hull"),
            });
        }
    }
    let proj = project(reference, e, op, DEFAULT_TOL)?;
    for (k, slack) in proj.certificate.iter().enumerate() {
        if !slack.is_finite() || slack.abs() > EQUALITY_TOL {
            return Ok(Transitivity::Skipped {
                reason: format!("Pythagorean equality fails at outer vertex {k} (slack {slack:e})"),
            });
        }
    }
    let via_q = project(&proj.q, e1, op, DEFAULT_TOL)?;
    let direct = project(reference, e1, op, DEFAULT_TOL)?;
    let distance = via_q.q.max_abs_diff(&direct.q);
    Ok(if distance <= AGREEMENT_TOL { Transitivity::Holds { distance } } else { Transitivity::Fails { distance } })
}

/// Euclidean distance from the center `Q*` to the convex hull of the family.
pub fn center_in_hull_check(fam: &FamilySpec, res: &CenterResult) -> f64 {
    let cols: Vec<&[f64]> = fam.members().iter().map(JointPmf::mass).collect();
    hull_distance(&cols, res.q_star.mass()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::center::solve_center;

    fn pmf(p: &[f64]) -> JointPmf {
        JointPmf::from_probs(p).unwrap()
    }

    fn op(alpha: f64) -> OrderParam {
        OrderParam::from_alpha(alpha).unwrap()
    }

    #[test]
    fn ball_membership() {
        let r = pmf(&[0.3, 0.7]);
        assert!(in_ball(&r, &r, 1e-9, op(0.5)).unwrap());
        assert!(!in_ball(&pmf(&[1.0, 0.0]), &pmf(&[0.0, 1.0]), 100.0, op(0.5)).unwrap());
        assert!(in_ball(&r, &r, 0.0, op(0.5)).is_err());
    }

    #[test]
    fn nnls_recovers_convex_weights() {
        let hull = ConvexHullSet::new(vec![pmf(&[1.0, 0.0, 0.0]), pmf(&[0.0, 1.0, 0.0]), pmf(&[0.2, 0.2, 0.6])]).unwrap();
        let p = hull.point(&[0.5, 0.25, 0.25]).unwrap();
        let (d, w) = hull.distance(&p).unwrap();
        assert!(d < 1e-12);
        assert!((w[0] - 0.5).abs() < 1e-9);
        assert!(!hull.contains(&pmf(&[0.0, 0.0, 1.0])).unwrap());
    }

    #[test]
    fn projection_of_member_is_itself() {
        let hull = ConvexHullSet::new(vec![pmf(&[0.7, 0.2, 0.1]), pmf(&[0.1, 0.3, 0.6])]).unwrap();
        let r = hull.point(&[0.3, 0.7]).unwrap();
        let proj = project(&r, &hull, op(0.5), 1e-9).unwrap();
        assert!(proj.value.value() < 1e-7);
        assert!(proj.q.max_abs_diff(&r) < 1e-4);
        let single = ConvexHullSet::new(vec![pmf(&[0.7, 0.2, 0.1])]).unwrap();
        let p = project(&pmf(&[0.2, 0.2, 0.6]), &single, op(2.0), 1e-9).unwrap();
        assert_eq!(p.q, single.vertices()[0]);
    }

    #[test]
    fn projection_undefined_without_finite_vertex() {
        let hull = ConvexHullSet::new(vec![pmf(&[1.0, 0.0]), pmf(&[0.8, 0.2])]).unwrap();
        let r = pmf(&[0.0, 1.0]);
        assert!(matches!(project(&r, &hull, op(0.5), 1e-7), Err(Error::ProjectionUndefined)));
    }

    #[test]
    fn infinite_vertices_are_excluded_for_small_alpha() {
        let hull = ConvexHullSet::new(vec![pmf(&[0.5, 0.5, 0.0]), pmf(&[0.1, 0.1, 0.8])]).unwrap();
        let r = pmf(&[0.4, 0.6, 0.0]);
        let p = project(&r, &hull, op(0.5), 1e-8).unwrap();
        assert_eq!(p.weights, vec![1.0, 0.0]);
        assert!(p.certificate[1].is_infinite());
    }

    #[test]
    fn inner_point_gives_equality() {
        let p = pmf(&[0.6, 0.3, 0.1]);
        let s = pmf(&[0.1, 0.2, 0.7]);
        for alpha in [0.5, 0.8, 1.6, 3.0] {
            let r = inner_point_reference(&p, &s, 0.4, op(alpha)).unwrap();
            let q = JointPmf::mixture(&[0.4, 0.6], &[&p, &s]).unwrap();
            assert!(pythagorean_residual(&p, &q, &r, op(alpha)).unwrap().abs() < 1e-10);
            assert!(pythagorean_residual(&s, &q, &r, op(alpha)).unwrap().abs() < 1e-10);
            assert!(l_alpha(&q, &r, op(alpha)).value() > 1e-4, "reference must be off the segment");
            let hull = ConvexHullSet::new(vec![p.clone(), s.clone()]).unwrap();
            let proj = project(&r, &hull, op(alpha), 1e-9).unwrap();
            assert!(proj.q.max_abs_diff(&q) < 1e-5, "{alpha}: {:?}", proj.q.mass());
        }
    }

    #[test]
    fn residual_reports_infinite_terms() {
        let err = pythagorean_residual(&pmf(&[1.0, 0.0]), &pmf(&[0.0, 1.0]), &pmf(&[0.5, 0.5]), op(0.5)).unwrap_err();
        assert!(err.to_string().contains("L(P,Q)"));
        assert_eq!(pythagorean_residual(&pmf(&[0.3, 0.7]), &pmf(&[0.3, 0.7]), &pmf(&[0.5, 0.5]), op(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn transitivity_cases() {
        let p = pmf(&[0.6, 0.3, 0.1]);
        let s = pmf(&[0.1, 0.2, 0.7]);
        let o = op(0.5);
        let r = inner_point_reference(&p, &s, 0.4, o).unwrap();
        let e = ConvexHullSet::new(vec![p.clone(), s.clone()]).unwrap();
        assert!(matches!(transitivity_check(&r, &e, &e, o).unwrap(), Transitivity::Holds { .. }));
        let m = JointPmf::mixture(&[0.8, 0.2], &[&p, &s]).unwrap();
        let e1 = ConvexHullSet::new(vec![p.clone(), m]).unwrap();
        let t = transitivity_check(&r, &e, &e1, o).unwrap();
        assert!(matches!(t, Transitivity::Holds { .. }), "{t:?}");
        let outside = ConvexHullSet::new(vec![pmf(&[0.2, 0.6, 0.2])]).unwrap();
        assert!(matches!(transitivity_check(&r, &e, &outside, o).unwrap(), Transitivity::Skipped { .. }));
        // projects onto the endpoint p, with strict inequality at s
        let generic = pmf(&[0.9, 0.08, 0.02]);
        assert!(matches!(transitivity_check(&generic, &e, &e1, o).unwrap(), Transitivity::Skipped { .. }));
    }

    #[test]
    fn center_lies_in_hull() {
        let fam = FamilySpec::new(vec![pmf(&[0.8, 0.1, 0.1]), pmf(&[0.1, 0.8, 0.1]), pmf(&[0.3, 0.3, 0.4])]).unwrap();
        let res = solve_center(&fam, op(0.5), 1e-10).unwrap();
        assert!(center_in_hull_check(&fam, &res) < 1e-8);
    }
}
