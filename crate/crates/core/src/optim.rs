//! Concave maximization over the probability simplex.
//!
//! The engine alternates two kinds of steps. Frank–Wolfe steps (toward the
//! best vertex, or away from the worst active one) bring new coordinates into
//! the support; when the objective supplies a Hessian, Newton steps on the
//! face spanned by the current support polish the iterate and give fast local
//! convergence. Step lengths come from bisection on the sign of the
//! directional derivative, which stays accurate when value differences drop
//! below floating-point resolution.

use nalgebra::{DMatrix, DVector};

/// Stopping rule for [`maximize_on_simplex`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct FwOptions {
    pub tol: f64,
    pub max_iter: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct FwOutcome {
    pub x: Vec<f64>,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// A concave objective on the simplex, described by derivatives only.
pub(crate) trait SimplexObjective {
    /// Gradient at `x`; entries may be `+∞` at coordinates where `x` is zero.
    fn gradient(&self, x: &[f64]) -> Vec<f64>;

    /// Hessian restricted to the coordinates in `idx`, when cheaply available.
    fn hessian(&self, _x: &[f64], _idx: &[usize]) -> Option<DMatrix<f64>> {
        None
    }

    /// Lets a caller stop as soon as a question about the optimum is settled.
    fn settled(&self, _x: &[f64], _gap: f64) -> bool {
        false
    }
}

/// Adapter for objectives given only by a gradient closure.
#[cfg(test)]
pub(crate) struct GradientOnly<G>(pub G);

#[cfg(test)]
impl<G: Fn(&[f64]) -> Vec<f64>> SimplexObjective for GradientOnly<G> {
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        (self.0)(x)
    }
}

/// Inner product that treats `0 · ±∞` as zero.
fn weighted(x: &[f64], g: &[f64]) -> f64 {
    x.iter().zip(g).filter(|(&xi, _)| xi > 0.0).map(|(&xi, &gi)| xi * gi).sum()
}

/// Frank–Wolfe duality gap `max_i g_i − ⟨x, g⟩`.
pub(crate) fn fw_gap(x: &[f64], g: &[f64]) -> f64 {
    let best = g.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    best - weighted(x, g)
}

/// Maximizes a concave function on the simplex starting from `x0`.
pub(crate) fn maximize_on_simplex<O: SimplexObjective>(x0: Vec<f64>, obj: &O, opts: FwOptions) -> FwOutcome {
    let n = x0.len();
    let mut x = x0;
    let mut g = obj.gradient(&x);
    let mut gap = fw_gap(&x, &g);
    for it in 0..opts.max_iter {
        if gap <= opts.tol {
            return FwOutcome { x, gap, iterations: it, converged: true };
        }
        if obj.settled(&x, gap) {
            return FwOutcome { x, gap, iterations: it, converged: false };
        }
        let s = argmax(&g, |_| true);
        let newton = if g[s].is_finite() { newton_direction(obj, &x, &g, s) } else { None };
        let (d, gamma_max, blocking) = match newton {
            Some(step) => step,
            None => frank_wolfe_direction(&x, &g, s, gap),
        };
        let gamma = line_search(&x, &d, gamma_max, obj);
        for i in 0..n {
            x[i] = (x[i] + gamma * d[i]).max(0.0);
        }
        if let Some(b) = blocking {
            if gamma >= gamma_max {
                x[b] = 0.0;
            }
        }
        let total: f64 = x.iter().sum();
        x.iter_mut().for_each(|xi| *xi /= total);
        g = obj.gradient(&x);
        gap = fw_gap(&x, &g);
        log::trace!("simplex iteration {it}: gap {gap:e}, step {gamma:e}");
    }
    let converged = gap <= opts.tol;
    FwOutcome { x, gap, iterations: opts.max_iter, converged }
}

type Step = (Vec<f64>, f64, Option<usize>);

/// Toward vertex `s`, or away from the worst active vertex when that promises more.
fn frank_wolfe_direction(x: &[f64], g: &[f64], s: usize, gap: f64) -> Step {
    let n = x.len();
    let v = argmin(g, |i| x[i] > 0.0);
    let away_gain = weighted(x, g) - g[v];
    if away_gain > gap && x[v] < 1.0 {
        let mut d = x.to_vec();
        d[v] -= 1.0;
        (d, x[v] / (1.0 - x[v]), Some(v))
    } else {
        let mut d: Vec<f64> = x.iter().map(|xi| -xi).collect();
        d[s] += 1.0;
        debug_assert_eq!(d.len(), n);
        (d, 1.0, None)
    }
}

/// Newton direction on the face spanned by the support of `x` plus vertex `s`,
/// solving the equality-constrained quadratic model. Falls back (returns
/// `None`) when the model is unavailable, not an ascent direction, or wants
/// to push the newcomer `s` negative.
fn newton_direction<O: SimplexObjective>(obj: &O, x: &[f64], g: &[f64], s: usize) -> Option<Step> {
    let mut idx: Vec<usize> = (0..x.len()).filter(|&i| x[i] > 0.0 || i == s).collect();
    idx.dedup();
    let k = idx.len();
    if k < 2 {
        return None;
    }
    let h = obj.hessian(x, &idx)?;
    // KKT system for max gᵀd + ½dᵀHd subject to Σd = 0, with -H made definite
    let scale = (0..k).map(|i| h[(i, i)].abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut kkt = DMatrix::zeros(k + 1, k + 1);
    for i in 0..k {
        for j in 0..k {
            kkt[(i, j)] = -h[(i, j)];
        }
        kkt[(i, i)] += 1e-12 * scale;
        kkt[(i, k)] = 1.0;
        kkt[(k, i)] = 1.0;
    }
    let rhs = DVector::from_iterator(k + 1, idx.iter().map(|&i| g[i]).chain(std::iter::once(0.0)));
    let sol = kkt.lu().solve(&rhs)?;
    let mut d = vec![0.0; x.len()];
    for (a, &i) in idx.iter().enumerate() {
        d[i] = sol[a];
    }
    if d.iter().any(|v| !v.is_finite()) || (x[s] == 0.0 && d[s] <= 0.0) {
        return None;
    }
    let ascent: f64 = idx.iter().map(|&i| d[i] * g[i]).sum();
    if !(ascent > 0.0) {
        return None;
    }
    let mut gamma_max = 1.0;
    let mut blocking = None;
    for &i in &idx {
        if d[i] < 0.0 {
            let r = x[i] / -d[i];
            if r < gamma_max {
                gamma_max = r;
                blocking = Some(i);
            }
        }
    }
    if gamma_max <= 0.0 {
        return None;
    }
    Some((d, gamma_max, blocking))
}

fn argmax(g: &[f64], allowed: impl Fn(usize) -> bool) -> usize {
    let mut best = usize::MAX;
    for i in 0..g.len() {
        if allowed(i) && (best == usize::MAX || g[i] > g[best]) {
            best = i;
        }
    }
    best
}

fn argmin(g: &[f64], allowed: impl Fn(usize) -> bool) -> usize {
    let mut best = usize::MAX;
    for i in 0..g.len() {
        if allowed(i) && (best == usize::MAX || g[i] < g[best]) {
            best = i;
        }
    }
    best
}

/// Largest step in `[0, gamma_max]` where the directional derivative is still
/// nonnegative; exact for a concave restriction up to floating-point resolution.
fn line_search<O: SimplexObjective>(x: &[f64], d: &[f64], gamma_max: f64, obj: &O) -> f64 {
    let slope = |gamma: f64| {
        let p: Vec<f64> = x.iter().zip(d).map(|(&xi, &di)| (xi + gamma * di).max(0.0)).collect();
        let g = obj.gradient(&p);
        d.iter().zip(&g).filter(|(&di, _)| di != 0.0).map(|(&di, &gi)| di * gi).sum::<f64>()
    };
    if slope(gamma_max) >= 0.0 {
        return gamma_max;
    }
    let (mut lo, mut hi) = (0.0, gamma_max);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
