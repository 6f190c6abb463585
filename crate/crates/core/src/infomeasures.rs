//! Rényi entropies and the `L_α` divergence family with its companions:
//! the tilted PMF, `h(P)`, `I(P, Q)`, Rényi divergence, the power
//! f-divergence and the conditional KL limit.
//!
//! All logarithmic quantities are returned in bits. Conventions: `0·log 0 = 0`,
//! `x/0 = +∞` for `x > 0`, and `(+∞)^(negative) = 0`.

use std::f64::consts::LN_2;
use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::probkit::{Alphabet, JointPmf, OrderParam};

/// A divergence value in bits, possibly `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Divergence(f64);

impl Divergence {
    pub const ZERO: Divergence = Divergence(0.0);
    pub const INFINITE: Divergence = Divergence(f64::INFINITY);

    fn clamped(v: f64) -> Self {
        // rounding can push an exact zero slightly negative
        Divergence(if v.is_nan() { f64::INFINITY } else { v.max(0.0) })
    }

    /// Wraps a value in bits; NaN maps to `+∞` and tiny negatives to zero.
    pub fn from_bits(v: f64) -> Self {
        Divergence::clamped(v)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            write!(f, "{}", self.0)
        } else {
            f.write_str("inf")
        }
    }
}

impl Serialize for Divergence {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str("inf")
        }
    }
}

/// `ln Σ xᵅ` over a row, scaled by the row maximum so tiny masses do not underflow.
/// Returns `-∞` for an all-zero row.
pub(crate) fn ln_power_sum(row: &[f64], alpha: f64) -> f64 {
    let max = row.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return f64::NEG_INFINITY;
    }
    let s: f64 = row.iter().filter(|&&v| v > 0.0).map(|&v| (v / max).powf(alpha)).sum();
    alpha * max.ln() + s.ln()
}

fn log_sum_exp(terms: impl Iterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.collect();
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `ln h(P)` for nonnegative (not necessarily normalized) row-major mass.
pub(crate) fn ln_h_raw(mass: &[f64], nx: usize, alpha: f64) -> f64 {
    log_sum_exp(mass.chunks(nx).map(|row| ln_power_sum(row, alpha) / alpha))
}

/// `h` of an unnormalized nonnegative vector; positively homogeneous of degree one.
pub(crate) fn h_raw(mass: &[f64], nx: usize, alpha: f64) -> f64 {
    ln_h_raw(mass, nx, alpha).exp()
}

/// `h(P) = Σ_y (Σ_x P(x,y)^α)^{1/α}`.
pub fn h_value(p: &JointPmf, op: OrderParam) -> f64 {
    h_raw(p.mass(), p.nx(), op.alpha())
}

/// Conditional Rényi entropy `H_α(P)` in bits.
pub fn renyi_entropy(p: &JointPmf, op: OrderParam) -> f64 {
    let v = ln_h_raw(p.mass(), p.nx(), op.alpha()) / (op.rho() * LN_2);
    // exact zero for degenerate rows, no -0.0 artefacts
    if v.abs() < 1e-15 {
        0.0
    } else {
        v
    }
}

/// `P'(x|y) ∝ P(x,y)^α` per row, uniform where a row carries no mass.
#[derive(Debug, Clone)]
pub struct TiltedConditional {
    alphabet: Arc<Alphabet>,
    mass: Vec<f64>,
    alpha: f64,
}

impl TiltedConditional {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.mass[y * self.alphabet.nx() + x]
    }

    pub fn row(&self, y: usize) -> &[f64] {
        let nx = self.alphabet.nx();
        &self.mass[y * nx..(y + 1) * nx]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.mass.chunks(self.alphabet.nx())
    }

    /// The tilted PMF as a joint PMF, available without side information.
    pub fn to_pmf(&self) -> Result<JointPmf> {
        if self.alphabet.ny() != 1 {
            return Err(Error::SideInformation("tilted conditional is a PMF only when |Y| = 1"));
        }
        JointPmf::normalized(self.alphabet.clone(), self.mass.clone())
    }
}

pub(crate) fn tilt_rows(mass: &[f64], nx: usize, alpha: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(mass.len());
    for row in mass.chunks(nx) {
        let max = row.iter().copied().fold(0.0, f64::max);
        if max <= 0.0 {
            out.extend(std::iter::repeat_n(1.0 / nx as f64, nx));
            continue;
        }
        let scaled: Vec<f64> = row
            .iter()
            .map(|&v| if v > 0.0 { (v / max).powf(alpha) } else { 0.0 })
            .collect();
        let total: f64 = scaled.iter().sum();
        out.extend(scaled.into_iter().map(|v| v / total));
    }
    out
}

pub fn tilt(p: &JointPmf, op: OrderParam) -> TiltedConditional {
    TiltedConditional {
        alphabet: p.alphabet().clone(),
        mass: tilt_rows(p.mass(), p.nx(), op.alpha()),
        alpha: op.alpha(),
    }
}

/// Inverse of the tilt for a single-row PMF: `P ∝ (P')^{1/α}`.
pub fn untilt(tilted: &JointPmf, op: OrderParam) -> Result<JointPmf> {
    let inv = tilt_rows(tilted.mass(), tilted.nx(), 1.0 / op.alpha());
    JointPmf::normalized(tilted.alphabet().clone(), inv)
}

/// `Q'(x|y)^{-ρ}` per cell for unnormalized `q`: the gradient of `h` at `q`.
/// Cells with `Q' = 0` give `+∞` when `ρ > 0` and `0` otherwise.
pub(crate) fn h_gradient(q: &[f64], nx: usize, op: OrderParam) -> Vec<f64> {
    let rho = op.rho();
    tilt_rows(q, nx, op.alpha())
        .into_iter()
        .map(|t| {
            if t > 0.0 {
                t.powf(-rho)
            } else if rho > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect()
}

/// `[aᵢᵀ ∇²h(F) aⱼ]` for the given directions. `None` when `F` vanishes on a
/// cell some direction charges (the Hessian is unbounded there).
pub(crate) fn h_hessian(f: &[f64], nx: usize, alpha: f64, dirs: &[&[f64]]) -> Option<nalgebra::DMatrix<f64>> {
    let k = dirs.len();
    let mut out = nalgebra::DMatrix::zeros(k, k);
    let rho = (1.0 - alpha) / alpha;
    for (y, row) in f.chunks(nx).enumerate() {
        let base = y * nx;
        let s: f64 = row.iter().filter(|&&v| v > 0.0).map(|&v| v.powf(alpha)).sum();
        if s == 0.0 {
            if dirs.iter().any(|d| d[base..base + nx].iter().any(|&v| v > 0.0)) {
                return None;
            }
            continue;
        }
        let sp = s.powf(rho);
        let mut u = vec![0.0; k];
        for (x, &fx) in row.iter().enumerate() {
            if fx <= 0.0 {
                if dirs.iter().any(|d| d[base + x] > 0.0) {
                    return None;
                }
                continue;
            }
            let g1 = fx.powf(alpha - 1.0);
            let g2 = g1 / fx;
            for i in 0..k {
                let ai = dirs[i][base + x];
                if ai == 0.0 {
                    continue;
                }
                u[i] += ai * g1;
                for j in 0..=i {
                    let aj = dirs[j][base + x];
                    out[(i, j)] -= sp * ai * aj * g2;
                }
            }
        }
        let c = s.powf((1.0 - 2.0 * alpha) / alpha);
        for i in 0..k {
            for j in 0..=i {
                out[(i, j)] += c * u[i] * u[j];
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            out[(j, i)] = out[(i, j)];
        }
    }
    Some(out * (1.0 - alpha))
}

/// `Σ_y Σ_x P(x,y) Q'(x|y)^{-ρ}` with the support conventions.
pub(crate) fn tilted_moment(p_mass: &[f64], q_tilted: &TiltedConditional, rho: f64) -> f64 {
    p_mass
        .iter()
        .zip(&q_tilted.mass)
        .filter(|(&pm, _)| pm > 0.0)
        .map(|(&pm, &qt)| {
            if qt > 0.0 {
                pm * qt.powf(-rho)
            } else if rho > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum()
}

/// `I(P, Q) = sign(ρ)/h(P) · Σ_y Σ_x P(x,y) Q'(x|y)^{-ρ}`; may be `+∞` when `α < 1`.
pub fn i_value(p: &JointPmf, q: &JointPmf, op: OrderParam) -> f64 {
    i_value_tilted(p, &tilt(q, op), op)
}

pub(crate) fn i_value_tilted(p: &JointPmf, q_tilted: &TiltedConditional, op: OrderParam) -> f64 {
    op.sign() * tilted_moment(p.mass(), q_tilted, op.rho()) / h_value(p, op)
}

/// `I(P, Q)` assembled row by row as `Σ_y w(y) I_f(P'(·|y) ‖ Q'(·|y))`,
/// with `w(y) ∝ (Σ_x P(x,y)^α)^{1/α}` computed in log space.
pub fn i_value_by_rows(p: &JointPmf, q: &JointPmf, op: OrderParam) -> f64 {
    let alpha = op.alpha();
    let ln_h = ln_h_raw(p.mass(), p.nx(), alpha);
    let pt = tilt(p, op);
    let qt = tilt(q, op);
    p.rows()
        .enumerate()
        .map(|(y, row)| {
            let w = (ln_power_sum(row, alpha) / alpha - ln_h).exp();
            if w == 0.0 {
                0.0
            } else {
                w * f_divergence_rows(pt.row(y), qt.row(y), op)
            }
        })
        .sum()
}

/// `L_α(P, Q)` in bits.
pub fn l_alpha(p: &JointPmf, q: &JointPmf, op: OrderParam) -> Divergence {
    l_alpha_tilted(p, &tilt(q, op), op)
}

pub(crate) fn l_alpha_tilted(p: &JointPmf, q_tilted: &TiltedConditional, op: OrderParam) -> Divergence {
    let moment = tilted_moment(p.mass(), q_tilted, op.rho());
    if moment.is_infinite() || moment == 0.0 {
        return Divergence::INFINITE;
    }
    let ln_h = ln_h_raw(p.mass(), p.nx(), op.alpha());
    Divergence::clamped((moment.ln() - ln_h) / (op.rho() * LN_2))
}

/// `L_α` recovered from `I` as `(1/ρ) log(sign(ρ)·I)`.
pub fn l_alpha_from_i(i: f64, op: OrderParam) -> Divergence {
    let arg = op.sign() * i;
    if arg.is_infinite() || arg <= 0.0 {
        return Divergence::INFINITE;
    }
    Divergence::clamped(arg.log2() / op.rho())
}

fn require_plain(p: &JointPmf) -> Result<()> {
    if p.ny() == 1 {
        Ok(())
    } else {
        Err(Error::SideInformation("operation needs |Y| = 1"))
    }
}

/// Rényi divergence `D_β(R ‖ S)` in bits.
pub fn renyi_divergence(r: &JointPmf, s: &JointPmf, beta: f64) -> Result<Divergence> {
    require_plain(r)?;
    r.check_same_alphabet(s)?;
    if !(beta.is_finite() && beta > 0.0 && beta != 1.0) {
        return Err(Error::InvalidOrder(format!("beta must be positive and != 1, got {beta}")));
    }
    let sum: f64 = r
        .mass()
        .iter()
        .zip(s.mass())
        .filter(|(&rv, _)| rv > 0.0)
        .map(|(&rv, &sv)| {
            if sv > 0.0 {
                rv.powf(beta) * sv.powf(1.0 - beta)
            } else if beta > 1.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    if sum.is_infinite() || sum == 0.0 {
        return Ok(Divergence::INFINITE);
    }
    Ok(Divergence::clamped(sum.log2() / (beta - 1.0)))
}

/// `Σ S f(R/S)` with `f(x) = sign(ρ)·x^{1+ρ}`.
pub(crate) fn f_divergence_rows(r: &[f64], s: &[f64], op: OrderParam) -> f64 {
    let rho = op.rho();
    let total: f64 = r
        .iter()
        .zip(s)
        .filter(|(&rv, _)| rv > 0.0)
        .map(|(&rv, &sv)| {
            if sv > 0.0 {
                sv * (rv / sv).powf(1.0 + rho)
            } else if rho > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .sum();
    op.sign() * total
}

/// The power f-divergence `I_f(R ‖ S)`; `+∞` for `ρ > 0` when `Supp R ⊄ Supp S`.
pub fn f_divergence(r: &JointPmf, s: &JointPmf, op: OrderParam) -> Result<f64> {
    require_plain(r)?;
    r.check_same_alphabet(s)?;
    Ok(f_divergence_rows(r.mass(), s.mass(), op))
}

/// Conditional Kullback–Leibler divergence `Σ_y Σ_x P(x,y) log(P(x|y)/Q(x|y))`
/// in bits, the `α → 1` limit of `L_α`.
pub fn kl_limit_check(p: &JointPmf, q: &JointPmf) -> Result<f64> {
    p.check_same_alphabet(q)?;
    let mut total = 0.0;
    for (prow, qrow) in p.rows().zip(q.rows()) {
        let pm: f64 = prow.iter().sum();
        let qm: f64 = qrow.iter().sum();
        for (&pv, &qv) in prow.iter().zip(qrow) {
            if pv <= 0.0 {
                continue;
            }
            if qv <= 0.0 {
                return Err(Error::Infinite("Supp(P) is not contained in Supp(Q)".into()));
            }
            total += pv * ((pv / pm) / (qv / qm)).log2();
        }
    }
    Ok(total.max(0.0))
}

/// Plain KL divergence `D(R ‖ S)` in bits over the flattened cells.
pub fn kl_divergence(r: &JointPmf, s: &JointPmf) -> Result<Divergence> {
    r.check_same_alphabet(s)?;
    let mut total = 0.0;
    for (&rv, &sv) in r.mass().iter().zip(s.mass()) {
        if rv <= 0.0 {
            continue;
        }
        if sv <= 0.0 {
            return Ok(Divergence::INFINITE);
        }
        total += rv * (rv / sv).log2();
    }
    Ok(Divergence::clamped(total))
}
