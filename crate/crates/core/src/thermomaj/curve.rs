use std::fmt;

use crate::error::Result;
use crate::state::DiagonalState;

/// Ratios whose logarithms differ by less than this are treated as ties.
pub const BETA_ORDER_TIE_TOL: f64 = 1e-12;
/// Slack allowed when comparing curve heights.
pub const THERMOMAJORIZATION_TOL: f64 = 1e-10;

/// A permutation of level indices: position `k` holds the level whose segment
/// comes `k`-th on the thermomajorization curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaOrder(Vec<usize>);

impl BetaOrder {
    pub fn new(perm: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; perm.len()];
        for &i in &perm {
            if i >= perm.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Self(perm))
    }

    pub fn identity(d: usize) -> Self {
        Self((0..d).collect())
    }

    /// `(d-1, ..., 1, 0)`: highest level first.
    pub fn descending(d: usize) -> Self {
        Self((0..d).rev().collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// One-based label, e.g. `(321)`; comma separated once `d >= 10`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        if self.0.len() < 10 {
            format!("({})", parts.concat())
        } else {
            format!("({})", parts.join(","))
        }
    }
}

impl fmt::Display for BetaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// `log(p_i e^{beta e_i})`, `-inf` for empty levels.
fn log_ratios(state: &DiagonalState, beta: f64) -> Vec<f64> {
    state
        .probs()
        .iter()
        .zip(state.energies())
        .map(|(&p, &e)| {
            if p > 0.0 {
                p.ln() + beta * e
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect()
}

fn order_from_log_ratios(log_ratios: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..log_ratios.len()).collect();
    idx.sort_by(|&a, &b| log_ratios[b].total_cmp(&log_ratios[a]).then(a.cmp(&b)));
    // Re-sort runs of numerically equal ratios by level index.
    let mut start = 0;
    while start < idx.len() {
        let head = log_ratios[idx[start]];
        let mut end = start + 1;
        while end < idx.len() && {
            let r = log_ratios[idx[end]];
            r == head || (head - r).abs() <= BETA_ORDER_TIE_TOL
        } {
            end += 1;
        }
        idx[start..end].sort_unstable();
        start = end;
    }
    idx
}

/// Orders levels by `p_i e^{beta e_i}`, largest first; ties go to the lower level.
pub fn beta_order(state: &DiagonalState, beta: f64) -> BetaOrder {
    BetaOrder(order_from_log_ratios(&log_ratios(state, beta)))
}

/// Piecewise-linear concave thermomajorization curve.
///
/// Elbows start at `(0, 0)`; the x axis accumulates the unnormalized Gibbs
/// weights `e^{-beta e_i}` and the y axis the populations, both in beta order.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoCurve {
    elbows: Vec<(f64, f64)>,
}

impl ThermoCurve {
    pub fn elbows(&self) -> &[(f64, f64)] {
        &self.elbows
    }

    /// Total Gibbs weight `sum_i e^{-beta e_i}`, the right end of the x range.
    pub fn x_max(&self) -> f64 {
        self.elbows[self.elbows.len() - 1].0
    }

    /// Height at `x`, clamped to `[0, x_max]`.
    pub fn eval(&self, x: f64) -> f64 {
        let x = x.clamp(0.0, self.x_max());
        // first elbow with abscissa >= x
        let j = self.elbows.partition_point(|&(ex, _)| ex < x);
        if j == 0 {
            return self.elbows[0].1;
        }
        if j == self.elbows.len() {
            return self.elbows[j - 1].1;
        }
        let (x0, y0) = self.elbows[j - 1];
        let (x1, y1) = self.elbows[j];
        if x1 == x0 {
            return y1;
        }
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    /// Segment slopes, in curve order. Zero-width segments are skipped.
    pub fn slopes(&self) -> Vec<f64> {
        self.elbows
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }

    pub fn is_concave(&self) -> bool {
        self.slopes()
            .windows(2)
            .all(|w| w[1] <= w[0] + 1e-12 * w[0].abs().max(1.0))
    }
}

/// Unnormalized Gibbs weights `e^{-beta e_i}`.
pub(crate) fn gibbs_weights(state: &DiagonalState, beta: f64) -> Vec<f64> {
    state.energies().iter().map(|e| (-beta * e).exp()).collect()
}

pub(crate) fn curve_in_order(state: &DiagonalState, beta: f64, order: &[usize]) -> ThermoCurve {
    let weights = gibbs_weights(state, beta);
    let mut elbows = Vec::with_capacity(order.len() + 1);
    elbows.push((0.0, 0.0));
    let (mut x, mut y) = (0.0, 0.0);
    for &i in order {
        x += weights[i];
        y += state.probs()[i];
        elbows.push((x, y));
    }
    ThermoCurve { elbows }
}

pub fn curve(state: &DiagonalState, beta: f64) -> ThermoCurve {
    curve_in_order(state, beta, beta_order(state, beta).as_slice())
}

/// True iff every elbow of `q`'s curve lies on or below `p`'s curve.
pub fn thermomajorizes(p: &DiagonalState, q: &DiagonalState, beta: f64) -> Result<bool> {
    p.check_same_spectrum(q)?;
    let outer = curve(p, beta);
    Ok(curve(q, beta)
        .elbows()
        .iter()
        .all(|&(x, y)| y <= outer.eval(x) + THERMOMAJORIZATION_TOL))
}

/// True iff every elbow of `q`'s curve lies on `p`'s curve.
pub fn tightly_thermomajorizes(p: &DiagonalState, q: &DiagonalState, beta: f64) -> Result<bool> {
    p.check_same_spectrum(q)?;
    let outer = curve(p, beta);
    Ok(curve(q, beta)
        .elbows()
        .iter()
        .all(|&(x, y)| (y - outer.eval(x)).abs() <= THERMOMAJORIZATION_TOL))
}
