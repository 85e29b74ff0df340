//! Extremal points of the thermal polytope via tight thermomajorization.
//!
//! Every extremal state reachable from `p` has a thermomajorization curve whose
//! elbows all sit on `p`'s curve. Fixing the segment order of the target curve
//! pins the elbow abscissae (cumulative Gibbs weights in that order), so the
//! elbow heights, and hence the target populations, follow by evaluating `p`'s
//! curve there. Sweeping all `d!` orders and merging duplicates yields the
//! vertex set.

use std::cmp::Ordering;

use itertools::Itertools;
use rayon::prelude::*;

use super::curve::{curve, gibbs_weights, thermomajorizes, BetaOrder};
use crate::error::{Error, Result};
use crate::state::DiagonalState;

/// Default cap on the dimension accepted by [`enumerate_extremal_states`].
pub const DEFAULT_MAX_DIM: usize = 9;
/// States closer than this in L-infinity are merged.
pub const DEDUPE_TOL: f64 = 1e-10;

/// The state whose curve, taken in `target` order, has every elbow on the curve
/// of `initial`.
///
/// If the populations produced this way are not actually in `target` beta order
/// (the target curve would not be concave), the state is still returned; it is
/// reachable from `initial` either way.
pub fn tight_extremal_state(
    initial: &DiagonalState,
    beta: f64,
    target: &BetaOrder,
) -> Result<DiagonalState> {
    if target.len() != initial.dim() {
        return Err(Error::InvalidState(format!(
            "target order has {} entries for a {}-level state",
            target.len(),
            initial.dim()
        )));
    }
    let outer = curve(initial, beta);
    let weights = gibbs_weights(initial, beta);
    Ok(tight_from_curve(
        initial,
        &outer,
        &weights,
        target.as_slice(),
    ))
}

fn tight_from_curve(
    initial: &DiagonalState,
    outer: &super::ThermoCurve,
    weights: &[f64],
    target: &[usize],
) -> DiagonalState {
    let d = target.len();
    let mut probs = vec![0.0; d];
    let (mut x, mut prev_y) = (0.0, 0.0);
    for (k, &level) in target.iter().enumerate() {
        x += weights[level];
        let y = if k + 1 == d { 1.0 } else { outer.eval(x) };
        probs[level] = (y - prev_y).max(0.0);
        prev_y = y;
    }
    DiagonalState::new(initial.spectrum().clone(), probs)
        .expect("differences of a monotone curve ending at 1 form a valid state")
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Sorts lexicographically and merges entries within [`DEDUPE_TOL`]; the first
/// entry of each cluster is kept.
pub(crate) fn dedupe_sorted(mut states: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    states.sort_by(|a, b| lex_cmp(a, b));
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for s in states {
        // Kept entries are sorted by first coordinate, so only a trailing window
        // can be within tolerance.
        let duplicate = kept
            .iter()
            .rev()
            .take_while(|k| s[0] - k[0] <= DEDUPE_TOL)
            .any(|k| linf(k, &s) <= DEDUPE_TOL);
        if !duplicate {
            kept.push(s);
        }
    }
    kept
}

/// All extremal states of the thermal polytope of `initial` at inverse
/// temperature `beta`, sorted lexicographically by populations.
///
/// Cost grows as `d!`; dimensions above `max_dim` are refused.
pub fn enumerate_extremal_states(
    initial: &DiagonalState,
    beta: f64,
    max_dim: usize,
) -> Result<Vec<DiagonalState>> {
    let d = initial.dim();
    if d > max_dim {
        return Err(Error::DimensionCap {
            dim: d,
            cap: max_dim,
        });
    }
    let outer = curve(initial, beta);
    let weights = gibbs_weights(initial, beta);

    let candidates: Vec<Vec<f64>> = (0..d)
        .into_par_iter()
        .flat_map_iter(|first| {
            let rest: Vec<usize> = (0..d).filter(|&i| i != first).collect();
            let (outer, weights) = (&outer, &weights);
            rest.into_iter().permutations(d - 1).map(move |tail| {
                let mut order = Vec::with_capacity(d);
                order.push(first);
                order.extend(tail);
                tight_from_curve(initial, outer, weights, &order)
                    .probs()
                    .to_vec()
            })
        })
        .collect();

    dedupe_sorted(candidates)
        .into_iter()
        .map(|probs| {
            let state = DiagonalState::new(initial.spectrum().clone(), probs)?;
            if !thermomajorizes(initial, &state, beta)? {
                return Err(Error::Domain(format!(
                    "constructed state {:?} is not reachable from the initial state",
                    state.probs()
                )));
            }
            Ok(state)
        })
        .collect()
}

/// Highest-energy state reachable from `initial`: the tight state in descending
/// beta order `(d, ..., 1)`.
pub fn max_energy_state(initial: &DiagonalState, beta: f64) -> DiagonalState {
    let target = BetaOrder::descending(initial.dim());
    tight_extremal_state(initial, beta, &target).expect("order matches dimension")
}
