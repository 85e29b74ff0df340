//! Shared helpers: random inputs, brute-force oracles and LP hull membership.
#![allow(dead_code)]

use std::sync::Arc;

use ergoflow::{DiagonalState, Spectrum, ThermalProcessMatrix};
use itertools::Itertools;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Sorted energies in `[0, e_max]` with the ground pinned at zero.
pub fn random_spectrum(rng: &mut StdRng, d: usize, e_max: f64) -> Arc<Spectrum> {
    let mut e: Vec<f64> = (1..d).map(|_| rng.random_range(1e-3..e_max)).collect();
    e.sort_by(f64::total_cmp);
    e.insert(0, 0.0);
    Arc::new(Spectrum::new(e).unwrap())
}

/// Dirichlet(1) sample, occasionally sparse.
pub fn random_state(rng: &mut StdRng, spectrum: &Arc<Spectrum>) -> DiagonalState {
    let d = spectrum.dim();
    let mut w: Vec<f64> = (0..d)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    if rng.random::<f64>() < 0.1 {
        let k = rng.random_range(0..d);
        w[k] = 0.0;
        if w.iter().all(|&x| x == 0.0) {
            w[(k + 1) % d] = 1.0;
        }
    }
    let s: f64 = w.iter().sum();
    DiagonalState::new(spectrum.clone(), w.iter().map(|x| x / s).collect()).unwrap()
}

/// Minimum of `sum_i e_i p_{pi(i)}` over all permutations, with a minimizer.
pub fn brute_force_passive(state: &DiagonalState) -> (f64, Vec<f64>) {
    let (p, e) = (state.probs(), state.energies());
    let d = p.len();
    (0..d)
        .permutations(d)
        .map(|perm| {
            let q: Vec<f64> = perm.iter().map(|&j| p[j]).collect();
            (q.iter().zip(e).map(|(a, b)| a * b).sum::<f64>(), q)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
}

/// Random Gibbs-preserving stochastic matrix: a convex mixture of products of
/// partial two-level beta-swaps and partial full thermalizations.
pub fn random_gibbs_preserving(
    rng: &mut StdRng,
    spectrum: &Arc<Spectrum>,
    beta: f64,
) -> ThermalProcessMatrix {
    let d = spectrum.dim();
    let gamma = ergoflow::gibbs_state(spectrum, ergoflow::InverseTemperature::Finite(beta));
    let g = gamma.probs();
    let factor = |rng: &mut StdRng| -> DMatrix<f64> {
        let lambda = if rng.random::<f64>() < 0.5 {
            1.0
        } else {
            rng.random::<f64>()
        };
        let mut m = DMatrix::<f64>::identity(d, d);
        if rng.random::<f64>() < 0.15 {
            let full = DMatrix::from_fn(d, d, |i, _| g[i]);
            return m * (1.0 - lambda) + full * lambda;
        }
        let i = rng.random_range(0..d);
        let mut j = rng.random_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        // (hi, lo): hi has the larger Gibbs weight
        let (hi, lo) = if g[i] >= g[j] { (i, j) } else { (j, i) };
        let r = g[lo] / g[hi];
        m[(hi, hi)] = 1.0 - lambda * r;
        m[(lo, hi)] = lambda * r;
        m[(hi, lo)] = lambda;
        m[(lo, lo)] = 1.0 - lambda;
        m
    };
    let terms = rng.random_range(1..=3);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let mut a = DMatrix::<f64>::zeros(d, d);
    for w in weights {
        let mut prod = DMatrix::<f64>::identity(d, d);
        for _ in 0..rng.random_range(1..=3 * d) {
            prod = factor(rng) * prod;
        }
        a += prod * w;
    }
    for mut col in a.column_iter_mut() {
        col.iter_mut().for_each(|v| *v = v.max(0.0));
        let s = col.sum();
        col /= s;
    }
    ThermalProcessMatrix::new(a, spectrum.clone(), beta).expect("mixture of thermal processes")
}

/// True if `q` is within `tol` (L1 slack) of the convex hull of `points`.
pub fn in_convex_hull(points: &[DiagonalState], q: &DiagonalState, tol: f64) -> bool {
    let d = q.dim();
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambdas: Vec<_> = points.iter().map(|_| lp.add_var(0.0, (0.0, 1.0))).collect();
    let slack: Vec<_> = (0..d)
        .map(|_| {
            (
                lp.add_var(1.0, (0.0, f64::INFINITY)),
                lp.add_var(1.0, (0.0, f64::INFINITY)),
            )
        })
        .collect();
    lp.add_constraint(
        lambdas.iter().map(|&v| (v, 1.0)).collect::<Vec<_>>(),
        ComparisonOp::Eq,
        1.0,
    );
    for (i, &(up, down)) in slack.iter().enumerate() {
        let mut row: Vec<_> = lambdas
            .iter()
            .zip(points)
            .map(|(&v, p)| (v, p.probs()[i]))
            .collect();
        row.push((up, 1.0));
        row.push((down, -1.0));
        lp.add_constraint(row, ComparisonOp::Eq, q.probs()[i]);
    }
    match lp.solve() {
        Ok(sol) => sol.objective() <= tol,
        Err(_) => false,
    }
}
