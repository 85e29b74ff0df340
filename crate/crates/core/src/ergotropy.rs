//! Passive states, ergotropy, and upper bounds on ergotropy extraction.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::state::{
    energy, entropy, gibbs_state, relative_entropy, DiagonalState, InverseTemperature, Spectrum,
};

const BETA_STAR_BRACKET: (f64, f64) = (1e-9, 1e4);
const BETA_STAR_MAX_ITER: usize = 200;
const BETA_STAR_ENTROPY_TOL: f64 = 1e-10;
/// Entropies this close to `log d` (or to the zero-temperature entropy) are
/// treated as the corresponding limit.
const ENTROPY_LIMIT_TOL: f64 = 1e-13;

/// Minimal-energy rearrangement of the populations: largest population on the
/// lowest level. Equal populations keep their original relative order.
pub fn passive_state(state: &DiagonalState) -> DiagonalState {
    let mut sorted = state.probs().to_vec();
    // Stable sort, so ties keep ascending original index.
    sorted.sort_by(|a, b| b.total_cmp(a));
    DiagonalState::new(state.spectrum().clone(), sorted)
        .expect("a permutation of a valid state is valid")
}

/// Energy extractable by a unitary: `E(rho) - E(rho_passive)`.
pub fn ergotropy(state: &DiagonalState) -> f64 {
    let passive = passive_state(state);
    state
        .probs()
        .iter()
        .zip(passive.probs())
        .zip(state.energies())
        .map(|((p, pp), e)| e * (p - pp))
        .sum::<f64>()
        .max(0.0)
}

/// Inverse temperature of the Gibbs state with the same entropy as a given state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaStar {
    /// Maximally mixed input: the `beta -> 0+` limit.
    Zero,
    Finite(f64),
    /// Input with the minimal (zero-temperature) entropy, e.g. a pure state.
    Infinite,
}

impl BetaStar {
    pub fn as_inverse_temperature(self) -> Option<InverseTemperature> {
        match self {
            BetaStar::Zero => None,
            BetaStar::Finite(b) => Some(InverseTemperature::Finite(b)),
            BetaStar::Infinite => Some(InverseTemperature::Infinite),
        }
    }
}

fn gibbs_entropy(spectrum: &Arc<Spectrum>, beta: f64) -> f64 {
    entropy(&gibbs_state(spectrum, InverseTemperature::Finite(beta)))
}

/// Solves `S(gibbs(beta*)) = S(state)` by bisection; Gibbs entropy is strictly
/// decreasing in beta.
pub fn beta_star(state: &DiagonalState) -> Result<BetaStar> {
    let spectrum = state.spectrum();
    let target = entropy(state);
    let max_entropy = (spectrum.dim() as f64).ln();
    let min_entropy = (spectrum.ground_degeneracy() as f64).ln();
    if target >= max_entropy - ENTROPY_LIMIT_TOL {
        return Ok(BetaStar::Zero);
    }
    if target <= min_entropy + ENTROPY_LIMIT_TOL {
        return Ok(BetaStar::Infinite);
    }

    let (mut lo, mut hi) = BETA_STAR_BRACKET;
    // Expand geometrically until the target entropy is straddled.
    for _ in 0..60 {
        if gibbs_entropy(spectrum, lo) >= target {
            break;
        }
        lo /= 10.0;
    }
    for _ in 0..60 {
        if gibbs_entropy(spectrum, hi) <= target {
            break;
        }
        hi *= 10.0;
    }
    if gibbs_entropy(spectrum, lo) < target || gibbs_entropy(spectrum, hi) > target {
        return Err(Error::NoConvergence(format!(
            "could not bracket beta* for entropy {target}"
        )));
    }

    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BETA_STAR_MAX_ITER {
        // Geometric midpoint: the bracket spans many decades.
        mid = (lo * hi).sqrt();
        let s = gibbs_entropy(spectrum, mid);
        if s > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if (s - target).abs() < 1e-14 || hi / lo - 1.0 < 1e-15 {
            break;
        }
    }
    let residual = (gibbs_entropy(spectrum, mid) - target).abs();
    if residual >= BETA_STAR_ENTROPY_TOL {
        return Err(Error::NoConvergence(format!(
            "beta* bisection stalled with entropy residual {residual}"
        )));
    }
    Ok(BetaStar::Finite(mid))
}

/// Isolated-system bound `(1/beta*) S(rho || gamma_beta*)`, equal to
/// `F(rho) - F(gamma_beta*)` at the entropy-matched temperature.
///
/// At `beta* = inf` (pure input) this is the energy above the ground level;
/// at `beta* = 0` (maximally mixed input) the limit `E(rho) - E(uniform)`.
pub fn bound_single_system(state: &DiagonalState) -> Result<f64> {
    match beta_star(state)? {
        BetaStar::Infinite => Ok(energy(state)),
        BetaStar::Zero => {
            Ok(energy(state) - energy(&DiagonalState::uniform(state.spectrum().clone())))
        }
        BetaStar::Finite(b) => {
            let gibbs = gibbs_state(state.spectrum(), InverseTemperature::Finite(b));
            Ok(relative_entropy(state, &gibbs)? / b)
        }
    }
}

/// Bound for a system in contact with a bath: `(1/beta) S(rho || gamma_beta)`.
pub fn bound_with_bath(state: &DiagonalState, beta: InverseTemperature) -> Result<f64> {
    let b = beta.value()?;
    let gibbs = gibbs_state(state.spectrum(), beta);
    Ok(relative_entropy(state, &gibbs)? / b)
}

/// Cap on `R(Phi(rho)) - R(rho)` over Gibbs-preserving `Phi`:
/// `(1/beta) S(rho_passive || gamma_beta)`.
pub fn extraction_bound(state: &DiagonalState, beta: InverseTemperature) -> Result<f64> {
    bound_with_bath(&passive_state(state), beta)
}

/// Split of the final-state ergotropy into a free-energy resource minus two
/// losses:
///
/// `R(final) = free_energy_resource - passivity_gap - entropy_production`
///
/// with `free_energy_resource = S(initial||gamma)/beta`,
/// `passivity_gap = S(final_passive||gamma)/beta` and
/// `entropy_production = (S(initial||gamma) - S(final||gamma))/beta`.
/// Both losses are reported as magnitudes; they are non-negative whenever the map
/// taking `initial` to `final` is Gibbs preserving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErgotropyDecomposition {
    pub free_energy_resource: f64,
    pub passivity_gap: f64,
    pub entropy_production: f64,
}

impl ErgotropyDecomposition {
    /// `free_energy_resource - passivity_gap - entropy_production`.
    pub fn ergotropy(&self) -> f64 {
        self.free_energy_resource - self.passivity_gap - self.entropy_production
    }
}

pub fn decompose(
    initial: &DiagonalState,
    final_state: &DiagonalState,
    beta: InverseTemperature,
) -> Result<ErgotropyDecomposition> {
    initial.check_same_spectrum(final_state)?;
    let b = beta.value()?;
    let gibbs = gibbs_state(initial.spectrum(), beta);
    let s_initial = relative_entropy(initial, &gibbs)?;
    let s_final = relative_entropy(final_state, &gibbs)?;
    let s_final_passive = relative_entropy(&passive_state(final_state), &gibbs)?;
    Ok(ErgotropyDecomposition {
        free_energy_resource: s_initial / b,
        passivity_gap: s_final_passive / b,
        entropy_production: (s_initial - s_final) / b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::free_energy;
    use approx::assert_relative_eq;
    use itertools::Itertools;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn spec(e: &[f64]) -> Arc<Spectrum> {
        Arc::new(Spectrum::new(e.to_vec()).unwrap())
    }

    fn state(s: &Arc<Spectrum>, p: &[f64]) -> DiagonalState {
        DiagonalState::new(s.clone(), p.to_vec()).unwrap()
    }

    fn random_state(rng: &mut StdRng, s: &Arc<Spectrum>) -> DiagonalState {
        let w: Vec<f64> = (0..s.dim()).map(|_| rng.random::<f64>() + 1e-3).collect();
        let t: f64 = w.iter().sum();
        state(s, &w.iter().map(|x| x / t).collect::<Vec<_>>())
    }

    fn random_spectrum(rng: &mut StdRng, d: usize) -> Arc<Spectrum> {
        let mut e: Vec<f64> = (0..d - 1).map(|_| rng.random_range(0.0..5.0)).collect();
        e.push(0.0);
        e.sort_by(f64::total_cmp);
        spec(&e)
    }

    /// Lowest energy over all rearrangements of the populations.
    fn brute_force_min_energy(st: &DiagonalState) -> f64 {
        (0..st.dim())
            .permutations(st.dim())
            .map(|perm| energy(&st.permuted(&perm).unwrap()))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn passive_examples() {
        let s = spec(&[0.0, 1.0]);
        let g = gibbs_state(&s, InverseTemperature::Finite(0.7));
        assert_eq!(passive_state(&g), g);
        assert_eq!(passive_state(&state(&s, &[0.1, 0.9])).probs(), &[0.9, 0.1]);
    }

    #[test]
    fn passive_matches_permutation_oracle_d5() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let s = random_spectrum(&mut rng, 5);
            let st = random_state(&mut rng, &s);
            let oracle = brute_force_min_energy(&st);
            assert_relative_eq!(energy(&passive_state(&st)), oracle, epsilon = 1e-14);
        }
    }

    #[test]
    fn ergotropy_examples() {
        let omega = 2.5;
        let s = spec(&[0.0, omega]);
        let g = gibbs_state(&s, InverseTemperature::Finite(0.3));
        assert_eq!(ergotropy(&g), 0.0);
        assert_eq!(ergotropy(&state(&s, &[0.0, 1.0])), omega);
    }

    #[test]
    fn ergotropy_matches_permutation_oracle_d6() {
        let mut rng = StdRng::seed_from_u64(6);
        for _ in 0..10 {
            let s = random_spectrum(&mut rng, 6);
            let st = random_state(&mut rng, &s);
            // max over permutations of sum (p_i - p_pi(i)) w_i
            let oracle = energy(&st) - brute_force_min_energy(&st);
            assert_relative_eq!(ergotropy(&st), oracle, epsilon = 1e-12);
        }
    }

    #[test]
    fn beta_star_examples() {
        let s = spec(&[0.0, 1.0, 2.5]);
        let g = gibbs_state(&s, InverseTemperature::Finite(2.0));
        match beta_star(&g).unwrap() {
            BetaStar::Finite(b) => assert!((b - 2.0).abs() < 1e-9, "{b}"),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            beta_star(&DiagonalState::uniform(s.clone())).unwrap(),
            BetaStar::Zero
        );
        assert_eq!(
            beta_star(&DiagonalState::ground(s.clone())).unwrap(),
            BetaStar::Infinite
        );

        let s2 = spec(&[0.0, 1.0]);
        let st = state(&s2, &[0.7, 0.3]);
        let BetaStar::Finite(b) = beta_star(&st).unwrap() else {
            panic!()
        };
        let back = entropy(&gibbs_state(&s2, InverseTemperature::Finite(b)));
        assert!((back - entropy(&st)).abs() < 1e-10);
        // two-level closed form: p1/p0 = exp(-b)
        assert_relative_eq!(b, (0.7f64 / 0.3).ln(), max_relative = 1e-9);
    }

    #[test]
    fn beta_star_extreme_scales() {
        // Very small and very large energies push beta* outside the default bracket.
        for scale in [1e-6, 1e5] {
            let s = spec(&[0.0, scale, 2.0 * scale]);
            let st = state(&s, &[0.5, 0.3, 0.2]);
            let BetaStar::Finite(b) = beta_star(&st).unwrap() else {
                panic!()
            };
            let back = entropy(&gibbs_state(&s, InverseTemperature::Finite(b)));
            assert!((back - entropy(&st)).abs() < 1e-10);
        }
    }

    #[test]
    fn single_system_bound_examples() {
        let s = spec(&[0.0, 1.0]);
        let g = gibbs_state(&s, InverseTemperature::Finite(1.3));
        assert!(bound_single_system(&g).unwrap().abs() < 1e-10);

        let excited = state(&s, &[0.0, 1.0]);
        assert_eq!(bound_single_system(&excited).unwrap(), 1.0);
        // the finite-beta* branch approaches the pure-state value
        let nearly = state(&s, &[1e-12, 1.0 - 1e-12]);
        assert!((bound_single_system(&nearly).unwrap() - 1.0).abs() < 1e-9);

        // a qubit passive state is always thermal, so the bound is attained
        let st = state(&s, &[0.3, 0.7]);
        assert!((bound_single_system(&st).unwrap() - ergotropy(&st)).abs() < 1e-10);

        let s3 = spec(&[0.0, 1.0, 2.0]);
        let st3 = state(&s3, &[0.1, 0.1, 0.8]);
        assert!(bound_single_system(&st3).unwrap() > ergotropy(&st3) + 1e-3);
    }

    #[test]
    fn bath_bound_examples() {
        let omega = 1.7;
        let beta = 0.6;
        let s = spec(&[0.0, omega]);
        let b = InverseTemperature::Finite(beta);
        let g = gibbs_state(&s, b);
        assert!(bound_with_bath(&g, b).unwrap().abs() < 1e-15);
        assert_relative_eq!(
            bound_with_bath(&DiagonalState::ground(s.clone()), b).unwrap(),
            (1.0 + (-beta * omega).exp()).ln() / beta,
            max_relative = 1e-14
        );
    }

    #[test]
    fn extraction_bound_examples() {
        let mut rng = StdRng::seed_from_u64(16);
        let s = random_spectrum(&mut rng, 4);
        let b = InverseTemperature::Finite(0.9);
        let passive = passive_state(&random_state(&mut rng, &s));
        assert_eq!(
            extraction_bound(&passive, b).unwrap(),
            bound_with_bath(&passive, b).unwrap()
        );
        let g = gibbs_state(&s, b);
        assert!(extraction_bound(&g, b).unwrap().abs() < 1e-15);
        for _ in 0..100 {
            let st = random_state(&mut rng, &s);
            assert!(extraction_bound(&st, b).unwrap() <= bound_with_bath(&st, b).unwrap() + 1e-15);
        }
    }

    #[test]
    fn decomposition_examples() {
        let s = spec(&[0.0, 1.0, 2.0]);
        let b = InverseTemperature::Finite(1.1);
        let g = gibbs_state(&s, b);
        let dec = decompose(&g, &g, b).unwrap();
        assert!(dec.free_energy_resource.abs() < 1e-15);
        assert!(dec.passivity_gap.abs() < 1e-15);
        assert!(dec.entropy_production.abs() < 1e-15);

        // same eigenvalues as Gibbs, rearranged
        let shuffled = g.permuted(&[2, 0, 1]).unwrap();
        let dec = decompose(&DiagonalState::ground(s.clone()), &shuffled, b).unwrap();
        assert!(dec.passivity_gap.abs() < 1e-15);

        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..50 {
            let a = random_state(&mut rng, &s);
            let f = random_state(&mut rng, &s);
            let dec = decompose(&a, &f, b).unwrap();
            assert!((dec.ergotropy() - ergotropy(&f)).abs() < 1e-10);
        }
    }

    #[test]
    fn ergotropy_is_free_energy_difference_at_any_beta() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..50 {
            let s = random_spectrum(&mut rng, 4);
            let st = random_state(&mut rng, &s);
            let r = ergotropy(&st);
            for beta in [0.1, 0.5, 1.0, 3.0, 10.0] {
                let b = InverseTemperature::Finite(beta);
                let diff =
                    free_energy(&st, b).unwrap() - free_energy(&passive_state(&st), b).unwrap();
                assert!((diff - r).abs() < 1e-12);
            }
        }
    }
}
