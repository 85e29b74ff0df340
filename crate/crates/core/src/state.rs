//! Energy-diagonal states of a finite quantum system and the thermodynamic
//! functionals defined on them.
//!
//! Units: natural logarithms, `hbar = k_B = 1`, energies in frequency units.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Absolute tolerance on `sum(p) == 1` for a state to be accepted as-is.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// States within this distance of normalization are renormalized on construction.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Negative entries of at most this magnitude are treated as rounding noise and clamped to 0.
pub const NEGATIVE_NOISE_TOL: f64 = 1e-12;
/// Two energies closer than this are treated as one degenerate level.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Ascending energy levels of a diagonal Hamiltonian, ground level pinned at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    energies: Vec<f64>,
}

impl Spectrum {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least 2 levels, got {}",
                energies.len()
            )));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite energy {e}")));
        }
        if energies[0] != 0.0 {
            return Err(Error::InvalidSpectrum(format!(
                "ground energy must be 0, got {}",
                energies[0]
            )));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidSpectrum(
                "energies must be sorted non-decreasing".into(),
            ));
        }
        Ok(Self { energies })
    }

    /// Equally spaced ladder `0, omega, 2 omega, ...` with `dim` levels.
    pub fn ladder(omega: f64, dim: usize) -> Result<Self> {
        if omega.is_nan() || omega <= 0.0 || !omega.is_finite() {
            return Err(Error::InvalidSpectrum(format!(
                "ladder spacing must be positive and finite, got {omega}"
            )));
        }
        Self::new((0..dim).map(|n| n as f64 * omega).collect())
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn max_energy(&self) -> f64 {
        self.energies[self.energies.len() - 1]
    }

    /// Number of levels degenerate with the ground level.
    pub fn ground_degeneracy(&self) -> usize {
        self.energies
            .iter()
            .take_while(|&&e| e - self.energies[0] <= DEGENERACY_TOL)
            .count()
    }
}

/// Inverse temperature of a bath. Zero temperature is a distinct variant rather
/// than a floating-point infinity so that the zero-temperature Gibbs state is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InverseTemperature {
    Finite(f64),
    Infinite,
}

impl InverseTemperature {
    pub fn finite(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self::Finite(beta))
        } else {
            Err(Error::InvalidTemperature(format!(
                "beta must be positive and finite, got {beta}"
            )))
        }
    }

    /// The finite value, or an error for the zero-temperature sentinel.
    pub fn value(self) -> Result<f64> {
        match self {
            Self::Finite(b) => Ok(b),
            Self::Infinite => Err(Error::InvalidTemperature(
                "operation requires a finite beta".into(),
            )),
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinite)
    }
}

impl fmt::Display for InverseTemperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(b) => write!(f, "{b}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

/// Populations of an energy-diagonal density matrix.
#[derive(Debug, Clone)]
pub struct DiagonalState {
    probs: Vec<f64>,
    spectrum: Arc<Spectrum>,
}

impl PartialEq for DiagonalState {
    fn eq(&self, other: &Self) -> bool {
        self.probs == other.probs && self.same_spectrum(other)
    }
}

impl DiagonalState {
    /// Validates and, if the total is within [`RENORMALIZE_TOL`] of one, renormalizes.
    pub fn new(spectrum: Arc<Spectrum>, mut probs: Vec<f64>) -> Result<Self> {
        if probs.len() != spectrum.dim() {
            return Err(Error::InvalidState(format!(
                "{} probabilities for a {}-level spectrum",
                probs.len(),
                spectrum.dim()
            )));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidState(format!("non-finite probability {p}")));
            }
            if *p < 0.0 {
                if *p < -NEGATIVE_NOISE_TOL {
                    return Err(Error::InvalidState(format!("negative probability {p}")));
                }
                *p = 0.0;
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            probs.iter_mut().for_each(|p| *p /= total);
        }
        Ok(Self { probs, spectrum })
    }

    pub fn ground(spectrum: Arc<Spectrum>) -> Self {
        let mut probs = vec![0.0; spectrum.dim()];
        probs[0] = 1.0;
        Self { probs, spectrum }
    }

    pub fn uniform(spectrum: Arc<Spectrum>) -> Self {
        let d = spectrum.dim();
        Self {
            probs: vec![1.0 / d as f64; d],
            spectrum,
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn energies(&self) -> &[f64] {
        self.spectrum.energies()
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn same_spectrum(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spectrum, &other.spectrum) || self.spectrum == other.spectrum
    }

    pub(crate) fn check_same_spectrum(&self, other: &Self) -> Result<()> {
        if self.same_spectrum(other) {
            Ok(())
        } else {
            Err(Error::SpectrumMismatch)
        }
    }

    /// Largest absolute difference between populations.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The same populations with levels reassigned by `perm`: level `i` receives `probs[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            self.spectrum.clone(),
            perm.iter().map(|&j| self.probs[j]).collect(),
        )
    }

    /// Convex combination `weight * self + (1 - weight) * other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        self.check_same_spectrum(other)?;
        Self::new(
            self.spectrum.clone(),
            self.probs
                .iter()
                .zip(&other.probs)
                .map(|(a, b)| weight * a + (1.0 - weight) * b)
                .collect(),
        )
    }

    pub fn is_point_mass(&self) -> bool {
        self.probs.iter().filter(|&&p| p > 0.0).count() == 1
    }
}

/// Stable `log(sum(exp(x)))`.
pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `log Z` for the spectrum at finite `beta`.
pub fn log_partition_function(spectrum: &Spectrum, beta: f64) -> f64 {
    let exponents: Vec<f64> = spectrum.energies().iter().map(|e| -beta * e).collect();
    log_sum_exp(&exponents)
}

/// Thermal state `exp(-beta H) / Z`, built in the log domain.
///
/// At zero temperature the result is uniform over the degenerate ground levels.
pub fn gibbs_state(spectrum: &Arc<Spectrum>, beta: InverseTemperature) -> DiagonalState {
    let probs = match beta {
        InverseTemperature::Finite(b) => {
            let log_z = log_partition_function(spectrum, b);
            spectrum
                .energies()
                .iter()
                .map(|e| (-b * e - log_z).exp())
                .collect()
        }
        InverseTemperature::Infinite => {
            let g = spectrum.ground_degeneracy();
            (0..spectrum.dim())
                .map(|i| if i < g { 1.0 / g as f64 } else { 0.0 })
                .collect()
        }
    };
    DiagonalState {
        probs,
        spectrum: spectrum.clone(),
    }
}

pub fn energy(state: &DiagonalState) -> f64 {
    state
        .probs
        .iter()
        .zip(state.energies())
        .map(|(p, e)| p * e)
        .sum()
}

/// Shannon entropy of the populations, `0 log 0 = 0`.
pub fn entropy(state: &DiagonalState) -> f64 {
    -state
        .probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

/// Nonequilibrium free energy `E - S / beta`.
pub fn free_energy(state: &DiagonalState, beta: InverseTemperature) -> Result<f64> {
    let b = beta.value()?;
    Ok(energy(state) - entropy(state) / b)
}

/// `sum p (log p - log q)`; `+inf` when `p` has support outside `q`.
pub fn relative_entropy(p: &DiagonalState, q: &DiagonalState) -> Result<f64> {
    p.check_same_spectrum(q)?;
    let mut acc = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi.ln() - qi.ln());
    }
    // Rounding can push the sum a few ulps below zero for p == q.
    Ok(acc.max(0.0))
}
