//! Harmonic oscillator prepared in its ground state and driven by the
//! highest-energy thermal process.

use std::sync::Arc;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::ergotropy::ergotropy;
use crate::error::{Error, Result};
use crate::state::{log_partition_function, DiagonalState, InverseTemperature, Spectrum};
use crate::thermomaj::{max_energy_state, ThermalProcessMatrix};

/// Truncations with `e^{-beta omega dim}` below this are considered faithful.
pub const TRUNCATION_THRESHOLD: f64 = 1e-12;
/// Detuning below this counts as zero.
pub const DETUNING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorConfig {
    pub omega: f64,
    pub beta: f64,
    pub dim: usize,
}

impl OscillatorConfig {
    pub fn new(omega: f64, beta: InverseTemperature, dim: usize) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "dim must be at least 2, got {dim}"
            )));
        }
        let beta = match beta {
            InverseTemperature::Finite(b) => InverseTemperature::finite(b)?.value()?,
            InverseTemperature::Infinite => {
                return Err(Error::InvalidConfig(
                    "oscillator bath needs finite beta".into(),
                ))
            }
        };
        Ok(Self { omega, beta, dim })
    }

    pub fn spectrum(&self) -> Result<Arc<Spectrum>> {
        Spectrum::ladder(self.omega, self.dim).map(Arc::new)
    }

    /// `e^{-beta omega dim}` below [`TRUNCATION_THRESHOLD`].
    pub fn truncation_ok(&self) -> bool {
        -self.beta * self.omega * self.dim as f64 <= TRUNCATION_THRESHOLD.ln()
    }
}

/// `log Z` of the untruncated oscillator, `-log(1 - e^{-x})`.
fn log_z_infinite(x: f64) -> f64 {
    -(-(-x).exp()).ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftParameter {
    /// `1 + log Z / (beta omega)`.
    pub l: f64,
    /// Distance of `log Z / (beta omega)` to the nearest integer.
    pub delta: f64,
}

pub fn shift_parameter(omega: f64, beta: f64) -> ShiftParameter {
    let x = beta * omega;
    let n = log_z_infinite(x) / x;
    let frac = n - n.floor();
    ShiftParameter {
        l: 1.0 + n,
        delta: frac.min(1.0 - frac),
    }
}

/// Spacing `omega` at which `log Z / (beta omega) = n`, so the shift is
/// exactly `L = n + 1` levels.
pub fn saturating_frequency(beta: f64, n: u32) -> Result<f64> {
    if n == 0 || !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Domain(format!(
            "need n >= 1 and finite beta > 0, got n = {n}, beta = {beta}"
        )));
    }
    // log Z(x) / x decreases from infinity to 0
    let g = |x: f64| log_z_infinite(x) / x - n as f64;
    let (mut lo, mut hi) = (1e-12_f64, 1e3_f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi) / beta)
}

/// Energy stored in the part of the Gibbs distribution cut off by the
/// truncation, `omega * sum_{n >= dim} n e^{-beta omega n}`.
pub fn truncation_tail(omega: f64, beta: f64, dim: usize) -> f64 {
    let x = beta * omega;
    let r = (-x).exp();
    let d = dim as f64;
    omega * (-x * d).exp() * (d / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)))
}

/// Column-stochastic truncation of the map that shifts the ground state onto a
/// Gibbs distribution starting at level `L - 1`.
///
/// Only defined at zero detuning with `L <= dim`.
pub fn saturating_map_truncated(config: &OscillatorConfig) -> Result<ThermalProcessMatrix> {
    let shift = shift_parameter(config.omega, config.beta);
    if shift.delta > DETUNING_TOL {
        return Err(Error::Domain(format!(
            "detuning {} is non-zero; use max_energy_final",
            shift.delta
        )));
    }
    let l = shift.l.round() as usize;
    let d = config.dim;
    if l > d {
        return Err(Error::Domain(format!("shift L = {l} exceeds dim = {d}")));
    }
    let x = config.beta * config.omega;
    let z_inf = log_z_infinite(x).exp();
    let mut a = DMatrix::<f64>::zeros(d, d);
    let mut placed = 0.0;
    for r in (l - 1)..d - 1 {
        let v = (-x * (r + 1 - l) as f64).exp() / z_inf;
        a[(r, 0)] = v;
        placed += v;
    }
    a[(d - 1, 0)] = 1.0 - placed;
    for k in 1..l - 1 {
        a[(k, k)] = 1.0;
    }
    for j in (l - 1).max(1)..d {
        a[(0, j)] = 1.0;
    }
    ThermalProcessMatrix::with_gibbs_tolerance(a, config.spectrum()?, config.beta, 1e-9)
}

#[derive(Debug, Clone)]
pub struct MaxEnergyOutcome {
    pub final_state: DiagonalState,
    pub ergotropy: f64,
    /// `(1/beta) log Z_dim`, the free-energy bound for the ground state.
    pub bound: f64,
}

/// Highest-energy state reachable from the ground state of the truncation.
pub fn max_energy_final(config: &OscillatorConfig) -> Result<MaxEnergyOutcome> {
    let spectrum = config.spectrum()?;
    let bound = log_partition_function(&spectrum, config.beta) / config.beta;
    let final_state = max_energy_state(&DiagonalState::ground(spectrum), config.beta);
    Ok(MaxEnergyOutcome {
        ergotropy: ergotropy(&final_state),
        final_state,
        bound,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub omega: f64,
    pub dim: usize,
    pub delta: f64,
    pub ergotropy: f64,
    pub bound: f64,
    /// `(1/beta) log Z` of the untruncated oscillator.
    pub bound_infinite: f64,
    pub truncation_ok: bool,
}

/// One row per `(omega, dim)` pair, sorted by `omega` then `dim`.
pub fn saturation_sweep(omegas: &[f64], beta: f64, dims: &[usize]) -> Result<Vec<SaturationRow>> {
    let pairs: Vec<(f64, usize)> = omegas
        .iter()
        .flat_map(|&w| dims.iter().map(move |&d| (w, d)))
        .collect();
    let mut rows = pairs
        .into_par_iter()
        .map(|(omega, dim)| {
            let cfg = OscillatorConfig::new(omega, InverseTemperature::Finite(beta), dim)?;
            let out = max_energy_final(&cfg)?;
            Ok(SaturationRow {
                omega,
                dim,
                delta: shift_parameter(omega, beta).delta,
                ergotropy: out.ergotropy,
                bound: out.bound,
                bound_infinite: log_z_infinite(beta * omega) / beta,
                truncation_ok: cfg.truncation_ok(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.omega.total_cmp(&b.omega).then(a.dim.cmp(&b.dim)));
    Ok(rows)
}
