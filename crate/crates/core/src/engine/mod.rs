//! The open-cycle engine: a working body starts in the cold Gibbs state, a
//! thermal operation with the hot bath moves it inside its thermal polytope, and
//! the ergotropy of the result is stored as work.

mod qutrit;

use std::sync::Arc;

use rayon::prelude::*;

use crate::ergotropy::ergotropy;
use crate::error::{Error, Result};
use crate::state::{energy, gibbs_state, DiagonalState, InverseTemperature, Spectrum};
use crate::thermomaj::{beta_order, enumerate_extremal_states, BetaOrder};

pub use qutrit::{qutrit_analytics, QutritAnalytics, QutritExtremal, BETA0_PROXIMITY};

/// Heat and work below this are treated as zero.
pub const ENGINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct EngineConfig {
    spectrum: Arc<Spectrum>,
    beta_cold: InverseTemperature,
    beta_hot: f64,
}

impl EngineConfig {
    /// `beta_hot` must be finite and strictly below `beta_cold`.
    pub fn new(
        spectrum: Arc<Spectrum>,
        beta_cold: InverseTemperature,
        beta_hot: InverseTemperature,
    ) -> Result<Self> {
        let beta_hot = match beta_hot {
            InverseTemperature::Finite(b) => InverseTemperature::finite(b)?.value()?,
            InverseTemperature::Infinite => {
                return Err(Error::InvalidConfig(
                    "hot bath must have finite beta".into(),
                ))
            }
        };
        if let InverseTemperature::Finite(bc) = beta_cold {
            InverseTemperature::finite(bc)?;
            if beta_hot >= bc {
                return Err(Error::InvalidConfig(format!(
                    "need beta_hot < beta_cold, got {beta_hot} and {bc}"
                )));
            }
        }
        Ok(Self {
            spectrum,
            beta_cold,
            beta_hot,
        })
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }

    pub fn beta_cold(&self) -> InverseTemperature {
        self.beta_cold
    }

    pub fn beta_hot(&self) -> f64 {
        self.beta_hot
    }

    /// Cold Gibbs state the engine starts from.
    pub fn initial_state(&self) -> DiagonalState {
        gibbs_state(&self.spectrum, self.beta_cold)
    }

    pub fn carnot(&self) -> f64 {
        carnot_efficiency(self.beta_hot, self.beta_cold)
    }
}

/// `1 - beta_hot / beta_cold`.
pub fn carnot_efficiency(beta_hot: f64, beta_cold: InverseTemperature) -> f64 {
    match beta_cold {
        InverseTemperature::Finite(bc) => 1.0 - beta_hot / bc,
        InverseTemperature::Infinite => 1.0,
    }
}

/// Energy drawn from the hot bath.
pub fn heat(initial: &DiagonalState, final_state: &DiagonalState) -> Result<f64> {
    initial.check_same_spectrum(final_state)?;
    Ok(energy(final_state) - energy(initial))
}

/// Work stored in the battery: the ergotropy of the final state.
pub fn work(initial: &DiagonalState, final_state: &DiagonalState) -> Result<f64> {
    initial.check_same_spectrum(final_state)?;
    if ergotropy(initial) > ENGINE_TOL {
        return Err(Error::InvalidState(
            "engine must start from a passive state".into(),
        ));
    }
    Ok(ergotropy(final_state))
}

/// `work / heat`, or `None` when no heat is exchanged.
pub fn efficiency(initial: &DiagonalState, final_state: &DiagonalState) -> Result<Option<f64>> {
    let w = work(initial, final_state)?;
    let q = heat(initial, final_state)?;
    Ok((q > ENGINE_TOL).then(|| w / q))
}

#[derive(Debug, Clone)]
pub struct ExtremalEvaluation {
    pub state: DiagonalState,
    pub work: f64,
    pub heat: f64,
    pub efficiency: Option<f64>,
    /// Beta order of `state` at the hot temperature.
    pub beta_order: BetaOrder,
    /// `k_(order)` when `state` is the qutrit vertex `k`, otherwise the order.
    pub label: String,
}

#[derive(Debug, Clone)]
pub struct EngineReport {
    pub work_max: f64,
    /// Zero when no extremal state exchanges heat.
    pub efficiency_max: f64,
    pub work_optimal_state: DiagonalState,
    pub efficiency_optimal_state: DiagonalState,
    /// Sorted lexicographically by populations.
    pub per_extremal: Vec<ExtremalEvaluation>,
    work_optimal: usize,
}

impl EngineReport {
    /// Label of the work-optimal state, `"0"` when no work can be extracted.
    pub fn protocol_label(&self) -> &str {
        if self.work_max <= ENGINE_TOL {
            "0"
        } else {
            &self.per_extremal[self.work_optimal].label
        }
    }
}

/// Maximal work and efficiency over the extremal points of the thermal
/// polytope of the cold Gibbs state at the hot temperature.
pub fn optimize(config: &EngineConfig, max_dim: usize) -> Result<EngineReport> {
    let initial = config.initial_state();
    let beta_h = config.beta_hot;
    let extremal = enumerate_extremal_states(&initial, beta_h, max_dim)?;
    let analytic = if config.spectrum.dim() == 3 {
        Some(qutrit_analytics(config)?)
    } else {
        None
    };

    let per_extremal: Vec<ExtremalEvaluation> = extremal
        .into_par_iter()
        .map(|state| {
            let heat = heat(&initial, &state)?;
            let work = ergotropy(&state);
            let efficiency = (heat > ENGINE_TOL).then(|| work / heat);
            let order = beta_order(&state, beta_h);
            let label = match analytic.as_ref().and_then(|a| a.index_of(&state)) {
                Some(k) => format!("{k}_{}", order.label()),
                None => order.label(),
            };
            Ok(ExtremalEvaluation {
                state,
                work,
                heat,
                efficiency,
                beta_order: order,
                label,
            })
        })
        .collect::<Result<_>>()?;

    let mut work_optimal = 0;
    let mut eff_optimal: Option<usize> = None;
    for (i, e) in per_extremal.iter().enumerate() {
        if e.work > per_extremal[work_optimal].work {
            work_optimal = i;
        }
        if let Some(eta) = e.efficiency {
            if eff_optimal.is_none_or(|j| eta > per_extremal[j].efficiency.unwrap_or(0.0)) {
                eff_optimal = Some(i);
            }
        }
    }
    let (efficiency_max, efficiency_optimal_state) = match eff_optimal {
        Some(j) => (
            per_extremal[j].efficiency.unwrap_or(0.0),
            per_extremal[j].state.clone(),
        ),
        None => (0.0, initial.clone()),
    };
    Ok(EngineReport {
        work_max: per_extremal[work_optimal].work,
        efficiency_max,
        work_optimal_state: per_extremal[work_optimal].state.clone(),
        efficiency_optimal_state,
        per_extremal,
        work_optimal,
    })
}

fn qubit_gap(config: &EngineConfig) -> Result<f64> {
    let d = config.spectrum.dim();
    if d != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            got: d,
        });
    }
    Ok(config.spectrum.energies()[1])
}

fn cold_weight(config: &EngineConfig, omega: f64) -> f64 {
    match config.beta_cold {
        InverseTemperature::Finite(bc) => (-bc * omega).exp(),
        InverseTemperature::Infinite => 0.0,
    }
}

/// Closed-form qubit work and efficiency; efficiency only where work is positive.
pub fn qubit_closed_form(config: &EngineConfig) -> Result<(f64, Option<f64>)> {
    let omega = qubit_gap(config)?;
    let eh = (-config.beta_hot * omega).exp();
    let ec = cold_weight(config, omega);
    let w = omega * (2.0 * eh / (1.0 + ec) - 1.0);
    if w > 0.0 {
        Ok((w, Some(1.0 - (1.0 - eh) / (eh - ec))))
    } else {
        Ok((0.0, None))
    }
}

/// Qubit work and efficiency of the minimal-coupling engine.
pub fn minimal_coupling_reference(config: &EngineConfig) -> Result<(f64, Option<f64>)> {
    let omega = qubit_gap(config)?;
    let eh = (-config.beta_hot * omega).exp();
    let ehc = eh * cold_weight(config, omega);
    let w = omega * (2.0 * eh / (1.0 + ehc) - 1.0);
    if w > 0.0 {
        Ok((w, Some(1.0 - (1.0 - eh) / (eh - ehc))))
    } else {
        Ok((0.0, None))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermomaj::{tight_extremal_state, DEFAULT_MAX_DIM};
    use approx::assert_relative_eq;

    fn config(e: &[f64], bc: f64, bh: f64) -> EngineConfig {
        EngineConfig::new(
            Arc::new(Spectrum::new(e.to_vec()).unwrap()),
            InverseTemperature::Finite(bc),
            InverseTemperature::Finite(bh),
        )
        .unwrap()
    }

    #[test]
    fn config_requires_hot_below_cold() {
        let s = Arc::new(Spectrum::new(vec![0.0, 1.0]).unwrap());
        let f = InverseTemperature::Finite;
        assert!(EngineConfig::new(s.clone(), f(1.0), f(1.0)).is_err());
        assert!(EngineConfig::new(s.clone(), f(1.0), f(2.0)).is_err());
        assert!(EngineConfig::new(s.clone(), InverseTemperature::Infinite, f(2.0)).is_ok());
        assert!(EngineConfig::new(s, f(2.0), InverseTemperature::Infinite).is_err());
    }

    #[test]
    fn qubit_swap_point_heat_work_efficiency() {
        let omega = 1.0;
        let (bc, bh) = (2.0, 0.2);
        let cfg = config(&[0.0, omega], bc, bh);
        let cold = cfg.initial_state();
        let q = tight_extremal_state(&cold, bh, &BetaOrder::descending(2)).unwrap();
        let (eh, ec) = ((-bh * omega).exp(), (-bc * omega).exp());
        assert_relative_eq!(
            heat(&cold, &q).unwrap(),
            omega * (eh - ec) / (1.0 + ec),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            work(&cold, &q).unwrap(),
            omega * (2.0 * eh / (1.0 + ec) - 1.0),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            efficiency(&cold, &q).unwrap().unwrap(),
            1.0 - (1.0 - eh) / (eh - ec),
            max_relative = 1e-12
        );
        assert_eq!(heat(&cold, &cold).unwrap(), 0.0);
        assert_eq!(efficiency(&cold, &cold).unwrap(), None);
    }

    #[test]
    fn hot_gibbs_final_has_zero_efficiency() {
        let cfg = config(&[0.0, 0.6, 1.5], 3.0, 0.7);
        let hot = gibbs_state(cfg.spectrum(), InverseTemperature::Finite(0.7));
        let cold = cfg.initial_state();
        assert!(heat(&cold, &hot).unwrap() > 0.0);
        assert!(efficiency(&cold, &hot).unwrap().unwrap().abs() < 1e-15);
    }

    #[test]
    fn work_rejects_active_initial_state() {
        let s = Arc::new(Spectrum::new(vec![0.0, 1.0]).unwrap());
        let active = DiagonalState::new(s.clone(), vec![0.3, 0.7]).unwrap();
        assert!(work(&active, &DiagonalState::ground(s)).is_err());
    }

    #[test]
    fn qubit_optimize_matches_closed_form() {
        let cfg = config(&[0.0, 1.0], 2.0, 0.2);
        let report = optimize(&cfg, DEFAULT_MAX_DIM).unwrap();
        let (w, eta) = qubit_closed_form(&cfg).unwrap();
        assert!((report.work_max - w).abs() < 1e-12);
        assert!((report.efficiency_max - eta.unwrap()).abs() < 1e-12);
        assert_eq!(report.per_extremal.len(), 2);
    }

    #[test]
    fn qubit_boundary_gives_zero_work() {
        // 2 e^{-bh} - 1 = e^{-bc}
        let bc: f64 = 1.3;
        let bh = -((1.0 + (-bc).exp()) / 2.0).ln();
        let cfg = config(&[0.0, 1.0], bc, bh);
        let (w, eta) = qubit_closed_form(&cfg).unwrap();
        assert!(w.abs() < 1e-15);
        assert!(eta.is_none());
        assert!(optimize(&cfg, DEFAULT_MAX_DIM).unwrap().work_max < 1e-12);
        assert_eq!(
            optimize(&cfg, DEFAULT_MAX_DIM).unwrap().protocol_label(),
            "0"
        );
    }

    #[test]
    fn minimal_coupling_dominates_and_converges() {
        let cfg = config(&[0.0, 1.0], 1.0, 0.3);
        let (w, eta) = qubit_closed_form(&cfg).unwrap();
        let (wmc, eta_mc) = minimal_coupling_reference(&cfg).unwrap();
        assert!(wmc >= w);
        if let (Some(a), Some(b)) = (eta, eta_mc) {
            assert!(b >= a);
        }
        let cold = config(&[0.0, 1.0], 50.0, 0.3);
        let (w, eta) = qubit_closed_form(&cold).unwrap();
        let (wmc, eta_mc) = minimal_coupling_reference(&cold).unwrap();
        assert!((wmc - w).abs() < 1e-10);
        assert!((eta_mc.unwrap() - eta.unwrap()).abs() < 1e-10);
    }

    #[test]
    fn infinite_cold_bath_starts_in_ground_state() {
        let s = Arc::new(Spectrum::new(vec![0.0, 1.0]).unwrap());
        let cfg = EngineConfig::new(
            s,
            InverseTemperature::Infinite,
            InverseTemperature::Finite(0.3),
        )
        .unwrap();
        assert_eq!(cfg.carnot(), 1.0);
        let (w, _) = qubit_closed_form(&cfg).unwrap();
        let report = optimize(&cfg, DEFAULT_MAX_DIM).unwrap();
        assert!((report.work_max - w).abs() < 1e-12);
    }

    #[test]
    fn qubit_formulas_need_two_levels() {
        let cfg = config(&[0.0, 1.0, 2.0], 2.0, 1.0);
        assert!(matches!(
            qubit_closed_form(&cfg),
            Err(Error::WrongDimension {
                expected: 2,
                got: 3
            })
        ));
        assert!(minimal_coupling_reference(&cfg).is_err());
    }

    #[test]
    fn qutrit_hot_limit_prefers_protocol_six() {
        let cfg = config(&[0.0, 1.0, 2.0], 3.0, 0.02);
        let report = optimize(&cfg, DEFAULT_MAX_DIM).unwrap();
        assert!(
            report.protocol_label().starts_with("6_"),
            "{}",
            report.protocol_label()
        );
    }

    #[test]
    fn heat_is_non_negative_and_efficiency_below_carnot() {
        let cfg = config(&[0.0, 0.4, 1.1, 1.9], 2.5, 0.8);
        let report = optimize(&cfg, DEFAULT_MAX_DIM).unwrap();
        for e in &report.per_extremal {
            assert!(e.heat >= -1e-10);
        }
        assert!(report.efficiency_max <= cfg.carnot() + 1e-10);
    }
}
