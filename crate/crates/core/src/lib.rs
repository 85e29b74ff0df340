//! Ergotropy, thermomajorization and open-cycle engines for states diagonal in
//! the energy basis.
//!
//! ```
//! use std::sync::Arc;
//! use ergoflow::{ergotropy, bound_with_bath, DiagonalState, InverseTemperature, Spectrum};
//!
//! let spectrum = Arc::new(Spectrum::new(vec![0.0, 1.0]).unwrap());
//! let rho = DiagonalState::new(spectrum, vec![0.2, 0.8]).unwrap();
//! assert!((ergotropy(&rho) - 0.6).abs() < 1e-12);
//! let bound = bound_with_bath(&rho, InverseTemperature::Finite(1.0)).unwrap();
//! assert!(bound >= ergotropy(&rho));
//! ```

pub mod engine;
pub mod ergotropy;
pub mod error;
pub mod oscillator;
pub mod state;
pub mod thermomaj;

pub use engine::{
    carnot_efficiency, efficiency, heat, minimal_coupling_reference, optimize, qubit_closed_form,
    qutrit_analytics, work, EngineConfig, EngineReport, ExtremalEvaluation, QutritAnalytics,
    QutritExtremal,
};
pub use ergotropy::{
    beta_star, bound_single_system, bound_with_bath, decompose, ergotropy, extraction_bound,
    passive_state, BetaStar, ErgotropyDecomposition,
};
pub use error::{Error, Result};
pub use oscillator::{
    max_energy_final, saturating_frequency, saturating_map_truncated, saturation_sweep,
    shift_parameter, MaxEnergyOutcome, OscillatorConfig, SaturationRow, ShiftParameter,
};
pub use state::{
    energy, entropy, free_energy, gibbs_state, log_partition_function, relative_entropy,
    DiagonalState, InverseTemperature, Spectrum,
};
pub use thermomaj::{
    apply_process, beta_order, curve, enumerate_extremal_states, max_energy_state, qutrit_beta0,
    qutrit_process_matrix, thermomajorizes, tight_extremal_state, tightly_thermomajorizes,
    BetaOrder, QutritProcess, ThermalProcessMatrix, ThermoCurve,
};
