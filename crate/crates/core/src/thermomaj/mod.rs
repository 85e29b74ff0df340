//! Thermomajorization: beta orders, curves, reachability tests, and the
//! extremal points of the thermal polytope.

mod curve;
mod extremal;
mod process;

pub use curve::{
    beta_order, curve, thermomajorizes, tightly_thermomajorizes, BetaOrder, ThermoCurve,
    BETA_ORDER_TIE_TOL, THERMOMAJORIZATION_TOL,
};
pub use extremal::{
    enumerate_extremal_states, max_energy_state, tight_extremal_state, DEDUPE_TOL, DEFAULT_MAX_DIM,
};
pub use process::{
    apply_process, qutrit_beta0, qutrit_process_matrix, QutritProcess, ThermalProcessMatrix,
    GIBBS_PRESERVATION_TOL, STOCHASTIC_TOL,
};
