//! Thermal processes: column-stochastic matrices that fix the Gibbs vector.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::state::{gibbs_state, DiagonalState, InverseTemperature, Spectrum};

pub const STOCHASTIC_TOL: f64 = 1e-12;
pub const GIBBS_PRESERVATION_TOL: f64 = 1e-10;

/// Column-stochastic `d x d` matrix `A` with `A gamma_beta = gamma_beta`.
#[derive(Debug, Clone)]
pub struct ThermalProcessMatrix {
    entries: DMatrix<f64>,
    beta: f64,
    spectrum: Arc<Spectrum>,
}

impl ThermalProcessMatrix {
    pub fn new(entries: DMatrix<f64>, spectrum: Arc<Spectrum>, beta: f64) -> Result<Self> {
        Self::with_gibbs_tolerance(entries, spectrum, beta, GIBBS_PRESERVATION_TOL)
    }

    /// As [`ThermalProcessMatrix::new`] with a caller-chosen Gibbs-preservation tolerance.
    pub fn with_gibbs_tolerance(
        entries: DMatrix<f64>,
        spectrum: Arc<Spectrum>,
        beta: f64,
        gibbs_tol: f64,
    ) -> Result<Self> {
        let d = spectrum.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::InvalidProcess(format!(
                "expected {d}x{d} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let beta_t = InverseTemperature::finite(beta)?;
        if let Some(v) = entries.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidProcess(format!(
                "entry {v} is negative or non-finite"
            )));
        }
        for (j, col) in entries.column_iter().enumerate() {
            let sum: f64 = col.sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::InvalidProcess(format!("column {j} sums to {sum}")));
            }
        }
        let gibbs = DVector::from_column_slice(gibbs_state(&spectrum, beta_t).probs());
        let image = &entries * &gibbs;
        if let Some(i) = (0..d).find(|&i| (image[i] - gibbs[i]).abs() > gibbs_tol) {
            return Err(Error::InvalidProcess(format!(
                "Gibbs vector not preserved at level {i}: {} -> {}",
                gibbs[i], image[i]
            )));
        }
        Ok(Self {
            entries,
            beta,
            spectrum,
        })
    }

    pub fn identity(spectrum: Arc<Spectrum>, beta: f64) -> Result<Self> {
        let d = spectrum.dim();
        Self::new(DMatrix::identity(d, d), spectrum, beta)
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn spectrum(&self) -> &Arc<Spectrum> {
        &self.spectrum
    }
}

/// `A p` for a thermal process `A`.
pub fn apply_process(
    process: &ThermalProcessMatrix,
    state: &DiagonalState,
) -> Result<DiagonalState> {
    if !(Arc::ptr_eq(&process.spectrum, state.spectrum())
        || *process.spectrum == **state.spectrum())
    {
        return Err(Error::SpectrumMismatch);
    }
    let p = DVector::from_column_slice(state.probs());
    let q = &process.entries * p;
    DiagonalState::new(state.spectrum().clone(), q.iter().copied().collect())
}

/// Extremal qutrit processes acting on a `(123)`-ordered input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum QutritProcess {
    A1,
    A2,
    A5,
    A9,
    A12,
    A13,
}

impl QutritProcess {
    pub const ALL: [QutritProcess; 6] = [
        QutritProcess::A1,
        QutritProcess::A2,
        QutritProcess::A5,
        QutritProcess::A9,
        QutritProcess::A12,
        QutritProcess::A13,
    ];

    /// Processes producing the non-trivial vertices on either side of `beta_0`.
    pub fn branch(below_beta0: bool) -> &'static [QutritProcess] {
        if below_beta0 {
            &[
                QutritProcess::A1,
                QutritProcess::A2,
                QutritProcess::A5,
                QutritProcess::A12,
                QutritProcess::A13,
            ]
        } else {
            &[
                QutritProcess::A1,
                QutritProcess::A2,
                QutritProcess::A5,
                QutritProcess::A9,
            ]
        }
    }
}

impl fmt::Display for QutritProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for QutritProcess {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QutritProcess::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidProcess(format!("unknown qutrit process {s:?}")))
    }
}

/// Root of `e^{-b w1} + e^{-b w2} = 1` by bisection on `[1e-9, 1e4]`.
pub fn qutrit_beta0(w1: f64, w2: f64) -> Result<f64> {
    if !(w1 > 0.0 && w2 >= w1) {
        return Err(Error::Domain(format!(
            "beta_0 needs 0 < w1 <= w2, got w1 = {w1}, w2 = {w2}"
        )));
    }
    let f = |b: f64| (-b * w1).exp() + (-b * w2).exp() - 1.0;
    let (mut lo, mut hi) = (1e-9, 1e4);
    if f(lo) <= 0.0 || f(hi) >= 0.0 {
        return Err(Error::NoConvergence(format!(
            "beta_0 not bracketed for w1 = {w1}, w2 = {w2}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The literal qutrit thermal process at inverse temperature `beta`, with
/// `q_ij = e^{-beta (w_i - w_j)}`.
///
/// `A12` and `A13` only exist below `beta_0`; `A9` has a negative entry there and
/// is rejected by the stochasticity check.
pub fn qutrit_process_matrix(
    name: QutritProcess,
    spectrum: &Arc<Spectrum>,
    beta: f64,
) -> Result<ThermalProcessMatrix> {
    if spectrum.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            got: spectrum.dim(),
        });
    }
    let w = spectrum.energies();
    let q = |i: usize, j: usize| (-beta * (w[i] - w[j])).exp();
    if matches!(name, QutritProcess::A12 | QutritProcess::A13) {
        let beta0 = qutrit_beta0(w[1], w[2])?;
        if beta >= beta0 {
            return Err(Error::Domain(format!(
                "{name} requires beta < beta_0 = {beta0}, got beta = {beta}"
            )));
        }
    }
    #[rustfmt::skip]
    let rows: [f64; 9] = match name {
        QutritProcess::A1 => [
            1.0 - q(1, 0), 1.0, 0.0,
            q(1, 0),       0.0, 0.0,
            0.0,           0.0, 1.0,
        ],
        QutritProcess::A2 => [
            1.0, 0.0,           0.0,
            0.0, 1.0 - q(2, 1), 1.0,
            0.0, q(2, 1),       0.0,
        ],
        QutritProcess::A5 => [
            1.0 - q(2, 0), q(2, 1),       0.0,
            0.0,           1.0 - q(2, 1), 1.0,
            q(2, 0),       0.0,           0.0,
        ],
        QutritProcess::A9 => [
            1.0 - q(1, 0) - q(2, 0), 1.0, 1.0,
            q(1, 0),                 0.0, 0.0,
            q(2, 0),                 0.0, 0.0,
        ],
        QutritProcess::A12 => [
            0.0,           q(0, 1) - q(2, 1),       1.0,
            q(1, 0),       0.0,                     0.0,
            1.0 - q(1, 0), 1.0 - q(0, 1) + q(2, 1), 0.0,
        ],
        QutritProcess::A13 => [
            0.0,           q(0, 1) - q(2, 1),       1.0,
            1.0 - q(2, 0), 1.0 - q(0, 1) + q(2, 1), 0.0,
            q(2, 0),       0.0,                     0.0,
        ],
    };
    let entries =
        DMatrix::from_row_slice(3, 3, &rows).map(|v| if v.abs() < 1e-15 { 0.0 } else { v });
    ThermalProcessMatrix::new(entries, spectrum.clone(), beta).map_err(|e| match e {
        Error::InvalidProcess(msg) => Error::Domain(format!("{name} at beta = {beta}: {msg}")),
        other => other,
    })
}
