//! Closed-form extremal states, work and heat for a qutrit working body.

use crate::error::{Error, Result};
use crate::state::{DiagonalState, InverseTemperature};
use crate::thermomaj::{qutrit_beta0, BetaOrder};

use super::EngineConfig;

/// Hot temperatures this close to `beta_0` are flagged: the two vertex families
/// meet there and enumeration is the reference.
pub const BETA0_PROXIMITY: f64 = 1e-9;
/// States this close in L-infinity are identified with a closed-form vertex.
const MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct QutritExtremal {
    /// Vertex number, 1 to 6.
    pub index: u8,
    pub state: DiagonalState,
    pub work: f64,
    pub heat: f64,
    /// Target order whose tight construction yields `state`.
    pub target_order: BetaOrder,
}

#[derive(Debug, Clone)]
pub struct QutritAnalytics {
    pub beta0: f64,
    pub below_beta0: bool,
    pub near_beta0: bool,
    /// Vertices 1 to 4 above `beta_0`; 1, 2, 3, 5, 6 below.
    pub extremals: Vec<QutritExtremal>,
}

impl QutritAnalytics {
    /// Number of the closed-form vertex equal to `state`, if any.
    pub fn index_of(&self, state: &DiagonalState) -> Option<u8> {
        self.extremals
            .iter()
            .find(|x| x.state.linf_distance(state) <= MATCH_TOL)
            .map(|x| x.index)
    }
}

struct Params {
    w1: f64,
    w2: f64,
    z: f64,
    h: [[f64; 3]; 3],
    c: [[f64; 3]; 3],
}

fn boltzmann_ratios(w: [f64; 3], beta: InverseTemperature) -> [[f64; 3]; 3] {
    let mut q = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let gap = w[i] - w[j];
            q[i][j] = match beta {
                InverseTemperature::Finite(b) => (-b * gap).exp(),
                InverseTemperature::Infinite if gap == 0.0 => 1.0,
                InverseTemperature::Infinite if gap > 0.0 => 0.0,
                InverseTemperature::Infinite => f64::INFINITY,
            };
        }
    }
    q
}

impl Params {
    fn new(config: &EngineConfig) -> Self {
        let e = config.spectrum().energies();
        let w = [e[0], e[1], e[2]];
        let h = boltzmann_ratios(w, InverseTemperature::Finite(config.beta_hot()));
        let c = boltzmann_ratios(w, config.beta_cold());
        Self {
            w1: w[1],
            w2: w[2],
            z: 1.0 + c[1][0] + c[2][0],
            h,
            c,
        }
    }

    fn state(&self, index: u8) -> [f64; 3] {
        let (h, c) = (&self.h, &self.c);
        let v = match index {
            1 => [1.0 - h[1][0] + c[1][0], h[1][0], c[2][0]],
            2 => [1.0, (1.0 - h[2][1]) * c[1][0] + c[2][0], h[2][1] * c[1][0]],
            3 => [
                1.0 - h[2][0] + h[2][1] * c[1][0],
                (1.0 - h[2][1]) * c[1][0] + c[2][0],
                h[2][0],
            ],
            4 => [
                1.0 + c[1][0] + c[2][0] - h[1][0] - h[2][0],
                h[1][0],
                h[2][0],
            ],
            5 => [
                (h[0][1] - h[2][1]) * c[1][0] + c[2][0],
                h[1][0],
                1.0 - h[1][0] + (1.0 - h[0][1] + h[2][1]) * c[1][0],
            ],
            6 => [
                c[1][0] * (h[0][1] - h[2][1]) + c[2][0],
                1.0 - h[2][0] + c[1][0] * (1.0 - h[0][1] + h[2][1]),
                h[2][0],
            ],
            _ => unreachable!(),
        };
        v.map(|x| x / self.z)
    }

    /// Closed-form ergotropy; `rho5_sign` is the sign of `q21` in the second
    /// candidate of vertex 5 (`+1` is consistent with the vertex itself).
    fn work(&self, index: u8, rho5_sign: f64) -> f64 {
        let (h, c, z) = (&self.h, &self.c, self.z);
        let (w1, w2) = (self.w1, self.w2);
        let candidates: Vec<f64> = match index {
            1 => vec![w1 / z * (2.0 * h[1][0] - 1.0 - c[1][0])],
            2 => vec![(w2 - w1) / z * (2.0 * h[2][1] * c[1][0] - (c[1][0] + c[2][0]))],
            3 => vec![
                (w2 - w1) / z * (h[2][0] - c[2][0] - (1.0 - h[2][1]) * c[1][0]),
                w2 / z * h[2][0]
                    - w1 / z * ((1.0 - h[2][0]) + h[2][1] * c[1][0])
                    - (w2 - w1) / z * ((1.0 - h[2][1]) * c[1][0] + c[2][0]),
            ],
            4 => {
                let total = 1.0 + c[1][0] + c[2][0];
                vec![
                    w1 / z * (2.0 * h[1][0] + h[2][0] - total),
                    w1 / z * (h[1][0] - h[2][0]) + w2 / z * (2.0 * h[2][0] + h[1][0] - total),
                ]
            }
            5 => {
                let m = 1.0 - h[0][1] + rho5_sign * h[2][1];
                vec![
                    w1 / z * (h[1][0] - (h[0][1] - h[2][1]) * c[1][0] - c[2][0]),
                    w1 / z * (h[1][0] - (1.0 - h[1][0]) - m * c[1][0])
                        + w2 / z
                            * ((1.0 - h[1][0]) + m * c[1][0]
                                - (h[0][1] - h[2][1]) * c[1][0]
                                - c[2][0]),
                ]
            }
            6 => {
                let a = c[1][0] * (1.0 + h[2][1] - h[0][1]);
                let b = 1.0 - c[2][0] - h[2][0] + c[1][0] * (1.0 + 2.0 * h[2][1] - 2.0 * h[0][1]);
                let g = h[2][0] - c[2][0] + c[1][0] * (h[2][1] - h[0][1]);
                vec![
                    (w2 - w1) / z * (2.0 * h[2][0] - 1.0 - a),
                    w1 / z * b,
                    w1 / z * (a + 1.0 - 2.0 * h[2][0]) + w2 / z * g,
                    w1 / z * b - w2 / z * (1.0 - 2.0 * h[2][0] + a),
                    w2 / z * g,
                ]
            }
            _ => unreachable!(),
        };
        candidates.into_iter().fold(0.0, f64::max)
    }

    fn heat(&self, index: u8) -> f64 {
        let (h, c, z) = (&self.h, &self.c, self.z);
        let (w1, w2) = (self.w1, self.w2);
        let q = match index {
            1 => w1 * (h[1][0] - c[1][0]),
            2 => (w2 - w1) * c[1][0] * (h[2][1] - c[2][1]),
            3 => h[2][0] * w2 - c[2][0] * (w2 - w1) - c[1][0] * h[2][1] * w1,
            4 => (h[1][0] - c[1][0]) * w1 + (h[2][0] - c[2][0]) * w2,
            5 => {
                let k = 1.0 - c[1][0] * h[0][1];
                h[1][0] * k * w1
                    + (c[1][0] * h[2][0] * h[0][1] - c[2][0] + k * (1.0 - h[1][0])) * w2
            }
            6 => (1.0 - c[1][0] * h[0][1]) * (1.0 - h[2][0]) * w1 + (h[2][0] - c[2][0]) * w2,
            _ => unreachable!(),
        };
        q / z
    }
}

fn target_order(index: u8) -> BetaOrder {
    let v = match index {
        1 => vec![1, 0, 2],
        2 => vec![0, 2, 1],
        3 => vec![2, 0, 1],
        4 | 6 => vec![2, 1, 0],
        5 => vec![1, 2, 0],
        _ => unreachable!(),
    };
    BetaOrder::new(v).expect("valid permutation")
}

/// Closed-form qutrit vertices with their work and heat.
pub fn qutrit_analytics(config: &EngineConfig) -> Result<QutritAnalytics> {
    let spectrum = config.spectrum();
    if spectrum.dim() != 3 {
        return Err(Error::WrongDimension {
            expected: 3,
            got: spectrum.dim(),
        });
    }
    let e = spectrum.energies();
    if e[1] <= 0.0 {
        return Err(Error::Domain(
            "qutrit vertices need a non-degenerate ground level".into(),
        ));
    }
    let beta0 = qutrit_beta0(e[1], e[2])?;
    let beta_h = config.beta_hot();
    let below_beta0 = beta_h < beta0;
    let near_beta0 = (beta_h - beta0).abs() <= BETA0_PROXIMITY;
    let p = Params::new(config);
    let indices: &[u8] = if below_beta0 {
        &[1, 2, 3, 5, 6]
    } else {
        &[1, 2, 3, 4]
    };
    let extremals = indices
        .iter()
        .map(|&k| {
            Ok(QutritExtremal {
                index: k,
                state: DiagonalState::new(spectrum.clone(), p.state(k).to_vec())?,
                work: p.work(k, 1.0),
                heat: p.heat(k),
                target_order: target_order(k),
            })
        })
        .collect::<Result<_>>()?;
    Ok(QutritAnalytics {
        beta0,
        below_beta0,
        near_beta0,
        extremals,
    })
}
