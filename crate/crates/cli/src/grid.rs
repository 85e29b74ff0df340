//! `VAR:MIN:MAX:STEPS[:log]` grids and their Cartesian product.

use std::str::FromStr;

use anyhow::{bail, ensure, Context};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub var: String,
    pub values: Vec<f64>,
}

impl FromStr for Grid {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        ensure!(
            parts.len() == 4 || parts.len() == 5,
            "expected VAR:MIN:MAX:STEPS[:log], got {s:?}"
        );
        let var = parts[0].trim().to_string();
        ensure!(!var.is_empty(), "empty variable name in {s:?}");
        let min: f64 = parts[1]
            .parse()
            .with_context(|| format!("bad MIN in {s:?}"))?;
        let max: f64 = parts[2]
            .parse()
            .with_context(|| format!("bad MAX in {s:?}"))?;
        let steps: usize = parts[3]
            .parse()
            .with_context(|| format!("bad STEPS in {s:?}"))?;
        ensure!(
            min.is_finite() && max.is_finite(),
            "non-finite bounds in {s:?}"
        );
        ensure!(steps >= 1, "STEPS must be at least 1 in {s:?}");
        ensure!(min <= max, "MIN exceeds MAX in {s:?}");
        let log = match parts.get(4) {
            None => false,
            Some(&"log") => true,
            Some(other) => bail!("unknown grid spacing {other:?} in {s:?}"),
        };
        ensure!(!log || min > 0.0, "log grid needs MIN > 0 in {s:?}");
        let values = if steps == 1 {
            vec![min]
        } else {
            let last = (steps - 1) as f64;
            (0..steps)
                .map(|i| {
                    let t = i as f64 / last;
                    if i + 1 == steps {
                        max
                    } else if log {
                        (min.ln() + t * (max.ln() - min.ln())).exp()
                    } else {
                        min + t * (max - min)
                    }
                })
                .collect()
        };
        Ok(Self { var, values })
    }
}

/// All assignments, first grid varying slowest.
pub fn product(grids: &[Grid]) -> Vec<Vec<(String, f64)>> {
    grids.iter().fold(vec![Vec::new()], |acc, g| {
        acc.into_iter()
            .flat_map(|prefix| {
                g.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push((g.var.clone(), v));
                    p
                })
            })
            .collect()
    })
}
