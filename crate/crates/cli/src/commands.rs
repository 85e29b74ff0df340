use std::collections::HashMap;
use std::sync::Arc;

use ergoflow::{
    beta_order, beta_star, bound_single_system, bound_with_bath, energy, enumerate_extremal_states,
    ergotropy, extraction_bound, gibbs_state, optimize, passive_state, saturating_frequency,
    saturation_sweep, BetaStar, DiagonalState, EngineConfig, InverseTemperature, Spectrum,
};
use rayon::prelude::*;
use serde_json::json;

use crate::grid::{product, Grid};
use crate::output::{write_json, Cell, Table};
use crate::{BoundArgs, CliError, ExtremalArgs, OscillatorArgs, StateArgs, SweepArgs};

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn temperature(flag: &str, beta: f64) -> Result<InverseTemperature> {
    if beta == f64::INFINITY {
        return Ok(InverseTemperature::Infinite);
    }
    InverseTemperature::finite(beta).map_err(|e| usage(format!("{flag}: {e}")))
}

fn spectrum(flag: &str, energies: Vec<f64>) -> Result<Arc<Spectrum>> {
    Spectrum::new(energies)
        .map(Arc::new)
        .map_err(|e| usage(format!("{flag}: {e}")))
}

fn load_state(args: &StateArgs) -> Result<DiagonalState> {
    let s = spectrum("--energies", args.energies.clone())?;
    match (&args.probs, args.beta_cold) {
        (Some(p), None) => {
            if p.len() != s.dim() {
                return Err(usage(format!(
                    "--probs: {} populations for {} energies",
                    p.len(),
                    s.dim()
                )));
            }
            DiagonalState::new(s, p.clone()).map_err(|e| usage(format!("--probs: {e}")))
        }
        (None, Some(b)) => Ok(gibbs_state(&s, temperature("--beta-cold", b)?)),
        _ => Err(usage("give exactly one of --probs or --beta-cold")),
    }
}

fn finite_beta(flag: &str, beta: f64) -> Result<f64> {
    match temperature(flag, beta)? {
        InverseTemperature::Finite(b) => Ok(b),
        InverseTemperature::Infinite => Err(usage(format!("{flag}: must be finite"))),
    }
}

pub fn bound(args: &BoundArgs) -> Result<()> {
    let state = load_state(&args.state)?;
    let beta = InverseTemperature::Finite(finite_beta("--beta", args.beta)?);
    let star = match beta_star(&state)? {
        BetaStar::Zero => json!(0.0),
        BetaStar::Finite(b) => json!(b),
        BetaStar::Infinite => json!("inf"),
    };
    let report = json!({
        "energies": state.energies(),
        "probs": state.probs(),
        "beta": args.beta,
        "ergotropy": ergotropy(&state),
        "passive_state": passive_state(&state).probs(),
        "beta_star": star,
        "bound_single_system": bound_single_system(&state)?,
        "bound_with_bath": bound_with_bath(&state, beta)?,
        "extraction_bound": extraction_bound(&state, beta)?,
    });
    write_json(&report, args.out.as_deref())?;
    Ok(())
}

pub fn extremal(args: &ExtremalArgs) -> Result<()> {
    let state = load_state(&args.state)?;
    let beta = finite_beta("--beta-hot", args.beta_hot)?;
    let d = state.dim();
    let pts = enumerate_extremal_states(&state, beta, args.max_dim)?;
    let mut columns: Vec<String> = (0..d).map(|i| format!("p_{i}")).collect();
    columns.extend(["beta_order", "energy", "ergotropy"].map(String::from));
    let rows = pts
        .iter()
        .map(|q| {
            let mut row: Vec<Cell> = q.probs().iter().map(|&p| Cell::Num(p)).collect();
            row.push(Cell::Text(beta_order(q, beta).label()));
            row.push(Cell::Num(energy(q)));
            row.push(Cell::Num(ergotropy(q)));
            row
        })
        .collect();
    Table { columns, rows }.write(args.format, args.out.as_deref())?;
    Ok(())
}

/// Inverse temperature cell; infinite values are written as `inf`.
fn beta_cell(b: f64) -> Cell {
    if b.is_infinite() {
        Cell::Text("inf".into())
    } else {
        Cell::Num(b)
    }
}

struct Point {
    beta_hot: f64,
    beta_cold: f64,
    spectrum: Arc<Spectrum>,
}

fn sweep_points(args: &SweepArgs, allowed: &[&str]) -> Result<Vec<Point>> {
    for g in &args.grid {
        let known = allowed.contains(&g.var.as_str())
            || (g.var.starts_with("omega_") && g.var[6..].parse::<usize>().is_ok_and(|k| k >= 1));
        if !known {
            return Err(usage(format!("--grid: unknown variable {:?}", g.var)));
        }
        if args.grid.iter().filter(|h| h.var == g.var).count() > 1 {
            return Err(usage(format!("--grid: {:?} given twice", g.var)));
        }
    }
    let assignments = product(&args.grid);
    assignments
        .into_iter()
        .map(|vars| {
            let get = |name: &str| vars.iter().find(|(v, _)| v == name).map(|(_, x)| *x);
            let beta_hot = get("beta_hot")
                .or(args.beta_hot)
                .ok_or_else(|| usage("--beta-hot: required (flag or grid)"))?;
            let beta_cold = get("beta_cold")
                .or(args.beta_cold)
                .ok_or_else(|| usage("--beta-cold: required (flag or grid)"))?;
            let spectrum = point_spectrum(args, &vars)?;
            Ok(Point {
                beta_hot,
                beta_cold,
                spectrum,
            })
        })
        .collect()
}

fn point_spectrum(args: &SweepArgs, vars: &[(String, f64)]) -> Result<Arc<Spectrum>> {
    let get = |name: &str| vars.iter().find(|(v, _)| v == name).map(|(_, x)| *x);
    let mut energies = match &args.energies {
        Some(e) => {
            if get("omega").is_some()
                || get("dim").is_some()
                || args.omega.is_some()
                || args.dim.is_some()
            {
                return Err(usage("--energies: cannot be combined with omega or dim"));
            }
            e.clone()
        }
        None => {
            let omega = get("omega").or(args.omega).unwrap_or(1.0);
            let dim = match get("dim") {
                Some(d) if d.fract() == 0.0 && d >= 2.0 => d as usize,
                Some(d) => return Err(usage(format!("--grid: dim = {d} is not an integer >= 2"))),
                None => args
                    .dim
                    .ok_or_else(|| usage("--dim: required without --energies"))?,
            };
            (0..dim).map(|n| n as f64 * omega).collect()
        }
    };
    for (var, value) in vars {
        if let Some(k) = var
            .strip_prefix("omega_")
            .and_then(|k| k.parse::<usize>().ok())
        {
            if k >= energies.len() {
                return Err(usage(format!("--grid: {var} exceeds the spectrum")));
            }
            energies[k] = *value;
        }
    }
    spectrum("spectrum", energies)
}

pub fn engine_sweep(args: &SweepArgs) -> Result<()> {
    let points = sweep_points(args, &["beta_hot", "beta_cold", "omega", "dim"])?;
    let dmax = points.iter().map(|p| p.spectrum.dim()).max().unwrap_or(2);
    let rows = points
        .par_iter()
        .map(|p| engine_row(p, dmax, args.max_dim))
        .collect::<Result<Vec<_>>>()?;
    let mut columns = vec!["beta_hot".to_string(), "beta_cold".to_string()];
    columns.extend((1..dmax).map(|k| format!("omega_{k}")));
    columns.extend(
        [
            "dim",
            "work_max",
            "efficiency_max",
            "optimal_protocol_label",
            "carnot",
        ]
        .map(String::from),
    );
    Table { columns, rows }.write(args.format, args.out.as_deref())?;
    Ok(())
}

/// Sweep cells: outcome of one engine configuration. Equal temperatures give
/// the idle engine; reversed temperatures are left blank with label `-`.
fn engine_outcome(p: &Point, max_dim: usize) -> Result<(Cell, Cell, String, Cell)> {
    let bh = finite_beta("beta_hot", p.beta_hot)?;
    let bc = temperature("beta_cold", p.beta_cold)?;
    if let InverseTemperature::Finite(c) = bc {
        if bh == c {
            return Ok((Cell::Num(0.0), Cell::Empty, "0".into(), Cell::Num(0.0)));
        }
        if bh > c {
            return Ok((Cell::Empty, Cell::Empty, "-".into(), Cell::Empty));
        }
    }
    let cfg = EngineConfig::new(p.spectrum.clone(), bc, InverseTemperature::Finite(bh))?;
    let report = optimize(&cfg, max_dim)?;
    let eff = if report.per_extremal.iter().any(|e| e.efficiency.is_some()) {
        Cell::Num(report.efficiency_max)
    } else {
        Cell::Empty
    };
    Ok((
        Cell::Num(report.work_max),
        eff,
        report.protocol_label().to_string(),
        Cell::Num(cfg.carnot()),
    ))
}

fn engine_row(p: &Point, dmax: usize, max_dim: usize) -> Result<Vec<Cell>> {
    let (work, eff, label, carnot) = engine_outcome(p, max_dim)?;
    let e = p.spectrum.energies();
    let mut row = vec![Cell::Num(p.beta_hot), beta_cell(p.beta_cold)];
    row.extend((1..dmax).map(|k| e.get(k).map_or(Cell::Empty, |&w| Cell::Num(w))));
    row.extend([Cell::Int(e.len()), work, eff, Cell::Text(label), carnot]);
    Ok(row)
}

pub fn region_map(args: &SweepArgs) -> Result<()> {
    if args.dim.is_some() || args.grid.iter().any(|g| g.var == "dim") {
        return Err(usage("region-map: the spectrum is fixed to three levels"));
    }
    let energies = match (&args.energies, args.omega) {
        (Some(e), None) if e.len() == 3 => e.clone(),
        (Some(e), None) => {
            return Err(usage(format!(
                "--energies: region-map needs 3 levels, got {}",
                e.len()
            )))
        }
        (None, omega) => vec![0.0, 1.0, omega.unwrap_or(2.0)],
        (Some(_), Some(_)) => return Err(usage("region-map: give either --omega or --energies")),
    };
    // an omega grid moves the top level of (0, 1, omega)
    let grid = args
        .grid
        .iter()
        .cloned()
        .map(|g| {
            if g.var == "omega" {
                Grid {
                    var: "omega_2".into(),
                    ..g
                }
            } else {
                g
            }
        })
        .collect();
    let args = SweepArgs {
        energies: Some(energies),
        omega: None,
        grid,
        ..args.clone()
    };
    let points = sweep_points(&args, &["beta_hot", "beta_cold"])?;
    if let Some(p) = points.iter().find(|p| p.spectrum.dim() != 3) {
        return Err(usage(format!(
            "region-map needs d = 3, got {}",
            p.spectrum.dim()
        )));
    }
    let rows = points
        .par_iter()
        .map(|p| {
            let (work, _, label, _) = engine_outcome(p, args.max_dim)?;
            let e = p.spectrum.energies();
            Ok(vec![
                Cell::Num(p.beta_hot),
                beta_cell(p.beta_cold),
                Cell::Num(e[1]),
                Cell::Num(e[2]),
                Cell::Text(label),
                work,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    let columns = [
        "beta_hot",
        "beta_cold",
        "omega_1",
        "omega_2",
        "label",
        "work_max",
    ]
    .map(String::from)
    .to_vec();
    Table { columns, rows }.write(args.format, args.out.as_deref())?;
    Ok(())
}

pub fn oscillator(args: &OscillatorArgs) -> Result<()> {
    let beta = finite_beta("--beta", args.beta)?;
    let mut grids: HashMap<&str, &Grid> = HashMap::new();
    for g in &args.grid {
        if !matches!(g.var.as_str(), "omega" | "dim") {
            return Err(usage(format!("--grid: unknown variable {:?}", g.var)));
        }
        if grids.insert(g.var.as_str(), g).is_some() {
            return Err(usage(format!("--grid: {:?} given twice", g.var)));
        }
    }
    let mut omegas: Vec<f64> = match (grids.get("omega"), args.omega) {
        (Some(g), None) => g.values.clone(),
        (None, Some(w)) => vec![w],
        (None, None) => Vec::new(),
        (Some(_), Some(_)) => return Err(usage("--omega: also given as a grid")),
    };
    for &n in &args.tuned {
        omegas.push(saturating_frequency(beta, n).map_err(|e| usage(format!("--tuned: {e}")))?);
    }
    if omegas.is_empty() {
        return Err(usage("--omega: give --omega, --tuned or an omega grid"));
    }
    let dims: Vec<usize> = match (grids.get("dim"), args.dim) {
        (Some(g), None) => g
            .values
            .iter()
            .map(|&d| {
                if d.fract() == 0.0 && d >= 2.0 {
                    Ok(d as usize)
                } else {
                    Err(usage(format!("--grid: dim = {d} is not an integer >= 2")))
                }
            })
            .collect::<Result<_>>()?,
        (None, Some(d)) => vec![d],
        (None, None) => return Err(usage("--dim: required (flag or grid)")),
        (Some(_), Some(_)) => return Err(usage("--dim: also given as a grid")),
    };
    let rows = saturation_sweep(&omegas, beta, &dims).map_err(|e| match e {
        ergoflow::Error::InvalidConfig(m) => usage(m),
        other => other.into(),
    })?;
    let columns = [
        "omega",
        "dim",
        "delta",
        "ergotropy",
        "bound",
        "bound_infinite",
        "truncation_ok",
    ]
    .map(String::from)
    .to_vec();
    let rows = rows
        .iter()
        .map(|r| {
            vec![
                Cell::Num(r.omega),
                Cell::Int(r.dim),
                Cell::Num(r.delta),
                Cell::Num(r.ergotropy),
                Cell::Num(r.bound),
                Cell::Num(r.bound_infinite),
                Cell::Bool(r.truncation_ok),
            ]
        })
        .collect();
    Table { columns, rows }.write(args.format, args.out.as_deref())?;
    Ok(())
}
