use std::fmt;

use crate::channel_model::{make_scenario, Deployment, PathLoss, ScenarioKind};
use crate::db_to_linear;
use crate::error::{Error, Result};
use crate::lp_beamformer::rician_bounds;
use crate::rng::derive_seed;

use super::{evaluate_schemes, mean_and_half_width, EvalOptions, SchemeId, SchemeStats};

/// Everything about an experiment point except the swept variable.
#[derive(Debug, Clone, PartialEq)]
pub struct Setup {
    pub scenario: ScenarioKind,
    pub devices: usize,
    pub antennas: usize,
    pub kappa_db: f64,
    pub path_loss: PathLoss,
    /// Geometry redraws for random scenarios; fading trials are split evenly
    /// across them.
    pub redraws: usize,
    pub schemes: Vec<SchemeId>,
    /// SDP schemes are skipped above this array size.
    pub sdp_max_antennas: usize,
    pub eval: EvalOptions,
}

impl Default for Setup {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::A,
            devices: 8,
            antennas: 8,
            kappa_db: 10.0,
            path_loss: PathLoss::default(),
            redraws: 100,
            schemes: SchemeId::ALL.to_vec(),
            sdp_max_antennas: 64,
            eval: EvalOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabel {
    Scheme(SchemeId),
    BoundLower,
    BoundUpper,
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RowLabel::Scheme(s) => s.fmt(f),
            RowLabel::BoundLower => f.write_str("bound_lb"),
            RowLabel::BoundUpper => f.write_str("bound_ub"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub label: RowLabel,
    /// Mean worst-case energy (linear).
    pub mean: f64,
    pub half_width: f64,
    /// Mean affine-scaling iterations (LP rows only).
    pub mean_iterations: Option<f64>,
    /// Mean design-point worst-case energy on the mean channels.
    pub design_value: Option<f64>,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub variable: &'static str,
    pub grid: Vec<f64>,
    pub rows: Vec<SweepRow>,
    pub seed: u64,
}

impl SweepResult {
    /// Rows of one label, in grid order.
    pub fn series(&self, label: RowLabel) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.label == label).collect()
    }
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain(format!("{name} grid is empty")));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::domain(format!("{name} grid must be strictly increasing")));
    }
    Ok(())
}

/// Geometry draws evaluated at one sweep point, with pooled statistics.
struct Point {
    rows: Vec<SweepRow>,
    deployments: Vec<Deployment>,
}

fn evaluate_point(
    setup: &Setup,
    antennas: usize,
    kappa_db: f64,
    alpha: f64,
    value: f64,
    seed: u64,
) -> Result<Point> {
    let redraws = if setup.scenario.is_random() { setup.redraws.max(1) } else { 1 };
    let schemes: Vec<SchemeId> = setup
        .schemes
        .iter()
        .copied()
        .filter(|s| !(s.uses_sdp() && antennas > setup.sdp_max_antennas))
        .collect();
    if schemes.len() < setup.schemes.len() {
        log::info!("skipping SDP schemes at M = {antennas} (limit {})", setup.sdp_max_antennas);
    }
    let eval = EvalOptions {
        trials: (setup.eval.trials / redraws).max(1),
        full_csi_trials: (setup.eval.full_csi_trials / redraws).max(1),
        ..setup.eval
    };

    let mut deployments = Vec::with_capacity(redraws);
    let mut per_draw: Vec<Vec<SchemeStats>> = Vec::with_capacity(redraws);
    for r in 0..redraws {
        let draw_seed = derive_seed(seed, r as u64);
        let dep = make_scenario(
            &setup.scenario,
            setup.devices,
            antennas,
            &[db_to_linear(kappa_db)],
            setup.path_loss,
            draw_seed,
        )?;
        let dep = if alpha != 0.0 { dep.rotated(alpha)? } else { dep };
        per_draw.push(evaluate_schemes(&dep, &schemes, &eval, draw_seed)?);
        deployments.push(dep);
    }

    let rows = schemes
        .iter()
        .enumerate()
        .map(|(j, &scheme)| {
            let pooled: Vec<f64> = per_draw.iter().flat_map(|d| d[j].samples.iter().copied()).collect();
            let (mean, half_width) = mean_and_half_width(&pooled);
            let avg = |f: &dyn Fn(&SchemeStats) -> Option<f64>| -> Option<f64> {
                let v: Option<Vec<f64>> = per_draw.iter().map(|d| f(&d[j])).collect();
                v.map(|v| v.iter().sum::<f64>() / v.len() as f64)
            };
            SweepRow {
                value,
                label: RowLabel::Scheme(scheme),
                mean,
                half_width,
                mean_iterations: avg(&|s| s.iterations.map(|i| i as f64)),
                design_value: avg(&|s| s.design_value),
                trials: pooled.len(),
            }
        })
        .collect();
    Ok(Point { rows, deployments })
}

/// Worst-case energy versus Rician factor (dB grid), optionally with the
/// closed-form bound curves as extra rows.
pub fn sweep_kappa(setup: &Setup, kappa_grid_db: &[f64], seed: u64, bounds: bool) -> Result<SweepResult> {
    check_grid(kappa_grid_db, "kappa")?;
    let mut rows = Vec::new();
    for &k in kappa_grid_db {
        let point = evaluate_point(setup, setup.antennas, k, 0.0, k, seed)?;
        rows.extend(point.rows);
        if bounds {
            let mut lb = 0.0;
            let mut ub = 0.0;
            for dep in &point.deployments {
                let kappas: Vec<f64> = dep.geometry.iter().map(|g| g.rician_factor).collect();
                let (l, u) = rician_bounds(dep.antennas(), &kappas, &dep.gains())?;
                lb += l;
                ub += u;
            }
            let n = point.deployments.len() as f64;
            for (label, v) in [(RowLabel::BoundLower, lb / n), (RowLabel::BoundUpper, ub / n)] {
                rows.push(SweepRow {
                    value: k,
                    label,
                    mean: v,
                    half_width: 0.0,
                    mean_iterations: None,
                    design_value: None,
                    trials: point.deployments.len(),
                });
            }
        }
    }
    Ok(SweepResult {
        variable: "kappa_db",
        grid: kappa_grid_db.to_vec(),
        rows,
        seed,
    })
}

/// Worst-case energy and LP iteration count versus array size.
pub fn sweep_antennas(setup: &Setup, antenna_grid: &[usize], seed: u64) -> Result<SweepResult> {
    let grid: Vec<f64> = antenna_grid.iter().map(|&m| m as f64).collect();
    check_grid(&grid, "antenna")?;
    if antenna_grid[0] == 0 {
        return Err(Error::domain("antenna counts must be positive"));
    }
    let mut rows = Vec::new();
    for &m in antenna_grid {
        // same seed at every M: each redraw keeps its geometry across the grid
        rows.extend(evaluate_point(setup, m, setup.kappa_db, 0.0, m as f64, seed)?.rows);
    }
    Ok(SweepResult {
        variable: "antennas",
        grid,
        rows,
        seed,
    })
}

/// Worst-case energy versus array rotation (degree grid).
pub fn sweep_rotation(setup: &Setup, alpha_grid_deg: &[f64], seed: u64) -> Result<SweepResult> {
    check_grid(alpha_grid_deg, "rotation")?;
    let mut rows = Vec::new();
    for &a in alpha_grid_deg {
        rows.extend(evaluate_point(setup, setup.antennas, setup.kappa_db, a.to_radians(), a, seed)?.rows);
    }
    Ok(SweepResult {
        variable: "alpha_deg",
        grid: alpha_grid_deg.to_vec(),
        rows,
        seed,
    })
}
