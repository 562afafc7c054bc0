use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::channel_model::{PathLoss, ScenarioKind, DEFAULT_FIXED_LOSS_DB, FIXED_SCENARIO_DEVICES, PATH_LOSS_EXPONENT};
use crate::error::{Error, Result};
use crate::lp_beamformer::AffineScalingParams;
use crate::sdp_benchmark::SdpOptions;
use crate::simulator::{EvalOptions, SchemeId, Setup};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Kappa,
    Antennas,
    Rotation,
    Solve,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::Kappa => "kappa",
            ExperimentKind::Antennas => "antennas",
            ExperimentKind::Rotation => "rotation",
            ExperimentKind::Solve => "solve",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa" => Ok(ExperimentKind::Kappa),
            "antennas" => Ok(ExperimentKind::Antennas),
            "rotation" => Ok(ExperimentKind::Rotation),
            "solve" | "solve-once" => Ok(ExperimentKind::Solve),
            other => Err(Error::config("kind", format!("unknown experiment kind `{other}`"))),
        }
    }
}

/// Config file contents before defaults and validation. Every key is
/// optional; unknown keys are rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub kind: Option<String>,
    pub scenario: Option<String>,
    pub devices: Option<usize>,
    pub antennas: Option<usize>,
    pub distances: Option<Vec<f64>>,
    pub azimuths_deg: Option<Vec<f64>>,
    pub kappa_db: Option<f64>,
    pub kappa_grid_db: Option<Vec<f64>>,
    pub antenna_grid: Option<Vec<usize>>,
    pub alpha_grid_deg: Option<Vec<f64>>,
    pub schemes: Option<Vec<String>>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub eta: Option<f64>,
    pub max_iterations: Option<usize>,
    pub trials: Option<usize>,
    pub full_csi_trials: Option<usize>,
    pub redraws: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub sdp_tolerance: Option<f64>,
    pub sdp_max_antennas: Option<usize>,
    pub statistical_sdp: Option<bool>,
    pub rank_tol: Option<f64>,
    pub fixed_loss_db: Option<f64>,
    pub path_loss_exponent: Option<f64>,
    pub parallel: Option<bool>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::ConfigSyntax(e.to_string()))
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub setup: Setup,
    pub kappa_grid_db: Vec<f64>,
    pub antenna_grid: Vec<usize>,
    pub alpha_grid_deg: Vec<f64>,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

pub const DEFAULT_KAPPA_GRID_DB: [f64; 6] = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0];
pub const DEFAULT_ANTENNA_GRID: [usize; 5] = [8, 16, 32, 64, 128];

fn in_open_unit(key: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(Error::config(key, format!("must lie in (0, 1), got {v}")))
    }
}

fn positive(key: &str, v: usize) -> Result<usize> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(Error::config(key, "must be at least 1"))
    }
}

fn increasing<T: PartialOrd + Copy>(key: &str, grid: Vec<T>) -> Result<Vec<T>> {
    if grid.is_empty() {
        return Err(Error::config(key, "grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config(key, "grid must be strictly increasing"));
    }
    Ok(grid)
}

fn finite(key: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::config(key, "must be finite"))
    }
}

/// Parses and validates a config for `kind`, filling omitted keys with the
/// per-experiment defaults.
pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig> {
    validate(RawConfig::parse(text)?, kind, &Overrides::default())
}

pub fn validate(raw: RawConfig, kind: ExperimentKind, overrides: &Overrides) -> Result<ExperimentConfig> {
    if let Some(k) = &raw.kind {
        let declared: ExperimentKind = k.parse()?;
        if declared != kind {
            return Err(Error::config(
                "kind",
                format!("config is for `{}` but `{}` was requested", declared.as_str(), kind.as_str()),
            ));
        }
    }

    let default_scenario = match kind {
        ExperimentKind::Antennas => "annulus",
        _ => "A",
    };
    let scenario_name = raw.scenario.as_deref().unwrap_or(default_scenario);
    let devices = positive("devices", raw.devices.unwrap_or(FIXED_SCENARIO_DEVICES))?;
    let scenario = match scenario_name {
        "explicit" => {
            let distances = raw
                .distances
                .clone()
                .ok_or_else(|| Error::config("distances", "required for the explicit scenario"))?;
            let azimuths_deg = raw
                .azimuths_deg
                .clone()
                .ok_or_else(|| Error::config("azimuths_deg", "required for the explicit scenario"))?;
            if distances.len() != devices || azimuths_deg.len() != devices {
                return Err(Error::config("distances", format!("explicit scenario needs {devices} entries")));
            }
            if distances.iter().any(|&d| !(d > 0.0 && d.is_finite())) {
                return Err(Error::config("distances", "distances must be positive"));
            }
            ScenarioKind::Explicit {
                distances,
                azimuths_deg,
            }
        }
        name => {
            if raw.distances.is_some() || raw.azimuths_deg.is_some() {
                return Err(Error::config("distances", "only allowed with scenario = \"explicit\""));
            }
            ScenarioKind::from_str(name).map_err(|e| Error::config("scenario", e.to_string()))?
        }
    };
    if matches!(scenario, ScenarioKind::A | ScenarioKind::B | ScenarioKind::C) && devices != FIXED_SCENARIO_DEVICES {
        return Err(Error::config(
            "devices",
            format!(
                "scenario {} is fixed at {FIXED_SCENARIO_DEVICES} devices, got {devices}",
                scenario.name()
            ),
        ));
    }

    let schemes = match &raw.schemes {
        Some(list) => {
            if list.is_empty() {
                return Err(Error::config("schemes", "list is empty"));
            }
            let mut out = Vec::with_capacity(list.len());
            for s in list {
                let id = SchemeId::from_str(s).map_err(|e| Error::config("schemes", e.to_string()))?;
                if out.contains(&id) {
                    return Err(Error::config("schemes", format!("`{s}` listed twice")));
                }
                out.push(id);
            }
            out
        }
        None => match kind {
            ExperimentKind::Kappa => SchemeId::ALL.to_vec(),
            ExperimentKind::Antennas => vec![SchemeId::LpAvgCsi, SchemeId::SdpAvgCsi, SchemeId::SaCsiFree],
            ExperimentKind::Rotation => vec![SchemeId::LpAvgCsi, SchemeId::SdpAvgCsi],
            ExperimentKind::Solve => vec![SchemeId::LpAvgCsi],
        },
    };
    if kind == ExperimentKind::Solve {
        if let Some(s) = schemes
            .iter()
            .find(|s| !matches!(s, SchemeId::LpAvgCsi | SchemeId::SdpAvgCsi))
        {
            return Err(Error::config("schemes", format!("`{s}` has no single design to solve")));
        }
    }

    let lp = AffineScalingParams {
        step: in_open_unit("delta", raw.delta.unwrap_or(0.9))?,
        tolerance: in_open_unit("epsilon", raw.epsilon.unwrap_or(1e-5))?,
        cost_slack: in_open_unit("eta", raw.eta.unwrap_or(1e-4))?,
        max_iterations: positive("max_iterations", raw.max_iterations.unwrap_or(500))?,
    };
    let sdp = SdpOptions {
        tolerance: in_open_unit("sdp_tolerance", raw.sdp_tolerance.unwrap_or(1e-5))?,
        ..SdpOptions::default()
    };
    let rank_tol = raw.rank_tol.unwrap_or(1e-10);
    if !(0.0..1.0).contains(&rank_tol) {
        return Err(Error::config("rank_tol", "must lie in [0, 1)"));
    }
    let trials = positive("trials", overrides.trials.or(raw.trials).unwrap_or(10_000))?;
    let eval = EvalOptions {
        trials,
        full_csi_trials: positive("full_csi_trials", raw.full_csi_trials.unwrap_or(500))?,
        lp,
        sdp,
        statistical_sdp: raw.statistical_sdp.unwrap_or(false),
        rank_tol,
        parallel: raw.parallel.unwrap_or(true),
    };

    let path_loss = PathLoss {
        fixed_loss_db: finite("fixed_loss_db", raw.fixed_loss_db.unwrap_or(DEFAULT_FIXED_LOSS_DB))?,
        exponent: finite("path_loss_exponent", raw.path_loss_exponent.unwrap_or(PATH_LOSS_EXPONENT))?,
    };
    if !(path_loss.exponent > 0.0) {
        return Err(Error::config("path_loss_exponent", "must be positive"));
    }

    let setup = Setup {
        scenario,
        devices,
        antennas: positive("antennas", raw.antennas.unwrap_or(8))?,
        kappa_db: finite("kappa_db", raw.kappa_db.unwrap_or(10.0))?,
        path_loss,
        redraws: positive("redraws", raw.redraws.unwrap_or(100))?,
        schemes,
        sdp_max_antennas: raw.sdp_max_antennas.unwrap_or(64),
        eval,
    };

    let kappa_grid_db = increasing(
        "kappa_grid_db",
        raw.kappa_grid_db.unwrap_or_else(|| DEFAULT_KAPPA_GRID_DB.to_vec()),
    )?;
    for &k in &kappa_grid_db {
        finite("kappa_grid_db", k)?;
    }
    let antenna_grid = increasing(
        "antenna_grid",
        raw.antenna_grid.unwrap_or_else(|| DEFAULT_ANTENNA_GRID.to_vec()),
    )?;
    if antenna_grid[0] == 0 {
        return Err(Error::config("antenna_grid", "antenna counts must be positive"));
    }
    let alpha_grid_deg = increasing(
        "alpha_grid_deg",
        raw.alpha_grid_deg
            .unwrap_or_else(|| (0..360).map(f64::from).collect()),
    )?;
    for &a in &alpha_grid_deg {
        finite("alpha_grid_deg", a)?;
    }

    Ok(ExperimentConfig {
        kind,
        setup,
        kappa_grid_db,
        antenna_grid,
        alpha_grid_deg,
        seed: overrides.seed.or(raw.seed).unwrap_or(0),
        output: overrides.output.clone().or(raw.output),
    })
}
