//! Browser bindings for the `wetbeam` demo page.
//!
//! Three operations, each returning a JSON string:
//!
//! - [`solve_scenario`]: LP and SDP designs for one deployment.
//! - [`rotation_curve`]: design-point worst-case energy versus array rotation.
//! - [`beam_pattern`]: radiated power versus angle for both designs.
//!
//! The `*_json` functions are plain Rust so they can be tested natively; the
//! `#[wasm_bindgen]` wrappers only convert errors.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use wetbeam::channel_model::{make_scenario, ula_phase, Deployment, PathLoss, ScenarioKind};
use wetbeam::linalg::{dot_t, CVector};
use wetbeam::lp_beamformer::{
    bound_lower, bound_upper, build_precoders, coupling_matrix, deterministic_energy, solve_max_min_lp,
    AffineScalingParams, BeamSet,
};
use wetbeam::sdp_benchmark::{channel_gram, covariance_energy, extract_beams, solve_max_min_sdp, SdpOptions};
use wetbeam::{db_to_linear, linear_to_db};

const MAX_ANTENNAS: u32 = 64;

#[derive(Serialize)]
struct Device {
    x: f64,
    y: f64,
    distance: f64,
    azimuth_deg: f64,
    gain: f64,
}

#[derive(Serialize)]
struct Solution {
    devices: Vec<Device>,
    powers: Vec<f64>,
    lp_energy: Vec<f64>,
    sdp_energy: Vec<f64>,
    xi_bar: f64,
    xi_bar_db: f64,
    iterations: usize,
    sdp_xi: f64,
    sdp_xi_db: f64,
    sdp_rank: usize,
    bound_lower: f64,
    bound_upper: f64,
}

#[derive(Serialize)]
struct Curve {
    alpha_deg: Vec<f64>,
    lp_db: Vec<f64>,
    sdp_db: Vec<f64>,
    spread_db: f64,
}

#[derive(Serialize)]
struct Pattern {
    angle_deg: Vec<f64>,
    lp: Vec<f64>,
    sdp: Vec<f64>,
    device_azimuth_deg: Vec<f64>,
}

fn deployment(scenario: &str, antennas: u32, kappa_db: f64, rotation_deg: f64) -> Result<Deployment, String> {
    if antennas == 0 || antennas > MAX_ANTENNAS {
        return Err(format!("antennas must lie in 1..={MAX_ANTENNAS}"));
    }
    if !kappa_db.is_finite() || !rotation_deg.is_finite() {
        return Err("kappa and rotation must be finite".into());
    }
    let kind: ScenarioKind = scenario.parse().map_err(|e: wetbeam::Error| e.to_string())?;
    let dep = make_scenario(&kind, 8, antennas as usize, &[db_to_linear(kappa_db)], PathLoss::default(), 1)
        .map_err(|e| e.to_string())?;
    dep.rotated(rotation_deg.to_radians()).map_err(|e| e.to_string())
}

struct Designs {
    lp_beams: BeamSet,
    sdp_beams: BeamSet,
    solution: Solution,
}

fn design(dep: &Deployment) -> Result<Designs, String> {
    let err = |e: wetbeam::Error| e.to_string();
    let gains = dep.gains();
    let q = coupling_matrix(&dep.stats).map_err(err)?;
    let lp = solve_max_min_lp(&q, &gains, AffineScalingParams::default()).map_err(err)?;
    let lp_beams = build_precoders(&lp.powers, &dep.stats).map_err(err)?;
    let hs: Vec<_> = dep.stats.iter().map(|s| channel_gram(s.mean())).collect();
    let (w, report) = solve_max_min_sdp(&hs, &gains, SdpOptions::default()).map_err(err)?;
    let sdp_beams = extract_beams(&w, 1e-6);
    let diag = q.diagonal();
    let solution = Solution {
        devices: dep
            .geometry
            .iter()
            .zip(&gains)
            .map(|(g, &gain)| Device {
                x: g.distance * g.azimuth.sin(),
                y: g.distance * g.azimuth.cos(),
                distance: g.distance,
                azimuth_deg: g.azimuth.to_degrees(),
                gain,
            })
            .collect(),
        lp_energy: deterministic_energy(&lp.powers, &q, &gains).map_err(err)?,
        sdp_energy: hs
            .iter()
            .zip(&gains)
            .map(|(h, &b)| covariance_energy(w.matrix(), h, b))
            .collect(),
        xi_bar: lp.xi_bar,
        xi_bar_db: linear_to_db(lp.xi_bar),
        iterations: lp.iterations,
        powers: lp.powers,
        sdp_xi: report.xi,
        sdp_xi_db: linear_to_db(report.xi),
        sdp_rank: sdp_beams.len(),
        bound_lower: bound_lower(&diag, &gains).map_err(err)?,
        bound_upper: bound_upper(&diag, &gains).map_err(err)?,
    };
    Ok(Designs {
        lp_beams,
        sdp_beams,
        solution,
    })
}

pub fn solve_scenario_json(scenario: &str, antennas: u32, kappa_db: f64, rotation_deg: f64) -> Result<String, String> {
    let dep = deployment(scenario, antennas, kappa_db, rotation_deg)?;
    serde_json::to_string(&design(&dep)?.solution).map_err(|e| e.to_string())
}

pub fn rotation_curve_json(scenario: &str, antennas: u32, kappa_db: f64, step_deg: f64) -> Result<String, String> {
    if !(0.5..=90.0).contains(&step_deg) {
        return Err("step must lie in [0.5, 90] degrees".into());
    }
    let base = deployment(scenario, antennas, kappa_db, 0.0)?;
    let mut curve = Curve {
        alpha_deg: Vec::new(),
        lp_db: Vec::new(),
        sdp_db: Vec::new(),
        spread_db: 0.0,
    };
    let count = (360.0 / step_deg).ceil() as usize;
    for k in 0..count {
        let alpha = k as f64 * step_deg;
        let d = design(&base.rotated(alpha.to_radians()).map_err(|e| e.to_string())?)?;
        curve.alpha_deg.push(alpha);
        curve.lp_db.push(d.solution.xi_bar_db);
        curve.sdp_db.push(d.solution.sdp_xi_db);
    }
    let hi = curve.lp_db.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = curve.lp_db.iter().copied().fold(f64::INFINITY, f64::min);
    curve.spread_db = hi - lo;
    serde_json::to_string(&curve).map_err(|e| e.to_string())
}

/// `Σ_k |a(θ)ᵀ w_k|²` with `a(θ)` the unit-power line-of-sight response.
fn radiated(beams: &BeamSet, steering: &CVector) -> f64 {
    beams.beams().iter().map(|w| dot_t(steering, w).norm_sqr()).sum()
}

pub fn beam_pattern_json(
    scenario: &str,
    antennas: u32,
    kappa_db: f64,
    rotation_deg: f64,
    points: u32,
) -> Result<String, String> {
    if !(2..=4096).contains(&points) {
        return Err("points must lie in 2..=4096".into());
    }
    let dep = deployment(scenario, antennas, kappa_db, rotation_deg)?;
    let d = design(&dep)?;
    let mut pattern = Pattern {
        angle_deg: Vec::with_capacity(points as usize),
        lp: Vec::with_capacity(points as usize),
        sdp: Vec::with_capacity(points as usize),
        device_azimuth_deg: d.solution.devices.iter().map(|dv| dv.azimuth_deg).collect(),
    };
    for j in 0..points {
        let theta = -PI / 2.0 + PI * j as f64 / (points - 1) as f64;
        let phase = ula_phase(theta, antennas as usize).map_err(|e| e.to_string())?;
        let a = CVector::from_iterator(phase.len(), phase.iter().map(|&p| Complex64::from_polar(1.0, p)));
        pattern.angle_deg.push(theta.to_degrees());
        pattern.lp.push(radiated(&d.lp_beams, &a));
        pattern.sdp.push(radiated(&d.sdp_beams, &a));
    }
    serde_json::to_string(&pattern).map_err(|e| e.to_string())
}

/// LP and SDP designs for a fixed scenario (`"A"`, `"B"`, `"C"`) with eight
/// devices.
#[wasm_bindgen]
pub fn solve_scenario(scenario: &str, antennas: u32, kappa_db: f64, rotation_deg: f64) -> Result<String, JsValue> {
    solve_scenario_json(scenario, antennas, kappa_db, rotation_deg).map_err(|e| JsValue::from_str(&e))
}

/// Design-point worst-case energy (dB) of both designs over a full turn.
#[wasm_bindgen]
pub fn rotation_curve(scenario: &str, antennas: u32, kappa_db: f64, step_deg: f64) -> Result<String, JsValue> {
    rotation_curve_json(scenario, antennas, kappa_db, step_deg).map_err(|e| JsValue::from_str(&e))
}

/// Radiated power over the front half-plane for both designs.
#[wasm_bindgen]
pub fn beam_pattern(
    scenario: &str,
    antennas: u32,
    kappa_db: f64,
    rotation_deg: f64,
    points: u32,
) -> Result<String, JsValue> {
    beam_pattern_json(scenario, antennas, kappa_db, rotation_deg, points).map_err(|e| JsValue::from_str(&e))
}
