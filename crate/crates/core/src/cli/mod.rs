//! Experiment configuration, dispatch, and CSV output for the `wetbeam` binary.
//!
//! Configs are flat TOML files; every key is optional and unknown keys are
//! errors. See the repository README for the key list.

mod config;

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::channel_model::{make_scenario, Deployment};
use crate::db_to_linear;
use crate::error::Result;
use crate::linear_to_db;
use crate::lp_beamformer::{coupling_matrix, deterministic_energy, solve_max_min_lp, PowerAllocation};
use crate::sdp_benchmark::{channel_gram, extract_beams, solve_max_min_sdp, statistical_gram, SdpReport};
use crate::simulator::{sweep_antennas, sweep_kappa, sweep_rotation, RowLabel, SchemeId, SweepResult};

pub use config::{
    parse_config, validate, ExperimentConfig, ExperimentKind, Overrides, RawConfig, DEFAULT_ANTENNA_GRID,
    DEFAULT_KAPPA_GRID_DB,
};

pub const CSV_HEADER: &str = "sweep,scheme,mean_energy,mean_energy_db,ci_halfwidth,mean_iters,trials";

/// Writes one row per (sweep value, scheme). Numbers use Rust's shortest
/// round-trip formatting, so output is locale-free and reproducible.
pub fn write_csv<W: Write>(mut out: W, result: &SweepResult) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &result.rows {
        let iters = r.mean_iterations.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.value,
            r.label,
            r.mean,
            linear_to_db(r.mean),
            r.half_width,
            iters,
            r.trials
        )?;
    }
    out.flush()
}

/// One line per label: extreme values over the sweep.
pub fn summary_lines(result: &SweepResult) -> Vec<String> {
    let mut labels: Vec<RowLabel> = Vec::new();
    for r in &result.rows {
        if !labels.contains(&r.label) {
            labels.push(r.label);
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let series = result.series(label);
            let (lo, hi) = series.iter().fold((series[0], series[0]), |(lo, hi), r| {
                (if r.mean < lo.mean { r } else { lo }, if r.mean > hi.mean { r } else { hi })
            });
            format!(
                "{label:>13}: min {:.3} dB at {}={}, max {:.3} dB at {}={}, spread {:.3} dB",
                linear_to_db(lo.mean),
                result.variable,
                lo.value,
                linear_to_db(hi.mean),
                result.variable,
                hi.value,
                linear_to_db(hi.mean) - linear_to_db(lo.mean)
            )
        })
        .collect()
}

#[derive(Debug, Clone)]
pub enum SolveDesign {
    Lp(PowerAllocation),
    Sdp { report: SdpReport, rank: usize },
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub deployment: Deployment,
    pub designs: Vec<(SchemeId, SolveDesign)>,
    /// Deterministic per-device energies of each design on the mean channels.
    pub energies: Vec<Vec<f64>>,
}

pub enum Outcome {
    Sweep(SweepResult),
    Solve(SolveOutcome),
}

fn solve_once(cfg: &ExperimentConfig) -> Result<SolveOutcome> {
    let s = &cfg.setup;
    let dep = make_scenario(
        &s.scenario,
        s.devices,
        s.antennas,
        &[db_to_linear(s.kappa_db)],
        s.path_loss,
        cfg.seed,
    )?;
    let gains = dep.gains();
    let mut designs = Vec::new();
    let mut energies = Vec::new();
    for &scheme in &s.schemes {
        match scheme {
            SchemeId::LpAvgCsi => {
                let q = coupling_matrix(&dep.stats)?;
                let alloc = solve_max_min_lp(&q, &gains, s.eval.lp)?.require_converged()?;
                energies.push(deterministic_energy(&alloc.powers, &q, &gains)?);
                designs.push((scheme, SolveDesign::Lp(alloc)));
            }
            SchemeId::SdpAvgCsi => {
                let hs: Vec<_> = dep
                    .stats
                    .iter()
                    .map(|st| {
                        if s.eval.statistical_sdp {
                            statistical_gram(st)
                        } else {
                            channel_gram(st.mean())
                        }
                    })
                    .collect();
                let (w, report) = solve_max_min_sdp(&hs, &gains, s.eval.sdp)?;
                let rank = extract_beams(&w, s.eval.rank_tol).len();
                energies.push(
                    dep.stats
                        .iter()
                        .zip(&gains)
                        .map(|(st, &b)| crate::sdp_benchmark::covariance_energy(w.matrix(), &channel_gram(st.mean()), b))
                        .collect(),
                );
                designs.push((scheme, SolveDesign::Sdp { report, rank }));
            }
            other => unreachable!("config validation rejects `{other}` for solve"),
        }
    }
    Ok(SolveOutcome {
        deployment: dep,
        designs,
        energies,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig, bounds: bool) -> Result<Outcome> {
    Ok(match cfg.kind {
        ExperimentKind::Kappa => Outcome::Sweep(sweep_kappa(&cfg.setup, &cfg.kappa_grid_db, cfg.seed, bounds)?),
        ExperimentKind::Antennas => Outcome::Sweep(sweep_antennas(&cfg.setup, &cfg.antenna_grid, cfg.seed)?),
        ExperimentKind::Rotation => Outcome::Sweep(sweep_rotation(&cfg.setup, &cfg.alpha_grid_deg, cfg.seed)?),
        ExperimentKind::Solve => Outcome::Solve(solve_once(cfg)?),
    })
}

/// Human-readable report of a single solve.
pub fn format_solve(out: &SolveOutcome) -> String {
    let mut s = String::new();
    let dep = &out.deployment;
    let _ = writeln!(s, "devices {}, antennas {}", dep.devices(), dep.antennas());
    for ((scheme, design), energies) in out.designs.iter().zip(&out.energies) {
        match design {
            SolveDesign::Lp(a) => {
                let _ = writeln!(s, "[{scheme}]");
                let p: Vec<String> = a.powers.iter().map(|v| format!("{v:.6}")).collect();
                let _ = writeln!(s, "p      = [{}]", p.join(", "));
                let _ = writeln!(s, "sum(p) = {:.12}", a.powers.iter().sum::<f64>());
                let _ = writeln!(s, "xi_bar = {:e} ({:.4} dB)", a.xi_bar, linear_to_db(a.xi_bar));
                let _ = writeln!(s, "tau    = {}", a.iterations);
            }
            SolveDesign::Sdp { report, rank } => {
                let _ = writeln!(s, "[{scheme}]");
                let _ = writeln!(s, "xi     = {:e} ({:.4} dB)", report.xi, linear_to_db(report.xi));
                let _ = writeln!(s, "upper  = {:e} (relative gap {:.2e})", report.upper_bound, report.relative_gap);
                let _ = writeln!(s, "rank   = {rank}");
                let _ = writeln!(s, "newton = {}", report.iterations);
            }
        }
        let e: Vec<String> = energies.iter().map(|v| format!("{v:.4e}")).collect();
        let _ = writeln!(s, "energy = [{}]", e.join(", "));
    }
    s
}

/// `device,scheme,power,energy` rows for a solve (power empty for SDP designs).
pub fn write_solve_csv<W: Write>(mut out: W, solved: &SolveOutcome) -> io::Result<()> {
    writeln!(out, "device,scheme,power,energy")?;
    for ((scheme, design), energies) in solved.designs.iter().zip(&solved.energies) {
        for (i, e) in energies.iter().enumerate() {
            let p = match design {
                SolveDesign::Lp(a) => a.powers[i].to_string(),
                SolveDesign::Sdp { .. } => String::new(),
            };
            writeln!(out, "{i},{scheme},{p},{e}")?;
        }
    }
    out.flush()
}
