//! Primal affine scaling for the max-min power split.
//!
//! The LP `max ξ̄ s.t. B Qᵀ p ⪰ ξ̄·1, 1ᵀp = 1, p ⪰ 0` is put in standard form
//! `min μᵀz s.t. A z = b, z ⪰ 0` with `z = [ξ̄, p, ν]` (ν are the energy
//! slacks), `μ = [−1, 0, …]`, `b = [0_N, 1]` and
//!
//! ```text
//!     A = [ 1_N   −B Qᵀ   I_N ]
//!         [ 0     1ᵀ_N    0ᵀ  ]
//! ```
//!
//! Each iteration solves for the dual estimate `λ = (A Z² Aᵀ)⁻¹ A Z² μ`,
//! forms the reduced costs `r = μ − Aᵀλ`, and moves
//! `z ← z − δ Z² r / ‖Z r‖`. The loop exits once the pre-update iterate has
//! `1ᵀ Z r < ε` and `r ⪰ −η`.
//!
//! Energies are divided by `min_i β_i Q_ii` before solving, so `ε` and `η`
//! act on a problem whose optimum lies in `[1/N, 1]` and the returned split
//! does not depend on the overall gain level.

use nalgebra::{DMatrix, DVector};

use super::bounds::{bound_upper, initial_allocation};
use super::coupling::CouplingMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineScalingParams {
    /// Step fraction δ ∈ (0, 1).
    pub step: f64,
    /// Duality-gap tolerance ε ∈ (0, 1).
    pub tolerance: f64,
    /// Allowed negative reduced cost η.
    pub cost_slack: f64,
    pub max_iterations: usize,
}

impl Default for AffineScalingParams {
    fn default() -> Self {
        Self {
            step: 0.9,
            tolerance: 1e-5,
            cost_slack: 1e-4,
            max_iterations: 500,
        }
    }
}

impl AffineScalingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step < 1.0) {
            return Err(Error::domain(format!("step must lie in (0,1), got {}", self.step)));
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return Err(Error::domain(format!(
                "tolerance must lie in (0,1), got {}",
                self.tolerance
            )));
        }
        if !(self.cost_slack > 0.0 && self.cost_slack < 1.0) {
            return Err(Error::domain(format!(
                "cost slack must lie in (0,1), got {}",
                self.cost_slack
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::domain("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

/// Exit test values of the last evaluated iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitCertificate {
    /// `1ᵀ Z r` on the normalized problem.
    pub gap: f64,
    /// `min_j r_j`.
    pub min_reduced_cost: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation {
    /// Power fraction per beam, on the simplex.
    pub powers: Vec<f64>,
    /// Achieved `min_i β_i (Qᵀ p)_i`.
    pub xi_bar: f64,
    /// Number of updates performed (τ).
    pub iterations: usize,
    pub converged: bool,
    pub certificate: ExitCertificate,
}

impl PowerAllocation {
    /// Turns a capped run into [`Error::NotConverged`].
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { best: Box::new(self) })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub certificate: ExitCertificate,
    /// True when the pre-update iterate passed the exit test.
    pub converged: bool,
}

/// Iterative state of the solver; [`AffineScaling::step`] performs one update.
#[derive(Debug, Clone)]
pub struct AffineScaling {
    params: AffineScalingParams,
    devices: usize,
    /// Normalized `B Qᵀ`: row i gives device i's energy per unit power of each beam.
    energy: DMatrix<f64>,
    a: DMatrix<f64>,
    cost: DVector<f64>,
    z: DVector<f64>,
    scale: f64,
    iterations: usize,
}

impl AffineScaling {
    pub fn new(q: &CouplingMatrix, gains: &[f64], params: AffineScalingParams) -> Result<Self> {
        params.validate()?;
        let n = q.size();
        if gains.len() != n {
            return Err(Error::dimension(format!(
                "coupling matrix is {n}x{n} but {} gains were given",
                gains.len()
            )));
        }
        let diag = q.diagonal();
        let scale = bound_upper(&diag, gains)?;
        let energy = DMatrix::from_fn(n, n, |i, k| gains[i] * q.get(k, i) / scale);

        let dim = 2 * n + 1;
        let mut a = DMatrix::zeros(n + 1, dim);
        for i in 0..n {
            a[(i, 0)] = 1.0;
            for k in 0..n {
                a[(i, 1 + k)] = -energy[(i, k)];
            }
            a[(i, 1 + n + i)] = 1.0;
            a[(n, 1 + i)] = 1.0;
        }
        let mut cost = DVector::zeros(dim);
        cost[0] = -1.0;

        let p0 = DVector::from_vec(initial_allocation(&diag, gains)?);
        let e0 = &energy * &p0;
        let max_slack = e0.max() - e0.min();
        // the minimizing device has zero slack; back ξ̄ off so z starts interior
        let shift = 1e-9 * max_slack.max(1.0);
        let xi0 = e0.min() - shift;

        let mut z = DVector::zeros(dim);
        z[0] = xi0;
        z.rows_mut(1, n).copy_from(&p0);
        for i in 0..n {
            z[1 + n + i] = e0[i] - xi0;
        }

        Ok(Self {
            params,
            devices: n,
            energy,
            a,
            cost,
            z,
            scale,
            iterations: 0,
        })
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Current `[ξ̄, p, ν]` in original (unnormalized) energy units.
    pub fn variables(&self) -> (f64, Vec<f64>, Vec<f64>) {
        let n = self.devices;
        (
            self.z[0] * self.scale,
            self.z.rows(1, n).iter().copied().collect(),
            self.z.rows(1 + n, n).iter().map(|v| v * self.scale).collect(),
        )
    }

    /// Current powers.
    pub fn powers(&self) -> Vec<f64> {
        self.z.rows(1, self.devices).iter().copied().collect()
    }

    /// `min_i Ē_i` achieved by the current powers.
    pub fn achieved(&self) -> f64 {
        self.achieved_by(&self.z.rows(1, self.devices).into_owned())
    }

    fn achieved_by(&self, p: &DVector<f64>) -> f64 {
        (&self.energy * p).min() * self.scale
    }

    fn reduced_costs(&self) -> Result<DVector<f64>> {
        let z2 = self.z.map(|v| v * v);
        let az2 = DMatrix::from_fn(self.a.nrows(), self.a.ncols(), |r, c| self.a[(r, c)] * z2[c]);
        let normal = &az2 * self.a.transpose();
        let rhs = &az2 * &self.cost;
        let lambda = match normal.clone().cholesky() {
            Some(ch) => ch.solve(&rhs),
            None => {
                let jitter = 1e-12 * normal.trace();
                let bumped = normal + DMatrix::identity(self.a.nrows(), self.a.nrows()) * jitter;
                bumped
                    .cholesky()
                    .ok_or(Error::SingularSystem {
                        iteration: self.iterations,
                    })?
                    .solve(&rhs)
            }
        };
        Ok(&self.cost - self.a.transpose() * lambda)
    }

    /// One pass of the repeat loop: evaluate the exit test on the current
    /// iterate, then take the scaled step regardless.
    pub fn step(&mut self) -> Result<StepReport> {
        let r = self.reduced_costs()?;
        let zr = self.z.component_mul(&r);
        let certificate = ExitCertificate {
            gap: zr.sum(),
            min_reduced_cost: r.min(),
        };
        let converged =
            certificate.gap < self.params.tolerance && certificate.min_reduced_cost >= -self.params.cost_slack;

        let norm = zr.norm();
        if norm > 0.0 {
            let delta = self.params.step;
            for j in 0..self.z.len() {
                self.z[j] -= delta * self.z[j] * zr[j] / norm;
            }
        }
        self.iterations += 1;
        Ok(StepReport {
            certificate,
            converged: converged || norm == 0.0,
        })
    }

    /// Runs until the exit test passes or the iteration cap is hit. On the cap
    /// the best iterate seen is returned with `converged == false`.
    pub fn run(mut self) -> Result<PowerAllocation> {
        let mut best: Option<(f64, Vec<f64>, usize, ExitCertificate)> = None;
        loop {
            let report = self.step()?;
            let p = self.finish_powers();
            let value = self.achieved_by(&DVector::from_vec(p.clone()));
            if report.converged {
                return Ok(PowerAllocation {
                    powers: p,
                    xi_bar: value,
                    iterations: self.iterations,
                    converged: true,
                    certificate: report.certificate,
                });
            }
            if best.as_ref().is_none_or(|b| value > b.0) {
                best = Some((value, p, self.iterations, report.certificate));
            }
            if self.iterations >= self.params.max_iterations {
                let (xi_bar, powers, _, certificate) = best.expect("at least one iterate");
                return Ok(PowerAllocation {
                    powers,
                    xi_bar,
                    iterations: self.iterations,
                    converged: false,
                    certificate,
                });
            }
        }
    }

    /// Current powers with round-off negatives clamped and the simplex restored.
    fn finish_powers(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .z
            .rows(1, self.devices)
            .iter()
            .map(|&v| if v < 0.0 && v > -1e-10 { 0.0 } else { v })
            .collect();
        let total: f64 = p.iter().sum();
        p.iter_mut().for_each(|v| *v /= total);
        p
    }
}

/// Max-min power split over MRT beams (the full affine-scaling run).
pub fn solve_max_min_lp(
    q: &CouplingMatrix,
    gains: &[f64],
    params: AffineScalingParams,
) -> Result<PowerAllocation> {
    AffineScaling::new(q, gains, params)?.run()
}
