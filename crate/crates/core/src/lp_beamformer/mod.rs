//! Low-complexity average-CSI beamforming.
//!
//! Each device `k` gets an MRT-shaped beam `w_k = conj(h̄_k)/‖h̄_k‖·√p_k`
//! pointed at its mean channel. With that shape fixed, the deterministic
//! energy at device `i` is linear in the power split,
//! `Ē_i = β_i Σ_k Q_{k,i} p_k`, and the max-min problem becomes a small LP
//! over the simplex, solved here by affine scaling.

mod affine_scaling;
mod bounds;
mod coupling;
mod precoder;

pub use affine_scaling::{
    solve_max_min_lp, AffineScaling, AffineScalingParams, ExitCertificate, PowerAllocation, StepReport,
};
pub use bounds::{bound_lower, bound_upper, initial_allocation, rician_bounds, scattered_energy};
pub use coupling::{coupling_matrix, CouplingMatrix};
pub use precoder::{build_precoders, deterministic_energy, BeamSet};
