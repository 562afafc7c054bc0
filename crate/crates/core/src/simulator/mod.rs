//! Monte-Carlo evaluation of the beamforming schemes and the experiment sweeps.
//!
//! Every trial draws one fading realization per device from its own seeded
//! substream, and all schemes are scored on the same draw (common random
//! numbers). The worst-case energy `min_i E_i` of each trial is averaged and
//! reported with a normal-approximation 95 % half-width.

mod evaluate;
mod sweep;

use std::fmt;
use std::str::FromStr;

use crate::channel_model::FadingDraw;
use crate::error::{Error, Result};
use crate::linalg::dot_t;
use crate::lp_beamformer::BeamSet;

pub use evaluate::{evaluate_scheme, evaluate_schemes, EvalOptions, SchemeStats};
pub use sweep::{sweep_antennas, sweep_kappa, sweep_rotation, RowLabel, Setup, SweepResult, SweepRow};

/// z-value of a two-sided 95 % normal interval.
pub const Z_95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    /// MRT beams toward the mean channels with the affine-scaling power split.
    LpAvgCsi,
    /// Optimum covariance for the mean channels.
    SdpAvgCsi,
    /// Optimum covariance per realization (genie CSI benchmark).
    SdpFullCsi,
    /// Switching antennas: one antenna at a time, no CSI.
    SaCsiFree,
}

impl SchemeId {
    pub const ALL: [SchemeId; 4] = [
        SchemeId::LpAvgCsi,
        SchemeId::SdpAvgCsi,
        SchemeId::SdpFullCsi,
        SchemeId::SaCsiFree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::LpAvgCsi => "lp_avg_csi",
            SchemeId::SdpAvgCsi => "sdp_avg_csi",
            SchemeId::SdpFullCsi => "sdp_full_csi",
            SchemeId::SaCsiFree => "sa_csi_free",
        }
    }

    pub fn uses_sdp(self) -> bool {
        matches!(self, SchemeId::SdpAvgCsi | SchemeId::SdpFullCsi)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown scheme `{s}`")))
    }
}

/// `β Σ_k |hᵀ w_k|²`.
///
/// # Panics
/// If a beam and the channel differ in length.
pub fn realized_energy(beams: &BeamSet, h: &FadingDraw, gain: f64) -> f64 {
    gain * beams
        .beams()
        .iter()
        .map(|w| dot_t(&h.channel, w).norm_sqr())
        .sum::<f64>()
}

/// Block-averaged energy when each of the `M` antennas transmits alone at full
/// power for `1/M` of the block: `(β/M) Σ_m |h_m|²`.
pub fn sa_energy(h: &FadingDraw, gain: f64) -> f64 {
    let m = h.channel.len();
    if m == 0 {
        return 0.0;
    }
    gain * h.channel.norm_squared() / m as f64
}

/// Sample mean and 95 % half-width (zero for a single sample).
pub fn mean_and_half_width(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, Z_95 * (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_model::{draw_rician, make_scenario, PathLoss, ScenarioKind};
    use crate::linalg::CVector;
    use crate::rng;
    use crate::sdp_benchmark::{channel_gram, covariance_energy};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scheme_names_round_trip() {
        for id in SchemeId::ALL {
            assert_eq!(id.to_string().parse::<SchemeId>().unwrap(), id);
        }
        assert!("mrt".parse::<SchemeId>().is_err());
    }

    #[test]
    fn energy_trivial_cases() {
        let h = FadingDraw {
            channel: CVector::from_vec(vec![c(1.0, -1.0), c(0.5, 0.0), c(0.0, 2.0)]),
        };
        assert_eq!(realized_energy(&BeamSet::empty(), &h, 0.3), 0.0);
        let w = h.channel.map(|z| z.conj()) / c(h.channel.norm(), 0.0);
        let set = BeamSet::new(vec![w]).unwrap();
        assert!((realized_energy(&set, &h, 0.3) - 0.3 * h.channel.norm_squared()).abs() < 1e-14);

        let ones = FadingDraw {
            channel: CVector::from_element(4, c(1.0, 0.0)),
        };
        assert!((sa_energy(&ones, 1.0) - 1.0).abs() < 1e-15);
        let single = FadingDraw {
            channel: CVector::from_vec(vec![c(0.6, 0.8)]),
        };
        assert!((sa_energy(&single, 0.2) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn realized_matches_trace_form() {
        let h = FadingDraw {
            channel: CVector::from_vec(vec![c(0.3, 0.1), c(-1.0, 0.4), c(0.2, 0.2)]),
        };
        let b1 = CVector::from_vec(vec![c(0.5, 0.0), c(0.0, 0.5), c(0.1, -0.2)]);
        let b2 = CVector::from_vec(vec![c(0.0, 0.3), c(0.2, 0.0), c(-0.4, 0.1)]);
        let set = BeamSet::new(vec![b1, b2]).unwrap();
        let w = set.covariance().unwrap();
        let e = covariance_energy(&w, &channel_gram(&h.channel), 0.7);
        assert!((realized_energy(&set, &h, 0.7) - e).abs() < 1e-12);
    }

    #[test]
    fn sa_mean_is_path_gain() {
        let dep = make_scenario(&ScenarioKind::A, 8, 8, &[10.0], PathLoss::default(), 0).unwrap();
        let s = &dep.stats[2];
        let mut r = rng::substream(11, rng::FADING, 0);
        let n = 100_000;
        let mean = (0..n).map(|_| sa_energy(&draw_rician(s, &mut r), s.path_gain())).sum::<f64>() / n as f64;
        assert!((mean / s.path_gain() - 1.0).abs() < 0.02);
    }

    #[test]
    fn half_width() {
        let (m, hw) = mean_and_half_width(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((hw - 1.96 * (2f64 / 2.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_and_half_width(&[5.0]), (5.0, 0.0));
    }
}
