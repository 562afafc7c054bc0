use num_complex::Complex64;

use super::coupling::CouplingMatrix;
use crate::channel_model::ChannelStats;
use crate::error::{Error, Result};
use crate::linalg::{outer, CMatrix, CVector};

/// Transmit beams `{w_k}` sharing a unit power budget.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamSet {
    beams: Vec<CVector>,
}

impl BeamSet {
    pub const POWER_SLACK: f64 = 1e-8;

    pub fn new(beams: Vec<CVector>) -> Result<Self> {
        if let Some(first) = beams.first() {
            let m = first.len();
            if beams.iter().any(|w| w.len() != m) {
                return Err(Error::dimension("all beams must have the same length"));
            }
        }
        let set = Self { beams };
        let total = set.total_power();
        if total > 1.0 + Self::POWER_SLACK {
            return Err(Error::domain(format!("beams use total power {total} > 1")));
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        Self { beams: Vec::new() }
    }

    pub fn beams(&self) -> &[CVector] {
        &self.beams
    }

    pub fn len(&self) -> usize {
        self.beams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.beams.is_empty()
    }

    pub fn powers(&self) -> Vec<f64> {
        self.beams.iter().map(|w| w.norm_squared()).collect()
    }

    pub fn total_power(&self) -> f64 {
        self.beams.iter().map(|w| w.norm_squared()).sum()
    }

    /// `W = Σ_k w_k w_k^H`; `None` for an empty set.
    pub fn covariance(&self) -> Option<CMatrix> {
        let m = self.beams.first()?.len();
        Some(
            self.beams
                .iter()
                .fold(CMatrix::zeros(m, m), |acc, w| acc + outer(w, w)),
        )
    }
}

/// MRT beams `w_k = conj(h̄_k)/‖h̄_k‖·√p_k`, so that `w_kᵀ h̄_k = ‖h̄_k‖√p_k`.
pub fn build_precoders(powers: &[f64], stats: &[ChannelStats]) -> Result<BeamSet> {
    if powers.len() != stats.len() {
        return Err(Error::dimension(format!(
            "{} powers for {} devices",
            powers.len(),
            stats.len()
        )));
    }
    if let Some(k) = powers.iter().position(|&p| !(p >= 0.0)) {
        return Err(Error::domain(format!("power {k} is negative")));
    }
    let beams = powers
        .iter()
        .zip(stats)
        .enumerate()
        .map(|(k, (&p, s))| {
            let norm = s.mean().norm();
            if norm == 0.0 {
                return Err(Error::ZeroMeanChannel { device: k });
            }
            let amp = Complex64::new(p.sqrt() / norm, 0.0);
            Ok(s.mean().map(|h| h.conj() * amp))
        })
        .collect::<Result<Vec<_>>>()?;
    BeamSet::new(beams)
}

/// Deterministic energies `Ē_i = β_i Σ_k Q_{k,i} p_k`.
pub fn deterministic_energy(powers: &[f64], q: &CouplingMatrix, gains: &[f64]) -> Result<Vec<f64>> {
    let n = q.size();
    if powers.len() != n || gains.len() != n {
        return Err(Error::dimension(format!(
            "coupling matrix is {n}x{n}, got {} powers and {} gains",
            powers.len(),
            gains.len()
        )));
    }
    Ok((0..n)
        .map(|i| gains[i] * (0..n).map(|k| q.get(k, i) * powers[k]).sum::<f64>())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_model::{make_scenario, PathLoss, ScenarioKind};
    use crate::linalg::dot_t;
    use crate::lp_beamformer::{bound_lower, bound_upper, coupling_matrix, initial_allocation};
    use proptest::prelude::*;

    fn scenario_a() -> Vec<ChannelStats> {
        make_scenario(&ScenarioKind::A, 8, 8, &[10.0], PathLoss::default(), 0)
            .unwrap()
            .stats
    }

    #[test]
    fn beams_point_along_conjugate_means() {
        let stats = scenario_a();
        let p = vec![1.0 / 8.0; 8];
        let set = build_precoders(&p, &stats).unwrap();
        assert!((set.total_power() - 1.0).abs() < 1e-12);
        for (w, s) in set.beams().iter().zip(&stats) {
            let g = dot_t(w, s.mean());
            assert!(g.im.abs() < 1e-12);
            assert!((g.re - s.mean().norm() * (1.0f64 / 8.0).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_means_give_equal_beams() {
        let s = scenario_a()[0].clone();
        let stats = vec![s.clone(), s.clone(), s];
        let set = build_precoders(&[1.0 / 3.0; 3], &stats).unwrap();
        assert!((&set.beams()[0] - &set.beams()[2]).norm() < 1e-15);
        assert!((set.beams()[0].norm_squared() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn energy_of_basis_allocation() {
        let stats = scenario_a();
        let q = coupling_matrix(&stats).unwrap();
        let gains: Vec<f64> = stats.iter().map(|s| s.path_gain()).collect();
        let mut p = vec![0.0; 8];
        p[3] = 1.0;
        let e = deterministic_energy(&p, &q, &gains).unwrap();
        for i in 0..8 {
            assert!((e[i] - gains[i] * q.get(3, i)).abs() < 1e-18);
        }
    }

    #[test]
    fn diagonal_coupling_equalizes_at_closed_form() {
        let q = CouplingMatrix::from_matrix(nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(&[
            2.0, 5.0, 1.0,
        ])))
        .unwrap();
        let b = [0.3, 0.01, 0.7];
        let p0 = initial_allocation(&q.diagonal(), &b).unwrap();
        let lb = bound_lower(&q.diagonal(), &b).unwrap();
        for e in deterministic_energy(&p0, &q, &b).unwrap() {
            assert!((e - lb).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_oversized_power() {
        let stats = scenario_a();
        assert!(build_precoders(&[0.5; 8], &stats).is_err());
        assert!(build_precoders(&[0.5; 3], &stats).is_err());
    }

    proptest! {
        #[test]
        fn precoder_energy_matches_coupling(raw in prop::collection::vec(0.0f64..1.0, 8), rot in -3.0f64..3.0) {
            let total: f64 = raw.iter().sum::<f64>() + 1e-9;
            let p: Vec<f64> = raw.iter().map(|v| (v + 1e-9 / 8.0) / total).collect();
            let dep = make_scenario(&ScenarioKind::C, 8, 8, &[10.0], PathLoss::default(), 0).unwrap().rotated(rot).unwrap();
            let q = coupling_matrix(&dep.stats).unwrap();
            let gains = dep.gains();
            let set = build_precoders(&p, &dep.stats).unwrap();
            prop_assert!((set.total_power() - 1.0).abs() < 1e-10);
            let e = deterministic_energy(&p, &q, &gains).unwrap();
            let ub = bound_upper(&q.diagonal(), &gains).unwrap();
            prop_assert!(e.iter().copied().fold(f64::INFINITY, f64::min) <= ub * (1.0 + 1e-12));
            for (i, s) in dep.stats.iter().enumerate() {
                let via_beams: f64 = gains[i] * set.beams().iter().map(|w| dot_t(s.mean(), w).norm_sqr()).sum::<f64>();
                prop_assert!((via_beams - e[i]).abs() <= 1e-10 * e[i].max(1e-12));
            }
        }
    }
}
