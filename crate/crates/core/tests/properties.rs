mod common;

use proptest::prelude::*;

use common::{coupling, lp_oracle};
use wetbeam::channel_model::{make_scenario, Deployment, PathLoss, ScenarioKind};
use wetbeam::linalg::{lambda_max, CMatrix, CVector};
use wetbeam::lp_beamformer::{coupling_matrix, deterministic_energy, solve_max_min_lp, AffineScalingParams};
use wetbeam::sdp_benchmark::{channel_gram, covariance_energy, solve_max_min_sdp, SdpOptions};

fn instance(devices: usize, antennas: usize, kappa_db: f64, seed: u64) -> Deployment {
    let kappa = 10f64.powf(kappa_db / 10.0);
    make_scenario(&ScenarioKind::Annulus, devices, antennas, &[kappa], PathLoss::default(), seed).unwrap()
}

fn grams(dep: &Deployment) -> Vec<CMatrix> {
    dep.stats.iter().map(|s| channel_gram(s.mean())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lp_matches_vertex_enumeration(n in 2usize..6, m in 2usize..16, k in 0.0f64..20.0, seed in any::<u64>()) {
        let dep = instance(n, m, k, seed);
        let gains = dep.gains();
        let means: Vec<&CVector> = dep.stats.iter().map(|s| s.mean()).collect();
        let (xi_star, _) = lp_oracle(&coupling(&means), &gains);
        let lp = solve_max_min_lp(&coupling_matrix(&dep.stats).unwrap(), &gains, AffineScalingParams::default()).unwrap();
        prop_assert!(lp.converged);
        prop_assert!((lp.xi_bar - xi_star).abs() <= 1e-3 * xi_star, "{} vs {}", lp.xi_bar, xi_star);
        prop_assert!((lp.powers.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!(lp.powers.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn lp_reports_its_own_worst_energy(n in 2usize..8, m in 2usize..32, k in 0.0f64..20.0, seed in any::<u64>()) {
        let dep = instance(n, m, k, seed);
        let gains = dep.gains();
        let q = coupling_matrix(&dep.stats).unwrap();
        let lp = solve_max_min_lp(&q, &gains, AffineScalingParams::default()).unwrap();
        let worst = deterministic_energy(&lp.powers, &q, &gains).unwrap().into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!((worst - lp.xi_bar).abs() <= 1e-9 * worst);
    }

    #[test]
    fn sdp_dominates_lp_and_is_certified(n in 2usize..6, m in 2usize..12, k in 0.0f64..20.0, seed in any::<u64>()) {
        let dep = instance(n, m, k, seed);
        let gains = dep.gains();
        let hs = grams(&dep);
        let lp = solve_max_min_lp(&coupling_matrix(&dep.stats).unwrap(), &gains, AffineScalingParams::default()).unwrap();
        let (w, report) = solve_max_min_sdp(&hs, &gains, SdpOptions::default()).unwrap();
        // LP designs are feasible SDP points
        prop_assert!(report.xi >= lp.xi_bar * (1.0 - 1e-5), "{} < {}", report.xi, lp.xi_bar);
        prop_assert!(report.xi <= report.upper_bound * (1.0 + 1e-12));
        prop_assert!(report.relative_gap <= 1e-5);
        // the achieved value is the minimum energy of the returned W
        let worst = hs.iter().zip(&gains).map(|(h, &b)| covariance_energy(w.matrix(), h, b)).fold(f64::INFINITY, f64::min);
        prop_assert!((worst - report.xi).abs() <= 1e-9 * worst);
        // no design beats focusing on the weakest single device
        let single = hs.iter().zip(&gains).map(|(h, &b)| b * lambda_max(h)).fold(f64::INFINITY, f64::min);
        prop_assert!(report.xi <= single * (1.0 + 1e-9));
    }

    #[test]
    fn sdp_is_invariant_to_order_and_scale(n in 2usize..5, m in 2usize..10, seed in any::<u64>(), c in 0.1f64..10.0) {
        let dep = instance(n, m, 10.0, seed);
        let gains = dep.gains();
        let hs = grams(&dep);
        let (_, base) = solve_max_min_sdp(&hs, &gains, SdpOptions::default()).unwrap();
        let rev_h: Vec<CMatrix> = hs.iter().rev().cloned().collect();
        let rev_g: Vec<f64> = gains.iter().rev().map(|g| g * c).collect();
        let (_, other) = solve_max_min_sdp(&rev_h, &rev_g, SdpOptions::default()).unwrap();
        prop_assert!((other.xi / c - base.xi).abs() <= 2e-5 * base.xi, "{} vs {}", other.xi / c, base.xi);
    }
}
