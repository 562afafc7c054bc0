use nalgebra::DMatrix;

use crate::channel_model::ChannelStats;
use crate::error::{Error, Result};
use crate::linalg::CVector;

/// Cross-beam power matrix: `Q[(k, i)] = |h̄_k^H h̄_i|² / ‖h̄_k‖²` is the power
/// that the beam meant for device `k` delivers at device `i` per unit power.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    q: DMatrix<f64>,
}

impl CouplingMatrix {
    pub fn from_means(means: &[&CVector]) -> Result<Self> {
        let n = means.len();
        if n == 0 {
            return Err(Error::domain("coupling matrix needs at least one device"));
        }
        let m = means[0].len();
        if let Some(bad) = means.iter().position(|h| h.len() != m) {
            return Err(Error::dimension(format!(
                "device {bad} has {} antennas, device 0 has {m}",
                means[bad].len()
            )));
        }
        let power: Vec<f64> = means.iter().map(|h| h.norm_squared()).collect();
        if let Some(device) = power.iter().position(|&p| p == 0.0) {
            return Err(Error::ZeroMeanChannel { device });
        }
        let q = DMatrix::from_fn(n, n, |k, i| {
            if k == i {
                power[k]
            } else {
                means[k].dotc(means[i]).norm_sqr() / power[k]
            }
        });
        Ok(Self { q })
    }

    /// Wraps a precomputed matrix after checking non-negativity, a positive
    /// diagonal and the Cauchy–Schwarz cap `Q[(k,i)] ≤ Q[(i,i)]`.
    pub fn from_matrix(q: DMatrix<f64>) -> Result<Self> {
        if !q.is_square() || q.nrows() == 0 {
            return Err(Error::dimension("coupling matrix must be square and non-empty"));
        }
        let n = q.nrows();
        for i in 0..n {
            if !(q[(i, i)] > 0.0) {
                return Err(Error::domain(format!("diagonal entry {i} must be positive")));
            }
            for k in 0..n {
                let v = q[(k, i)];
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::domain(format!("entry ({k},{i}) must be finite and >= 0")));
                }
                if v > q[(i, i)] * (1.0 + 1e-9) {
                    return Err(Error::domain(format!(
                        "entry ({k},{i}) exceeds the diagonal Q[({i},{i})]"
                    )));
                }
            }
        }
        Ok(Self { q })
    }

    pub fn size(&self) -> usize {
        self.q.nrows()
    }

    pub fn get(&self, k: usize, i: usize) -> f64 {
        self.q[(k, i)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    /// `Q[(i,i)] = ‖h̄_i‖²`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.size()).map(|i| self.q[(i, i)]).collect()
    }

    /// Average over devices of `Σ_{k≠i} Q[(k,i)] / Q[(i,i)]`; zero for a
    /// diagonal matrix.
    pub fn off_diagonal_mass(&self) -> f64 {
        let n = self.size();
        let total: f64 = (0..n)
            .map(|i| (0..n).filter(|&k| k != i).map(|k| self.q[(k, i)]).sum::<f64>() / self.q[(i, i)])
            .sum();
        total / n as f64
    }
}

/// Coupling matrix of a device set.
pub fn coupling_matrix(stats: &[ChannelStats]) -> Result<CouplingMatrix> {
    let means: Vec<&CVector> = stats.iter().map(ChannelStats::mean).collect();
    CouplingMatrix::from_means(&means)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn cv(v: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(v.len(), v.iter().map(|&(a, b)| Complex64::new(a, b)))
    }

    #[test]
    fn identical_means_fill_with_norm() {
        let h = cv(&[(1.0, 0.5), (-0.3, 0.2), (0.0, 1.0)]);
        let q = CouplingMatrix::from_means(&[&h, &h, &h]).unwrap();
        let p = h.norm_squared();
        assert!(q.matrix().iter().all(|&v| (v - p).abs() < 1e-12));
    }

    #[test]
    fn orthogonal_means_give_diagonal() {
        let a = cv(&[(2.0, 0.0), (0.0, 0.0)]);
        let b = cv(&[(0.0, 0.0), (0.0, 3.0)]);
        let q = CouplingMatrix::from_means(&[&a, &b]).unwrap();
        assert_eq!(q.get(0, 1), 0.0);
        assert_eq!(q.get(1, 0), 0.0);
        assert!((q.get(0, 0) - 4.0).abs() < 1e-15);
        assert!((q.get(1, 1) - 9.0).abs() < 1e-15);
        assert_eq!(q.off_diagonal_mass(), 0.0);
    }

    #[test]
    fn two_by_two_hand_values() {
        // h1 = [1, 0], h2 = [1, 1]: h1^H h2 = 1, |.|² = 1
        // Q12 = 1/‖h1‖² = 1, Q21 = 1/‖h2‖² = 1/2
        let a = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let b = cv(&[(1.0, 0.0), (1.0, 0.0)]);
        let q = CouplingMatrix::from_means(&[&a, &b]).unwrap();
        assert!((q.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((q.get(0, 1) - 1.0).abs() < 1e-15);
        assert!((q.get(1, 0) - 0.5).abs() < 1e-15);
        assert!((q.get(1, 1) - 2.0).abs() < 1e-15);
        // complex phases: h1 = [1, i], h2 = [i, 1] → h1^H h2 = i·1 + (−i)·1 = 0
        let c = cv(&[(1.0, 0.0), (0.0, 1.0)]);
        let d = cv(&[(0.0, 1.0), (1.0, 0.0)]);
        let q = CouplingMatrix::from_means(&[&c, &d]).unwrap();
        assert!(q.get(0, 1).abs() < 1e-15);
    }

    #[test]
    fn zero_mean_is_named() {
        let a = cv(&[(1.0, 0.0)]);
        let z = cv(&[(0.0, 0.0)]);
        match CouplingMatrix::from_means(&[&a, &z]) {
            Err(Error::ZeroMeanChannel { device }) => assert_eq!(device, 1),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn from_matrix_validates() {
        assert!(CouplingMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0])).is_ok());
        assert!(CouplingMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, -0.1, 0.0, 1.0])).is_err());
        assert!(CouplingMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0])).is_err());
        assert!(CouplingMatrix::from_matrix(DMatrix::from_row_slice(2, 2, &[0.0, 0.0, 0.0, 1.0])).is_err());
    }
}
