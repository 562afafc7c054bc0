//! Optimum transmit covariance for max-min energy.
//!
//! Solves
//!
//! ```text
//!     maximize ξ  s.t.  β_i Tr(W H_i) ≥ ξ,  Tr(W) = 1,  W ⪰ 0
//! ```
//!
//! through its small dual `min_{λ ∈ simplex} λ_max(Σ_i λ_i β_i H_i)`, which
//! has only `N + 1` scalar unknowns `(λ, t)` and one `M×M` matrix inequality
//! `S = t·I − Σ λ_i β_i H_i ⪰ 0`. A log-barrier path-following method centers
//! on `τ t − log det S − Σ log λ_i` with Newton steps and grows `τ` tenfold per
//! round. On the central path `W = S⁻¹/τ` is a unit-trace PSD primal point, so
//! every round yields a certified lower value `min_i β_i Tr(W H_i)` next to the
//! dual upper value `t`; the solve stops when their relative gap is below the
//! tolerance.
//!
//! Energy convention: with `E = β Σ_k |hᵀ w_k|²`, the matching channel matrix
//! is `H = conj(h) hᵀ` (see [`channel_gram`]).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::channel_model::ChannelStats;
use crate::error::{Error, Result};
use crate::linalg::{
    cholesky_inverse, cholesky_logdet, hermitian_asymmetry, hermitian_cholesky, hermitian_eigen, hermitian_inner,
    hermitian_part, lambda_max, trace_of_product, CMatrix, CVector,
};
use crate::lp_beamformer::BeamSet;

/// Unit-trace PSD transmit covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceW {
    w: CMatrix,
}

impl CovarianceW {
    pub const HERMITIAN_TOL: f64 = 1e-10;
    pub const EIGEN_TOL: f64 = 1e-8;
    pub const TRACE_TOL: f64 = 1e-8;

    pub fn new(w: CMatrix) -> Result<Self> {
        if !w.is_square() || w.nrows() == 0 {
            return Err(Error::dimension("covariance must be square and non-empty"));
        }
        let asym = hermitian_asymmetry(&w);
        if asym > Self::HERMITIAN_TOL {
            return Err(Error::NotHermitian {
                index: 0,
                asymmetry: asym,
            });
        }
        let trace = w.trace().re;
        if (trace - 1.0).abs() > Self::TRACE_TOL {
            return Err(Error::domain(format!("covariance trace is {trace}, expected 1")));
        }
        let (vals, _) = hermitian_eigen(&w);
        let min = vals.last().copied().unwrap_or(0.0);
        if min < -Self::EIGEN_TOL {
            return Err(Error::domain(format!("covariance has eigenvalue {min} < 0")));
        }
        Ok(Self { w })
    }

    /// `Σ_k w_k w_k^H` of a beam set that spends the full power budget.
    pub fn from_beams(beams: &BeamSet) -> Result<Self> {
        let w = beams
            .covariance()
            .ok_or_else(|| Error::domain("empty beam set has no covariance"))?;
        Self::new(w)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.w
    }

    pub fn into_matrix(self) -> CMatrix {
        self.w
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    /// Relative primal-dual gap at which the solve stops.
    pub tolerance: f64,
    /// Cap on the total number of Newton steps.
    pub max_newton_steps: usize,
    /// Barrier weight multiplier per outer round.
    pub barrier_growth: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-5,
            max_newton_steps: 2000,
            barrier_growth: 10.0,
        }
    }
}

/// Feasibility residuals of the returned covariance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpResiduals {
    /// Largest entry of `W − W^H`.
    pub hermitian: f64,
    /// Smallest eigenvalue of `W`.
    pub min_eigenvalue: f64,
    /// `|Tr(W) − 1|`.
    pub trace: f64,
    /// `min_i β_i Tr(W H_i) − ξ`.
    pub energy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpReport {
    /// Max-min energy achieved by the returned covariance.
    pub xi: f64,
    /// Dual certificate: no covariance achieves more than this.
    pub upper_bound: f64,
    pub relative_gap: f64,
    /// Newton steps across all barrier rounds.
    pub iterations: usize,
    pub residuals: SdpResiduals,
}

/// `conj(h) hᵀ`, the matrix with `Tr(W H) = Σ_k |hᵀ w_k|²` for `W = Σ w_k w_k^H`.
pub fn channel_gram(h: &CVector) -> CMatrix {
    let c = h.map(|z| z.conj());
    &c * c.adjoint()
}

/// Second-order statistic `conj(h̄) h̄ᵀ + R` with `R = I/(1+κ)`.
pub fn statistical_gram(stats: &ChannelStats) -> CMatrix {
    let m = stats.antennas();
    channel_gram(stats.mean()) + CMatrix::identity(m, m) * Complex64::new(stats.cov_scale(), 0.0)
}

/// `β Tr(W H)`.
pub fn covariance_energy(w: &CMatrix, h: &CMatrix, gain: f64) -> f64 {
    gain * hermitian_inner(w, h)
}

/// Splits `W = Σ λ_k u_k u_k^H` into beams `√λ_k u_k`, keeping eigenvalues
/// above `rank_tol · λ_max`.
pub fn extract_beams(w: &CovarianceW, rank_tol: f64) -> BeamSet {
    let (vals, vecs) = hermitian_eigen(w.matrix());
    let top = vals.first().copied().unwrap_or(0.0);
    let beams = vals
        .iter()
        .enumerate()
        .take_while(|&(_, &v)| v > 0.0 && v > rank_tol * top)
        .map(|(k, &v)| vecs.column(k).into_owned() * Complex64::new(v.sqrt(), 0.0))
        .collect();
    // eigenvalues sum to Tr(W) = 1, so the set respects the budget
    BeamSet::new(beams).expect("eigen-beams of a unit-trace covariance")
}

struct Barrier<'a> {
    a: &'a [CMatrix],
    m: usize,
    tau: f64,
}

impl Barrier<'_> {
    fn slack(&self, lambda: &[f64], t: f64) -> CMatrix {
        let mut s = CMatrix::identity(self.m, self.m) * Complex64::new(t, 0.0);
        for (l, a) in lambda.iter().zip(self.a) {
            s -= a * Complex64::new(*l, 0.0);
        }
        hermitian_part(&s)
    }

    /// Change of the barrier objective along `step·dx`, `None` outside the
    /// domain. Evaluated as a difference so that it stays accurate when
    /// `τ t` dwarfs the decrease.
    fn change(&self, lambda: &[f64], t: f64, logdet: f64, dx: &DVector<f64>, step: f64) -> Option<(f64, Vec<f64>, f64)> {
        let n = lambda.len();
        let trial: Vec<f64> = (0..n).map(|j| lambda[j] + step * dx[j]).collect();
        if trial.iter().any(|&l| !(l > 0.0)) {
            return None;
        }
        let t_trial = t + step * dx[n];
        let l = hermitian_cholesky(&self.slack(&trial, t_trial))?;
        let log_ratio: f64 = (0..n).map(|j| (step * dx[j] / lambda[j]).ln_1p()).sum();
        let delta = self.tau * step * dx[n] - (cholesky_logdet(&l) - logdet) - log_ratio;
        Some((delta, trial, t_trial))
    }
}

/// `A_j = B_j B_jᴴ` stacked as `U = [B_1 … B_N]`, used when the total rank is
/// small enough that the `R×R` matrix `Uᴴ S⁻¹ U` is cheaper than `N` dense
/// `M×M` products (always the case for rank-one channel matrices).
struct LowRank {
    u: CMatrix,
    owner: Vec<usize>,
    devices: usize,
}

impl LowRank {
    fn try_new(a: &[CMatrix]) -> Option<Self> {
        let m = a[0].nrows();
        let n = a.len();
        let mut cols: Vec<CVector> = Vec::new();
        let mut owner = Vec::new();
        for (j, aj) in a.iter().enumerate() {
            let (vals, vecs) = hermitian_eigen(aj);
            let top = vals[0].max(0.0);
            for (k, &v) in vals.iter().enumerate() {
                if v <= 1e-13 * top {
                    break;
                }
                cols.push(vecs.column(k) * Complex64::new(v.sqrt(), 0.0));
                owner.push(j);
            }
            if cols.len() * cols.len() > n * m * m {
                return None;
            }
        }
        Some(Self {
            u: CMatrix::from_columns(&cols),
            owner,
            devices: n,
        })
    }

    /// Fills the trace terms of the gradient and Hessian:
    /// `Tr(S⁻¹A_j)`, `Tr(S⁻¹A_j S⁻¹A_k) = Σ |(UᴴS⁻¹U)_{cd}|²` and
    /// `−Tr(S⁻¹A_j S⁻¹) = −Σ ‖S⁻¹u_c‖²`.
    fn assemble(&self, s_inv: &CMatrix, grad: &mut DVector<f64>, hess: &mut DMatrix<f64>) {
        let n = self.devices;
        let z = s_inv * &self.u;
        let gram = self.u.adjoint() * &z;
        for (c, &j) in self.owner.iter().enumerate() {
            grad[j] += gram[(c, c)].re;
            hess[(j, n)] -= z.column(c).norm_squared();
            for (d, &k) in self.owner.iter().enumerate() {
                hess[(j, k)] += gram[(c, d)].norm_sqr();
            }
        }
        for j in 0..n {
            hess[(n, j)] = hess[(j, n)];
        }
    }
}

/// Solves the max-min SDP for channel matrices `h` (Hermitian PSD, `M×M`) and
/// gains `β`.
pub fn solve_max_min_sdp(h: &[CMatrix], gains: &[f64], opts: SdpOptions) -> Result<(CovarianceW, SdpReport)> {
    let n = h.len();
    if n == 0 {
        return Err(Error::domain("SDP needs at least one device"));
    }
    if gains.len() != n {
        return Err(Error::dimension(format!("{n} channel matrices vs {} gains", gains.len())));
    }
    let m = h[0].nrows();
    for (i, hi) in h.iter().enumerate() {
        if !hi.is_square() || hi.nrows() != m {
            return Err(Error::dimension(format!("channel matrix {i} is not {m}x{m}")));
        }
        let asym = hermitian_asymmetry(hi);
        if asym > 1e-10 * hi.norm().max(1.0) {
            return Err(Error::NotHermitian { index: i, asymmetry: asym });
        }
        if !(gains[i] > 0.0) {
            return Err(Error::domain(format!("gain {i} must be positive")));
        }
    }
    if !(opts.tolerance > 0.0 && opts.tolerance < 1.0) || !(opts.barrier_growth > 1.0) {
        return Err(Error::domain("SDP tolerance must lie in (0,1) and barrier growth exceed 1"));
    }

    let peaks: Vec<f64> = h.iter().zip(gains).map(|(hi, b)| b * lambda_max(hi)).collect();
    if let Some(i) = peaks.iter().position(|&p| !(p > 0.0)) {
        return Err(Error::domain(format!("device {i} receives no energy from any covariance")));
    }
    let scale = peaks.iter().copied().fold(f64::INFINITY, f64::min);
    let a: Vec<CMatrix> = h
        .iter()
        .zip(gains)
        .map(|(hi, b)| hermitian_part(hi) * Complex64::new(b / scale, 0.0))
        .collect();

    let factors = LowRank::try_new(&a);
    let mut lambda = vec![1.0 / n as f64; n];
    let mut barrier = Barrier { a: &a, m, tau: 1.0 };
    let mut t = {
        let g = barrier.slack(&lambda, 0.0);
        // slack(λ, 0) = −G, so λ_max(G) = −λ_min(−G)
        -hermitian_eigen(&g).0.last().copied().unwrap_or(0.0) + 1.0
    };

    // on the central path the gap is at most (M + N)/τ and ξ ≥ 1/N after
    // normalization; far beyond that, growing τ only amplifies rounding
    let tau_cap = 1e3 * ((m + n) * n) as f64 / opts.tolerance;
    let mut steps = 0usize;
    let mut best: Option<(f64, CMatrix)> = None;
    let mut upper = f64::INFINITY;

    loop {
        // centering
        let s_inv = loop {
            let chol = hermitian_cholesky(&barrier.slack(&lambda, t))
                .ok_or_else(|| Error::domain("lost strict feasibility during SDP centering"))?;
            let logdet = cholesky_logdet(&chol);
            let s_inv = cholesky_inverse(&chol);
            let dim = n + 1;
            let mut grad = DVector::zeros(dim);
            let mut hess = DMatrix::zeros(dim + 1, dim + 1);
            match &factors {
                Some(f) => f.assemble(&s_inv, &mut grad, &mut hess),
                None => {
                    let c: Vec<CMatrix> = a.iter().map(|aj| &s_inv * aj).collect();
                    for j in 0..n {
                        grad[j] = c[j].trace().re;
                        for k in j..n {
                            let v = trace_of_product(&c[j], &c[k]).re;
                            hess[(j, k)] = v;
                            hess[(k, j)] = v;
                        }
                        let v = -trace_of_product(&c[j], &s_inv).re;
                        hess[(j, n)] = v;
                        hess[(n, j)] = v;
                    }
                }
            }
            for j in 0..n {
                grad[j] -= 1.0 / lambda[j];
                hess[(j, j)] += 1.0 / (lambda[j] * lambda[j]);
                hess[(j, dim)] = 1.0;
                hess[(dim, j)] = 1.0;
            }
            grad[n] = barrier.tau - s_inv.trace().re;
            hess[(n, n)] = trace_of_product(&s_inv, &s_inv).re;

            // Jacobi scaling: the 1/λ_j² terms of nearly inactive devices
            // otherwise swamp the rest of the system late in the path
            let d = DVector::from_fn(dim + 1, |i, _| if i < dim { 1.0 / hess[(i, i)].sqrt() } else { 1.0 });
            let scaled = DMatrix::from_fn(dim + 1, dim + 1, |r, c| d[r] * hess[(r, c)] * d[c]);
            let rhs = DVector::from_fn(dim + 1, |i, _| if i < dim { -grad[i] * d[i] } else { 0.0 });
            let sol = scaled
                .lu()
                .solve(&rhs)
                .ok_or_else(|| Error::domain("singular Newton system in SDP solve"))?;
            let dx = DVector::from_fn(dim, |i, _| sol[i] * d[i]);
            let decrement = -grad.dot(&dx);
            steps += 1;
            if decrement / 2.0 < 1e-10 || steps >= opts.max_newton_steps {
                break s_inv;
            }

            let slope = grad.dot(&dx);
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..60 {
                if let Some((delta, trial, t_trial)) = barrier.change(&lambda, t, logdet, &dx, step) {
                    if delta <= 0.25 * step * slope {
                        lambda = trial;
                        t = t_trial;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break s_inv;
            }
        };

        let w = hermitian_part(&s_inv);
        let w = &w / Complex64::new(w.trace().re, 0.0);
        let xi = a.iter().map(|aj| hermitian_inner(&w, aj)).fold(f64::INFINITY, f64::min);
        upper = upper.min(t);
        if best.as_ref().is_none_or(|(b, _)| xi > *b) {
            best = Some((xi, w));
        }
        let (best_xi, _) = best.as_ref().expect("set above");
        let gap = (upper - best_xi) / upper;
        if gap <= opts.tolerance {
            break;
        }
        if steps >= opts.max_newton_steps || barrier.tau > tau_cap {
            return Err(Error::SdpNotConverged {
                gap,
                iterations: steps,
                xi: best_xi * scale,
            });
        }
        barrier.tau *= opts.barrier_growth;
    }

    let (xi_norm, w) = best.expect("at least one round");
    let (vals, _) = hermitian_eigen(&w);
    let residuals = SdpResiduals {
        hermitian: hermitian_asymmetry(&w),
        min_eigenvalue: vals.last().copied().unwrap_or(0.0),
        trace: (w.trace().re - 1.0).abs(),
        energy: h
            .iter()
            .zip(gains)
            .map(|(hi, b)| covariance_energy(&w, hi, *b))
            .fold(f64::INFINITY, f64::min)
            - xi_norm * scale,
    };
    let report = SdpReport {
        xi: xi_norm * scale,
        upper_bound: upper * scale,
        relative_gap: (upper - xi_norm) / upper,
        iterations: steps,
        residuals,
    };
    Ok((CovarianceW::new(w)?, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel_model::{make_scenario, PathLoss, ScenarioKind};
    use crate::linalg::{dot_t, outer};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_rank_assembly_matches_dense_traces() {
        let dep = make_scenario(&ScenarioKind::A, 8, 6, &[10.0], PathLoss::default(), 1).unwrap();
        // rank-one matrices plus one full-rank one
        let a: Vec<CMatrix> = dep
            .stats
            .iter()
            .enumerate()
            .map(|(j, s)| if j > 0 { channel_gram(s.mean()) } else { statistical_gram(s) })
            .collect();
        let f = LowRank::try_new(&a).unwrap();
        let x = CVector::from_fn(6, |i, _| c(0.3 * i as f64, 1.0 - 0.1 * i as f64));
        let s_inv = outer(&x, &x) + CMatrix::identity(6, 6);
        let n = a.len();
        let mut grad = DVector::zeros(n + 1);
        let mut hess = DMatrix::zeros(n + 2, n + 2);
        f.assemble(&s_inv, &mut grad, &mut hess);
        let cs: Vec<CMatrix> = a.iter().map(|aj| &s_inv * aj).collect();
        for j in 0..n {
            let scale = cs[j].trace().re.abs().max(1.0);
            assert!((grad[j] - cs[j].trace().re).abs() < 1e-10 * scale);
            assert!((hess[(j, n)] + trace_of_product(&cs[j], &s_inv).re).abs() < 1e-10 * scale);
            assert_eq!(hess[(j, n)], hess[(n, j)]);
            for k in 0..n {
                let want = trace_of_product(&cs[j], &cs[k]).re;
                assert!((hess[(j, k)] - want).abs() < 1e-10 * want.abs().max(1.0));
            }
        }
        // too many columns: dense path
        let full: Vec<CMatrix> = dep.stats.iter().map(statistical_gram).collect();
        assert!(LowRank::try_new(&full).is_none());
    }

    #[test]
    fn single_device_is_rank_one_mrt() {
        let h = CVector::from_vec(vec![c(1.0, 0.5), c(-0.3, 0.2), c(0.0, -1.0), c(0.7, 0.7)]);
        let g = channel_gram(&h);
        let (w, rep) = solve_max_min_sdp(std::slice::from_ref(&g), &[0.2], SdpOptions::default()).unwrap();
        let want = 0.2 * h.norm_squared();
        assert!((rep.xi - want).abs() / want < 1e-5, "{} vs {want}", rep.xi);
        let proj = &g / Complex64::new(h.norm_squared(), 0.0);
        assert!((w.matrix() - proj).norm() < 1e-4);
        let beams = extract_beams(&w, 1e-3);
        assert_eq!(beams.len(), 1);
    }

    #[test]
    fn orthogonal_pair_splits_power() {
        let h1 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let h2 = CVector::from_vec(vec![c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (w, rep) = solve_max_min_sdp(
            &[channel_gram(&h1), channel_gram(&h2)],
            &[0.3, 0.3],
            SdpOptions::default(),
        )
        .unwrap();
        assert!((rep.xi - 0.15).abs() / 0.15 < 1e-5);
        let half = (channel_gram(&h1) + channel_gram(&h2)) * c(0.5, 0.0);
        assert!((w.matrix() - half).norm() < 1e-4);
        assert!(rep.upper_bound >= rep.xi);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut x = CMatrix::identity(2, 2);
        x[(0, 1)] = c(1.0, 0.0);
        assert!(matches!(
            solve_max_min_sdp(&[x], &[1.0], SdpOptions::default()),
            Err(Error::NotHermitian { index: 0, .. })
        ));
    }

    #[test]
    fn covariance_validation() {
        assert!(CovarianceW::new(CMatrix::identity(3, 3) / c(3.0, 0.0)).is_ok());
        assert!(CovarianceW::new(CMatrix::identity(3, 3)).is_err());
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 0)] = c(1.5, 0.0);
        bad[(1, 1)] = c(-0.5, 0.0);
        assert!(CovarianceW::new(bad).is_err());
    }

    #[test]
    fn isotropic_extraction() {
        let w = CovarianceW::new(CMatrix::identity(4, 4) / c(4.0, 0.0)).unwrap();
        let beams = extract_beams(&w, 1e-10);
        assert_eq!(beams.len(), 4);
        for p in beams.powers() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_identities() {
        let h = CVector::from_vec(vec![c(0.4, -0.1), c(1.0, 0.3), c(-0.2, 0.9)]);
        let w = CMatrix::identity(3, 3) / c(3.0, 0.0);
        let e = covariance_energy(&w, &channel_gram(&h), 0.5);
        assert!((e - 0.5 * h.norm_squared() / 3.0).abs() < 1e-14);

        // scattered part alone: R = cI gives β c for any unit-trace W
        let v = CVector::from_vec(vec![c(1.0, 1.0), c(0.0, 2.0), c(0.5, 0.0)]);
        let wv = outer(&v, &v) / c(v.norm_squared(), 0.0);
        let r = CMatrix::identity(3, 3) * c(1.0 / 11.0, 0.0);
        assert!((covariance_energy(&wv, &r, 2.0) - 2.0 / 11.0).abs() < 1e-14);

        // Tr(W conj(h) hᵀ) = Σ |hᵀ w_k|²
        let beams = extract_beams(&CovarianceW::new(wv.clone()).unwrap(), 1e-12);
        let direct: f64 = beams.beams().iter().map(|b| dot_t(&h, b).norm_sqr()).sum();
        assert!((covariance_energy(&wv, &channel_gram(&h), 1.0) - direct).abs() < 1e-12);
    }

    #[test]
    fn scenario_a_average_csi() {
        let dep = make_scenario(&ScenarioKind::A, 8, 8, &[10.0], PathLoss::default(), 0).unwrap();
        let hs: Vec<CMatrix> = dep.stats.iter().map(|s| channel_gram(s.mean())).collect();
        let (w, rep) = solve_max_min_sdp(&hs, &dep.gains(), SdpOptions::default()).unwrap();
        assert!(rep.relative_gap <= 1e-5);
        assert!(rep.residuals.energy >= -1e-15);
        assert!(rep.residuals.min_eigenvalue > -1e-8);
        assert!(rep.residuals.trace < 1e-12);
        let beams = extract_beams(&w, 1e-10);
        let back = beams.covariance().unwrap();
        assert!((back - w.matrix()).norm() < 1e-8);
    }
}
