#![allow(dead_code)]

use num_complex::Complex64;
use wetbeam::linalg::CVector;

/// `|h̄_kᴴ h̄_i|² / ‖h̄_k‖²`, straight from the definition.
pub fn coupling(means: &[&CVector]) -> Vec<Vec<f64>> {
    let n = means.len();
    let mut q = vec![vec![0.0; n]; n];
    for k in 0..n {
        let nk: f64 = means[k].iter().map(|z| z.norm_sqr()).sum();
        for i in 0..n {
            let ip: Complex64 = means[k].iter().zip(means[i].iter()).map(|(a, b)| a.conj() * b).sum();
            q[k][i] = ip.norm_sqr() / nk;
        }
    }
    q
}

/// Dense solve with partial pivoting; `None` when (numerically) singular.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[piv][col].abs() < 1e-12 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Max-min LP by vertex enumeration:
/// `max ξ s.t. Σ_k β_i q[k][i] p_k ≥ ξ, Σ p = 1, p ≥ 0`.
/// Returns `(ξ*, p*)`.
pub fn lp_oracle(q: &[Vec<f64>], gains: &[f64]) -> (f64, Vec<f64>) {
    let n = gains.len();
    // unknowns x = [p_0..p_{n-1}, ξ]; inequality rows 0..n are energy, n..2n are p_k ≥ 0
    let row = |c: usize| -> Vec<f64> {
        let mut r = vec![0.0; n + 1];
        if c < n {
            for k in 0..n {
                r[k] = gains[c] * q[k][c];
            }
            r[n] = -1.0;
        } else {
            r[c - n] = 1.0;
        }
        r
    };
    let scale = gains
        .iter()
        .enumerate()
        .map(|(i, b)| b * q[i][i])
        .fold(0.0f64, f64::max);
    let mut best: Option<(f64, Vec<f64>)> = None;
    for active in combinations(2 * n, n) {
        let mut a: Vec<Vec<f64>> = active.iter().map(|&c| row(c)).collect();
        let mut b = vec![0.0; n];
        let mut eq = vec![1.0; n + 1];
        eq[n] = 0.0;
        a.push(eq);
        b.push(1.0);
        let Some(x) = gauss_solve(a, b) else { continue };
        let feasible = (0..2 * n).all(|c| {
            let r = row(c);
            let v: f64 = r.iter().zip(&x).map(|(a, b)| a * b).sum();
            v >= -1e-10 * scale.max(1.0)
        });
        if feasible && best.as_ref().is_none_or(|(xi, _)| x[n] > *xi) {
            best = Some((x[n], x[..n].to_vec()));
        }
    }
    best.expect("the simplex always has a feasible vertex")
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let s = (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt();
    (m, s)
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Half-width of a 95 % interval converted to dB around `mean`.
pub fn hw_db(mean: f64, hw: f64) -> f64 {
    10.0 / std::f64::consts::LN_10 * hw / mean
}
