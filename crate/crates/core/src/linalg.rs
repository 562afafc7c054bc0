//! Small dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CVector = DVector<Complex64>;
pub type CMatrix = DMatrix<Complex64>;

/// `Σ_a Σ_b x[a,b]·y[b,a]`, i.e. `Tr(X Y)`, without forming the product.
pub fn trace_of_product(x: &CMatrix, y: &CMatrix) -> Complex64 {
    let n = x.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            acc += x[(a, b)] * y[(b, a)];
        }
    }
    acc
}

/// `Re Tr(X Y)` for Hermitian `X`, `Y` (the real inner product `<X, Y>`).
pub fn hermitian_inner(x: &CMatrix, y: &CMatrix) -> f64 {
    trace_of_product(x, y).re
}

/// Largest absolute entry of `X − X^H`.
pub fn hermitian_asymmetry(x: &CMatrix) -> f64 {
    let n = x.nrows();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in a..n {
            worst = worst.max((x[(a, b)] - x[(b, a)].conj()).norm());
        }
    }
    worst
}

/// `(X + X^H) / 2`.
pub fn hermitian_part(x: &CMatrix) -> CMatrix {
    (x + x.adjoint()).scale(0.5)
}

/// Outer product `u v^H`.
pub fn outer(u: &CVector, v: &CVector) -> CMatrix {
    u * v.adjoint()
}

/// Unconjugated bilinear form `a^T b`.
pub fn dot_t(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
pub fn hermitian_eigen(x: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitian_part(x).symmetric_eigen();
    let n = x.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn lambda_max(x: &CMatrix) -> f64 {
    hermitian_part(x)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Lower Cholesky factor of a Hermitian positive-definite matrix, or `None`
/// when a pivot is not strictly positive.
///
/// nalgebra's complex Cholesky takes complex square roots of the pivots and
/// therefore never reports indefinite input, which makes it useless as a
/// feasibility test.
pub fn hermitian_cholesky(x: &CMatrix) -> Option<CMatrix> {
    let n = x.nrows();
    let mut l = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = x[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) {
            return None;
        }
        let d = d.sqrt();
        l[(j, j)] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut v = x[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = v / d;
        }
    }
    Some(l)
}

/// `log det X` from a Cholesky factor.
pub fn cholesky_logdet(l: &CMatrix) -> f64 {
    2.0 * (0..l.nrows()).map(|i| l[(i, i)].re.ln()).sum::<f64>()
}

/// `X⁻¹ = L⁻ᴴ L⁻¹` from a Cholesky factor.
pub fn cholesky_inverse(l: &CMatrix) -> CMatrix {
    let n = l.nrows();
    let linv = l
        .solve_lower_triangular(&CMatrix::identity(n, n))
        .expect("Cholesky factor has a positive diagonal");
    linv.adjoint() * linv
}
