//! One-sided (Hestenes) Jacobi SVD and the subspace helpers built on it.

use super::eigen::fix_phase;
use super::matrix::{vdot, vnorm, Matrix, C64, ONE, ZERO};

/// Default relative threshold for [`nullspace`] and [`range_basis`].
pub const DEFAULT_NULL_TOL: f64 = 1e-9;

const MAX_SWEEPS: usize = 80;

/// Column-orthogonalized `A V`, singular values (column norms of `A V`) and
/// the unitary `V`.
pub struct OneSidedSvd {
    pub av: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

/// Orthogonalizes the columns of `a` by plane rotations applied on the right.
pub fn one_sided_jacobi(a: &Matrix) -> OneSidedSvd {
    let (m, n) = a.shape();
    // columns stored contiguously
    let mut w: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            e
        })
        .collect();
    let eps = f64::EPSILON * (m.max(n) as f64).sqrt();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: f64 = w[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = w[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = vdot(&w[p], &w[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (zeta * zeta + 1.0).sqrt())
                } else {
                    -1.0 / (-zeta + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let e = gamma.conj() / g;
                rotate_pair(&mut w, p, q, c, s, e);
                rotate_pair(&mut v, p, q, c, s, e);
            }
        }
        if !rotated {
            break;
        }
    }

    let sigma = w.iter().map(|col| vnorm(col)).collect();
    OneSidedSvd {
        av: Matrix::from_columns(m, &w),
        sigma,
        v: Matrix::from_columns(n, &v),
    }
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, e: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let xp = *x;
        let xq = *y;
        *x = xp * c - xq * (e * s);
        *y = xp * s + xq * (e * c);
    }
}

/// Upper-triangular factor of a Householder QR of a tall matrix.
pub fn qr_r(a: &Matrix) -> Matrix {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let steps = n.min(m);
    for k in 0..steps {
        let mut x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xn = vnorm(&x);
        if xn == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xn;
        x[0] -= alpha;
        let vn = vnorm(&x);
        if vn == 0.0 {
            continue;
        }
        for z in x.iter_mut() {
            *z /= vn;
        }
        // R[k.., k..] -= 2 v (v* R[k.., k..])
        for j in k..n {
            let mut d = ZERO;
            for (idx, i) in (k..m).enumerate() {
                d += x[idx].conj() * r[(i, j)];
            }
            if d == ZERO {
                continue;
            }
            let d2 = d * 2.0;
            for (idx, i) in (k..m).enumerate() {
                r[(i, j)] -= x[idx] * d2;
            }
        }
    }
    Matrix::from_fn(n, n, |i, j| if i < m && j >= i { r[(i, j)] } else { ZERO })
}

/// Singular values (unordered, one per column) and right singular vectors.
pub fn right_svd(a: &Matrix) -> (Vec<f64>, Matrix) {
    let reduced;
    let target = if a.rows() > a.cols() {
        reduced = qr_r(a);
        &reduced
    } else {
        a
    };
    let svd = one_sided_jacobi(target);
    (svd.sigma, svd.v)
}

/// Orthonormal basis (as columns) of `{v : A v = 0}`: the right singular
/// vectors whose singular value is at most `tol · σ_max`.
pub fn nullspace(a: &Matrix, tol: f64) -> Matrix {
    assert!(tol > 0.0, "nullspace tolerance must be positive");
    let n = a.cols();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    let (sigma, v) = right_svd(a);
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    let cut = tol * smax;
    let keep: Vec<usize> = (0..n).filter(|&j| sigma[j] <= cut).collect();
    let mut basis = v.select_columns(&keep);
    for j in 0..basis.cols() {
        let mut c = basis.column(j);
        fix_phase(&mut c);
        basis.set_column(j, &c);
    }
    basis
}

/// Number of singular values above `tol · σ_max`.
pub fn rank(a: &Matrix, tol: f64) -> usize {
    if a.cols() == 0 || a.rows() == 0 {
        return 0;
    }
    let (sigma, _) = right_svd(a);
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    sigma.iter().filter(|&&s| s > tol * smax && s > 0.0).count()
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &Matrix, tol: f64) -> Matrix {
    let svd = one_sided_jacobi(a);
    let smax = svd.sigma.iter().copied().fold(0.0, f64::max);
    let mut cols = Vec::new();
    for (j, &s) in svd.sigma.iter().enumerate() {
        if s > tol * smax && s > 0.0 {
            let mut c: Vec<C64> = svd.av.column(j).iter().map(|z| z / s).collect();
            fix_phase(&mut c);
            cols.push(c);
        }
    }
    Matrix::from_columns(a.rows(), &cols)
}

/// Orthogonal projector `Q Q*` onto the span of the orthonormal columns of `q`.
pub fn projector(q: &Matrix) -> Matrix {
    q.matmul(&q.adjoint())
}
