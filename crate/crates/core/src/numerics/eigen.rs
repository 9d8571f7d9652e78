//! Cyclic Jacobi eigensolver for Hermitian matrices.

use super::matrix::{Matrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Relative tolerance on `‖A − A*‖` accepted by [`eig_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 80;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `vectors`.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }
}

/// Diagonalizes a Hermitian matrix.
///
/// Sweeps visit `(p, q)` pairs in row-major order, so results are bitwise
/// reproducible. Each eigenvector is rotated so its first entry of modulus
/// above `1e-10` is real and positive.
pub fn eig_hermitian(a: &Matrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let norm = a.norm_fro();
    let residual = a.hermitian_residual();
    if residual > HERMITIAN_TOL * norm.max(f64::MIN_POSITIVE) && residual > 0.0 {
        return Err(Error::NotHermitian {
            residual,
            tolerance: HERMITIAN_TOL * norm,
        });
    }
    Ok(jacobi(a.hermitian_part(), norm))
}

/// Eigenvalues only, ascending.
pub fn eigvals_hermitian(a: &Matrix) -> Result<Vec<f64>> {
    eig_hermitian(a).map(|e| e.values)
}

fn jacobi(mut a: Matrix, norm: f64) -> HermitianEigen {
    let n = a.rows();
    // rows of `vt` are the eigenvectors
    let mut vt = Matrix::identity(n);
    let elem_tol = f64::EPSILON * norm / (n.max(1) as f64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r <= elem_tol || r == 0.0 {
                    if r != 0.0 {
                        a[(p, q)] = ZERO;
                        a[(q, p)] = ZERO;
                    }
                    continue;
                }
                rotated = true;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // e = exp(-i arg(a_pq))
                let e = apq.conj() / r;
                let ec = e.conj();

                // A <- A U
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c - akq * (e * s);
                    a[(k, q)] = akp * s + akq * (e * c);
                }
                // A <- U* A
                for k in 0..n {
                    let mpk = a[(p, k)];
                    let mqk = a[(q, k)];
                    a[(p, k)] = mpk * c - mqk * (ec * s);
                    a[(q, k)] = mpk * s + mqk * (ec * c);
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                // V <- V U, on rows of V^T
                let cols = vt.cols();
                let data = vt.as_mut_slice();
                for k in 0..cols {
                    let vp = data[p * cols + k];
                    let vq = data[q * cols + k];
                    data[p * cols + k] = vp * c - vq * (e * s);
                    data[q * cols + k] = vp * s + vq * (e * c);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Matrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        let mut v: Vec<C64> = vt.row(i).to_vec();
        fix_phase(&mut v);
        vectors.set_column(col, &v);
    }
    HermitianEigen { values, vectors }
}

/// Rotates `v` so that its first entry with modulus above `1e-10` is real
/// and positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-10) {
        let phase = z.conj() / z.norm();
        for x in v.iter_mut() {
            *x *= phase;
        }
    }
}

/// `A V − V diag(λ)` residual, Frobenius norm.
pub fn reconstruction_residual(a: &Matrix, eig: &HermitianEigen) -> f64 {
    let av = a.matmul(&eig.vectors);
    let mut vd = eig.vectors.clone();
    for j in 0..vd.cols() {
        let lam = C64::new(eig.values[j], 0.0);
        for i in 0..vd.rows() {
            vd[(i, j)] *= lam;
        }
    }
    (&av - &vd).norm_fro()
}

/// `‖V* V − I‖_F`.
pub fn orthonormality_residual(v: &Matrix) -> f64 {
    let g = v.adjoint().matmul(v);
    let mut id = Matrix::identity(g.rows());
    id.axpy(-ONE, &g);
    id.norm_fro()
}
