//! Lanczos iteration with full reorthogonalization for the extreme
//! eigenvalues of a Hermitian operator given only as a matrix-vector product.

use super::eigen::eig_hermitian;
use super::matrix::{vdot, vnorm, Matrix, C64};
use crate::rng;

/// Extreme Ritz values of a Krylov subspace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RitzBounds {
    /// Smallest Ritz value, an upper bound for `λ_min`.
    pub min: f64,
    /// Largest Ritz value, a lower bound for `λ_max`.
    pub max: f64,
    pub steps: usize,
}

/// Runs at most `steps` Lanczos steps from a seeded random start vector.
///
/// Ritz values are Rayleigh quotients of vectors in the Krylov space, so
/// `min ≥ λ_min` and `max ≤ λ_max` hold regardless of convergence.
pub fn lanczos_extremes(
    apply: impl Fn(&[C64]) -> Vec<C64>,
    dim: usize,
    steps: usize,
    seed: u64,
) -> RitzBounds {
    assert!(dim > 0, "Lanczos needs a non-empty space");
    let mut g = rng::seeded(seed);
    let z = rng::normals(&mut g, 2 * dim);
    let mut q: Vec<C64> = (0..dim).map(|i| C64::new(z[2 * i], z[2 * i + 1])).collect();
    let nq = vnorm(&q);
    q.iter_mut().for_each(|x| *x /= nq);

    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let limit = steps.min(dim).max(1);
    for _ in 0..limit {
        let mut w = apply(&q);
        let a = vdot(&q, &w).re;
        alpha.push(a);
        basis.push(q);
        // full reorthogonalization, twice for stability
        for _ in 0..2 {
            for v in &basis {
                let c = vdot(v, &w);
                w.iter_mut().zip(v).for_each(|(wi, vi)| *wi -= c * vi);
            }
        }
        let b = vnorm(&w);
        let scale = alpha.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
        if b <= 1e-12 * scale || basis.len() == limit {
            break;
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    let m = alpha.len();
    let t = Matrix::from_fn(m, m, |i, j| {
        if i == j {
            C64::new(alpha[i], 0.0)
        } else if i + 1 == j {
            C64::new(beta[i], 0.0)
        } else if j + 1 == i {
            C64::new(beta[j], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let e = eig_hermitian(&t).expect("tridiagonal matrix is symmetric");
    RitzBounds {
        min: e.min(),
        max: e.max(),
        steps: m,
    }
}
