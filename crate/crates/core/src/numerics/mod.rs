//! Dense complex linear algebra: products, Kronecker products, Hermitian
//! eigendecomposition, nullspaces and projections.

pub mod eigen;
pub mod lanczos;
pub mod matrix;
pub mod svd;

pub use eigen::{eig_hermitian, eigvals_hermitian, HermitianEigen};
pub use lanczos::{lanczos_extremes, RitzBounds};
pub use matrix::{kron, Matrix, C64, I, ONE, ZERO};
pub use svd::{nullspace, projector, range_basis, rank, DEFAULT_NULL_TOL};

/// Operator 2-norm of a Hermitian matrix (largest absolute eigenvalue).
pub fn hermitian_spectral_norm(a: &Matrix) -> crate::Result<f64> {
    let e = eig_hermitian(a)?;
    Ok(e.min().abs().max(e.max().abs()))
}
