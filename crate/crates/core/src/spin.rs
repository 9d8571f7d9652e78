//! Complex Clifford modules, the spin representation and the Clifford
//! symbol identifying `Λ*` with `S ⊗ S`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, nullspace, Matrix, C64, DEFAULT_NULL_TOL, I, ONE, ZERO};
use crate::representations::{exterior_subsets, subrep, Rep};
use crate::so_algebra::{Algebra, SoBasis};

fn pauli() -> [Matrix; 3] {
    [
        Matrix::from_vec(2, 2, vec![ZERO, ONE, ONE, ZERO]),
        Matrix::from_vec(2, 2, vec![ZERO, -I, I, ZERO]),
        Matrix::from_vec(2, 2, vec![ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Generators `e_1 … e_n` of the Clifford algebra, `e_i e_j + e_j e_i = −2δ_ij`,
/// acting on `C^{2^⌊n/2⌋}`. Each `e_i` is unitary and anti-Hermitian.
pub fn gamma_matrices(n: usize) -> Result<Vec<Matrix>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("gamma matrices need n >= 2, got {n}")));
    }
    let [s1, s2, s3] = pauli();
    let mut g = vec![s1.scale(I), s2.scale(I)];
    while g.len() + 2 <= n {
        let d = g[0].rows();
        let id = Matrix::identity(d);
        let mut next: Vec<Matrix> = g.iter().map(|e| e.kron(&s3)).collect();
        next.push(id.kron(&s1.scale(I)));
        next.push(id.kron(&s2.scale(I)));
        g = next;
    }
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        let omega = volume_element(&g);
        // ω² = (−1)^m
        g.push(if m % 2 == 1 { omega } else { omega.scale(I) });
    }
    Ok(g)
}

fn volume_element(g: &[Matrix]) -> Matrix {
    let mut w = Matrix::identity(g[0].rows());
    for e in g {
        w = w.matmul(e);
    }
    w
}

/// Chirality operator for even `n`: a multiple of `e_1⋯e_n` squaring to `1`.
pub fn chirality(n: usize) -> Result<Matrix> {
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!("chirality is defined for even n, got {n}")));
    }
    let w = volume_element(&gamma_matrices(n)?);
    Ok(if (n / 2).is_multiple_of(2) { w } else { w.scale(I) })
}

/// Spin representation `ρ(x_ij) = −½ e_i e_j`.
pub fn rep_spin(basis: &Arc<SoBasis>) -> Result<Rep> {
    let g = gamma_matrices(basis.n())?;
    let mats = basis
        .pairs()
        .iter()
        .map(|&(i, j)| g[i].matmul(&g[j]).scale_real(-0.5))
        .collect();
    Rep::new(Algebra::So(basis.clone()), mats, "spin")
}

/// Orthonormal basis of the `±1` eigenspace of the chirality operator.
pub fn half_spin_basis(n: usize, positive: bool) -> Result<Matrix> {
    let c = chirality(n)?;
    let e = eig_hermitian(&c.hermitian_part())?;
    let want = if positive { 1.0 } else { -1.0 };
    let idx: Vec<usize> = (0..e.values.len()).filter(|&k| (e.values[k] - want).abs() < 1e-8).collect();
    Ok(e.vectors.select_columns(&idx))
}

/// Half-spin representation on the `±1` eigenspace of the chirality
/// operator (even `n` only).
pub fn rep_half_spin(basis: &Arc<SoBasis>, positive: bool) -> Result<Rep> {
    let spin = rep_spin(basis)?;
    let q = half_spin_basis(basis.n(), positive)?;
    let label = if positive { "spin+" } else { "spin-" };
    Ok(subrep(&spin, &q)?.with_label(label))
}

/// A Clifford-compatible bilinear pairing on spinors.
#[derive(Clone, Debug)]
pub struct SpinorPairing {
    /// Unitary `B` with `e_iᵀ B = sign · B e_i` for every generator.
    pub matrix: Matrix,
    /// `+1` if `B` is symmetric, `−1` if antisymmetric.
    pub symmetry: i32,
    pub sign: i32,
}

/// Spinor pairing with `e_iᵀ B + B e_i = 0`, which makes `B` invariant under
/// the spin representation. For odd `n` where that sign has no solution,
/// the pairing with `e_iᵀ B = B e_i` is returned instead (it is invariant as
/// well).
pub fn spinor_pairing(n: usize) -> Result<SpinorPairing> {
    let g = gamma_matrices(n)?;
    let d = g[0].rows();
    for sign in [-1.0, 1.0] {
        // unknown B in row-major; equations e_iᵀ B − sign · B e_i = 0
        let id = Matrix::identity(d);
        let mut system: Option<Matrix> = None;
        for e in &g {
            let block = &e.transpose().kron(&id) - &id.kron(&e.transpose()).scale_real(sign);
            system = Some(match system {
                None => block,
                Some(s) => s.vstack(&block),
            });
        }
        let ns = nullspace(&system.expect("n >= 2"), DEFAULT_NULL_TOL);
        if ns.cols() == 0 {
            continue;
        }
        if ns.cols() != 1 {
            return Err(Error::Precondition(format!(
                "spinor pairing is not unique ({} solutions)",
                ns.cols()
            )));
        }
        let b = Matrix::from_vec(d, d, ns.column(0)).scale_real((d as f64).sqrt());
        let symmetry = if (&b - &b.transpose()).max_abs() < 1e-10 { 1 } else { -1 };
        return Ok(SpinorPairing {
            matrix: b,
            symmetry,
            sign: sign as i32,
        });
    }
    Err(Error::Precondition(format!("no Clifford-compatible spinor pairing for n = {n}")))
}

/// `γ_I = e_{i1}⋯e_{ip}` for an increasing index tuple.
pub fn clifford_product(gamma: &[Matrix], subset: &[usize]) -> Matrix {
    let mut m = Matrix::identity(gamma[0].rows());
    for &i in subset {
        m = m.matmul(&gamma[i]);
    }
    m
}

/// Unitary `T: Λ*(Cⁿ) → S ⊗ S` for even `n`, intertwining the exterior
/// representation with the tensor square of the spin representation.
///
/// `e_I ↦ γ_I` is equivariant for the conjugation action on `End S`; `End S`
/// is then identified with `S ⊗ S*` by row-major vectorisation and with
/// `S ⊗ S` through the inverse spinor pairing. Columns follow
/// [`exterior_subsets`].
pub fn clifford_symbol(n: usize) -> Result<Matrix> {
    if n % 2 == 1 {
        return Err(Error::Unsupported(format!(
            "the spin square is half of Λ* for odd n; the symbol is only built for even n (got {n})"
        )));
    }
    let g = gamma_matrices(n)?;
    let d = g[0].rows();
    let b = spinor_pairing(n)?;
    let binv = b.matrix.adjoint();
    let lift = Matrix::identity(d).kron(&binv).scale_real(1.0 / (d as f64).sqrt());
    let cols: Vec<Vec<C64>> = exterior_subsets(n)
        .iter()
        .map(|s| {
            let gi = clifford_product(&g, s);
            lift.matvec(gi.as_slice())
        })
        .collect();
    Ok(Matrix::from_columns(d * d, &cols))
}

/// Columns of the Clifford symbol belonging to `Λ^p`.
pub fn clifford_symbol_degree(n: usize, p: usize) -> Result<Matrix> {
    if p > n {
        return Err(Error::InvalidArgument(format!("degree {p} exceeds n = {n}")));
    }
    let t = clifford_symbol(n)?;
    let subsets = exterior_subsets(n);
    let idx: Vec<usize> = (0..subsets.len()).filter(|&k| subsets[k].len() == p).collect();
    Ok(t.select_columns(&idx))
}
