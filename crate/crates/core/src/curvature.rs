//! Algebraic curvature operators `R = Σ R_ab x_a ⊗ x_b` on so(n).
//!
//! `R_ab = ½ R_{i_a j_a i_b j_b}` with pairs read in the lexicographic
//! `i < j` basis. With this scale the round metric of sectional curvature 2
//! has `R_ab = δ_ab`, and `Ricci_ik = Σ_j R_ijkj` is positive on it.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, Matrix};
use crate::rng;
use crate::so_algebra::{SimpleAlgebraData, SoBasis};
use crate::spin::half_spin_basis;
use crate::spin::rep_spin;

/// Symmetry tolerance for operators.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative first-Bianchi residual accepted as an algebraic curvature tensor.
pub const BIANCHI_TOL: f64 = 1e-10;
/// Pair-symmetry tolerance for index-form input.
pub const PAIR_SYMMETRY_TOL: f64 = 1e-10;

pub const BASIS_TAG: &str = "lex-upper";
pub const NORMALIZATION_TAG: &str = "half-tensor";

/// Rank-4 array `T_ijkl`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct RiemannTensor {
    n: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn zeros(n: usize) -> Self {
        RiemannTensor {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        t.data[((i * n + j) * n + k) * n + l] = f(i, j, k, l);
                    }
                }
            }
        }
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let n = self.n;
        self.data[((i * n + j) * n + k) * n + l]
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Largest violation of `T_ijkl = −T_jikl = −T_ijlk = T_klij`.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let t = self.get(i, j, k, l);
                        worst = worst
                            .max((t + self.get(j, i, k, l)).abs())
                            .max((t + self.get(i, j, l, k)).abs())
                            .max((t - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }

    /// `b(T)_ijkl = T_ijkl + T_jkil + T_kijl`.
    pub fn cyclic_sum(&self) -> RiemannTensor {
        RiemannTensor::from_fn(self.n, |i, j, k, l| {
            self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l)
        })
    }

    /// Kulkarni–Nomizu product `h ⊙ g` of a symmetric matrix with the
    /// identity metric.
    pub fn kulkarni_nomizu_identity(h: &[Vec<f64>]) -> RiemannTensor {
        let n = h.len();
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        RiemannTensor::from_fn(n, |i, j, k, l| {
            h[i][k] * d(j, l) + h[j][l] * d(i, k) - h[i][l] * d(j, k) - h[j][k] * d(i, l)
        })
    }
}

/// Symmetric `N × N` real matrix over the lexicographic so(n) basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureOperator {
    n: usize,
    r: Vec<f64>,
    bianchi: bool,
}

impl CurvatureOperator {
    /// Builds an operator from a row-major `N × N` array, recording whether it
    /// satisfies the first Bianchi identity.
    pub fn new(n: usize, r: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("curvature needs n >= 2, got {n}")));
        }
        let big = n * (n - 1) / 2;
        if r.len() != big * big {
            return Err(Error::DimensionMismatch(format!(
                "curvature for n = {n} needs {big}x{big} entries, got {}",
                r.len()
            )));
        }
        if r.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("curvature has non-finite entries".into()));
        }
        let scale = 1.0 + r.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for a in 0..big {
            for b in (a + 1)..big {
                let gap = (r[a * big + b] - r[b * big + a]).abs();
                if gap > SYMMETRY_TOL * scale {
                    return Err(Error::InvalidArgument(format!(
                        "curvature operator is not symmetric (entry ({a},{b}) differs by {gap:e})"
                    )));
                }
            }
        }
        let mut op = CurvatureOperator { n, r, bianchi: false };
        op.bianchi = op.bianchi_residual() <= BIANCHI_TOL;
        Ok(op)
    }

    pub fn from_rows(n: usize, rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n−1)/2`.
    pub fn size(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.r[a * self.size() + b]
    }

    pub fn values(&self) -> &[f64] {
        &self.r
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.r.chunks(self.size()).map(<[f64]>::to_vec).collect()
    }

    pub fn bianchi_flag(&self) -> bool {
        self.bianchi
    }

    pub fn matrix(&self) -> Matrix {
        let big = self.size();
        Matrix::from_real(big, big, &self.r)
    }

    pub fn norm(&self) -> f64 {
        self.r.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Ascending eigenvalues of `R_ab`.
    pub fn spectrum(&self) -> Vec<f64> {
        eig_hermitian(&self.matrix()).expect("symmetric by construction").values
    }

    pub fn scaled(&self, s: f64) -> Self {
        CurvatureOperator {
            n: self.n,
            r: self.r.iter().map(|x| x * s).collect(),
            bianchi: self.bianchi,
        }
    }

    /// `αR₁ + βR₂`.
    pub fn combine(alpha: f64, r1: &Self, beta: f64, r2: &Self) -> Result<Self> {
        if r1.n != r2.n {
            return Err(Error::DimensionMismatch(format!("curvatures for n = {} and n = {}", r1.n, r2.n)));
        }
        let r = r1.r.iter().zip(&r2.r).map(|(a, b)| alpha * a + beta * b).collect();
        Self::new(r1.n, r)
    }

    /// `R_ab = ½ T_{i_a j_a i_b j_b}`.
    pub fn from_tensor(t: &RiemannTensor) -> Result<Self> {
        let n = t.n();
        let scale = 1.0 + t.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let resid = t.pair_symmetry_residual();
        if resid > PAIR_SYMMETRY_TOL * scale {
            return Err(Error::InvalidArgument(format!(
                "tensor lacks the pair symmetries (residual {resid:e})"
            )));
        }
        let pairs = pairs(n);
        let big = pairs.len();
        let mut r = vec![0.0; big * big];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                r[a * big + b] = 0.5 * t.get(i, j, k, l);
            }
        }
        // symmetrize away rounding-level asymmetry accepted above
        for a in 0..big {
            for b in (a + 1)..big {
                let m = 0.5 * (r[a * big + b] + r[b * big + a]);
                r[a * big + b] = m;
                r[b * big + a] = m;
            }
        }
        Self::new(n, r)
    }

    /// Inverse of [`CurvatureOperator::from_tensor`], extended by the pair
    /// antisymmetries.
    pub fn to_tensor(&self) -> RiemannTensor {
        let n = self.n;
        let basis = pairs(n);
        let mut index = vec![None; n * n];
        for (a, &(i, j)) in basis.iter().enumerate() {
            index[i * n + j] = Some((a, 1.0));
            index[j * n + i] = Some((a, -1.0));
        }
        RiemannTensor::from_fn(n, |i, j, k, l| match (index[i * n + j], index[k * n + l]) {
            (Some((a, s)), Some((b, t))) => 2.0 * s * t * self.get(a, b),
            _ => 0.0,
        })
    }

    /// `‖b(T)‖ / (1 + ‖T‖)` for the index form `T`.
    pub fn bianchi_residual(&self) -> f64 {
        let t = self.to_tensor();
        t.cyclic_sum().norm() / (1.0 + t.norm())
    }

    /// Orthogonal projection onto the kernel of the cyclic sum. On tensors
    /// with the pair symmetries `b(T)` is totally antisymmetric and `b` acts
    /// as `3` on totally antisymmetric tensors, so the projection is
    /// `T − b(T)/3`.
    pub fn bianchi_project(&self) -> Self {
        let t = self.to_tensor();
        let b = t.cyclic_sum();
        let p = RiemannTensor::from_fn(self.n, |i, j, k, l| t.get(i, j, k, l) - b.get(i, j, k, l) / 3.0);
        let mut out = Self::from_tensor(&p).expect("projection keeps the pair symmetries");
        out.bianchi = true;
        out
    }

    /// `Ricci_ik = Σ_j T_ijkj`.
    pub fn ricci(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let t = self.to_tensor();
        (0..n)
            .map(|i| (0..n).map(|k| (0..n).map(|j| t.get(i, j, k, j)).sum()).collect())
            .collect()
    }

    pub fn scalar(&self) -> f64 {
        let ric = self.ricci();
        (0..self.n).map(|i| ric[i][i]).sum()
    }

    /// `Ricci − (s/n)·I`.
    pub fn traceless_ricci(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut ric = self.ricci();
        let s = self.scalar() / n as f64;
        for (i, row) in ric.iter_mut().enumerate() {
            row[i] -= s;
        }
        ric
    }

    /// Removes the trace-free Ricci part: `R − Ric₀ ⊙ g / (n − 2)` in index
    /// form. The result has Ricci tensor `(s/n)·I`.
    pub fn einstein_part(&self) -> Result<Self> {
        if self.n < 3 {
            return Err(Error::InvalidArgument("Einstein projection needs n >= 3".into()));
        }
        let ric0 = self.traceless_ricci();
        let kn = RiemannTensor::kulkarni_nomizu_identity(&ric0);
        let t = self.to_tensor();
        let c = 1.0 / (self.n - 2) as f64;
        Self::from_tensor(&RiemannTensor::from_fn(self.n, |i, j, k, l| {
            t.get(i, j, k, l) - c * kn.get(i, j, k, l)
        }))
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j))).collect()
}

/// The round sphere in this normalization: `R = I`.
pub fn sphere(n: usize) -> Result<CurvatureOperator> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("sphere needs n >= 2, got {n}")));
    }
    let big = n * (n - 1) / 2;
    let r = (0..big * big).map(|k| if k / big == k % big { 1.0 } else { 0.0 }).collect();
    CurvatureOperator::new(n, r)
}

/// Curvature of a compact simple group with metric `−B`, as an operator on
/// `so(dim g)`: `R = ⅛ Σ_c ad(y_c) ⊗ ad(y_c)`.
pub fn bi_invariant_group(g: &SimpleAlgebraData) -> Result<CurvatureOperator> {
    let dim = g.dim();
    let basis = SoBasis::new(dim)?;
    // ⟨x_ij, A⟩ = A_ij for skew A
    let coords: Vec<Vec<f64>> = g
        .ad
        .iter()
        .map(|ad| basis.pairs().iter().map(|&(i, j)| ad.re(i, j)).collect())
        .collect();
    let big = basis.dim();
    let mut r = vec![0.0; big * big];
    for v in &coords {
        for a in 0..big {
            for b in 0..big {
                r[a * big + b] += v[a] * v[b] / 8.0;
            }
        }
    }
    CurvatureOperator::new(dim, r)
}

/// Symmetric Gaussian matrix (entries of variance ½ off the diagonal),
/// without projection.
pub fn random_symmetric(n: usize, seed: u64) -> Result<CurvatureOperator> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("curvature needs n >= 2, got {n}")));
    }
    let big = n * (n - 1) / 2;
    let mut g = rng::seeded(seed);
    let z = rng::normals(&mut g, big * big);
    let r = (0..big * big)
        .map(|k| {
            let (a, b) = (k / big, k % big);
            0.5 * (z[a * big + b] + z[b * big + a])
        })
        .collect();
    CurvatureOperator::new(n, r)
}

/// Seeded random algebraic curvature operator.
pub fn random_curvature(n: usize, seed: u64) -> Result<CurvatureOperator> {
    Ok(random_symmetric(n, seed)?.bianchi_project())
}

/// Seeded random algebraic curvature operator shifted by a multiple of the
/// sphere so that its smallest eigenvalue equals `margin`.
pub fn random_positive(n: usize, seed: u64, margin: f64) -> Result<CurvatureOperator> {
    let r = random_curvature(n, seed)?;
    let lmin = r.spectrum()[0];
    let mut out = CurvatureOperator::combine(1.0, &r, margin - lmin, &sphere(n)?)?;
    out.bianchi = true;
    Ok(out)
}

/// Blocks of a four-dimensional curvature operator with respect to
/// `Λ² = Λ²₊ ⊕ Λ²₋`.
#[derive(Clone, Debug)]
pub struct FourDimBlocks {
    pub w_plus: [[f64; 3]; 3],
    pub w_minus: [[f64; 3]; 3],
    /// The `Λ²₊ ⊗ Λ²₋` block.
    pub mixed: [[f64; 3]; 3],
    pub scalar: f64,
    /// Orthonormal bases of `Λ²₊` and `Λ²₋` in so(4) coordinates (columns).
    pub plus_basis: HalfBasis,
    pub minus_basis: HalfBasis,
}

/// Three vectors in so(4) lex coordinates, one per column.
pub type HalfBasis = [[f64; 3]; 6];

impl FourDimBlocks {
    pub fn mixed_norm(&self) -> f64 {
        frob3(&self.mixed)
    }

    /// Rebuilds the 6×6 operator from the blocks.
    pub fn reassemble(&self) -> Vec<f64> {
        let mut r = vec![0.0; 36];
        let parts = [
            (&self.plus_basis, &self.w_plus, &self.plus_basis),
            (&self.plus_basis, &self.mixed, &self.minus_basis),
            (&self.minus_basis, &self.w_minus, &self.minus_basis),
        ];
        for (k, (u, m, v)) in parts.iter().enumerate() {
            for a in 0..6 {
                for b in 0..6 {
                    let mut s = 0.0;
                    for p in 0..3 {
                        for q in 0..3 {
                            s += u[a][p] * m[p][q] * v[b][q];
                        }
                    }
                    r[a * 6 + b] += s;
                    if k == 1 {
                        r[b * 6 + a] += s;
                    }
                }
            }
        }
        r
    }
}

fn frob3(m: &[[f64; 3]; 3]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

/// Orthonormal bases of `Λ²₊` and `Λ²₋` in so(4) coordinates. `Λ²₊` is the
/// piece whose spin action vanishes on the chirality `−1` half-spin space.
pub fn four_dim_splitting() -> Result<(HalfBasis, HalfBasis)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // lex order: 01 02 03 12 13 23; Hodge-dual pairs (01,23), (02,13), (03,12)
    let sd: [[f64; 3]; 6] = [[h, 0.0, 0.0], [0.0, h, 0.0], [0.0, 0.0, h], [0.0, 0.0, h], [0.0, -h, 0.0], [h, 0.0, 0.0]];
    let mut asd = sd;
    for row in asd.iter_mut().skip(3) {
        for x in row.iter_mut() {
            *x = -*x;
        }
    }
    let basis = Arc::new(SoBasis::new(4)?);
    let spin = rep_spin(&basis)?;
    let q = half_spin_basis(4, false)?;
    let qh = q.adjoint();
    let kills_minus = |u: &[[f64; 3]; 6]| {
        (0..3).all(|p| {
            let coeffs: Vec<f64> = (0..6).map(|a| u[a][p]).collect();
            qh.matmul(&spin.act(&coeffs)).matmul(&q).max_abs() < 1e-12
        })
    };
    if kills_minus(&sd) {
        Ok((sd, asd))
    } else if kills_minus(&asd) {
        Ok((asd, sd))
    } else {
        Err(Error::Precondition("no Λ² summand acts trivially on a half-spin space".into()))
    }
}

/// `W₊ = U₊ᵀRU₊`, `W₋ = U₋ᵀRU₋` and the mixed block `U₊ᵀRU₋`.
pub fn four_dim_blocks(r: &CurvatureOperator) -> Result<FourDimBlocks> {
    if r.n() != 4 {
        return Err(Error::DimensionMismatch(format!("four-dimensional blocks need n = 4, got {}", r.n())));
    }
    if !r.bianchi_flag() {
        return Err(Error::Precondition(format!(
            "four-dimensional blocks need the first Bianchi identity (residual {:e})",
            r.bianchi_residual()
        )));
    }
    let (up, um) = four_dim_splitting()?;
    let block = |u: &[[f64; 3]; 6], v: &[[f64; 3]; 6]| {
        let mut m = [[0.0; 3]; 3];
        for (p, row) in m.iter_mut().enumerate() {
            for (q, x) in row.iter_mut().enumerate() {
                for a in 0..6 {
                    for b in 0..6 {
                        *x += u[a][p] * r.get(a, b) * v[b][q];
                    }
                }
            }
        }
        m
    };
    Ok(FourDimBlocks {
        w_plus: block(&up, &up),
        w_minus: block(&um, &um),
        mixed: block(&up, &um),
        scalar: r.scalar(),
        plus_basis: up,
        minus_basis: um,
    })
}

/// On-disk form of a curvature operator.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureFile {
    pub n: usize,
    pub basis: String,
    pub normalization: String,
    #[serde(rename = "R")]
    pub r: Vec<Vec<f64>>,
}

impl From<&CurvatureOperator> for CurvatureFile {
    fn from(op: &CurvatureOperator) -> Self {
        CurvatureFile {
            n: op.n,
            basis: BASIS_TAG.into(),
            normalization: NORMALIZATION_TAG.into(),
            r: op.rows(),
        }
    }
}

impl TryFrom<CurvatureFile> for CurvatureOperator {
    type Error = Error;

    fn try_from(f: CurvatureFile) -> Result<Self> {
        if f.basis != BASIS_TAG {
            return Err(Error::Schema(format!("basis must be \"{BASIS_TAG}\", got \"{}\"", f.basis)));
        }
        if f.normalization != NORMALIZATION_TAG {
            return Err(Error::Schema(format!(
                "normalization must be \"{NORMALIZATION_TAG}\", got \"{}\"",
                f.normalization
            )));
        }
        if f.n < 2 {
            return Err(Error::Schema(format!("n must be at least 2, got {}", f.n)));
        }
        let big = f.n * (f.n - 1) / 2;
        if f.r.len() != big || f.r.iter().any(|row| row.len() != big) {
            return Err(Error::Schema(format!("R must be {big}x{big} for n = {}", f.n)));
        }
        CurvatureOperator::from_rows(f.n, &f.r).map_err(|e| match e {
            Error::InvalidArgument(m) => Error::Schema(m),
            other => other,
        })
    }
}

pub fn curvature_from_json(text: &str) -> Result<CurvatureOperator> {
    let file: CurvatureFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    file.try_into()
}

pub fn curvature_to_json(op: &CurvatureOperator) -> String {
    crate::report::to_json_string(&CurvatureFile::from(op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::C64;
    use crate::representations::{isotypic_decompose, rep_standard, StandardKind};
    use crate::so_algebra::{simple_algebra, TypeRank};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn zero_and_sphere_tensors() {
        let z = CurvatureOperator::from_tensor(&RiemannTensor::zeros(4)).unwrap();
        assert!(z.values().iter().all(|&x| x == 0.0));
        for n in 2..=6 {
            let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
            let t = RiemannTensor::from_fn(n, |i, j, k, l| 2.0 * (d(i, k) * d(j, l) - d(i, l) * d(j, k)));
            let r = CurvatureOperator::from_tensor(&t).unwrap();
            assert_eq!(r, sphere(n).unwrap());
            assert!(r.bianchi_flag());
        }
    }

    #[test]
    fn tensor_round_trip() {
        for seed in 0..100 {
            let n = 2 + (seed as usize % 6);
            let r = random_symmetric(n, seed).unwrap();
            let back = CurvatureOperator::from_tensor(&r.to_tensor()).unwrap();
            assert!(close(back.values(), r.values(), 1e-12));
        }
    }

    #[test]
    fn rejects_broken_symmetry() {
        let mut t = RiemannTensor::zeros(3);
        t.data[1] = 1.0;
        assert!(CurvatureOperator::from_tensor(&t).is_err());
        assert!(CurvatureOperator::new(3, vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).is_err());
        assert!(CurvatureOperator::new(3, vec![0.0; 4]).is_err());
    }

    #[test]
    fn sphere_ricci_and_scalar() {
        for n in 2..=7 {
            let s = sphere(n).unwrap();
            let ric = s.ricci();
            for i in 0..n {
                for k in 0..n {
                    let want = if i == k { 2.0 * (n - 1) as f64 } else { 0.0 };
                    assert!((ric[i][k] - want).abs() < 1e-14);
                }
            }
            assert!((s.scalar() - 2.0 * (n * (n - 1)) as f64).abs() < 1e-12);
        }
        assert_eq!(sphere(3).unwrap().scalar(), 12.0);
    }

    #[test]
    fn bianchi_projection_is_orthogonal_idempotent() {
        for seed in 0..20 {
            let n = 3 + (seed as usize % 4);
            let r = random_symmetric(n, seed).unwrap();
            let p = r.bianchi_project();
            assert!(p.bianchi_flag());
            assert!(p.bianchi_residual() < 1e-14);
            let pp = p.bianchi_project();
            assert!(close(pp.values(), p.values(), 1e-12));
            // self-adjoint: ⟨P r, s⟩ = ⟨r, P s⟩
            let s = random_symmetric(n, seed + 1000).unwrap();
            let ps = s.bianchi_project();
            let dot = |a: &CurvatureOperator, b: &CurvatureOperator| {
                a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum::<f64>()
            };
            assert!((dot(&p, &s) - dot(&r, &ps)).abs() < 1e-12 * (1.0 + r.norm() * s.norm()));
        }
        let s = sphere(5).unwrap();
        assert!(close(s.bianchi_project().values(), s.values(), 1e-15));
    }

    #[test]
    fn every_symmetric_operator_is_bianchi_in_dimension_three() {
        let r = random_symmetric(3, 4).unwrap();
        assert!(r.bianchi_flag());
        assert!(!random_symmetric(4, 4).unwrap().bianchi_flag());
    }

    #[test]
    fn group_model_curvature() {
        let a1 = simple_algebra(TypeRank::new(crate::so_algebra::SimpleType::A, 1).unwrap()).unwrap();
        let r = bi_invariant_group(&a1).unwrap();
        let want: Vec<f64> = sphere(3).unwrap().values().iter().map(|x| x / 16.0).collect();
        assert!(close(r.values(), &want, 1e-14));
        assert!(r.bianchi_flag());
        let a2 = simple_algebra("A2".parse().unwrap()).unwrap();
        let r2 = bi_invariant_group(&a2).unwrap();
        assert!(r2.spectrum()[0] > -1e-12);
        assert!((r2.scalar() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn random_positive_is_positive() {
        for seed in 0..10 {
            let r = random_positive(4, seed, 0.1).unwrap();
            assert!(r.bianchi_flag());
            assert!((r.spectrum()[0] - 0.1).abs() < 1e-10);
        }
    }

    #[test]
    fn einstein_part_kills_traceless_ricci() {
        for n in 3..=6 {
            let r = random_curvature(n, 11).unwrap();
            let e = r.einstein_part().unwrap();
            assert!(e.bianchi_flag());
            let ric0 = e.traceless_ricci();
            assert!(ric0.iter().flatten().all(|x| x.abs() < 1e-12));
            assert!((e.scalar() - r.scalar()).abs() < 1e-10);
        }
    }

    #[test]
    fn splitting_matches_isotypic_pieces() {
        let (up, um) = four_dim_splitting().unwrap();
        let l2 = rep_standard(&Arc::new(SoBasis::new(4).unwrap()), StandardKind::Exterior(2)).unwrap();
        let pieces = isotypic_decompose(&l2, 3).unwrap();
        // exterior(2) and so(4) share the lexicographic basis
        for u in [up, um] {
            let m = Matrix::from_fn(6, 3, |a, p| C64::new(u[a][p], 0.0));
            let proj = m.matmul(&m.adjoint());
            assert!(pieces.iter().any(|p| (&p.projector - &proj).max_abs() < 1e-10));
        }
    }

    #[test]
    fn four_dim_blocks_reassemble() {
        let r = random_curvature(4, 5).unwrap();
        let b = four_dim_blocks(&r).unwrap();
        assert!(close(&b.reassemble(), r.values(), 1e-12));
        let tp: f64 = (0..3).map(|i| b.w_plus[i][i]).sum();
        let tm: f64 = (0..3).map(|i| b.w_minus[i][i]).sum();
        assert!((tp - tm).abs() < 1e-12);
        let s = four_dim_blocks(&sphere(4).unwrap()).unwrap();
        assert_eq!(s.mixed_norm(), 0.0);
        assert!(four_dim_blocks(&sphere(5).unwrap()).is_err());
        assert!(four_dim_blocks(&random_symmetric(4, 1).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let r = random_curvature(4, 9).unwrap();
        let text = curvature_to_json(&r);
        let back = curvature_from_json(&text).unwrap();
        assert_eq!(back.values(), r.values());
        let bad = text.replace("lex-upper", "lex-lower");
        assert!(matches!(curvature_from_json(&bad), Err(Error::Schema(_))));
        assert!(matches!(curvature_from_json("{\"n\":3}"), Err(Error::Schema(_))));
        let asym = r#"{"n":2,"basis":"lex-upper","normalization":"half-tensor","R":[[1.0, 2.0]]}"#;
        assert!(matches!(curvature_from_json(asym), Err(Error::Schema(_))));
    }
}
