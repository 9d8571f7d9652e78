//! Representations `ρ: so(n) → End(E)` stored as explicit matrix lists, the
//! functors between them, and the commutant machinery (intertwiners,
//! irreducibility, invariant forms, isotypic pieces).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, nullspace, range_basis, Matrix, C64, I, ONE, ZERO};
use crate::numerics::{projector, DEFAULT_NULL_TOL};
use crate::rng;
use crate::so_algebra::{Algebra, SoBasis, Subalgebra};

/// Homomorphism residual accepted for constructed representations.
pub const HOMOMORPHISM_TOL: f64 = 1e-10;

/// Seed for the generic algebra element used to block intertwiner equations.
const GENERIC_ELEMENT_SEED: u64 = 0x6a09_e667_f3bc_c908;

/// Default seed for splitting equal-Casimir pieces.
pub const DEFAULT_DECOMPOSE_SEED: u64 = 1;

#[derive(Clone)]
pub struct Rep {
    algebra: Algebra,
    dim: usize,
    mats: Vec<Matrix>,
    label: String,
}

impl Rep {
    pub fn new(algebra: Algebra, mats: Vec<Matrix>, label: impl Into<String>) -> Result<Self> {
        if mats.len() != algebra.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for an algebra of dimension {}",
                mats.len(),
                algebra.dim()
            )));
        }
        let dim = mats.first().map_or(0, Matrix::rows);
        if mats.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::DimensionMismatch("representation matrices differ in size".into()));
        }
        Ok(Rep {
            algebra,
            dim,
            mats,
            label: label.into(),
        })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// All generators act as zero.
    pub fn is_trivial(&self) -> bool {
        self.mats.iter().all(|m| m.max_abs() == 0.0)
    }

    /// Whether every matrix has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.mats.iter().all(|m| m.max_imag() <= 1e-12)
    }

    /// `ρ(X)` for `X = Σ c_a x_a`.
    pub fn act(&self, coeffs: &[f64]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (m, &c) in self.mats.iter().zip(coeffs) {
            if c != 0.0 {
                out.axpy(C64::new(c, 0.0), m);
            }
        }
        out
    }

    /// `max_{a,b} ‖ρ([x_a, x_b]) − [ρ(x_a), ρ(x_b)]‖_F`.
    pub fn homomorphism_residual(&self) -> f64 {
        let f = self.algebra.structure_constants();
        let d = self.mats.len();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in (a + 1)..d {
                let lhs = self.act(&f[a][b]);
                let rhs = &self.mats[a].matmul(&self.mats[b]) - &self.mats[b].matmul(&self.mats[a]);
                worst = worst.max((&lhs - &rhs).norm_fro());
            }
        }
        worst
    }

    /// `max_a ‖ρ(x_a) + ρ(x_a)*‖_F`.
    pub fn skew_residual(&self) -> f64 {
        self.mats.iter().map(Matrix::skew_residual).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Rep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep({} of {}, dim {})", self.label, self.algebra.label(), self.dim)
    }
}

/// Named representations of so(n).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardKind {
    Trivial,
    Vector,
    Adjoint,
    Exterior(usize),
    Sym(usize),
    /// Trace-free symmetric 2-tensors.
    Sym0,
}

pub fn rep_standard(basis: &Arc<SoBasis>, kind: StandardKind) -> Result<Rep> {
    let n = basis.n();
    let alg = Algebra::So(basis.clone());
    match kind {
        StandardKind::Trivial => Rep::new(alg, vec![Matrix::zeros(1, 1); basis.dim()], "trivial"),
        StandardKind::Vector => Rep::new(alg, basis.elements().to_vec(), "vector"),
        StandardKind::Adjoint => {
            let f = alg.structure_constants();
            let d = basis.dim();
            let mats = (0..d)
                .map(|a| Matrix::from_fn(d, d, |c, b| C64::new(f[a][b][c], 0.0)))
                .collect();
            Rep::new(alg, mats, "adjoint")
        }
        StandardKind::Exterior(p) => {
            if p > n {
                return Err(Error::InvalidArgument(format!("exterior({p}) needs p <= n = {n}")));
            }
            let subsets = combinations(n, p);
            let mats = basis.elements().iter().map(|x| exterior_action(x, &subsets)).collect();
            Rep::new(alg, mats, format!("exterior({p})"))
        }
        StandardKind::Sym(p) => {
            if p == 0 {
                return Err(Error::InvalidArgument("sym(p) needs p >= 1".into()));
            }
            let monomials = multisets(n, p);
            let mats = basis.elements().iter().map(|x| sym_action(x, &monomials)).collect();
            Rep::new(alg, mats, format!("sym({p})"))
        }
        StandardKind::Sym0 => {
            let sym2 = rep_standard(basis, StandardKind::Sym(2))?;
            let q = sym0_embedding(n);
            Ok(subrep(&sym2, &q)?.with_label("sym0(2)"))
        }
    }
}

/// `⊕_p Λ^p`, blocks ordered by degree and subsets lexicographically within a
/// degree (the order of [`exterior_subsets`]).
pub fn rep_exterior_full(basis: &Arc<SoBasis>) -> Result<Rep> {
    let n = basis.n();
    let parts: Vec<Rep> = (0..=n)
        .map(|p| rep_standard(basis, StandardKind::Exterior(p)))
        .collect::<Result<_>>()?;
    Ok(rep_direct_sum(&parts)?.with_label("exterior(*)"))
}

/// Index subsets of `{0..n}` by degree then lexicographically.
pub fn exterior_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..=n).flat_map(|p| combinations(n, p)).collect()
}

pub fn combinations(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Non-decreasing index tuples of length `p`, lexicographic.
fn multisets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Derivation action of `x` on `e_{i1} ∧ … ∧ e_{ip}`.
fn exterior_action(x: &Matrix, subsets: &[Vec<usize>]) -> Matrix {
    let index: HashMap<&[usize], usize> = subsets.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let d = subsets.len();
    let n = x.rows();
    let mut m = Matrix::zeros(d, d);
    for (col, s) in subsets.iter().enumerate() {
        for (slot, &i) in s.iter().enumerate() {
            for j in 0..n {
                let coef = x[(j, i)];
                if coef == ZERO || (j != i && s.contains(&j)) {
                    continue;
                }
                let mut t = s.clone();
                t[slot] = j;
                let sign = sort_with_sign(&mut t);
                m[(index[t.as_slice()], col)] += coef * sign;
            }
        }
    }
    m
}

fn sort_with_sign(v: &mut [usize]) -> f64 {
    let mut sign = 1.0;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

/// Derivation action on symmetric monomials, in the basis
/// `f_α = e^α · sqrt(p!/α!)`, orthonormal for the inner product induced
/// from the tensor power.
fn sym_action(x: &Matrix, monomials: &[Vec<usize>]) -> Matrix {
    let index: HashMap<&[usize], usize> = monomials.iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
    let d = monomials.len();
    let n = x.rows();
    let mut m = Matrix::zeros(d, d);
    for (col, mono) in monomials.iter().enumerate() {
        let mut alpha = vec![0usize; n];
        for &i in mono {
            alpha[i] += 1;
        }
        for i in 0..n {
            if alpha[i] == 0 {
                continue;
            }
            for j in 0..n {
                let coef = x[(j, i)];
                if coef == ZERO {
                    continue;
                }
                let weight = if i == j {
                    alpha[i] as f64
                } else {
                    ((alpha[i] * (alpha[j] + 1)) as f64).sqrt()
                };
                let mut t = mono.clone();
                let pos = t.iter().position(|&k| k == i).expect("index present");
                t[pos] = j;
                t.sort_unstable();
                m[(index[t.as_slice()], col)] += coef * weight;
            }
        }
    }
    m
}

/// Orthonormal basis of the trace-free part of `sym(2)`: off-diagonal
/// monomials first, then Helmert combinations of the squares.
fn sym0_embedding(n: usize) -> Matrix {
    let monomials = multisets(n, 2);
    let d = monomials.len();
    let diag_index: Vec<usize> = (0..n)
        .map(|i| monomials.iter().position(|m| m == &vec![i, i]).expect("square present"))
        .collect();
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for (k, m) in monomials.iter().enumerate() {
        if m[0] != m[1] {
            let mut v = vec![ZERO; d];
            v[k] = ONE;
            cols.push(v);
        }
    }
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        let mut v = vec![ZERO; d];
        for &idx in diag_index.iter().take(k) {
            v[idx] = C64::new(1.0 / norm, 0.0);
        }
        v[diag_index[k]] = C64::new(-(k as f64) / norm, 0.0);
        cols.push(v);
    }
    Matrix::from_columns(d, &cols)
}

/// `ρ(x)⊗1 + 1⊗σ(x)`.
pub fn rep_tensor(r1: &Rep, r2: &Rep) -> Result<Rep> {
    if !r1.algebra.same_as(&r2.algebra) {
        return Err(Error::DimensionMismatch(format!(
            "tensor product over different algebras: {} vs {}",
            r1.algebra.label(),
            r2.algebra.label()
        )));
    }
    let i1 = Matrix::identity(r1.dim);
    let i2 = Matrix::identity(r2.dim);
    let mats = r1
        .mats
        .iter()
        .zip(&r2.mats)
        .map(|(a, b)| &a.kron(&i2) + &i1.kron(b))
        .collect();
    Rep::new(r1.algebra.clone(), mats, format!("{}⊗{}", r1.label, r2.label))
}

/// `k`-fold tensor power.
pub fn rep_tensor_power(r: &Rep, k: usize) -> Result<Rep> {
    if k == 0 {
        return Err(Error::InvalidArgument("tensor power needs k >= 1".into()));
    }
    let mut out = r.clone();
    for _ in 1..k {
        out = rep_tensor(&out, r)?;
    }
    Ok(out.with_label(format!("{}^⊗{k}", r.label)))
}

/// Block-diagonal direct sum.
pub fn rep_direct_sum(reps: &[Rep]) -> Result<Rep> {
    let first = reps
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty direct sum".into()))?;
    if reps.iter().any(|r| !r.algebra.same_as(&first.algebra)) {
        return Err(Error::DimensionMismatch("direct sum over different algebras".into()));
    }
    let total: usize = reps.iter().map(Rep::dim).sum();
    let mats = (0..first.mats.len())
        .map(|a| {
            let mut m = Matrix::zeros(total, total);
            let mut off = 0;
            for r in reps {
                let block = &r.mats[a];
                for i in 0..r.dim {
                    for j in 0..r.dim {
                        m[(off + i, off + j)] = block[(i, j)];
                    }
                }
                off += r.dim;
            }
            m
        })
        .collect();
    let label = reps.iter().map(|r| r.label.as_str()).collect::<Vec<_>>().join("⊕");
    Rep::new(first.algebra.clone(), mats, label)
}

/// Dual representation `−ρᵀ`.
pub fn rep_dual(r: &Rep) -> Rep {
    let mats = r.mats.iter().map(|m| m.transpose().scale_real(-1.0)).collect();
    Rep {
        algebra: r.algebra.clone(),
        dim: r.dim,
        mats,
        label: format!("{}*", r.label),
    }
}

/// Restriction to a subalgebra of the ambient so(n).
pub fn rep_restrict(r: &Rep, h: &Arc<Subalgebra>) -> Result<Rep> {
    let basis = match r.algebra() {
        Algebra::So(b) => b,
        Algebra::Sub(_) => {
            return Err(Error::InvalidArgument(
                "restriction is defined for representations of the full so(n)".into(),
            ))
        }
    };
    if h.ambient().n() != basis.n() {
        return Err(Error::DimensionMismatch(format!(
            "subalgebra of so({}) applied to a representation of so({})",
            h.ambient().n(),
            basis.n()
        )));
    }
    let mats = h.elements().iter().map(|g| r.act(&basis.coords(g))).collect();
    Rep::new(Algebra::Sub(h.clone()), mats, format!("{}|{}", r.label, h.label()))
}

/// Restriction to an invariant subspace with orthonormal basis `q`
/// (columns): `q* ρ q`.
pub fn subrep(r: &Rep, q: &Matrix) -> Result<Rep> {
    if q.rows() != r.dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace basis has {} rows, representation has dimension {}",
            q.rows(),
            r.dim
        )));
    }
    let qh = q.adjoint();
    let mut mats = Vec::with_capacity(r.mats.len());
    for m in &r.mats {
        let mq = m.matmul(q);
        let inside = qh.matmul(&mq);
        let leak = (&mq - &q.matmul(&inside)).norm_fro();
        if leak > 1e-9 * (1.0 + m.norm_fro()) {
            return Err(Error::Precondition(format!(
                "subspace is not invariant (leak {leak:e})"
            )));
        }
        mats.push(inside);
    }
    Rep::new(r.algebra.clone(), mats, format!("{}|sub", r.label))
}

/// `Σ_a ρ(x_a)²`.
pub fn casimir(r: &Rep) -> Matrix {
    let mut c = Matrix::zeros(r.dim, r.dim);
    for m in &r.mats {
        c += &m.matmul(m);
    }
    c
}

/// Groups sorted values into runs whose consecutive gaps are at most `tol`.
fn cluster(values: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match out.last_mut() {
            Some(run) if (v - values[*run.last().expect("non-empty")]).abs() <= tol => run.push(i),
            _ => out.push(vec![i]),
        }
    }
    out
}

/// A seeded generic element of the algebra of `r`.
fn generic_coefficients(dim: usize) -> Vec<f64> {
    let mut g = rng::seeded(GENERIC_ELEMENT_SEED);
    rng::normals(&mut g, dim)
}

/// Eigenbasis of `iρ(X)` for a generic `X`, with eigenvalue clusters.
fn weight_frame(r: &Rep, coeffs: &[f64]) -> Result<(Matrix, Vec<f64>, Vec<Vec<usize>>)> {
    let x = r.act(coeffs).scale(I);
    let scale = 1.0 + x.norm_fro();
    let e = eig_hermitian(&x.hermitian_part())?;
    let clusters = cluster(&e.values, 1e-7 * scale);
    let reps = clusters.iter().map(|c| e.values[c[0]]).collect();
    Ok((e.vectors, reps, clusters))
}

/// Frobenius-orthonormal basis of `{T : σ(x_a) T = T ρ(x_a) ∀a}`, each
/// `T` of shape `r2.dim × r1.dim`.
///
/// Any intertwiner maps eigenspaces of `ρ(X)` to eigenspaces of `σ(X)` with
/// the same eigenvalue, so the unknowns are restricted to those blocks for a
/// generic `X` before the nullspace is taken.
pub fn intertwiners(r1: &Rep, r2: &Rep) -> Result<Vec<Matrix>> {
    if !r1.algebra.same_as(&r2.algebra) {
        return Err(Error::DimensionMismatch(format!(
            "intertwiners between representations of {} and {}",
            r1.algebra.label(),
            r2.algebra.label()
        )));
    }
    let (d1, d2) = (r1.dim, r2.dim);
    if d1 == 0 || d2 == 0 {
        return Ok(Vec::new());
    }
    let coeffs = generic_coefficients(r1.algebra.dim());
    let (u1, vals1, cl1) = weight_frame(r1, &coeffs)?;
    let (u2, vals2, cl2) = weight_frame(r2, &coeffs)?;
    let scale = 1.0 + vals1.iter().chain(&vals2).fold(0.0f64, |m, v| m.max(v.abs()));

    // unknown block entries (row index in r2 frame, column index in r1 frame)
    let mut params: Vec<(usize, usize)> = Vec::new();
    for (c2, &v2) in cl2.iter().zip(&vals2) {
        for (c1, &v1) in cl1.iter().zip(&vals1) {
            if (v1 - v2).abs() <= 1e-7 * scale {
                for &i in c2 {
                    for &j in c1 {
                        params.push((i, j));
                    }
                }
            }
        }
    }
    if params.is_empty() {
        return Ok(Vec::new());
    }

    // generators in the weight frames
    let u1h = u1.adjoint();
    let u2h = u2.adjoint();
    let s: Vec<Matrix> = r2.mats.iter().map(|m| u2h.matmul(m).matmul(&u2)).collect();
    let p: Vec<Matrix> = r1.mats.iter().map(|m| u1h.matmul(m).matmul(&u1)).collect();

    let block = d2 * d1;
    let rows = block * s.len();
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(params.len());
    for &(i, j) in &params {
        let mut col = vec![ZERO; rows];
        for (a, (sa, pa)) in s.iter().zip(&p).enumerate() {
            let base = a * block;
            // S_a E_ij − E_ij P_a
            for k in 0..d2 {
                col[base + k * d1 + j] += sa[(k, i)];
            }
            for l in 0..d1 {
                col[base + i * d1 + l] -= pa[(j, l)];
            }
        }
        cols.push(col);
    }
    let ns = nullspace(&Matrix::from_columns(rows, &cols), DEFAULT_NULL_TOL);
    let mut out = Vec::with_capacity(ns.cols());
    for c in 0..ns.cols() {
        let mut b = Matrix::zeros(d2, d1);
        for (k, &(i, j)) in params.iter().enumerate() {
            b[(i, j)] = ns[(k, c)];
        }
        out.push(u2.matmul(&b).matmul(&u1h));
    }
    Ok(out)
}

/// `max_a ‖σ(x_a) T − T ρ(x_a)‖_F`.
pub fn intertwining_residual(r1: &Rep, r2: &Rep, t: &Matrix) -> f64 {
    r1.mats
        .iter()
        .zip(&r2.mats)
        .map(|(a, b)| (&b.matmul(t) - &t.matmul(a)).norm_fro())
        .fold(0.0, f64::max)
}

/// Complex dimension of the commutant.
pub fn commutant_dim(r: &Rep) -> Result<usize> {
    Ok(intertwiners(r, r)?.len())
}

/// Irreducible over C: the commutant consists of scalars only.
pub fn is_irreducible(r: &Rep) -> Result<bool> {
    Ok(commutant_dim(r)? == 1)
}

/// Irreducibility over R for a real representation (`None` when the
/// matrices are not real): the only symmetric matrices in the real
/// commutant are multiples of the identity.
pub fn is_real_irreducible(r: &Rep) -> Result<Option<bool>> {
    if !r.is_real() {
        return Ok(None);
    }
    let comm = intertwiners(r, r)?;
    let d = r.dim;
    let mut cols: Vec<Vec<C64>> = Vec::new();
    for t in &comm {
        for part in [t.real_part(), t.scale(-I).real_part()] {
            let sym = (&part + &part.transpose()).scale_real(0.5);
            cols.push(sym.as_slice().to_vec());
        }
    }
    let span = range_basis(&Matrix::from_columns(d * d, &cols), 1e-8);
    Ok(Some(span.cols() == 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
}

impl Symmetry {
    pub fn sign(self) -> i32 {
        match self {
            Symmetry::Symmetric => 1,
            Symmetry::Antisymmetric => -1,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BilinearForm {
    pub matrix: Matrix,
    pub symmetry: Symmetry,
}

/// Basis of `{B : ρ(x_a)ᵀB + Bρ(x_a) = 0 ∀a}`, split into symmetric and
/// antisymmetric forms.
pub fn invariant_bilinear_forms(r: &Rep) -> Result<Vec<BilinearForm>> {
    let sols = intertwiners(r, &rep_dual(r))?;
    let d = r.dim;
    let mut out = Vec::new();
    for (sign, symmetry) in [(1.0, Symmetry::Symmetric), (-1.0, Symmetry::Antisymmetric)] {
        let cols: Vec<Vec<C64>> = sols
            .iter()
            .map(|b| {
                let mut s = b.clone();
                s.axpy(C64::new(sign, 0.0), &b.transpose());
                s.scale_real(0.5).as_slice().to_vec()
            })
            .collect();
        // intertwiners are unit-norm, so parts below this are roundoff
        if cols.iter().all(|c| crate::numerics::matrix::vnorm(c) <= 1e-9) {
            continue;
        }
        let span = range_basis(&Matrix::from_columns(d * d, &cols), 1e-8);
        for j in 0..span.cols() {
            out.push(BilinearForm {
                matrix: Matrix::from_vec(d, d, span.column(j)),
                symmetry,
            });
        }
    }
    Ok(out)
}

/// A sum of mutually isomorphic irreducible subrepresentations.
#[derive(Clone, Debug)]
pub struct IsotypicPiece {
    pub projector: Matrix,
    /// Orthonormal basis of the image, one block of columns per copy.
    pub basis: Matrix,
    pub dim: usize,
    /// Number of irreducible copies.
    pub multiplicity: usize,
    /// Eigenvalue of the Casimir `Σ ρ(x_a)²` on the piece.
    pub casimir_eigenvalue: f64,
}

impl IsotypicPiece {
    pub fn irreducible_dim(&self) -> usize {
        self.dim / self.multiplicity.max(1)
    }
}

/// Splits `r` into isotypic pieces.
///
/// Casimir eigenspaces are refined by the eigenspaces of a seeded generic
/// Hermitian element of the commutant, which yields irreducible pieces;
/// mutually isomorphic pieces are then merged.
pub fn isotypic_decompose(r: &Rep, seed: u64) -> Result<Vec<IsotypicPiece>> {
    let d = r.dim;
    let cas = casimir(r);
    let cas_scale = 1.0 + cas.norm_fro();
    let ce = eig_hermitian(&cas.hermitian_part())?;
    let cas_clusters = cluster(&ce.values, 1e-7 * cas_scale);

    let comm = intertwiners(r, r)?;
    let mut g = rng::seeded(seed);
    let coeffs = rng::normals(&mut g, 2 * comm.len());
    let mut h = Matrix::zeros(d, d);
    for (k, t) in comm.iter().enumerate() {
        let th = t.adjoint();
        h.axpy(C64::new(coeffs[2 * k], 0.0), &(t + &th));
        h.axpy(C64::new(0.0, coeffs[2 * k + 1]), &(t - &th));
    }
    let h_scale = 1.0 + h.norm_fro();

    struct Irr {
        basis: Matrix,
        casimir: f64,
    }
    let mut irreducibles: Vec<Irr> = Vec::new();
    for cl in &cas_clusters {
        let q = ce.vectors.select_columns(cl);
        let cas_value = cl.iter().map(|&i| ce.values[i]).sum::<f64>() / cl.len() as f64;
        let hc = q.adjoint().matmul(&h).matmul(&q);
        let he = eig_hermitian(&hc.hermitian_part())?;
        for sub in cluster(&he.values, 1e-7 * h_scale) {
            let basis = q.matmul(&he.vectors.select_columns(&sub));
            irreducibles.push(Irr {
                basis,
                casimir: cas_value,
            });
        }
    }

    // merge isomorphic irreducible pieces
    let subreps: Vec<Rep> = irreducibles
        .iter()
        .map(|p| subrep(r, &p.basis))
        .collect::<Result<_>>()?;
    let mut class: Vec<usize> = (0..irreducibles.len()).collect();
    for i in 0..irreducibles.len() {
        if class[i] != i {
            continue;
        }
        for j in (i + 1)..irreducibles.len() {
            if class[j] != j
                || irreducibles[j].basis.cols() != irreducibles[i].basis.cols()
                || (irreducibles[j].casimir - irreducibles[i].casimir).abs() > 1e-7 * cas_scale
            {
                continue;
            }
            if !intertwiners(&subreps[i], &subreps[j])?.is_empty() {
                class[j] = i;
            }
        }
    }
    let mut pieces = Vec::new();
    for i in 0..irreducibles.len() {
        if class[i] != i {
            continue;
        }
        let members: Vec<usize> = (0..irreducibles.len()).filter(|&j| class[j] == i).collect();
        let mut basis = irreducibles[members[0]].basis.clone();
        for &j in &members[1..] {
            basis = basis.hstack(&irreducibles[j].basis);
        }
        pieces.push(IsotypicPiece {
            projector: projector(&basis),
            dim: basis.cols(),
            basis,
            multiplicity: members.len(),
            casimir_eigenvalue: irreducibles[i].casimir,
        });
    }
    Ok(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::so_algebra::u_subalgebra;

    fn basis(n: usize) -> Arc<SoBasis> {
        Arc::new(SoBasis::new(n).unwrap())
    }

    fn assert_scalar(m: &Matrix, value: f64, tol: f64) {
        let want = Matrix::identity(m.rows()).scale_real(value);
        assert!((m - &want).max_abs() <= tol, "{m:?} is not {value}·I");
    }

    #[test]
    fn trivial_rep() {
        let r = rep_standard(&basis(3), StandardKind::Trivial).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.is_trivial());
        assert_eq!(casimir(&r), Matrix::zeros(1, 1));
        assert!(is_irreducible(&r).unwrap());
    }

    #[test]
    fn vector_rep_is_defining() {
        let b = basis(3);
        let r = rep_standard(&b, StandardKind::Vector).unwrap();
        assert_eq!(r.mats(), b.elements());
    }

    #[test]
    fn standard_reps_are_homomorphisms() {
        for n in 2..=6 {
            let b = basis(n);
            let mut kinds = vec![StandardKind::Vector, StandardKind::Adjoint, StandardKind::Sym(2), StandardKind::Sym(3)];
            for p in 0..=n {
                kinds.push(StandardKind::Exterior(p));
            }
            if n >= 2 {
                kinds.push(StandardKind::Sym0);
            }
            for k in kinds {
                let r = rep_standard(&b, k).unwrap();
                assert!(r.homomorphism_residual() <= HOMOMORPHISM_TOL, "{k:?} n={n}");
                assert!(r.skew_residual() <= 1e-12, "{k:?} n={n}");
            }
        }
    }

    #[test]
    fn standard_dimensions() {
        let b = basis(4);
        assert_eq!(rep_standard(&b, StandardKind::Exterior(2)).unwrap().dim(), 6);
        assert_eq!(rep_standard(&b, StandardKind::Sym(2)).unwrap().dim(), 10);
        assert_eq!(rep_standard(&b, StandardKind::Sym0).unwrap().dim(), 9);
        assert_eq!(rep_exterior_full(&b).unwrap().dim(), 16);
        assert!(rep_standard(&b, StandardKind::Exterior(5)).is_err());
        assert!(rep_standard(&b, StandardKind::Sym(0)).is_err());
    }

    #[test]
    fn vector_casimir() {
        for n in 2..=7 {
            let r = rep_standard(&basis(n), StandardKind::Vector).unwrap();
            // each index lies in n − 1 basis elements, each contributing −1
            assert_scalar(&casimir(&r), -((n - 1) as f64), 1e-14);
        }
    }

    #[test]
    fn casimir_commutes_with_generators() {
        let r = rep_standard(&basis(5), StandardKind::Sym(2)).unwrap();
        let c = casimir(&r);
        for m in r.mats() {
            let comm = &c.matmul(m) - &m.matmul(&c);
            assert!(comm.norm_fro() <= 1e-10 * c.norm_fro());
        }
    }

    #[test]
    fn tensor_with_trivial() {
        let b = basis(3);
        let t = rep_standard(&b, StandardKind::Trivial).unwrap();
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let tv = rep_tensor(&t, &v).unwrap();
        assert_eq!(tv.mats(), v.mats());
    }

    #[test]
    fn vector_squared_casimir_spectrum() {
        for n in 3..=5 {
            let b = basis(n);
            let v = rep_standard(&b, StandardKind::Vector).unwrap();
            let vv = rep_tensor(&v, &v).unwrap();
            let mut want: Vec<f64> = Vec::new();
            for k in [StandardKind::Exterior(2), StandardKind::Sym0, StandardKind::Trivial] {
                let r = rep_standard(&b, k).unwrap();
                want.extend(eig_hermitian(&casimir(&r)).unwrap().values);
            }
            want.sort_by(f64::total_cmp);
            let got = eig_hermitian(&casimir(&vv)).unwrap().values;
            assert_eq!(got.len(), want.len());
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() <= 1e-9, "n={n}: {g} vs {w}");
            }
        }
    }

    #[test]
    fn schur_and_commutants() {
        for n in 3..=5 {
            let v = rep_standard(&basis(n), StandardKind::Vector).unwrap();
            assert_eq!(commutant_dim(&v).unwrap(), 1);
        }
        let l2 = rep_standard(&basis(4), StandardKind::Exterior(2)).unwrap();
        assert_eq!(commutant_dim(&l2).unwrap(), 2);
        assert!(!is_irreducible(&l2).unwrap());
        assert_eq!(is_real_irreducible(&l2).unwrap(), Some(false));
        // so(2) on R² is irreducible over R but not over C
        let v2 = rep_standard(&basis(2), StandardKind::Vector).unwrap();
        assert!(!is_irreducible(&v2).unwrap());
        assert_eq!(is_real_irreducible(&v2).unwrap(), Some(true));
    }

    #[test]
    fn intertwiners_satisfy_equation() {
        let b = basis(4);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let l1 = rep_standard(&b, StandardKind::Exterior(1)).unwrap();
        let l3 = rep_standard(&b, StandardKind::Exterior(3)).unwrap();
        let ts = intertwiners(&v, &l3).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(intertwining_residual(&v, &l3, &ts[0]) < 1e-10);
        assert_eq!(intertwiners(&v, &l1).unwrap().len(), 1);
        let l2 = rep_standard(&b, StandardKind::Exterior(2)).unwrap();
        assert!(intertwiners(&v, &l2).unwrap().is_empty());
    }

    #[test]
    fn vector_invariant_form_is_identity() {
        let v = rep_standard(&basis(4), StandardKind::Vector).unwrap();
        let forms = invariant_bilinear_forms(&v).unwrap();
        assert_eq!(forms.len(), 1);
        assert_eq!(forms[0].symmetry, Symmetry::Symmetric);
        let b = &forms[0].matrix;
        let want = Matrix::identity(4).scale(b[(0, 0)]);
        assert!((b - &want).max_abs() < 1e-12);
    }

    #[test]
    fn restriction_to_full_is_identity() {
        let b = basis(3);
        let r = rep_standard(&b, StandardKind::Sym(2)).unwrap();
        let full = Arc::new(crate::so_algebra::full_subalgebra(3).unwrap());
        let rr = rep_restrict(&r, &full).unwrap();
        assert_eq!(rr.mats(), r.mats());
    }

    #[test]
    fn restriction_to_u2() {
        let u2 = Arc::new(u_subalgebra(2).unwrap());
        let v = rep_standard(u2.ambient(), StandardKind::Vector).unwrap();
        let vr = rep_restrict(&v, &u2).unwrap();
        assert_eq!(vr.dim(), 4);
        assert!(vr.homomorphism_residual() <= HOMOMORPHISM_TOL);
        let bad = Arc::new(u_subalgebra(1).unwrap());
        assert!(rep_restrict(&v, &bad).is_err());
    }

    #[test]
    fn decompose_exterior2_so4() {
        let l2 = rep_standard(&basis(4), StandardKind::Exterior(2)).unwrap();
        let pieces = isotypic_decompose(&l2, DEFAULT_DECOMPOSE_SEED).unwrap();
        let mut dims: Vec<usize> = pieces.iter().map(|p| p.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![3, 3]);
        check_projectors(&pieces, 6);
    }

    #[test]
    fn decompose_exterior2_under_u2() {
        let u2 = Arc::new(u_subalgebra(2).unwrap());
        let l2 = rep_standard(u2.ambient(), StandardKind::Exterior(2)).unwrap();
        let r = rep_restrict(&l2, &u2).unwrap();
        let pieces = isotypic_decompose(&r, DEFAULT_DECOMPOSE_SEED).unwrap();
        let mut dims: Vec<usize> = pieces.iter().map(|p| p.dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 1, 3]);
        check_projectors(&pieces, 6);
        // the Kähler form e₁∧e₂ + e₃∧e₄ spans a trivial piece
        let mut omega = vec![ZERO; 6];
        omega[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        omega[5] = omega[0];
        let hit: Vec<_> = pieces
            .iter()
            .filter(|p| crate::numerics::matrix::vnorm(&p.projector.matvec(&omega)) > 0.999)
            .collect();
        assert_eq!(hit.len(), 1);
        assert_eq!(hit[0].dim, 1);
        assert!(hit[0].casimir_eigenvalue.abs() < 1e-12);
    }

    #[test]
    fn isotypic_merges_copies() {
        let b = basis(3);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let vv = rep_direct_sum(&[v.clone(), v]).unwrap();
        let pieces = isotypic_decompose(&vv, 7).unwrap();
        assert_eq!(pieces.len(), 1);
        assert_eq!(pieces[0].multiplicity, 2);
        assert_eq!(pieces[0].irreducible_dim(), 3);
    }

    fn check_projectors(pieces: &[IsotypicPiece], d: usize) {
        let mut total = Matrix::zeros(d, d);
        for (i, p) in pieces.iter().enumerate() {
            let pp = p.projector.matmul(&p.projector);
            assert!((&pp - &p.projector).max_abs() < 1e-10);
            assert!(p.projector.hermitian_residual() < 1e-10);
            for q in &pieces[i + 1..] {
                assert!(p.projector.matmul(&q.projector).max_abs() < 1e-10);
            }
            total += &p.projector;
        }
        assert!((&total - &Matrix::identity(d)).max_abs() < 1e-10);
    }
}
