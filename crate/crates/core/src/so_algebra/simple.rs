//! Compact simple Lie algebras as explicit matrix models, with a basis
//! orthonormal for the negative Killing form and the matching root data.

use std::fmt;
use std::str::FromStr;

use super::roots::{self, RootSystem, Rational, Weight};
use super::SoBasis;
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, nullspace, Matrix, C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SimpleType {
    A,
    B,
    C,
    D,
    G,
}

/// A Cartan type with its rank, e.g. `A2` or `G2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TypeRank {
    pub kind: SimpleType,
    pub rank: usize,
}

impl TypeRank {
    pub fn new(kind: SimpleType, rank: usize) -> Result<Self> {
        let ok = match kind {
            SimpleType::A => rank >= 1,
            SimpleType::B => rank >= 1,
            SimpleType::C => rank >= 2,
            SimpleType::D => rank >= 3,
            SimpleType::G => rank == 2,
        };
        if !ok {
            return Err(Error::Unsupported(format!("{kind:?}{rank}")));
        }
        Ok(TypeRank { kind, rank })
    }

    /// Dimension of the algebra.
    pub fn dim(&self) -> usize {
        let r = self.rank;
        match self.kind {
            SimpleType::A => r * (r + 2),
            SimpleType::B | SimpleType::C => r * (2 * r + 1),
            SimpleType::D => r * (2 * r - 1),
            SimpleType::G => 14,
        }
    }
}

impl fmt::Display for TypeRank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            SimpleType::A => 'A',
            SimpleType::B => 'B',
            SimpleType::C => 'C',
            SimpleType::D => 'D',
            SimpleType::G => 'G',
        };
        write!(f, "{c}{}", self.rank)
    }
}

impl FromStr for TypeRank {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => SimpleType::A,
            Some('B') => SimpleType::B,
            Some('C') => SimpleType::C,
            Some('D') => SimpleType::D,
            Some('G') => SimpleType::G,
            _ => return Err(Error::InvalidArgument(format!("unknown algebra type '{s}'"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad rank in '{s}'")))?;
        TypeRank::new(kind, rank)
    }
}

/// A compact simple Lie algebra with a basis `{y_a}` satisfying
/// `−B(y_a, y_b) = δ_ab` for the Killing form `B`.
#[derive(Clone, Debug)]
pub struct SimpleAlgebraData {
    pub type_rank: TypeRank,
    /// `y_a` in the defining matrix model.
    pub basis: Vec<Matrix>,
    /// `f[a][b][c]` with `[y_a, y_b] = Σ_c f_abc y_c`.
    pub structure: Vec<Vec<Vec<f64>>>,
    /// `ad(y_a)` as real `dim × dim` matrices.
    pub ad: Vec<Matrix>,
    /// Killing form in the `{y_a}` basis (≈ −I).
    pub killing: Matrix,
    pub roots: RootSystem,
    /// Highest weight of the defining representation of the model.
    pub defining_weight: Weight,
}

impl SimpleAlgebraData {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank(&self) -> usize {
        self.type_rank.rank
    }

    /// `Σ_a ad(y_a)²`, which is `−I` in a Killing-orthonormal basis.
    pub fn adjoint_casimir(&self) -> Matrix {
        let d = self.dim();
        let mut c = Matrix::zeros(d, d);
        for a in &self.ad {
            c += &a.matmul(a);
        }
        c
    }

    /// `Σ_a y_a²` in the defining matrix model.
    pub fn defining_casimir(&self) -> Matrix {
        let d = self.basis[0].rows();
        let mut c = Matrix::zeros(d, d);
        for y in &self.basis {
            c += &y.matmul(y);
        }
        c
    }

    /// Largest Jacobi-identity residual of the structure constants.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim();
        let f = &self.structure;
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    for e in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += f[b][c][m] * f[a][m][e] + f[c][a][m] * f[b][m][e] + f[a][b][m] * f[c][m][e];
                        }
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }
}

/// Builds the algebra of the given type from its matrix model.
pub fn simple_algebra(tr: TypeRank) -> Result<SimpleAlgebraData> {
    let r = tr.rank;
    let (model, simple, defining_weight) = match tr.kind {
        SimpleType::A => {
            let m = r + 1;
            let mut w = vec![Rational::new(-1, m as i64); m];
            w[0] += Rational::from_integer(1);
            (su_model(m), roots::simple_roots_a(r), w)
        }
        SimpleType::B => (
            SoBasis::new(2 * r + 1)?.elements().to_vec(),
            roots::simple_roots_b(r),
            first_unit(r),
        ),
        SimpleType::C => (sp_model(r), roots::simple_roots_c(r), first_unit(r)),
        SimpleType::D => (
            SoBasis::new(2 * r)?.elements().to_vec(),
            roots::simple_roots_d(r),
            first_unit(r),
        ),
        SimpleType::G => {
            let rs = RootSystem::from_simple(roots::simple_roots_g2());
            let w = rs.highest_short_root().clone();
            (g2_model(), roots::simple_roots_g2(), w)
        }
    };
    let roots = RootSystem::from_simple(simple);
    let (basis, structure, ad, killing) = killing_orthonormalize(&model)?;
    if basis.len() != tr.dim() {
        return Err(Error::Precondition(format!(
            "{tr} model has dimension {} (expected {})",
            basis.len(),
            tr.dim()
        )));
    }
    Ok(SimpleAlgebraData {
        type_rank: tr,
        basis,
        structure,
        ad,
        killing,
        roots,
        defining_weight,
    })
}

fn first_unit(r: usize) -> Weight {
    let mut w = vec![Rational::from_integer(0); r];
    w[0] = Rational::from_integer(1);
    w
}

/// `Re tr(A* B)`.
fn real_inner(a: &Matrix, b: &Matrix) -> f64 {
    a.inner(b).re
}

/// Modified Gram–Schmidt under [`real_inner`]; drops dependent vectors.
fn gram_schmidt(vs: &[Matrix]) -> Vec<Matrix> {
    let mut out: Vec<Matrix> = Vec::new();
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            let c = real_inner(u, &w);
            w.axpy(C64::new(-c, 0.0), u);
        }
        let nrm = w.norm_fro();
        if nrm > 1e-10 * (1.0 + v.norm_fro()) {
            out.push(w.scale_real(1.0 / nrm));
        }
    }
    out
}

type Orthonormalized = (Vec<Matrix>, Vec<Vec<Vec<f64>>>, Vec<Matrix>, Matrix);

/// Rescales a spanning set of a compact matrix Lie algebra so that the
/// negative Killing form becomes the identity.
fn killing_orthonormalize(model: &[Matrix]) -> Result<Orthonormalized> {
    let b = gram_schmidt(model);
    let d = b.len();
    let coords = |z: &Matrix| -> Vec<f64> { b.iter().map(|u| real_inner(u, z)).collect() };

    // ad in the Frobenius-orthonormal basis
    let mut ad_b = vec![Matrix::zeros(d, d); d];
    for a in 0..d {
        for c in 0..d {
            let br = &b[a].matmul(&b[c]) - &b[c].matmul(&b[a]);
            for (k, v) in coords(&br).into_iter().enumerate() {
                ad_b[a][(k, c)] = C64::new(v, 0.0);
            }
        }
    }
    let mut neg_killing = Matrix::zeros(d, d);
    for a in 0..d {
        for c in a..d {
            let v = -ad_b[a].matmul(&ad_b[c]).trace().re;
            neg_killing[(a, c)] = C64::new(v, 0.0);
            neg_killing[(c, a)] = C64::new(v, 0.0);
        }
    }
    let eig = eig_hermitian(&neg_killing)?;
    if eig.min() <= 0.0 {
        return Err(Error::Precondition(
            "Killing form is not negative definite; model is not compact semisimple".into(),
        ));
    }
    // M = (−K)^{-1/2}, symmetric
    let v = eig.vectors.real_part();
    let inv_sqrt: Vec<f64> = eig.values.iter().map(|l| 1.0 / l.sqrt()).collect();
    let sqrt: Vec<f64> = eig.values.iter().map(|l| l.sqrt()).collect();
    let m = v.matmul(&Matrix::diag_real(&inv_sqrt)).matmul(&v.transpose());
    let m_inv = v.matmul(&Matrix::diag_real(&sqrt)).matmul(&v.transpose());

    let basis: Vec<Matrix> = (0..d)
        .map(|a| {
            let mut y = Matrix::zeros(b[0].rows(), b[0].cols());
            for k in 0..d {
                y.axpy(C64::new(m.re(k, a), 0.0), &b[k]);
            }
            y
        })
        .collect();

    let mut structure = vec![vec![vec![0.0; d]; d]; d];
    for a in 0..d {
        for c in (a + 1)..d {
            let br = &basis[a].matmul(&basis[c]) - &basis[c].matmul(&basis[a]);
            let cb = coords(&br);
            for e in 0..d {
                let v: f64 = (0..d).map(|k| m_inv.re(e, k) * cb[k]).sum();
                structure[a][c][e] = v;
                structure[c][a][e] = -v;
            }
        }
    }
    let ad: Vec<Matrix> = (0..d)
        .map(|a| Matrix::from_fn(d, d, |e, c| C64::new(structure[a][c][e], 0.0)))
        .collect();
    let mut killing = Matrix::zeros(d, d);
    for a in 0..d {
        for c in 0..d {
            killing[(a, c)] = C64::new(ad[a].matmul(&ad[c]).trace().re, 0.0);
        }
    }
    Ok((basis, structure, ad, killing))
}

/// Anti-Hermitian `m × m` matrices; traceless when `traceless`.
fn anti_hermitian_basis(m: usize, traceless: bool) -> Vec<Matrix> {
    let mut out = Vec::new();
    for k in 0..m {
        for l in (k + 1)..m {
            let mut a = Matrix::zeros(m, m);
            a[(k, l)] = ONE;
            a[(l, k)] = -ONE;
            out.push(a);
            let mut s = Matrix::zeros(m, m);
            s[(k, l)] = I;
            s[(l, k)] = I;
            out.push(s);
        }
    }
    if traceless {
        for k in 0..m - 1 {
            let mut h = Matrix::zeros(m, m);
            h[(k, k)] = I;
            h[(k + 1, k + 1)] = -I;
            out.push(h);
        }
    } else {
        for k in 0..m {
            let mut h = Matrix::zeros(m, m);
            h[(k, k)] = I;
            out.push(h);
        }
    }
    out
}

fn su_model(m: usize) -> Vec<Matrix> {
    anti_hermitian_basis(m, true)
}

/// Real solution space of a real-linear constraint on a real span of
/// complex matrices.
fn real_constrained_span(basis: &[Matrix], constraint: impl Fn(&Matrix) -> Matrix) -> Vec<Matrix> {
    let cols: Vec<Vec<C64>> = basis
        .iter()
        .map(|b| {
            let c = constraint(b);
            c.as_slice()
                .iter()
                .map(|z| C64::new(z.re, 0.0))
                .chain(c.as_slice().iter().map(|z| C64::new(z.im, 0.0)))
                .collect()
        })
        .collect();
    let rows = cols[0].len();
    let ns = nullspace(&Matrix::from_columns(rows, &cols), 1e-9);
    (0..ns.cols())
        .map(|j| {
            let mut x = Matrix::zeros(basis[0].rows(), basis[0].cols());
            for (k, b) in basis.iter().enumerate() {
                x.axpy(C64::new(ns[(k, j)].re, 0.0), b);
            }
            x
        })
        .collect()
}

/// `sp(r) = u(2r) ∩ sp(2r, C)`: anti-Hermitian `X` with `XᵀJ + JX = 0`.
fn sp_model(r: usize) -> Vec<Matrix> {
    let m = 2 * r;
    let mut j = Matrix::zeros(m, m);
    for k in 0..r {
        j[(k, r + k)] = ONE;
        j[(r + k, k)] = -ONE;
    }
    let basis = anti_hermitian_basis(m, false);
    real_constrained_span(&basis, |x| &x.transpose().matmul(&j) + &j.matmul(x))
}

/// Fano-plane triples `(i, i+1, i+3) mod 7` of the octonion product.
fn octonion_cross(i: usize, j: usize) -> (usize, f64) {
    const TRIPLES: [[usize; 3]; 7] = [
        [0, 1, 3],
        [1, 2, 4],
        [2, 3, 5],
        [3, 4, 6],
        [4, 5, 0],
        [5, 6, 1],
        [6, 0, 2],
    ];
    for t in TRIPLES {
        for s in 0..3 {
            let (a, b, c) = (t[s], t[(s + 1) % 3], t[(s + 2) % 3]);
            if (i, j) == (a, b) {
                return (c, 1.0);
            }
            if (i, j) == (b, a) {
                return (c, -1.0);
            }
        }
    }
    (0, 0.0)
}

/// `g_2` as the derivations of the cross product on imaginary octonions.
fn g2_model() -> Vec<Matrix> {
    let so7 = SoBasis::new(7).expect("n = 7 is valid");
    let cross = |u: &[C64], v: &[C64]| -> Vec<C64> {
        let mut out = vec![ZERO; 7];
        for i in 0..7 {
            for j in 0..7 {
                if i == j {
                    continue;
                }
                let (k, s) = octonion_cross(i, j);
                out[k] += u[i] * v[j] * s;
            }
        }
        out
    };
    let e = |i: usize| -> Vec<C64> {
        let mut v = vec![ZERO; 7];
        v[i] = ONE;
        v
    };
    let derivation_defect = |d: &Matrix| -> Matrix {
        let mut rows = Vec::new();
        for i in 0..7 {
            for j in (i + 1)..7 {
                let lhs = d.matvec(&cross(&e(i), &e(j)));
                let r1 = cross(&d.matvec(&e(i)), &e(j));
                let r2 = cross(&e(i), &d.matvec(&e(j)));
                for k in 0..7 {
                    rows.push(lhs[k] - r1[k] - r2[k]);
                }
            }
        }
        let len = rows.len();
        Matrix::from_vec(len, 1, rows)
    };
    real_constrained_span(so7.elements(), derivation_defect)
}
