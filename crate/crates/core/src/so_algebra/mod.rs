//! The Lie algebra so(n): an orthonormal basis, the bracket, subalgebras,
//! and compact simple Lie algebras with their root data.

pub mod roots;
pub mod simple;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{range_basis, Matrix, C64, ONE};

pub use roots::{RootSystem, Rational};
pub use simple::{simple_algebra, SimpleAlgebraData, SimpleType, TypeRank};

/// Closure and skewness tolerance for subalgebras built from user input.
pub const SUBALGEBRA_TOL: f64 = 1e-10;

/// `⟨A, B⟩ = −tr(AB)/2`; the basis `{E_ij − E_ji}` is orthonormal for it.
pub fn inner(a: &Matrix, b: &Matrix) -> f64 {
    -0.5 * a.matmul(b).trace().re
}

/// `AB − BA`.
pub fn bracket(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "bracket of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(&a.matmul(b) - &b.matmul(a))
}

/// Orthonormal basis `x_a = E_ij − E_ji` (`i < j`, lexicographic) of so(n).
#[derive(Clone, PartialEq)]
pub struct SoBasis {
    n: usize,
    elements: Vec<Matrix>,
    pairs: Vec<(usize, usize)>,
}

impl SoBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!("so(n) needs n >= 2, got {n}")));
        }
        let mut elements = Vec::with_capacity(n * (n - 1) / 2);
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let mut x = Matrix::zeros(n, n);
                x[(i, j)] = ONE;
                x[(j, i)] = -ONE;
                elements.push(x);
                pairs.push((i, j));
            }
        }
        Ok(SoBasis { n, elements, pairs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = n(n−1)/2`.
    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Index `a` of the basis element `x_ij`, `i < j`.
    pub fn index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.n);
        // number of pairs with first entry < i, plus offset
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    /// Coordinates `⟨x_a, X⟩` of a skew matrix in this basis.
    pub fn coords(&self, x: &Matrix) -> Vec<f64> {
        self.pairs.iter().map(|&(i, j)| x[(i, j)].re).collect()
    }

    /// `Σ_a c_a x_a`.
    pub fn from_coords(&self, c: &[f64]) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for (&(i, j), &v) in self.pairs.iter().zip(c) {
            m[(i, j)] = C64::new(v, 0.0);
            m[(j, i)] = C64::new(-v, 0.0);
        }
        m
    }
}

impl fmt::Debug for SoBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SoBasis(n={})", self.n)
    }
}

/// A subalgebra `h ⊂ so(n)` with an orthonormal spanning set.
#[derive(Clone, PartialEq)]
pub struct Subalgebra {
    ambient: Arc<SoBasis>,
    elements: Vec<Matrix>,
    label: String,
}

impl Subalgebra {
    /// Orthonormalizes `spanning` and checks that it is skew and closed
    /// under the bracket.
    pub fn from_spanning(ambient: Arc<SoBasis>, spanning: &[Matrix], label: &str) -> Result<Self> {
        let n = ambient.n();
        for m in spanning {
            if m.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "subalgebra element {:?} not in so({n})",
                    m.shape()
                )));
            }
            if m.skew_residual() > SUBALGEBRA_TOL * (1.0 + m.norm_fro()) || m.max_imag() > SUBALGEBRA_TOL {
                return Err(Error::InvalidArgument(
                    "subalgebra element is not a real skew-symmetric matrix".into(),
                ));
            }
        }
        let cols: Vec<Vec<C64>> = spanning
            .iter()
            .map(|m| ambient.coords(m).into_iter().map(|x| C64::new(x, 0.0)).collect())
            .collect();
        if cols.is_empty() {
            return Err(Error::InvalidArgument("empty subalgebra".into()));
        }
        let q = range_basis(&Matrix::from_columns(ambient.dim(), &cols), 1e-9);
        let elements: Vec<Matrix> = (0..q.cols())
            .map(|j| {
                let c: Vec<f64> = q.column(j).iter().map(|z| z.re).collect();
                ambient.from_coords(&c)
            })
            .collect();
        let sub = Subalgebra {
            ambient,
            elements,
            label: label.to_string(),
        };
        let closure = sub.closure_residual();
        if closure > SUBALGEBRA_TOL {
            return Err(Error::InvalidArgument(format!(
                "span is not closed under the bracket (residual {closure:e})"
            )));
        }
        Ok(sub)
    }

    /// Uses already orthonormal elements as given.
    fn from_orthonormal(ambient: Arc<SoBasis>, elements: Vec<Matrix>, label: &str) -> Self {
        Subalgebra {
            ambient,
            elements,
            label: label.to_string(),
        }
    }

    pub fn ambient(&self) -> &Arc<SoBasis> {
        &self.ambient
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Largest norm of the component of `[h_a, h_b]` orthogonal to `h`.
    pub fn closure_residual(&self) -> f64 {
        closure_residual(&self.elements)
    }
}

impl fmt::Debug for Subalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subalgebra({} in so({}), dim {})", self.label, self.ambient.n(), self.dim())
    }
}

/// The algebra a representation is defined over.
#[derive(Clone, Debug)]
pub enum Algebra {
    So(Arc<SoBasis>),
    Sub(Arc<Subalgebra>),
}

impl Algebra {
    pub fn so(n: usize) -> Result<Self> {
        Ok(Algebra::So(Arc::new(SoBasis::new(n)?)))
    }

    pub fn n(&self) -> usize {
        match self {
            Algebra::So(b) => b.n(),
            Algebra::Sub(s) => s.ambient.n(),
        }
    }

    pub fn elements(&self) -> &[Matrix] {
        match self {
            Algebra::So(b) => b.elements(),
            Algebra::Sub(s) => s.elements(),
        }
    }

    pub fn dim(&self) -> usize {
        self.elements().len()
    }

    pub fn label(&self) -> String {
        match self {
            Algebra::So(b) => format!("so({})", b.n()),
            Algebra::Sub(s) => s.label.clone(),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Algebra::So(_))
    }

    pub fn so_basis(&self) -> &Arc<SoBasis> {
        match self {
            Algebra::So(b) => b,
            Algebra::Sub(s) => &s.ambient,
        }
    }

    /// Same basis, element by element.
    pub fn same_as(&self, other: &Algebra) -> bool {
        match (self, other) {
            (Algebra::So(a), Algebra::So(b)) => a.n() == b.n(),
            (Algebra::Sub(a), Algebra::Sub(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }

    /// Structure constants `f[a][b][c] = ⟨x_c, [x_a, x_b]⟩`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<f64>>> {
        structure_constants(self.elements())
    }
}

/// Structure constants of an orthonormal family under [`inner`].
pub fn structure_constants(elements: &[Matrix]) -> Vec<Vec<Vec<f64>>> {
    let d = elements.len();
    let mut f = vec![vec![vec![0.0; d]; d]; d];
    for a in 0..d {
        for b in (a + 1)..d {
            let br = &elements[a].matmul(&elements[b]) - &elements[b].matmul(&elements[a]);
            for c in 0..d {
                let v = inner(&elements[c], &br);
                f[a][b][c] = v;
                f[b][a][c] = -v;
            }
        }
    }
    f
}

/// Largest Frobenius norm of `[x_a, x_b] − Σ_c f_abc x_c` over all pairs.
pub fn closure_residual(elements: &[Matrix]) -> f64 {
    let d = elements.len();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in (a + 1)..d {
            let br = &elements[a].matmul(&elements[b]) - &elements[b].matmul(&elements[a]);
            let mut rest = br.clone();
            for c in 0..d {
                let v = inner(&elements[c], &br);
                rest.axpy(C64::new(-v, 0.0), &elements[c]);
            }
            worst = worst.max(rest.norm_fro());
        }
    }
    worst
}

/// Largest Jacobi-identity residual over all triples of the family.
pub fn jacobi_residual(elements: &[Matrix]) -> f64 {
    let br = |a: &Matrix, b: &Matrix| &a.matmul(b) - &b.matmul(a);
    let d = elements.len();
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in (a + 1)..d {
            let ab = br(&elements[a], &elements[b]);
            for c in (b + 1)..d {
                let (x, y, z) = (&elements[a], &elements[b], &elements[c]);
                let mut s = br(x, &br(y, z));
                s += &br(y, &br(z, x));
                s += &br(z, &ab);
                worst = worst.max(s.norm_fro());
            }
        }
    }
    worst
}

/// The standard complex structure on `R^{2m}`: `e_{2k−1} ↦ e_{2k}`.
pub fn complex_structure(m: usize) -> Matrix {
    let mut j = Matrix::zeros(2 * m, 2 * m);
    for k in 0..m {
        j[(2 * k + 1, 2 * k)] = ONE;
        j[(2 * k, 2 * k + 1)] = -ONE;
    }
    j
}

/// `u(m) ⊂ so(2m)`: the `m²` skew matrices commuting with
/// [`complex_structure`].
pub fn u_subalgebra(m: usize) -> Result<Subalgebra> {
    if m < 1 {
        return Err(Error::InvalidArgument("u(m) needs m >= 1".into()));
    }
    let ambient = Arc::new(SoBasis::new(2 * m)?);
    let x = |i: usize, j: usize| -> Matrix {
        if i < j {
            ambient.elements()[ambient.index(i, j)].clone()
        } else {
            ambient.elements()[ambient.index(j, i)].scale_real(-1.0)
        }
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut elements = Vec::with_capacity(m * m);
    for k in 0..m {
        // the k-th 2x2 rotation block, oriented like J
        elements.push(x(2 * k + 1, 2 * k));
    }
    for k in 0..m {
        for l in (k + 1)..m {
            let a = &x(2 * k, 2 * l) + &x(2 * k + 1, 2 * l + 1);
            elements.push(a.scale_real(h));
            let b = &x(2 * k + 1, 2 * l) - &x(2 * k, 2 * l + 1);
            elements.push(b.scale_real(h));
        }
    }
    Ok(Subalgebra::from_orthonormal(ambient, elements, &format!("u({m})")))
}

/// `so(p) ⊕ so(n−p) ⊂ so(n)`, block diagonal.
pub fn so_diag_subalgebra(n: usize, p: usize) -> Result<Subalgebra> {
    if p == 0 || p >= n {
        return Err(Error::InvalidArgument(format!("so-diag split {p} invalid for n = {n}")));
    }
    let ambient = Arc::new(SoBasis::new(n)?);
    let elements: Vec<Matrix> = ambient
        .pairs()
        .iter()
        .zip(ambient.elements())
        .filter(|((i, j), _)| (*i < p) == (*j < p))
        .map(|(_, x)| x.clone())
        .collect();
    if elements.is_empty() {
        return Err(Error::InvalidArgument("so-diag split has no elements".into()));
    }
    Ok(Subalgebra::from_orthonormal(
        ambient,
        elements,
        &format!("so({p})+so({})", n - p),
    ))
}

/// The full algebra viewed as a subalgebra of itself.
pub fn full_subalgebra(n: usize) -> Result<Subalgebra> {
    let ambient = Arc::new(SoBasis::new(n)?);
    let elements = ambient.elements().to_vec();
    Ok(Subalgebra::from_orthonormal(ambient, elements, &format!("so({n})")))
}
