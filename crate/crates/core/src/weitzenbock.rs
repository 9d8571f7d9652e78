//! The curvature endomorphism `K = Σ R_ab ρ(x_a) ρ(x_b)`, the twisted term of
//! a tensor product, Laplacian presets `tK`, the projection-lemma verifier
//! and the positivity analysis.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curvature::CurvatureOperator;
use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, lanczos_extremes, Matrix, C64, ONE, ZERO};
use crate::report::{curvature_digest, matrix_digest, CheckReport, Inputs};
use crate::representations::{
    is_irreducible, is_real_irreducible, rep_standard, rep_tensor, rep_tensor_power, Rep, StandardKind,
};
use crate::so_algebra::{Algebra, SoBasis};
use crate::spin::{clifford_symbol_degree, rep_half_spin, rep_spin};

/// Relative self-adjointness tolerance for `K`.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;
/// Projection-lemma tolerance up to dimension 256 with `k ≤ 2`.
pub const LEMMA_TOL: f64 = 1e-9;
/// Projection-lemma tolerance for the 256-dimensional `k = 4` case.
pub const LEMMA_TOL_LARGE: f64 = 1e-8;
/// Invariance tolerance for lemma preconditions.
pub const PRECONDITION_TOL: f64 = 1e-9;
/// Largest representation searched for converse counterexamples.
pub const SEARCH_DIM_CAP: usize = 4096;
/// Above this dimension the search uses Lanczos instead of dense Jacobi.
const DENSE_LIMIT: usize = 256;
const LANCZOS_STEPS: usize = 100;
const LANCZOS_SEED: u64 = 0x5bd1_e995;

#[derive(Clone, Debug)]
pub struct CurvatureEndomorphism {
    pub rep_label: String,
    pub matrix: Matrix,
    /// Ascending eigenvalues.
    pub spectrum: Vec<f64>,
    pub self_adjoint_residual: f64,
}

fn check_basis(r: &CurvatureOperator, rep: &Rep) -> Result<()> {
    match rep.algebra() {
        Algebra::So(b) if b.n() == r.n() => Ok(()),
        Algebra::So(b) => Err(Error::DimensionMismatch(format!(
            "curvature for n = {} with a representation of so({})",
            r.n(),
            b.n()
        ))),
        Algebra::Sub(_) => Err(Error::DimensionMismatch(
            "K needs a representation of the full so(n), not of a subalgebra".into(),
        )),
    }
}

/// `M_a = Σ_b R_ab ρ(x_b)`.
fn contracted(r: &CurvatureOperator, rep: &Rep) -> Vec<Matrix> {
    let big = r.size();
    (0..big)
        .map(|a| {
            let mut m = Matrix::zeros(rep.dim(), rep.dim());
            for (b, rb) in rep.mats().iter().enumerate() {
                let c = r.get(a, b);
                if c != 0.0 {
                    m.axpy(C64::new(c, 0.0), rb);
                }
            }
            m
        })
        .collect()
}

/// `K` as a bare matrix.
pub fn k_matrix(r: &CurvatureOperator, rep: &Rep) -> Result<Matrix> {
    check_basis(r, rep)?;
    let d = rep.dim();
    let mut k = Matrix::zeros(d, d);
    for (ra, ma) in rep.mats().iter().zip(contracted(r, rep)) {
        k += &ra.matmul(&ma);
    }
    Ok(k)
}

/// `K = Σ_{a,b} R_ab ρ(x_a) ρ(x_b)` with its spectrum.
pub fn k_term(r: &CurvatureOperator, rep: &Rep) -> Result<CurvatureEndomorphism> {
    let k = k_matrix(r, rep)?;
    let resid = k.hermitian_residual();
    if resid > SELF_ADJOINT_TOL * (1.0 + k.norm_fro()) {
        return Err(Error::NotHermitian {
            residual: resid,
            tolerance: SELF_ADJOINT_TOL * (1.0 + k.norm_fro()),
        });
    }
    let spectrum = eig_hermitian(&k.hermitian_part())?.values;
    Ok(CurvatureEndomorphism {
        rep_label: rep.label().to_string(),
        matrix: k,
        spectrum,
        self_adjoint_residual: resid,
    })
}

/// Named constants `t` in `Δ = ∇*∇ + tK`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    SpinorDirac,
    Hodge,
    Lichnerowicz,
    Killing,
    CurvatureTensor,
}

impl Preset {
    pub const ALL: [Preset; 5] = [
        Preset::SpinorDirac,
        Preset::Hodge,
        Preset::Lichnerowicz,
        Preset::Killing,
        Preset::CurvatureTensor,
    ];

    pub fn t(self) -> f64 {
        match self {
            Preset::SpinorDirac => -4.0,
            Preset::Hodge | Preset::Lichnerowicz => -2.0,
            Preset::Killing => 2.0,
            Preset::CurvatureTensor => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::SpinorDirac => "spinor_dirac",
            Preset::Hodge => "hodge",
            Preset::Lichnerowicz => "lichnerowicz",
            Preset::Killing => "killing",
            Preset::CurvatureTensor => "curvature_tensor",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Laplacian preset '{s}'")))
    }
}

/// Parses either a number or a preset name.
pub fn parse_t(s: &str) -> Result<f64> {
    match s.trim().parse::<f64>() {
        Ok(t) if t.is_finite() => Ok(t),
        Ok(_) => Err(Error::InvalidArgument(format!("t must be finite, got '{s}'"))),
        Err(_) => Ok(s.parse::<Preset>()?.t()),
    }
}

/// `t·K`.
pub fn laplacian_curvature(r: &CurvatureOperator, rep: &Rep, t: f64) -> Result<Matrix> {
    Ok(k_matrix(r, rep)?.scale_real(t))
}

/// `−4 Σ_a (ρ(x_a) ⊗ 1) · M_a` where `M_a = Σ_b R_ab τ(x_b)` and `τ` is the
/// full tensor representation whose first factor is `first`.
fn first_factor_term(r: &CurvatureOperator, first: &Rep, total: &Rep) -> Result<Matrix> {
    check_basis(r, first)?;
    check_basis(r, total)?;
    let rest = total.dim() / first.dim();
    let id = Matrix::identity(rest);
    let mut w = Matrix::zeros(total.dim(), total.dim());
    for (ra, ma) in first.mats().iter().zip(contracted(r, total)) {
        w += &ra.kron(&id).matmul(&ma);
    }
    Ok(w.scale_real(-4.0))
}

/// `W = −4 Σ R_ab (ρ(x_a)ρ(x_b) ⊗ 1 + ρ(x_a) ⊗ σ(x_b))` on `E_ρ ⊗ E_σ`.
pub fn twisted_term(r: &CurvatureOperator, rho: &Rep, sigma: &Rep) -> Result<Matrix> {
    let total = rep_tensor(rho, sigma)?;
    first_factor_term(r, rho, &total)
}

/// The `k`-factor version on `E_ρ^{⊗k}`:
/// `−4 Σ R_ab [ρ_aρ_b ⊗ 1 + ρ_a ⊗ (ρ_b ⊗ 1 + 1 ⊗ ρ_b ⊗ 1 + …)]`.
pub fn twisted_term_k(r: &CurvatureOperator, rho: &Rep, k: usize) -> Result<Matrix> {
    let total = rep_tensor_power(rho, k)?;
    first_factor_term(r, rho, &total)
}

/// Permutation `π` of `k` tensor factors: the factor in slot `j` moves to
/// slot `π[j]`.
pub type Permutation = Vec<usize>;

fn validate_permutation(p: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if p.len() != k || p.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
        return Err(Error::InvalidArgument(format!("{p:?} is not a permutation of {k} letters")));
    }
    Ok(())
}

/// Whether the group generated by `gens` acts transitively on `{0..k}`.
pub fn is_transitive(gens: &[Permutation], k: usize) -> bool {
    let mut seen = vec![false; k];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for g in gens {
            let y = g[x];
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Applies a factor permutation to a vector of `(C^d)^{⊗k}`.
pub fn permute_factors(v: &[C64], d: usize, k: usize, perm: &[usize]) -> Vec<C64> {
    let mut out = vec![ZERO; v.len()];
    let mut digits = vec![0usize; k];
    let mut moved = vec![0usize; k];
    for (idx, &x) in v.iter().enumerate() {
        let mut rem = idx;
        for j in (0..k).rev() {
            digits[j] = rem % d;
            rem /= d;
        }
        for j in 0..k {
            moved[perm[j]] = digits[j];
        }
        let target = moved.iter().fold(0, |acc, &i| acc * d + i);
        out[target] = x;
    }
    out
}

/// A subspace `E ⊂ V^{⊗k}` of the spin representation's tensor power with a
/// group of factor permutations fixing it pointwise.
#[derive(Clone, Debug)]
pub struct LemmaSetup {
    pub n: usize,
    pub k: usize,
    pub label: String,
    /// Orthonormal basis of `E` (columns).
    pub basis: Matrix,
    pub generators: Vec<Permutation>,
    factor: Rep,
    power: Rep,
}

impl LemmaSetup {
    /// Validates the preconditions: `E` invariant under the spin action,
    /// every generator fixing `E` pointwise, and the generated group
    /// transitive on the factors.
    pub fn new(n: usize, k: usize, basis: Matrix, generators: Vec<Permutation>, label: &str) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidArgument("lemma needs k >= 1".into()));
        }
        let so = Arc::new(SoBasis::new(n)?);
        let factor = rep_spin(&so)?;
        let power = rep_tensor_power(&factor, k)?;
        if basis.rows() != power.dim() {
            return Err(Error::DimensionMismatch(format!(
                "subspace lives in dimension {}, spin tensor power has dimension {}",
                basis.rows(),
                power.dim()
            )));
        }
        let ortho = (&basis.adjoint().matmul(&basis) - &Matrix::identity(basis.cols())).max_abs();
        if ortho > 1e-10 {
            return Err(Error::Precondition(format!("subspace basis is not orthonormal ({ortho:e})")));
        }
        for g in &generators {
            validate_permutation(g, k)?;
        }
        let qh = basis.adjoint();
        for (a, m) in power.mats().iter().enumerate() {
            let mq = m.matmul(&basis);
            let leak = (&mq - &basis.matmul(&qh.matmul(&mq))).norm_fro();
            if leak > PRECONDITION_TOL * (1.0 + m.norm_fro()) {
                return Err(Error::Precondition(format!(
                    "subspace is not invariant under the spin action (generator {a}, leak {leak:e})"
                )));
            }
        }
        let d = factor.dim();
        for g in &generators {
            for c in 0..basis.cols() {
                let col = basis.column(c);
                let moved = permute_factors(&col, d, k, g);
                let diff = moved.iter().zip(&col).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
                if diff > PRECONDITION_TOL {
                    return Err(Error::Precondition(format!(
                        "permutation {g:?} does not fix the subspace pointwise (deviation {diff:e})"
                    )));
                }
            }
        }
        if !is_transitive(&generators, k) {
            return Err(Error::Precondition(format!(
                "permutations {generators:?} do not act transitively on {k} factors"
            )));
        }
        Ok(LemmaSetup {
            n,
            k,
            label: label.to_string(),
            basis,
            generators,
            factor,
            power,
        })
    }

    /// Same as [`LemmaSetup::new`] with `E` given by an orthogonal projector.
    pub fn from_projector(n: usize, k: usize, projector: &Matrix, generators: Vec<Permutation>, label: &str) -> Result<Self> {
        let resid = (&projector.matmul(projector) - projector).max_abs().max(projector.hermitian_residual());
        if resid > 1e-9 {
            return Err(Error::Precondition(format!("not an orthogonal projector (residual {resid:e})")));
        }
        let e = eig_hermitian(&projector.hermitian_part())?;
        let keep: Vec<usize> = (0..e.values.len()).filter(|&i| e.values[i] > 0.5).collect();
        Self::new(n, k, e.vectors.select_columns(&keep), generators, label)
    }

    /// `E = Sym²V ⊂ V ⊗ V`, `Γ = {id, (12)}`.
    pub fn sym2_spin(n: usize) -> Result<Self> {
        let d = 1usize << (n / 2);
        let mut cols = Vec::new();
        for i in 0..d {
            for j in i..d {
                let mut v = vec![ZERO; d * d];
                if i == j {
                    v[i * d + i] = ONE;
                } else {
                    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    v[i * d + j] = h;
                    v[j * d + i] = h;
                }
                cols.push(v);
            }
        }
        Self::new(n, 2, Matrix::from_columns(d * d, &cols), vec![vec![1, 0]], "sym2-spin")
    }

    /// `E = V ⊗ V`, `Γ = {id, (12)}`; violates the pointwise-fixing
    /// precondition on `Λ²V`.
    pub fn full_square_spin(n: usize) -> Result<Self> {
        let d = 1usize << (n / 2);
        Self::new(n, 2, Matrix::identity(d * d), vec![vec![1, 0]], "full-square-spin")
    }

    /// `n = 4`, `k = 4`: `E` is the image of `Sym²(Λ²)` under `J ⊗ J`, with
    /// `J: Λ² → V ⊗ V` the degree-2 Clifford symbol, and
    /// `Γ = ⟨(12)(34), (13)(24)⟩`.
    pub fn curvature_tensor_spin4() -> Result<Self> {
        let j = clifford_symbol_degree(4, 2)?;
        let jj = j.kron(&j);
        let m = j.cols();
        let mut cols = Vec::new();
        for a in 0..m {
            for b in a..m {
                let mut v = vec![ZERO; m * m];
                if a == b {
                    v[a * m + a] = ONE;
                } else {
                    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                    v[a * m + b] = h;
                    v[b * m + a] = h;
                }
                cols.push(v);
            }
        }
        let sym = Matrix::from_columns(m * m, &cols);
        Self::new(
            4,
            4,
            jj.matmul(&sym),
            vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
            "curvature-tensor-spin4",
        )
    }

    pub fn t(&self) -> f64 {
        -4.0 / self.k as f64
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn tolerance(&self) -> f64 {
        if self.power.dim() > 64 {
            LEMMA_TOL_LARGE
        } else {
            LEMMA_TOL
        }
    }
}

/// Restrictions `Q*KQ` and `Q*WQ` of the lemma's two operators to `E`.
pub fn lemma_blocks(r: &CurvatureOperator, setup: &LemmaSetup) -> Result<(Matrix, Matrix)> {
    if r.n() != setup.n {
        return Err(Error::DimensionMismatch(format!(
            "curvature for n = {} with a lemma setup for n = {}",
            r.n(),
            setup.n
        )));
    }
    let q = &setup.basis;
    let qh = q.adjoint();
    let rest = Matrix::identity(setup.power.dim() / setup.factor.dim());
    let mut kq = Matrix::zeros(q.rows(), q.cols());
    let mut wq = Matrix::zeros(q.rows(), q.cols());
    for (a, ma) in contracted(r, &setup.power).iter().enumerate() {
        let maq = ma.matmul(q);
        kq += &setup.power.mats()[a].matmul(&maq);
        wq += &setup.factor.mats()[a].kron(&rest).matmul(&maq);
    }
    Ok((qh.matmul(&kq), qh.matmul(&wq).scale_real(-4.0)))
}

/// Verifies `P_E K P_E = −(k/4) P_E W P_E`, reporting the relative residual
/// `‖Q*(K + (k/4)W)Q‖_F / (1 + ‖Q*KQ‖_F)`.
pub fn lemma_check(r: &CurvatureOperator, setup: &LemmaSetup) -> Result<CheckReport> {
    let (k, w) = lemma_blocks(r, setup)?;
    let diff = &k + &w.scale_real(setup.k as f64 / 4.0);
    let residual = diff.norm_fro() / (1.0 + k.norm_fro());
    let spectrum = eig_hermitian(&k.hermitian_part())?.values;
    let inputs = Inputs::default()
        .with_digest("curvature", curvature_digest(r))
        .with_digest("subspace", matrix_digest(&setup.basis));
    Ok(CheckReport::residual_check(format!("lemma:k{}", setup.k), inputs, residual, setup.tolerance())
        .with_spectrum(spectrum)
        .with_details(serde_json::json!({
            "setup": setup.label,
            "n": setup.n,
            "k": setup.k,
            "t": setup.t(),
            "subspace_dim": setup.dim(),
            "ambient_dim": setup.power.dim(),
            "generators": setup.generators,
            "bianchi": r.bianchi_flag(),
        })))
}

/// A representation in the positivity family with its irreducibility flags.
#[derive(Clone, Debug)]
pub struct FamilyEntry {
    pub rep: Rep,
    pub irreducible: bool,
    pub real_irreducible: Option<bool>,
}

impl FamilyEntry {
    pub fn new(rep: Rep) -> Result<Self> {
        Ok(FamilyEntry {
            irreducible: is_irreducible(&rep)?,
            real_irreducible: is_real_irreducible(&rep)?,
            rep,
        })
    }
}

/// Vector, `Λ^p` for `2 ≤ p < n/2`, trace-free `Sym²`, spin (half-spins
/// for even `n`) and adjoint.
pub fn default_family(n: usize) -> Result<Vec<FamilyEntry>> {
    let b = Arc::new(SoBasis::new(n)?);
    let mut reps = vec![rep_standard(&b, StandardKind::Vector)?];
    for p in 2..n {
        if 2 * p < n {
            reps.push(rep_standard(&b, StandardKind::Exterior(p))?);
        }
    }
    reps.push(rep_standard(&b, StandardKind::Sym0)?);
    if n.is_multiple_of(2) {
        reps.push(rep_half_spin(&b, true)?);
        reps.push(rep_half_spin(&b, false)?);
    } else {
        reps.push(rep_spin(&b)?);
    }
    reps.push(rep_standard(&b, StandardKind::Adjoint)?);
    reps.into_iter().map(FamilyEntry::new).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Definiteness {
    Positive,
    SemiDefinite,
    Indefinite,
}

fn classify(min: f64, tol: f64) -> Definiteness {
    if min > tol {
        Definiteness::Positive
    } else if min >= -tol {
        Definiteness::SemiDefinite
    } else {
        Definiteness::Indefinite
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityEntry {
    pub label: String,
    pub dim: usize,
    pub irreducible: bool,
    pub real_irreducible: Option<bool>,
    pub trivial: bool,
    /// Smallest eigenvalue of `−K`.
    pub min_neg_k: f64,
    pub verdict: Definiteness,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub label: String,
    pub dim: usize,
    /// `dense` or `lanczos`.
    pub method: String,
    /// Largest eigenvalue of `K` found (a lower bound under Lanczos).
    pub max_k: f64,
}

/// Finite search for a representation on which `−K` fails to be positive.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSearch {
    pub dim_cap: usize,
    pub searched: Vec<SearchEntry>,
    pub counterexample: Option<SearchEntry>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub curvature_digest: String,
    pub r_spectrum: Vec<f64>,
    pub tolerance: f64,
    pub curvature_positive: bool,
    pub entries: Vec<PositivityEntry>,
    /// `Some(holds)` when `R ≻ 0`: every nontrivial irreducible entry has
    /// `−K ≻ 0`.
    pub forward: Option<bool>,
    pub verdict: String,
    pub search: Option<CounterexampleSearch>,
}

impl PositivityReport {
    /// Gating result: the forward implication, when it applies.
    pub fn pass(&self) -> bool {
        self.forward != Some(false)
    }
}

/// `−K` on each family member; when `R` has a negative eigenvalue, also a
/// capped search over the family, its pairwise tensor products and tensor
/// powers of the vector representation.
pub fn positivity_report(r: &CurvatureOperator, family: &[FamilyEntry], tol: f64) -> Result<PositivityReport> {
    if family.is_empty() {
        return Err(Error::InvalidArgument("positivity needs at least one representation".into()));
    }
    let r_spectrum = r.spectrum();
    let r_min = r_spectrum[0];
    let mut entries = Vec::with_capacity(family.len());
    for f in family {
        let k = k_term(r, &f.rep)?;
        let min_neg_k = -k.spectrum.last().copied().unwrap_or(0.0);
        entries.push(PositivityEntry {
            label: f.rep.label().to_string(),
            dim: f.rep.dim(),
            irreducible: f.irreducible,
            real_irreducible: f.real_irreducible,
            trivial: f.rep.is_trivial(),
            min_neg_k,
            verdict: classify(min_neg_k, tol),
        });
    }
    let curvature_positive = r_min > tol;
    let forward = curvature_positive.then(|| {
        entries
            .iter()
            .filter(|e| e.irreducible && !e.trivial)
            .all(|e| e.verdict == Definiteness::Positive)
    });
    let search = if r_min < -tol {
        Some(counterexample_search(r, family, tol)?)
    } else {
        None
    };
    let verdict = match (&forward, &search) {
        (Some(true), _) => "positive curvature operator; -K positive on every nontrivial irreducible entry".to_string(),
        (Some(false), _) => "positive curvature operator but -K not positive on some irreducible entry".to_string(),
        (None, Some(s)) => s.message.clone(),
        (None, None) => "semi-definite, vanishing predicts parallel sections only".to_string(),
    };
    Ok(PositivityReport {
        curvature_digest: curvature_digest(r),
        r_spectrum,
        tolerance: tol,
        curvature_positive,
        entries,
        forward,
        verdict,
        search,
    })
}

/// Generator action of a tensor product of representations, applied factor
/// by factor without forming the product matrices.
struct TensorAction<'a> {
    factors: Vec<&'a Rep>,
    dim: usize,
}

impl<'a> TensorAction<'a> {
    fn new(factors: Vec<&'a Rep>) -> Self {
        let dim = factors.iter().map(|f| f.dim()).product();
        TensorAction { factors, dim }
    }

    fn label(&self) -> String {
        self.factors.iter().map(|f| f.label()).collect::<Vec<_>>().join("⊗")
    }

    /// `τ(x_a) v`.
    fn generator(&self, a: usize, v: &[C64]) -> Vec<C64> {
        let mut out = vec![ZERO; self.dim];
        let mut after = self.dim;
        for f in &self.factors {
            let d = f.dim();
            after /= d;
            let stride = after;
            let block = d * stride;
            let m = &f.mats()[a];
            for base in (0..self.dim).step_by(block) {
                for row in 0..d {
                    for col in 0..d {
                        let c = m[(row, col)];
                        if c == ZERO {
                            continue;
                        }
                        let (o, i) = (base + row * stride, base + col * stride);
                        for t in 0..stride {
                            out[o + t] += c * v[i + t];
                        }
                    }
                }
            }
        }
        out
    }

    /// `K v = Σ_a τ_a Σ_b R_ab τ_b v`.
    fn k_apply(&self, r: &CurvatureOperator, v: &[C64]) -> Vec<C64> {
        let big = r.size();
        let tb: Vec<Vec<C64>> = (0..big).map(|b| self.generator(b, v)).collect();
        let mut out = vec![ZERO; self.dim];
        for a in 0..big {
            let mut w = vec![ZERO; self.dim];
            for (b, t) in tb.iter().enumerate() {
                let c = r.get(a, b);
                if c != 0.0 {
                    w.iter_mut().zip(t).for_each(|(x, y)| *x += y * c);
                }
            }
            let tw = self.generator(a, &w);
            out.iter_mut().zip(tw).for_each(|(x, y)| *x += y);
        }
        out
    }
}

fn counterexample_search(r: &CurvatureOperator, family: &[FamilyEntry], tol: f64) -> Result<CounterexampleSearch> {
    let n = r.n();
    let vector = rep_standard(&Arc::new(SoBasis::new(n)?), StandardKind::Vector)?;
    let mut candidates: Vec<Vec<&Rep>> = family.iter().map(|f| vec![&f.rep]).collect();
    for i in 0..family.len() {
        for j in i..family.len() {
            if family[i].rep.dim() * family[j].rep.dim() <= SEARCH_DIM_CAP {
                candidates.push(vec![&family[i].rep, &family[j].rep]);
            }
        }
    }
    let mut power = 3;
    while n.pow(power as u32) <= SEARCH_DIM_CAP {
        candidates.push(vec![&vector; power]);
        power += 1;
    }

    let mut searched = Vec::new();
    let mut counterexample = None;
    for factors in candidates {
        let action = TensorAction::new(factors);
        let (method, max_k) = if action.dim <= DENSE_LIMIT {
            let mut rep = action.factors[0].clone();
            for f in &action.factors[1..] {
                rep = rep_tensor(&rep, f)?;
            }
            ("dense", eig_hermitian(&k_matrix(r, &rep)?.hermitian_part())?.max())
        } else {
            let bounds = lanczos_extremes(|v| action.k_apply(r, v), action.dim, LANCZOS_STEPS, LANCZOS_SEED);
            ("lanczos", bounds.max)
        };
        let entry = SearchEntry {
            label: action.label(),
            dim: action.dim,
            method: method.into(),
            max_k,
        };
        if max_k > tol && counterexample.is_none() {
            counterexample = Some(entry.clone());
        }
        searched.push(entry);
    }
    let message = match &counterexample {
        Some(c) => format!(
            "counterexample: K has eigenvalue {:.6e} > 0 on {} (dimension {})",
            c.max_k, c.label, c.dim
        ),
        None => "no counterexample within family".to_string(),
    };
    Ok(CounterexampleSearch {
        dim_cap: SEARCH_DIM_CAP,
        searched,
        counterexample,
        message,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Vanishing {
    /// `tK ≻ 0`: harmonic sections vanish.
    Vanishes,
    /// `tK ⪰ 0` with a kernel: harmonic sections are parallel.
    ParallelOnly,
    NoConclusion,
}

/// Conclusion of the Bochner argument for `Δ = ∇*∇ + tK` from the spectrum
/// of `tK`.
pub fn vanishing_verdict(tk: &Matrix, tol: f64) -> Result<Vanishing> {
    let resid = tk.hermitian_residual();
    if resid > SELF_ADJOINT_TOL * (1.0 + tk.norm_fro()) {
        return Err(Error::NotHermitian {
            residual: resid,
            tolerance: SELF_ADJOINT_TOL * (1.0 + tk.norm_fro()),
        });
    }
    let min = eig_hermitian(&tk.hermitian_part())?.min();
    Ok(match classify(min, tol) {
        Definiteness::Positive => Vanishing::Vanishes,
        Definiteness::SemiDefinite => Vanishing::ParallelOnly,
        Definiteness::Indefinite => Vanishing::NoConclusion,
    })
}

/// Per-family table of Casimir eigenvalues, used in reports.
pub fn family_casimirs(family: &[FamilyEntry]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for f in family {
        let c = crate::representations::casimir(&f.rep);
        let e = eig_hermitian(&c.hermitian_part())?;
        out.insert(f.rep.label().to_string(), e.max());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{random_curvature, random_symmetric, sphere};
    use crate::representations::{casimir, rep_exterior_full};
    use crate::spin::clifford_symbol;

    fn so(n: usize) -> Arc<SoBasis> {
        Arc::new(SoBasis::new(n).unwrap())
    }

    #[test]
    fn sphere_gives_casimir() {
        for n in 2..=5 {
            let b = so(n);
            for kind in [StandardKind::Vector, StandardKind::Adjoint, StandardKind::Sym0, StandardKind::Exterior(2)] {
                let rep = rep_standard(&b, kind).unwrap();
                let k = k_matrix(&sphere(n).unwrap(), &rep).unwrap();
                assert!((&k - &casimir(&rep)).max_abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn trivial_rep_gives_zero() {
        let rep = rep_standard(&so(3), StandardKind::Trivial).unwrap();
        let k = k_term(&random_curvature(3, 7).unwrap(), &rep).unwrap();
        assert_eq!(k.matrix, Matrix::zeros(1, 1));
    }

    #[test]
    fn positive_r_gives_negative_vector_k() {
        let r = CurvatureOperator::from_rows(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 2.0, 0.0], vec![0.0, 0.0, 3.0]])
            .unwrap()
            .bianchi_project();
        let rep = rep_standard(&so(3), StandardKind::Vector).unwrap();
        let k = k_term(&r, &rep).unwrap();
        // basis order 12, 13, 23: −K_ii sums R over the pairs containing i
        let mut want = vec![-3.0, -4.0, -5.0];
        want.sort_by(f64::total_cmp);
        for (g, w) in k.spectrum.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{:?}", k.spectrum);
        }
    }

    #[test]
    fn presets_and_parse() {
        assert_eq!(parse_t("spinor_dirac").unwrap(), -4.0);
        assert_eq!(parse_t("hodge").unwrap(), -2.0);
        assert_eq!(parse_t("killing").unwrap(), 2.0);
        assert_eq!(parse_t("curvature-tensor").unwrap(), -1.0);
        assert_eq!(parse_t("-0.5").unwrap(), -0.5);
        assert!(parse_t("nope").is_err());
        assert!(parse_t("inf").is_err());
    }

    #[test]
    fn zero_t_gives_zero() {
        let rep = rep_standard(&so(4), StandardKind::Vector).unwrap();
        let m = laplacian_curvature(&random_curvature(4, 1).unwrap(), &rep, 0.0).unwrap();
        assert_eq!(m.max_abs(), 0.0);
    }

    #[test]
    fn twisted_term_with_trivial_factor() {
        let b = so(4);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let t = rep_standard(&b, StandardKind::Trivial).unwrap();
        let r = random_curvature(4, 3).unwrap();
        let w = twisted_term(&r, &v, &t).unwrap();
        let want = k_matrix(&r, &v).unwrap().scale_real(-4.0);
        assert!((&w - &want).max_abs() < 1e-12);
        let w2 = twisted_term(&r.scaled(2.0), &v, &t).unwrap();
        assert!((&w2 - &w.scale_real(2.0)).max_abs() < 1e-12);
    }

    #[test]
    fn hodge_identity_through_clifford_symbol() {
        for n in [2, 4] {
            let b = so(n);
            let s = rep_spin(&b).unwrap();
            let ss = rep_tensor(&s, &s).unwrap();
            let ext = rep_exterior_full(&b).unwrap();
            let t = clifford_symbol(n).unwrap();
            for seed in 0..5 {
                let r = random_curvature(n, seed).unwrap();
                let kss = laplacian_curvature(&r, &ss, Preset::Hodge.t()).unwrap();
                let kext = laplacian_curvature(&r, &ext, Preset::Hodge.t()).unwrap();
                let conj = t.adjoint().matmul(&kss).matmul(&t);
                assert!((&conj - &kext).max_abs() < 1e-9);
                // with Bianchi, W on spin ⊗ spin is the Hodge term −2K
                let w = twisted_term(&r, &s, &s).unwrap();
                assert!((&w - &kss).max_abs() < 1e-9 * (1.0 + kss.norm_fro()));
            }
        }
    }

    #[test]
    fn permutation_action() {
        // e_0 ⊗ e_1 ↦ e_1 ⊗ e_0 under the swap
        let mut v = vec![ZERO; 4];
        v[1] = ONE;
        let w = permute_factors(&v, 2, 2, &[1, 0]);
        assert_eq!(w[2], ONE);
        // slot j moves to π(j): (a, b, c) under 0→1, 1→2, 2→0 becomes (c, a, b)
        let d = 3;
        let idx = |a: usize, b: usize, c: usize| (a * d + b) * d + c;
        let mut v = vec![ZERO; 27];
        v[idx(0, 1, 2)] = ONE;
        let w = permute_factors(&v, d, 3, &[1, 2, 0]);
        assert_eq!(w[idx(2, 0, 1)], ONE);
        assert!(is_transitive(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4));
        assert!(!is_transitive(&[vec![1, 0, 3, 2]], 4));
    }

    #[test]
    fn lemma_k2() {
        let setup = LemmaSetup::sym2_spin(3).unwrap();
        assert_eq!(setup.dim(), 3);
        for seed in 0..5 {
            let rep = lemma_check(&random_curvature(3, seed).unwrap(), &setup).unwrap();
            assert!(rep.pass, "residual {}", rep.residual);
        }
    }

    #[test]
    fn lemma_rejects_antisymmetric_part() {
        assert!(matches!(LemmaSetup::full_square_spin(3), Err(Error::Precondition(_))));
        let d = 4;
        let sym = LemmaSetup::sym2_spin(4).unwrap();
        // non-transitive generators are rejected
        let err = LemmaSetup::new(4, 2, sym.basis.clone(), vec![], "x").unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let p = sym.basis.matmul(&sym.basis.adjoint());
        let again = LemmaSetup::from_projector(4, 2, &p, vec![vec![1, 0]], "p").unwrap();
        assert_eq!(again.dim(), d * (d + 1) / 2);
    }

    #[test]
    fn lemma_k4() {
        let setup = LemmaSetup::curvature_tensor_spin4().unwrap();
        assert_eq!(setup.dim(), 21);
        assert_eq!(setup.t(), -1.0);
        let rep = lemma_check(&random_curvature(4, 2).unwrap(), &setup).unwrap();
        assert!(rep.pass, "residual {}", rep.residual);
    }

    #[test]
    fn vanishing_verdicts() {
        assert_eq!(vanishing_verdict(&Matrix::identity(3), 1e-9).unwrap(), Vanishing::Vanishes);
        assert_eq!(vanishing_verdict(&Matrix::zeros(3, 3), 1e-9).unwrap(), Vanishing::ParallelOnly);
        assert_eq!(
            vanishing_verdict(&Matrix::identity(3).scale_real(-1.0), 1e-9).unwrap(),
            Vanishing::NoConclusion
        );
        let skew = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]);
        assert!(vanishing_verdict(&skew, 1e-9).is_err());
        let spin = rep_spin(&so(4)).unwrap();
        let tk = laplacian_curvature(&sphere(4).unwrap(), &spin, Preset::SpinorDirac.t()).unwrap();
        assert_eq!(vanishing_verdict(&tk, 1e-9).unwrap(), Vanishing::Vanishes);
    }

    #[test]
    fn positivity_on_sphere_and_zero() {
        let family = default_family(4).unwrap();
        let labels: Vec<&str> = family.iter().map(|f| f.rep.label()).collect();
        assert_eq!(labels, vec!["vector", "sym0(2)", "spin+", "spin-", "adjoint"]);
        let rep = positivity_report(&sphere(4).unwrap(), &family, 1e-9).unwrap();
        assert_eq!(rep.forward, Some(true));
        assert!(rep.pass());
        let zero = CurvatureOperator::new(4, vec![0.0; 36]).unwrap();
        let rep = positivity_report(&zero, &family, 1e-9).unwrap();
        assert_eq!(rep.forward, None);
        assert!(rep.search.is_none());
        assert!(rep.verdict.starts_with("semi-definite"));
        assert!(rep.entries.iter().all(|e| e.verdict == Definiteness::SemiDefinite));
    }

    #[test]
    fn positivity_counterexample_in_dimension_three() {
        let r = CurvatureOperator::from_rows(3, &[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, -1.0]]).unwrap();
        assert!(r.bianchi_flag());
        let family = default_family(3).unwrap();
        let rep = positivity_report(&r, &family, 1e-9).unwrap();
        let search = rep.search.unwrap();
        let c = search.counterexample.unwrap();
        assert_eq!(c.label, "sym0(2)");
        assert!((c.max_k - 2.0).abs() < 1e-10);
        let vector = &rep.entries[0];
        assert!(vector.min_neg_k.abs() < 1e-12);
        assert!(search.searched.iter().any(|s| s.method == "lanczos"));
    }

    #[test]
    fn structured_action_matches_dense() {
        let b = so(3);
        let v = rep_standard(&b, StandardKind::Vector).unwrap();
        let s = rep_spin(&b).unwrap();
        let dense = rep_tensor(&rep_tensor(&v, &s).unwrap(), &v).unwrap();
        let action = TensorAction::new(vec![&v, &s, &v]);
        let r = random_symmetric(3, 8).unwrap();
        let k = k_matrix(&r, &dense).unwrap();
        for j in 0..dense.dim() {
            let mut e = vec![ZERO; dense.dim()];
            e[j] = ONE;
            let col = action.k_apply(&r, &e);
            for i in 0..dense.dim() {
                assert!((col[i] - k[(i, j)]).norm() < 1e-12);
            }
        }
    }
}
