//! Highest weights and quadratic Casimirs: `⟨w, w + 2δ⟩`, the spin highest
//! weight, and `dim g = 24‖δ‖²` in the Killing normalization.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::Matrix;
use crate::report::{CheckReport, Inputs};
use crate::so_algebra::roots::{self, add, dot, scale, Rational, Weight};
use crate::so_algebra::{inner, SimpleAlgebraData, SoBasis};

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Renders a weight as `[p/q, …]`.
pub fn format_weight(w: &[Rational]) -> Vec<String> {
    w.iter().map(|x| x.to_string()).collect()
}

/// `δ`, half the sum of the positive roots.
pub fn weyl_vector(g: &SimpleAlgebraData) -> Weight {
    roots::weyl_vector(&g.roots)
}

/// Killing-normalized `⟨w, w + 2δ⟩`, and whether `w` is dominant (the value
/// is computed either way).
pub fn casimir_scalar_hw(g: &SimpleAlgebraData, w: &[Rational]) -> Result<(Rational, bool)> {
    if w.len() != g.roots.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "weight has {} coordinates, root space has {}",
            w.len(),
            g.roots.ambient_dim()
        )));
    }
    let delta = weyl_vector(g);
    let shifted = add(w, &scale(&delta, q(2)));
    Ok((g.roots.killing(w, &shifted), g.roots.is_dominant(w)))
}

/// `‖δ‖²` in the Killing normalization.
pub fn delta_norm_sq(g: &SimpleAlgebraData) -> Rational {
    let d = weyl_vector(g);
    g.roots.killing(&d, &d)
}

/// Compares `dim g` with `24‖δ‖²` exactly.
pub fn strange_formula_check(g: &SimpleAlgebraData) -> CheckReport {
    let norm = delta_norm_sq(g);
    let lhs = q(g.dim() as i64);
    let rhs = q(24) * norm;
    let residual = roots::to_f64((lhs - rhs).abs());
    let delta = weyl_vector(g);
    let pairings = g.roots.coroot_pairings(&delta);
    CheckReport::residual_check(
        format!("strange:{}", g.type_rank),
        Inputs::default(),
        residual,
        1e-9 * g.dim() as f64,
    )
    .with_details(serde_json::json!({
        "algebra": g.type_rank.to_string(),
        "dim": g.dim(),
        "delta": format_weight(&delta),
        "delta_norm_sq": norm.to_string(),
        "delta_norm_sq_f64": roots::to_f64(norm),
        "twenty_four_delta_norm_sq": rhs.to_string(),
        "exact": lhs == rhs,
        "delta_coroot_pairings": format_weight(&pairings),
        "killing_scale": g.roots.killing_scale.to_string(),
    }))
}

/// `‖Σ y_a² + ⟨w, w+2δ⟩·I‖` on the defining matrix model, whose highest
/// weight is recorded with the algebra. Zero when the model's basis and the
/// root data share the Killing normalization.
pub fn model_casimir_residual(g: &SimpleAlgebraData) -> Result<(f64, Rational)> {
    let (c, _) = casimir_scalar_hw(g, &g.defining_weight)?;
    let m = g.defining_casimir();
    let want = Matrix::identity(m.rows()).scale_real(-roots::to_f64(c));
    Ok(((&m - &want).max_abs(), c))
}

/// Positive roots of so(n) in the coordinates `x_1 … x_k`, `k = ⌊n/2⌋`:
/// `x_i ± x_j` (`i < j`) and, for odd `n`, `x_i`.
pub fn so_positive_roots(n: usize) -> Result<Vec<Weight>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("so(n) roots need n >= 3, got {n}")));
    }
    let k = n / 2;
    let unit = |i: usize| -> Weight { (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect() };
    let mut out = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            out.push(add(&unit(i), &unit(j)));
            out.push(add(&unit(i), &scale(&unit(j), q(-1))));
        }
        if n % 2 == 1 {
            out.push(unit(i));
        }
    }
    Ok(out)
}

/// `δ` for so(n) in `x_i` coordinates.
pub fn so_weyl_vector(n: usize) -> Result<Weight> {
    let k = n / 2;
    let sum = so_positive_roots(n)?
        .iter()
        .fold(vec![Rational::zero(); k], |acc, r| add(&acc, r));
    Ok(scale(&sum, Rational::new(1, 2)))
}

/// `(x_1 + ⋯ + x_k)/2`, `k = ⌊n/2⌋`.
pub fn spin_highest_weight(n: usize) -> Result<Weight> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("spin highest weight needs n >= 3, got {n}")));
    }
    Ok(vec![Rational::new(1, 2); n / 2])
}

/// Highest weights of the vector representation and of `Λ²`.
pub fn vector_highest_weight(n: usize) -> Result<Weight> {
    let mut w = vec![Rational::zero(); n / 2];
    *w.first_mut().ok_or_else(|| Error::InvalidArgument(format!("n = {n} too small")))? = Rational::one();
    Ok(w)
}

/// `x_1 + x_2` for `n ≥ 4`; for `n = 3`, `Λ² ≅ R³` has highest weight `x_1`.
/// For `n = 4` this is the weight of one summand; both summands share the
/// Casimir value.
pub fn exterior2_highest_weight(n: usize) -> Result<Weight> {
    let mut w = vector_highest_weight(n)?;
    if n >= 4 {
        w[1] = Rational::one();
    }
    Ok(w)
}

/// Factor `c` turning the Euclidean form on `x_i` coordinates into the form
/// dual to `⟨A, B⟩ = −tr(AB)/2`: the Cartan elements `x_{2k−1,2k}` act with
/// weights `±x_k` and have Gram matrix `⟨h_k, h_l⟩ = g δ_kl`, so the dual form
/// on weights is the Euclidean one divided by `g`.
pub fn so_weight_form_factor(n: usize) -> Result<f64> {
    let b = SoBasis::new(n)?;
    let h = &b.elements()[b.index(0, 1)];
    Ok(1.0 / inner(h, h))
}

/// `⟨w, w + 2δ⟩` for so(n) in the form dual to `−tr(AB)/2`.
pub fn so_casimir_scalar(n: usize, w: &[Rational]) -> Result<f64> {
    let delta = so_weyl_vector(n)?;
    if w.len() != delta.len() {
        return Err(Error::DimensionMismatch(format!(
            "so({n}) weights have {} coordinates, got {}",
            delta.len(),
            w.len()
        )));
    }
    let shifted = add(w, &scale(&delta, q(2)));
    Ok(roots::to_f64(dot(w, &shifted)) * so_weight_form_factor(n)?)
}

/// Simple roots of so(n): `x_i − x_{i+1}`, then `x_k` for odd `n` or
/// `x_{k−1} + x_k` for even `n`.
pub fn so_simple_roots(n: usize) -> Result<Vec<Weight>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("so(n) roots need n >= 3, got {n}")));
    }
    let k = n / 2;
    let unit = |i: usize| -> Weight { (0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect() };
    let mut out: Vec<Weight> = (0..k - 1).map(|i| add(&unit(i), &scale(&unit(i + 1), q(-1)))).collect();
    out.push(if n % 2 == 1 { unit(k - 1) } else { add(&unit(k - 2), &unit(k - 1)) });
    Ok(out)
}

/// Whether `w` pairs non-negatively with every simple root of so(n).
pub fn so_is_dominant(n: usize, w: &[Rational]) -> Result<bool> {
    Ok(so_simple_roots(n)?.iter().all(|r| !dot(r, w).is_negative()))
}
