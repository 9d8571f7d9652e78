//! Root systems of compact simple Lie algebras in exact rational arithmetic.
//!
//! Roots live in a Euclidean space `Q^m` with the standard dot product. The
//! Killing-normalized form on weights is that dot product divided by
//! [`RootSystem::killing_scale`], computed from the roots themselves:
//! `Σ_α (α, u)² = c (u, u)` for every `u` in the span of the roots.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;
pub type Weight = Vec<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + *x * *y)
}

pub fn add(a: &[Rational], b: &[Rational]) -> Weight {
    a.iter().zip(b).map(|(x, y)| *x + *y).collect()
}

pub fn scale(a: &[Rational], s: Rational) -> Weight {
    a.iter().map(|x| *x * s).collect()
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `s_α(β) = β − 2(β,α)/(α,α) α`.
pub fn reflect(beta: &[Rational], alpha: &[Rational]) -> Weight {
    let k = q(2) * dot(beta, alpha) / dot(alpha, alpha);
    beta.iter().zip(alpha).map(|(b, a)| *b - k * *a).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootSystem {
    pub simple: Vec<Weight>,
    pub positive: Vec<Weight>,
    /// `c` with `Σ_α (α,u)² = c (u,u)`; Killing product = dot / c.
    pub killing_scale: Rational,
}

impl RootSystem {
    /// Builds the full root system as the Weyl orbit of the simple roots.
    pub fn from_simple(simple: Vec<Weight>) -> Self {
        let mut all: Vec<Weight> = simple.clone();
        let mut frontier = simple.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for alpha in &simple {
                    let r = reflect(beta, alpha);
                    if !all.contains(&r) {
                        all.push(r.clone());
                        next.push(r);
                    }
                }
            }
            frontier = next;
        }
        let mut positive: Vec<Weight> = all
            .into_iter()
            .filter(|r| simple_coords(&simple, r).iter().all(|c| !c.is_negative()))
            .collect();
        positive.sort_by_key(|r| height(&simple, r));
        let u = &simple[0];
        let mut acc = Rational::zero();
        for r in &positive {
            let d = dot(r, u);
            acc += d * d;
        }
        // negative roots contribute the same amount
        let killing_scale = q(2) * acc / dot(u, u);
        RootSystem {
            simple,
            positive,
            killing_scale,
        }
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.simple[0].len()
    }

    /// Killing-normalized inner product of two weights.
    pub fn killing(&self, a: &[Rational], b: &[Rational]) -> Rational {
        dot(a, b) / self.killing_scale
    }

    /// Positive root of greatest height.
    pub fn highest_root(&self) -> &Weight {
        self.positive.last().expect("non-empty root system")
    }

    /// Highest root among the short ones (equals the highest root when all
    /// roots have one length).
    pub fn highest_short_root(&self) -> &Weight {
        let min_len = self
            .positive
            .iter()
            .map(|r| dot(r, r))
            .min()
            .expect("non-empty root system");
        self.positive
            .iter()
            .rfind(|r| dot(r, r) == min_len)
            .expect("non-empty root system")
    }

    /// `2(λ, α)/(α, α)` against each simple root.
    pub fn coroot_pairings(&self, w: &[Rational]) -> Vec<Rational> {
        self.simple
            .iter()
            .map(|a| q(2) * dot(w, a) / dot(a, a))
            .collect()
    }

    pub fn is_dominant(&self, w: &[Rational]) -> bool {
        self.coroot_pairings(w).iter().all(|c| !c.is_negative())
    }

    /// Total number of roots.
    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }
}

/// Coordinates of `w` in the basis of simple roots (solves the Gram system).
pub fn simple_coords(simple: &[Weight], w: &[Rational]) -> Vec<Rational> {
    let r = simple.len();
    let mut a: Vec<Vec<Rational>> = (0..r)
        .map(|i| {
            let mut row: Vec<Rational> = (0..r).map(|j| dot(&simple[i], &simple[j])).collect();
            row.push(dot(&simple[i], w));
            row
        })
        .collect();
    for col in 0..r {
        let piv = (col..r).find(|&i| !a[i][col].is_zero()).expect("simple roots independent");
        a.swap(col, piv);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for i in 0..r {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col];
                for j in col..=r {
                    let v = a[col][j];
                    a[i][j] -= f * v;
                }
            }
        }
    }
    a.into_iter().map(|row| row[r]).collect()
}

fn height(simple: &[Weight], w: &[Rational]) -> Rational {
    simple_coords(simple, w)
        .into_iter()
        .fold(Rational::zero(), |acc, c| acc + c)
}

fn unit(m: usize, i: usize) -> Weight {
    let mut v = vec![Rational::zero(); m];
    v[i] = Rational::one();
    v
}

fn diff(m: usize, i: usize, j: usize) -> Weight {
    let mut v = unit(m, i);
    v[j] -= Rational::one();
    v
}

/// `A_r` in the sum-zero hyperplane of `Q^{r+1}`.
pub fn simple_roots_a(r: usize) -> Vec<Weight> {
    (0..r).map(|i| diff(r + 1, i, i + 1)).collect()
}

/// `B_r`: `e_i − e_{i+1}`, `e_r`.
pub fn simple_roots_b(r: usize) -> Vec<Weight> {
    let mut s: Vec<Weight> = (0..r - 1).map(|i| diff(r, i, i + 1)).collect();
    s.push(unit(r, r - 1));
    s
}

/// `C_r`: `e_i − e_{i+1}`, `2e_r`.
pub fn simple_roots_c(r: usize) -> Vec<Weight> {
    let mut s: Vec<Weight> = (0..r - 1).map(|i| diff(r, i, i + 1)).collect();
    s.push(scale(&unit(r, r - 1), q(2)));
    s
}

/// `D_r`: `e_i − e_{i+1}`, `e_{r−1} + e_r`.
pub fn simple_roots_d(r: usize) -> Vec<Weight> {
    let mut s: Vec<Weight> = (0..r - 1).map(|i| diff(r, i, i + 1)).collect();
    s.push(add(&unit(r, r - 2), &unit(r, r - 1)));
    s
}

/// `G_2` in the sum-zero hyperplane of `Q^3`: short `e_1 − e_2`, long
/// `−2e_1 + e_2 + e_3`.
pub fn simple_roots_g2() -> Vec<Weight> {
    vec![
        vec![q(1), q(-1), q(0)],
        vec![q(-2), q(1), q(1)],
    ]
}

/// Half the sum of the positive roots.
pub fn weyl_vector(rs: &RootSystem) -> Weight {
    let m = rs.ambient_dim();
    let sum = rs
        .positive
        .iter()
        .fold(vec![Rational::zero(); m], |acc, r| add(&acc, r));
    scale(&sum, Rational::new(1, 2))
}
