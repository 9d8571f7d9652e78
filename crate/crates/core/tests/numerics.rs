use proptest::prelude::*;
use weitz::numerics::{eig_hermitian, kron, nullspace, Matrix, C64};
use weitz::rng;

fn random_complex(seed: u64, rows: usize, cols: usize) -> Matrix {
    let mut g = rng::seeded(seed);
    let z = rng::normals(&mut g, 2 * rows * cols);
    Matrix::from_fn(rows, cols, |i, j| C64::new(z[i * cols + j], z[rows * cols + i * cols + j]))
}

fn random_hermitian(seed: u64, n: usize) -> Matrix {
    let a = random_complex(seed, n, n);
    (&a + &a.adjoint()).scale_real(0.5)
}

/// Random real orthogonal matrix from the eigenvectors of a real symmetric one.
fn random_orthogonal(seed: u64, n: usize) -> Matrix {
    let mut g = rng::seeded(seed);
    let z = rng::normals(&mut g, n * n);
    let a = Matrix::from_real(n, n, &z);
    let s = &a + &a.transpose();
    eig_hermitian(&s).unwrap().vectors.real_part()
}

fn sizes() -> Vec<usize> {
    let mut out: Vec<usize> = (0..970).map(|i| 1 + i % 48).collect();
    out.extend((0..25).map(|i| 64 + (i * 64) / 24));
    out.extend([160, 192, 224, 240, 256]);
    out
}

#[test]
fn eigen_reconstruction_on_random_hermitian() {
    let sizes = sizes();
    assert_eq!(sizes.len(), 1000);
    assert_eq!(*sizes.iter().max().unwrap(), 256);
    for (i, &n) in sizes.iter().enumerate() {
        let a = random_hermitian(10_000 + i as u64, n);
        let e = eig_hermitian(&a).unwrap();
        let norm = a.norm_fro();
        let av = a.matmul(&e.vectors);
        let vl = Matrix::from_fn(n, n, |r, c| e.vectors[(r, c)] * e.values[c]);
        let resid = (&av - &vl).norm_fro();
        assert!(resid <= 1e-10 * norm, "n={n} residual {resid:e} vs {norm:e}");
        let ortho = (&e.vectors.adjoint().matmul(&e.vectors) - &Matrix::identity(n)).max_abs();
        assert!(ortho <= 1e-10, "n={n} orthonormality {ortho:e}");
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }
}

/// Gaussian integers, so every product is exact.
fn integer_complex(seed: u64, rows: usize, cols: usize) -> Matrix {
    let m = random_complex(seed, rows, cols);
    Matrix::from_fn(rows, cols, |i, j| {
        let z = m[(i, j)];
        C64::new((4.0 * z.re).round(), (4.0 * z.im).round())
    })
}

#[test]
fn kron_is_exactly_associative() {
    let a = integer_complex(1, 2, 3);
    let b = integer_complex(2, 3, 2);
    let c = integer_complex(3, 2, 2);
    let left = kron(&kron(&a, &b), &c);
    let right = kron(&a, &kron(&b, &c));
    assert_eq!(left.shape(), (12, 12));
    assert_eq!(left.as_slice(), right.as_slice());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kron_mixed_product(seed in any::<u64>(), m in 1usize..4, k in 1usize..4, p in 1usize..4, q in 1usize..4) {
        let a = random_complex(seed, m, k);
        let b = random_complex(seed ^ 1, p, q);
        let c = random_complex(seed ^ 2, k, 2);
        let d = random_complex(seed ^ 3, q, 3);
        let lhs = kron(&a, &b).matmul(&kron(&c, &d));
        let rhs = kron(&a.matmul(&c), &b.matmul(&d));
        let scale = lhs.norm_fro().max(1.0);
        prop_assert!((&lhs - &rhs).norm_fro() <= 1e-12 * scale);
    }

    #[test]
    fn nullspace_dimension_is_orthogonally_invariant(seed in any::<u64>(), n in 2usize..8, r in 0usize..8) {
        let r = r.min(n);
        // rank-r matrix with well separated singular values
        let u = random_orthogonal(seed, n);
        let v = random_orthogonal(seed ^ 7, n);
        let diag: Vec<f64> = (0..n).map(|i| if i < r { 1.0 + i as f64 } else { 0.0 }).collect();
        let a = u.matmul(&Matrix::diag_real(&diag)).matmul(&v.transpose());
        let q = random_orthogonal(seed ^ 11, n);
        let before = nullspace(&a, 1e-9);
        let after = nullspace(&a.matmul(&q), 1e-9);
        prop_assert_eq!(before.cols(), n - r);
        prop_assert_eq!(after.cols(), n - r);
        let resid = a.matmul(&before).max_abs();
        prop_assert!(resid <= 1e-9 * (1.0 + a.norm_fro()));
    }

    #[test]
    fn eigenvalues_are_similarity_invariant(seed in any::<u64>(), n in 1usize..10) {
        let a = random_hermitian(seed, n);
        let q = random_orthogonal(seed ^ 5, n);
        let b = q.transpose().matmul(&a).matmul(&q);
        let ea = eig_hermitian(&a).unwrap().values;
        let eb = eig_hermitian(&b.hermitian_part()).unwrap().values;
        for (x, y) in ea.iter().zip(&eb) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + a.norm_fro()));
        }
    }
}
