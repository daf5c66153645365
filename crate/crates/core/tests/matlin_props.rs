use proptest::prelude::*;

use sdof_core::matlin::{complement, intersect, logdet_hpd, nullspace, orthonormal_basis, rank, DEFAULT_RANK_TOL};
use sdof_core::rng::{rng_from_seed, standard_cn};
use sdof_core::CMatrix;

/// Random `rows x cols` matrix of rank `min(k, rows, cols)`.
fn low_rank(rows: usize, cols: usize, k: usize, seed: u64) -> CMatrix {
    let mut rng = rng_from_seed(seed);
    let a = standard_cn(rows, k, &mut rng);
    let b = standard_cn(k, cols, &mut rng);
    a * b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_nullity(rows in 1usize..=8, cols in 1usize..=8, k in 1usize..=8, seed in any::<u64>()) {
        let m = low_rank(rows, cols, k, seed);
        let r = rank(&m, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(r, k.min(rows).min(cols));
        let ns = nullspace(&m, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(ns.dim() + r, cols);
        if ns.dim() > 0 {
            let image = &m * ns.basis();
            prop_assert!(image.norm() <= 1e-9 * m.norm().max(1.0));
        }
    }

    #[test]
    fn intersect_is_symmetric(n in 2usize..=8, a in 1usize..=8, b in 1usize..=8, seed in any::<u64>()) {
        let (a, b) = (a.min(n), b.min(n));
        let mut rng = rng_from_seed(seed);
        let s1 = orthonormal_basis(&standard_cn(n, a, &mut rng), DEFAULT_RANK_TOL).unwrap();
        let s2 = orthonormal_basis(&standard_cn(n, b, &mut rng), DEFAULT_RANK_TOL).unwrap();
        let x = intersect(&s1, &s2, DEFAULT_RANK_TOL).unwrap();
        let y = intersect(&s2, &s1, DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(x.dim(), y.dim());
        prop_assert!(x.span_distance(&y) <= 1e-9);
        // The intersection lies in both inputs.
        prop_assert!(s1.residual(x.basis()) <= 1e-9);
        prop_assert!(s2.residual(x.basis()) <= 1e-9);
    }

    #[test]
    fn complement_is_an_involution(n in 1usize..=8, k in 0usize..=8, seed in any::<u64>()) {
        let k = k.min(n);
        let s = if k == 0 {
            sdof_core::Subspace::zero(n)
        } else {
            orthonormal_basis(&standard_cn(n, k, &mut rng_from_seed(seed)), DEFAULT_RANK_TOL).unwrap()
        };
        let c = complement(&s);
        prop_assert_eq!(c.dim() + s.dim(), n);
        let cc = complement(&c);
        prop_assert_eq!(cc.dim(), s.dim());
        if s.dim() > 0 {
            prop_assert!(cc.span_distance(&s) <= 1e-9);
        }
    }

    #[test]
    fn logdet_matches_eigen_free_oracle(n in 1usize..=6, seed in any::<u64>()) {
        // A A^† + I has determinant prod(1 + s_i^2) over singular values of A.
        let a = standard_cn(n, n, &mut rng_from_seed(seed));
        let m = &a * a.adjoint() + CMatrix::identity(n, n);
        let sv = sdof_core::matlin::singular_values(&a);
        let expected: f64 = sv.iter().map(|s| (1.0 + s * s).ln()).sum();
        let got = logdet_hpd(&m).unwrap();
        prop_assert!((got - expected).abs() <= 1e-9 * expected.abs().max(1.0));
    }
}

#[test]
fn generic_intersection_dimension() {
    let shapes: [(usize, usize, usize); 8] = [(3, 2, 2), (4, 2, 2), (4, 3, 3), (5, 3, 4), (6, 4, 4), (2, 3, 1), (8, 5, 6), (4, 4, 4)];
    for &(n, m1, m2) in &shapes {
        let expected = (m1.min(n) + m2.min(n)).saturating_sub(n);
        for seed in 0..100u64 {
            let mut rng = rng_from_seed(seed);
            let s1 = orthonormal_basis(&standard_cn(n, m1, &mut rng), DEFAULT_RANK_TOL).unwrap();
            let s2 = orthonormal_basis(&standard_cn(n, m2, &mut rng), DEFAULT_RANK_TOL).unwrap();
            let x = intersect(&s1, &s2, DEFAULT_RANK_TOL).unwrap();
            assert_eq!(x.dim(), expected, "shape {:?} seed {seed}", (n, m1, m2));
        }
    }
}
