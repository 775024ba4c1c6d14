//! Randomized invariants of the numerical kernel: eigendecomposition
//! fidelity, spectral calculus, norm and metric invariances, mean order
//! relations, and positive-map structure.

use meanforge::eigen::eigh;
use meanforge::hpd::{loewner_slack, thompson_distance, HpdMatrix};
use meanforge::maps::{make_map, MapKind};
use meanforge::matrix::{ComplexMatrix, Cx};
use meanforge::means::{
    arithmetic_mean, harmonic_mean, karcher_mean, power_mean, two_mean, MatrixTuple, MeanKind,
    WeightVector,
};
use meanforge::norm::{ui_norm, NormKind};
use proptest::prelude::*;

// ----- strategies ---------------------------------------------------------

/// Hermitian matrix with entries of magnitude about one.
fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    proptest::collection::vec(-1.0..1.0f64, 2 * n * n).prop_map(move |vals| {
        ComplexMatrix::from_fn(n, n, |i, j| Cx::new(vals[i * n + j], vals[n * n + i * n + j]))
            .symmetrized()
    })
}

/// Positive definite matrix `exp(H)`; entries of `H` are bounded, so the
/// condition number stays moderate.
fn hpd(n: usize) -> impl Strategy<Value = HpdMatrix<f64>> {
    hermitian(n).prop_map(|h| HpdMatrix::exp_hermitian(&h).expect("exp of Hermitian is HPD"))
}

/// Unitary matrix: the eigenvector frame of a random Hermitian matrix.
fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    hermitian(n).prop_map(|h| eigh(&h).expect("Hermitian input").vectors().clone())
}

/// Weighted tuple of `k` positive definite `n x n` matrices.
fn tuple(k: usize, n: usize) -> impl Strategy<Value = MatrixTuple<f64>> {
    (
        proptest::collection::vec(hpd(n), k),
        proptest::collection::vec(0.05..1.0f64, k),
    )
        .prop_map(|(mats, raw)| {
            let sum: f64 = raw.iter().sum();
            let w = WeightVector::new(raw.iter().map(|x| x / sum).collect()).unwrap();
            MatrixTuple::new(mats, w).unwrap()
        })
}

// ----- eigensolver --------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigh_reconstructs_with_unitary_frame(n in 2usize..=6, seed_h in hermitian(6)) {
        // Cut the 6x6 draw down to the leading n x n block.
        let a = ComplexMatrix::from_fn(n, n, |i, j| seed_h[(i, j)]).symmetrized();
        let e = eigh(&a).unwrap();
        let recon = e.reconstruct();
        let err = (&recon - &a).frobenius_norm();
        prop_assert!(err <= 1e-12 * (1.0 + a.frobenius_norm()), "reconstruction error {err:e}");
        prop_assert!(e.unitarity_defect() <= 1e-12);
        for w in e.values().windows(2) {
            prop_assert!(w[0] <= w[1], "eigenvalues not ascending");
        }
    }

    #[test]
    fn eigh_reconstructs_in_single_precision(vals in proptest::collection::vec(-1.0f32..1.0, 32)) {
        let a = ComplexMatrix::<f32>::from_fn(4, 4, |i, j| {
            Cx::new(vals[i * 4 + j], vals[16 + i * 4 + j])
        })
        .symmetrized();
        let e = eigh(&a).unwrap();
        let err = (&e.reconstruct() - &a).frobenius_norm();
        prop_assert!(err <= 1e-4 * (1.0 + a.frobenius_norm()), "reconstruction error {err:e}");
        prop_assert!(e.unitarity_defect() <= 1e-4);
    }

    #[test]
    fn spectral_calculus_is_consistent(a in hpd(3)) {
        let sq = a.sqrt();
        prop_assert!((&(sq.matrix() * sq.matrix()) - a.matrix()).frobenius_norm()
            <= 1e-10 * (1.0 + a.lambda_max()));
        let prod = a.power(0.5).matrix() * a.power(-0.5).matrix();
        prop_assert!(prod.max_abs_diff(&ComplexMatrix::identity(3)) <= 1e-10);
        let back = HpdMatrix::exp_hermitian(&a.log_m()).unwrap();
        prop_assert!(back.matrix().max_abs_diff(a.matrix()) <= 1e-9 * (1.0 + a.lambda_max()));
        // power is a spectral operation: eigenvalues of A^r are lambda^r.
        let p = a.power(1.7);
        prop_assert!((p.lambda_max() - a.lambda_max().powf(1.7)).abs() <= 1e-9 * (1.0 + p.lambda_max()));
    }

    #[test]
    fn norms_are_unitarily_invariant(a in hermitian(4), u in unitary(4), v in unitary(4)) {
        let rotated = &(&u * &a) * &v;
        for kind in [NormKind::Spectral, NormKind::Trace, NormKind::Frobenius, NormKind::KyFan(2)] {
            let lhs = ui_norm(&rotated, kind).unwrap();
            let rhs = ui_norm(&a, kind).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs), "{kind}: {lhs} vs {rhs}");
        }
        // Ky Fan sums are monotone in k and reach the trace norm at k = n.
        let k1 = ui_norm(&a, NormKind::KyFan(1)).unwrap();
        let k4 = ui_norm(&a, NormKind::KyFan(4)).unwrap();
        prop_assert!(k1 <= k4 + 1e-12);
        prop_assert!((k4 - ui_norm(&a, NormKind::Trace).unwrap()).abs() <= 1e-10);
    }

    #[test]
    fn thompson_metric_has_its_invariances(a in hpd(3), b in hpd(3), u in unitary(3)) {
        let d = thompson_distance(&a, &b).unwrap();
        prop_assert!((thompson_distance(&b, &a).unwrap() - d).abs() <= 1e-9);
        prop_assert!((thompson_distance(&a.inverse(), &b.inverse()).unwrap() - d).abs() <= 1e-9);
        // Congruence by an invertible C = U diag(1/2 .. 2).
        let c = &u * &ComplexMatrix::diag(&[0.5, 1.0, 2.0]);
        let ca = HpdMatrix::new(a.matrix().congruence(&c)).unwrap();
        let cb = HpdMatrix::new(b.matrix().congruence(&c)).unwrap();
        prop_assert!((thompson_distance(&ca, &cb).unwrap() - d).abs() <= 1e-8 * (1.0 + d));
        prop_assert!(thompson_distance(&a, &a).unwrap() <= 1e-12);
    }
}

// ----- means --------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn power_mean_lies_between_harmonic_and_arithmetic(tu in tuple(3, 3), t in 0.1..=1.0f64) {
        let h = harmonic_mean(&tu).unwrap();
        let a = arithmetic_mean(&tu).unwrap();
        let (p, report) = power_mean(&tu, t).unwrap();
        prop_assert!(report.converged);
        prop_assert!(loewner_slack(h.matrix(), p.matrix()).unwrap().holds);
        prop_assert!(loewner_slack(p.matrix(), a.matrix()).unwrap().holds);
        // Negative order never exceeds the positive one.
        let (pn, _) = power_mean(&tu, -t).unwrap();
        prop_assert!(loewner_slack(pn.matrix(), p.matrix()).unwrap().holds);
    }

    #[test]
    fn power_mean_certificate_is_tight(tu in tuple(3, 2), t in 0.05..=1.0f64) {
        // Fixed-point residual d(X, sum_i w_i (X #_t A_i)) at the output.
        let (x, report) = power_mean(&tu, t).unwrap();
        prop_assert!(report.converged, "no convergence at t = {t}");
        prop_assert!(report.residual <= 1e-10, "residual {:e}", report.residual);
        let mut sum = ComplexMatrix::zeros(x.dim(), x.dim());
        for (a, &w) in tu.matrices().iter().zip(tu.weights().as_slice()) {
            let g = two_mean(&x, a, t, MeanKind::Geometric).unwrap();
            sum.add_scaled_assign(w, g.matrix());
        }
        let fx = HpdMatrix::new(sum).unwrap();
        prop_assert!(thompson_distance(&x, &fx).unwrap() <= 1e-10);
    }

    #[test]
    fn karcher_mean_solves_the_gradient_equation(tu in tuple(3, 3)) {
        let (x, report) = karcher_mean(&tu).unwrap();
        prop_assert!(report.converged);
        prop_assert!(report.residual <= 1e-9 * x.dim() as f64);
        // Gradient sum_i w_i log(X^{1/2} A_i^{-1} X^{1/2}) recomputed directly.
        let s = x.sqrt();
        let mut grad = ComplexMatrix::zeros(x.dim(), x.dim());
        for (a, &w) in tu.matrices().iter().zip(tu.weights().as_slice()) {
            let inner = HpdMatrix::new(a.inverse().matrix().congruence(s.matrix())).unwrap();
            grad.add_scaled_assign(w, &inner.log_m());
        }
        prop_assert!(grad.frobenius_norm() <= 1e-9 * x.dim() as f64);
    }

    #[test]
    fn means_ignore_member_order(tu in tuple(3, 2)) {
        let mats: Vec<_> = tu.matrices().iter().rev().cloned().collect();
        let w: Vec<_> = tu.weights().as_slice().iter().rev().copied().collect();
        let rev = MatrixTuple::new(mats, WeightVector::new(w).unwrap()).unwrap();
        let (p1, _) = power_mean(&tu, 0.5).unwrap();
        let (p2, _) = power_mean(&rev, 0.5).unwrap();
        prop_assert!(thompson_distance(&p1, &p2).unwrap() <= 1e-9);
        let (k1, _) = karcher_mean(&tu).unwrap();
        let (k2, _) = karcher_mean(&rev).unwrap();
        prop_assert!(thompson_distance(&k1, &k2).unwrap() <= 1e-8);
    }

    #[test]
    fn karcher_of_a_pair_is_the_geometric_mean(a in hpd(3), b in hpd(3)) {
        let tu = MatrixTuple::new(vec![a.clone(), b.clone()], WeightVector::uniform(2)).unwrap();
        let (k, _) = karcher_mean(&tu).unwrap();
        let g = two_mean(&a, &b, 0.5, MeanKind::Geometric).unwrap();
        prop_assert!(thompson_distance(&k, &g).unwrap() <= 1e-8);
    }
}

// ----- positive unital maps -----------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn maps_are_positive_unital_and_order_preserving(
        a in hpd(4),
        h in hermitian(4),
        u in unitary(4),
        seed in any::<u64>(),
    ) {
        let kinds = [
            MapKind::Identity(4),
            MapKind::UnitaryConj(u),
            MapKind::Pinching(vec![2, 2]),
            MapKind::Depolarizing(4),
            MapKind::Random { dim: 4, out_dim: 3, kraus_count: 3, seed },
        ];
        // b = a + h^2 dominates a in the Loewner order.
        let b = HpdMatrix::new(a.matrix() + &(&h * &h)).unwrap();
        for kind in kinds {
            let map = make_map(kind).unwrap();
            prop_assert!(map.unitality_defect() <= 1e-10);
            let fa = map.apply(&a).unwrap();
            prop_assert!(fa.lambda_min() > 0.0);
            // Unital positive maps keep spectra inside [lambda_min, lambda_max].
            prop_assert!(fa.lambda_min() >= a.lambda_min() - 1e-10);
            prop_assert!(fa.lambda_max() <= a.lambda_max() + 1e-10);
            let fb = map.apply(&b).unwrap();
            prop_assert!(loewner_slack(fa.matrix(), fb.matrix()).unwrap().holds);
        }
    }

    #[test]
    fn choi_inequality_holds_for_every_map_kind(a in hpd(3), seed in any::<u64>()) {
        for kind in [
            MapKind::Identity(3),
            MapKind::Pinching(vec![1, 2]),
            MapKind::Depolarizing(3),
            MapKind::Random { dim: 3, out_dim: 2, kraus_count: 4, seed },
        ] {
            let map = make_map(kind).unwrap();
            let lhs = map.apply(&a).unwrap().inverse();
            let rhs = map.apply(&a.inverse()).unwrap();
            prop_assert!(loewner_slack(lhs.matrix(), rhs.matrix()).unwrap().holds);
        }
    }
}
