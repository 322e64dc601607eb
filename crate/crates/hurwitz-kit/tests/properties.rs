//! Structural invariants checked over randomized inputs.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hurwitz_kit::certify::{
    certify_metzler, certify_symmetric, oracle_mmatrix, oracle_routh_hurwitz, oracle_sylvester,
};
use hurwitz_kit::chart::{lift_symmetric_direct, phi, phi_inverse, random_hurwitz_symmetric, ChartPoint, DirectLiftParams};
use hurwitz_kit::family::{check_metzler_lift_conditions, lift_metzler, Corner, MetzlerLiftParams};
use hurwitz_kit::matrix::Matrix;
use hurwitz_kit::scalar::{Scalar, SignClass, Tolerance};
use hurwitz_kit::Error;

fn exact_scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..=50, 1i64..=20).prop_map(|(p, q)| Scalar::from_ratio(p, q).unwrap())
}

fn exact_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(exact_scalar(), n), n)
        .prop_map(|rows| Matrix::from_rows(rows).unwrap())
}

fn float_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, n), n).prop_map(|rows| {
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        Matrix::from_f64_rows(&refs).unwrap()
    })
}

/// Symmetric exact matrix with a guaranteed nonzero trailing corner.
fn exact_symmetric(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(exact_scalar(), n * (n + 1) / 2).prop_map(move |tri| {
        let mut rows = vec![vec![Scalar::from_int(0); n]; n];
        let mut it = tri.into_iter();
        for i in 0..n {
            for j in i..n {
                let v = it.next().unwrap();
                rows[i][j] = v.clone();
                rows[j][i] = v;
            }
        }
        if rows[n - 1][n - 1].sign_class(&Tolerance::exact()) == SignClass::Zero {
            rows[n - 1][n - 1] = Scalar::from_int(-1);
        }
        Matrix::from_rows(rows).unwrap()
    })
}

/// Metzler exact matrix with strictly negative diagonal.
fn exact_metzler(n: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec((0i64..=30, 1i64..=10), n * n).prop_map(move |cells| {
        let mut rows = vec![vec![Scalar::from_int(0); n]; n];
        let mut it = cells.into_iter();
        for i in 0..n {
            for j in 0..n {
                let (p, q) = it.next().unwrap();
                if i == j {
                    rows[i][j] = Scalar::from_ratio(-(p + 1), q).unwrap();
                } else {
                    rows[i][j] = Scalar::from_ratio(p, q).unwrap();
                }
            }
        }
        Matrix::from_rows(rows).unwrap()
    })
}

proptest! {
    #[test]
    fn partition_reassembles_exact(a in (2usize..=5).prop_flat_map(exact_matrix)) {
        let p = a.partition().unwrap();
        prop_assert_eq!(p.reassemble(), a);
    }

    #[test]
    fn partition_reassembles_float(a in (2usize..=6).prop_flat_map(float_matrix)) {
        let p = a.partition().unwrap();
        prop_assert_eq!(p.reassemble(), a);
    }

    #[test]
    fn schur_preserves_symmetry(a in (2usize..=5).prop_flat_map(exact_symmetric)) {
        let tol = Tolerance::exact();
        let reduced = a.partition().unwrap().schur_reduce(&tol).unwrap();
        prop_assert!(reduced.is_symmetric(&tol));
    }

    #[test]
    fn schur_preserves_metzler_for_negative_corner(a in (2usize..=5).prop_flat_map(exact_metzler)) {
        let tol = Tolerance::exact();
        let reduced = a.partition().unwrap().schur_reduce(&tol).unwrap();
        prop_assert!(reduced.is_metzler(&tol, false));
    }

    #[test]
    fn char_poly_of_triangular_is_diagonal_product(diag in prop::collection::vec(exact_scalar(), 1..=5)) {
        let n = diag.len();
        let mut rows = vec![vec![Scalar::from_int(0); n]; n];
        for (i, d) in diag.iter().enumerate() {
            rows[i][i] = d.clone();
        }
        let a = Matrix::from_rows(rows).unwrap();
        // Expand prod (lambda - d_i) by convolution.
        let mut coeffs = vec![Scalar::from_int(1)];
        for d in &diag {
            let mut next = vec![Scalar::from_int(0); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i] = next[i].checked_add(c).unwrap();
                next[i + 1] = next[i + 1].checked_sub(&c.checked_mul(d).unwrap()).unwrap();
            }
            coeffs = next;
        }
        prop_assert_eq!(a.char_poly(), coeffs);
    }

    #[test]
    fn certificate_replay_reproduces_pivots(n in 2usize..=6, seed in 0u64..1000) {
        let tol = Tolerance::default_float();
        let a = random_hurwitz_symmetric(n, seed, &tol).unwrap();
        let verdict = certify_symmetric(&a, &tol).unwrap();
        prop_assert!(verdict.hurwitz);
        let mut current = a;
        for (stage, pivot) in verdict.certificate.pivots.iter().enumerate() {
            let m = current.dim();
            let corner = current.get(m - 1, m - 1).to_f64();
            prop_assert!((corner - pivot.to_f64()).abs() <= tol.eps());
            if m > 1 {
                current = current.partition().unwrap().schur_reduce(&tol).unwrap();
            } else {
                prop_assert_eq!(stage + 1, verdict.certificate.pivots.len());
            }
        }
    }

    #[test]
    fn exact_lemma_equivalence_symmetric(a in (2usize..=4).prop_flat_map(exact_symmetric)) {
        let tol = Tolerance::exact();
        let chain = match certify_symmetric(&a, &tol) {
            Ok(v) => v.hurwitz,
            Err(Error::SingularPivot { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        prop_assert_eq!(oracle_sylvester(&a, &tol), chain);
        match oracle_routh_hurwitz(&a, &tol) {
            Ok(routh) => prop_assert_eq!(routh, chain),
            Err(Error::Inconclusive { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn exact_lemma_equivalence_metzler(a in (2usize..=4).prop_flat_map(exact_metzler)) {
        let tol = Tolerance::exact();
        let chain = match certify_metzler(&a, &tol) {
            Ok(v) => v.hurwitz,
            Err(Error::SingularPivot { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        prop_assert_eq!(oracle_mmatrix(&a, &tol).unwrap(), chain);
        match oracle_routh_hurwitz(&a, &tol) {
            Ok(routh) => prop_assert_eq!(routh, chain),
            Err(Error::Inconclusive { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn direct_lift_is_section_of_reduction(
        base in (1usize..=4).prop_flat_map(exact_metzler),
        hk in prop::collection::vec((0i64..=10, 1i64..=5, 0i64..=10, 1i64..=5), 4),
        dp in 1i64..=20,
    ) {
        // Metzler lift over a diagonally dominant (hence Hurwitz) base.
        let tol = Tolerance::exact();
        let m = base.dim();
        let dominant = force_diagonally_dominant(&base);
        let h: Vec<Scalar> = (0..m).map(|i| Scalar::from_ratio(hk[i % 4].0, hk[i % 4].1).unwrap()).collect();
        let k: Vec<Scalar> = (0..m).map(|i| Scalar::from_ratio(hk[i % 4].2, hk[i % 4].3).unwrap()).collect();
        let corner = Corner::Direct { d: Scalar::from_ratio(-dp, 3).unwrap() };
        let params = MetzlerLiftParams::new(h, k, corner).unwrap();
        let violations = check_metzler_lift_conditions(&dominant, &params, &tol).unwrap();
        prop_assume!(violations.is_empty());
        let lifted = lift_metzler(&dominant, &params, &tol).unwrap();
        let v = certify_metzler(&lifted, &tol).unwrap();
        prop_assert!(v.hurwitz);
        let back = lifted.partition().unwrap().schur_reduce(&tol).unwrap();
        prop_assert_eq!(back, dominant);
    }

    #[test]
    fn phi_closure_and_roundtrip(n in 2usize..=6, seed in 0u64..500) {
        let tol = Tolerance::default_float();
        let a = random_hurwitz_symmetric(n, seed, &tol).unwrap();
        let point = phi(&a, &tol).unwrap();
        prop_assert!(certify_symmetric(point.base(), &tol).unwrap().hurwitz);
        let back = phi_inverse(&point, &tol).unwrap();
        for i in 0..n {
            for j in 0..n {
                let x = a.get(i, j).to_f64();
                let y = back.get(i, j).to_f64();
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }

    #[test]
    fn phi_inverse_accepts_arbitrary_fiber(
        n in 2usize..=5,
        seed in 0u64..200,
        raw_k in prop::collection::vec(-10.0f64..10.0, 6),
    ) {
        let tol = Tolerance::default_float();
        let base = random_hurwitz_symmetric(n - 1, seed, &tol).unwrap();
        let k: Vec<f64> = raw_k.into_iter().take(n).collect();
        prop_assume!(k.len() == n);
        let point = ChartPoint::new(base, k, &tol).unwrap();
        let lifted = phi_inverse(&point, &tol).unwrap();
        let verdict = certify_symmetric(&lifted, &tol).unwrap();
        prop_assert!(verdict.hurwitz);
    }
}

/// Replaces the diagonal so each row strictly dominates: d_ii = -(row abs sum + 1).
fn force_diagonally_dominant(a: &Matrix) -> Matrix {
    let n = a.dim();
    let rows: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        let mut acc = Scalar::from_int(1);
                        for l in 0..n {
                            if l != i {
                                acc = acc.checked_add(&a.get(i, l).abs()).unwrap();
                            }
                        }
                        acc.neg()
                    } else {
                        a.get(i, j)
                    }
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows).unwrap()
}

#[test]
fn solve_linear_residual_contract() {
    // 1000 well-conditioned float systems, n <= 10: residual max-norm within
    // n * eps * (1 + max |rhs|).
    let tol = Tolerance::default_float();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let n = rng.random_range(1..=10usize);
        let mut rows = vec![vec![0.0f64; n]; n];
        for i in 0..n {
            let mut off_sum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = rng.random_range(-1.0..1.0);
                    rows[i][j] = v;
                    off_sum += v.abs();
                }
            }
            let sign = if rng.random_range(0..2) == 0 { -1.0 } else { 1.0 };
            rows[i][i] = sign * (off_sum + rng.random_range(1.0..2.0));
        }
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = Matrix::from_f64_rows(&refs).unwrap();
        let rhs: Vec<Scalar> = (0..n)
            .map(|_| Scalar::from_f64(rng.random_range(-5.0..5.0)).unwrap())
            .collect();
        let x = a.solve_linear(&rhs, &tol).unwrap();
        let mut residual = 0.0f64;
        let mut rhs_norm = 0.0f64;
        for i in 0..n {
            let mut acc = -rhs[i].to_f64();
            rhs_norm = rhs_norm.max(rhs[i].to_f64().abs());
            for j in 0..n {
                acc += a.get(i, j).to_f64() * x[j].to_f64();
            }
            residual = residual.max(acc.abs());
        }
        assert!(
            residual <= n as f64 * tol.eps() * (1.0 + rhs_norm),
            "residual {residual} out of contract for n = {n}"
        );
    }
}

#[test]
fn exact_and_float_direct_lifts_agree() {
    // The same lift computed in exact and in float arithmetic stays within
    // 1e-12 entrywise.
    let tol_e = Tolerance::exact();
    let tol_f = Tolerance::default_float();
    let base_e = Matrix::exact_from_strs(&[&["-2", "1"], &["1", "-3/2"]]).unwrap();
    let base_f = base_e.to_float();
    let params_e = DirectLiftParams::new(
        vec![
            Scalar::from_ratio(1, 3).unwrap(),
            Scalar::from_ratio(-2, 5).unwrap(),
        ],
        Scalar::from_ratio(-7, 4).unwrap(),
    )
    .unwrap();
    let params_f = DirectLiftParams::new(
        vec![
            Scalar::from_f64(1.0 / 3.0).unwrap(),
            Scalar::from_f64(-0.4).unwrap(),
        ],
        Scalar::from_f64(-1.75).unwrap(),
    )
    .unwrap();
    let lift_e = lift_symmetric_direct(&base_e, &params_e, &tol_e).unwrap();
    let lift_f = lift_symmetric_direct(&base_f, &params_f, &tol_f).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            assert!((lift_e.get(i, j).to_f64() - lift_f.get(i, j).to_f64()).abs() < 1e-12);
        }
    }
}
