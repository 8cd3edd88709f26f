mod common;

use approx::assert_abs_diff_eq;
use common::{na_eigenvalues, rng, to_na};
use decayproj::linalg::DenseMatrix;
use decayproj::models::banded_spd;
use decayproj::orthobasis::*;
use decayproj::{Error, SparseHermitian};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn identity(n: usize) -> SparseHermitian {
    SparseHermitian::tridiagonal(&vec![1.0; n], &vec![0.0; n - 1]).unwrap()
}

fn real_z(f: &FactorSet) -> &DenseMatrix<f64> {
    match &f.z {
        FactorMatrix::Real(z) => z,
        FactorMatrix::Complex(_) => panic!("expected a real factor"),
    }
}

/// Generalized eigenvalues of `(H, S)` through nalgebra's Cholesky.
fn na_generalized(h: &SparseHermitian, s: &SparseHermitian) -> Vec<f64> {
    let l = nalgebra::Cholesky::new(to_na(&s.to_dense_real().unwrap())).unwrap().l();
    let li = l.try_inverse().unwrap();
    let m = &li * to_na(&h.to_dense_real().unwrap()) * li.transpose();
    let m = DenseMatrix::from_fn(m.nrows(), m.ncols(), |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    na_eigenvalues(&m)
}

#[test]
fn cholesky_of_identity_and_two_by_two() {
    let l = cholesky_banded(&identity(5)).unwrap().to_dense_complex();
    assert_eq!(l, DenseMatrix::<f64>::identity(5).to_complex());
    let s = SparseHermitian::from_real_triplets(2, [(0, 0, 1.0), (0, 1, 0.5), (1, 1, 1.0)]).unwrap();
    let l = cholesky_banded(&s).unwrap().to_dense_complex();
    assert_abs_diff_eq!(l[(1, 0)].re, 0.5, epsilon = 1e-15);
    assert_abs_diff_eq!(l[(1, 1)].re, 3.0f64.sqrt() / 2.0, epsilon = 1e-15);
    assert_eq!(l[(0, 1)].re, 0.0);
}

#[test]
fn cholesky_residual_on_random_banded_spd() {
    let s = banded_spd(300, 4, 50.0, 1).unwrap();
    let l = cholesky_banded(&s).unwrap();
    assert!(l.residual(&s) <= 1e-12);
    assert!(l.bandwidth() <= s.bandwidth());
}

#[test]
fn cholesky_rejects_indefinite() {
    let s = SparseHermitian::from_real_triplets(2, [(0, 0, 1.0), (0, 1, 2.0), (1, 1, 1.0)]).unwrap();
    assert!(matches!(cholesky_banded(&s), Err(Error::NotPositiveDefinite { .. })));
    assert!(inverse_cholesky(&s, 0.0).is_err());
    assert!(lowdin(&s).is_err());
}

#[test]
fn inverse_factors_of_identity() {
    let z = inverse_cholesky(&identity(6), 0.0).unwrap();
    assert_eq!(real_z(&z), &DenseMatrix::identity(6));
    let four = SparseHermitian::tridiagonal(&[4.0; 6], &[0.0; 5]).unwrap();
    let z = lowdin(&four).unwrap();
    assert!(real_z(&z).sub(&DenseMatrix::identity(6).scaled(0.5)).max_abs() < 1e-15);
}

#[test]
fn inverse_cholesky_exact_is_orthogonalizing_and_upper() {
    let s = banded_spd(100, 3, 100.0, 4).unwrap();
    let f = inverse_cholesky(&s, 0.0).unwrap();
    assert!(orthogonality_defect(&s, &f.z).unwrap() <= 1e-10);
    let z = real_z(&f);
    for i in 0..100 {
        for j in 0..i {
            assert_eq!(z[(i, j)], 0.0);
        }
    }
    assert_abs_diff_eq!(f.kappa, 100.0, epsilon = 1e-8);
}

#[test]
fn inverse_cholesky_obeys_demko_constant() {
    for seed in 0..5 {
        let s = banded_spd(120, 2, 10.0, seed).unwrap();
        let f = inverse_cholesky(&s, 0.0).unwrap();
        let c = demko_constants(f.a, f.b, 2).unwrap();
        let z = real_z(&f);
        for i in 0..120 {
            for j in i..120 {
                let bound = c.cholesky_entry(j - i);
                assert!(z[(i, j)].abs() <= bound * (1.0 + 1e-12), "seed {seed} ({i},{j}) {} > {bound}", z[(i, j)]);
            }
        }
    }
}

#[test]
fn demko_bound_on_inverse_for_many_conditions() {
    let mut r = rng(77);
    for t in 0..20 {
        let kappa = 10f64.powf(r.gen_range(0.3..4.0));
        let m = 1 + t % 3;
        let s = banded_spd(80, m, kappa, t as u64).unwrap();
        let f = lowdin(&s).unwrap();
        let c = demko_constants(f.a, f.b, m).unwrap();
        let inv = nalgebra::DMatrix::from_fn(80, 80, |i, j| s.get_re(i, j)).try_inverse().unwrap();
        for i in 0..80usize {
            for j in 0..80 {
                let bound = c.inverse_entry(i.abs_diff(j));
                assert!(inv[(i, j)].abs() <= bound * (1.0 + 1e-10) + 1e-12 * c.k);
            }
        }
    }
}

#[test]
fn demko_constants_edge_cases() {
    let c = demko_constants(2.0, 2.0, 1).unwrap();
    assert_eq!(c.q, 0.0);
    assert_eq!(c.inverse_entry(1), 0.0);
    // kappa = 4 gives q = 1/3; kappa = 2 gives (sqrt 2 - 1) / (sqrt 2 + 1).
    let c = demko_constants(0.5, 2.0, 1).unwrap();
    assert_abs_diff_eq!(c.q, 1.0 / 3.0, epsilon = 1e-15);
    let s2 = 2f64.sqrt();
    let c = demko_constants(1.0, 2.0, 1).unwrap();
    assert_abs_diff_eq!(c.q, (s2 - 1.0) / (s2 + 1.0), epsilon = 1e-15);
    let big = demko_constants(1e-8, 1.0, 2).unwrap();
    assert!(big.k > 1e7);
    assert!(demko_constants(0.0, 1.0, 1).is_err());
}

#[test]
fn lowdin_matches_spectral_reconstruction() {
    // S = Q diag(l) Q^T with a Householder Q.
    let n = 12;
    let mut r = rng(3);
    let v: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let q = DenseMatrix::from_fn(n, n, |i, j| f64::from(u8::from(i == j)) - 2.0 * v[i] * v[j] / vv);
    let lam: Vec<f64> = (0..n).map(|k| 0.5 + k as f64 * 0.3).collect();
    let build = |f: &dyn Fn(f64) -> f64| {
        DenseMatrix::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * f(lam[k]) * q[(j, k)]).sum())
    };
    let s = SparseHermitian::from_dense(&build(&|x| x), 0.0).unwrap();
    let want = build(&|x| 1.0 / x.sqrt());
    let z = lowdin(&s).unwrap();
    assert!(real_z(&z).sub(&want).max_abs() < 1e-12);
    assert!(orthogonality_defect(&s, &z.z).unwrap() < 1e-10);
    assert!(real_z(&z).hermiticity_residual() == 0.0);
}

#[test]
fn lowdin_decay_slope_within_admissible_rate() {
    for (seed, kappa) in [(1u64, 5.0), (2, 30.0), (3, 100.0)] {
        let m = 2;
        let s = banded_spd(150, m, kappa, seed).unwrap();
        let f = lowdin(&s).unwrap();
        let c = demko_constants(f.a, f.b, m).unwrap();
        let env = f.z.diagonal_envelope();
        let slope = decay_slope(&env, 2..=40, 1e-14).unwrap();
        // Admissible q lie in (q_min, 1); ln lambda at q_min is the steepest.
        assert!(slope <= c.lambda.ln(), "kappa {kappa}: slope {slope} vs {}", c.lambda.ln());
    }
}

#[test]
fn congruence_identity_cases() {
    let h = common::random_banded(20, 2, 8);
    let ht = congruence(&h, &FactorMatrix::Real(DenseMatrix::identity(20))).unwrap();
    assert!(ht.to_dense_real().unwrap().sub(&h.to_dense_real().unwrap()).max_abs() < 1e-15);
    for f in [inverse_cholesky(&identity(20), 0.0).unwrap(), lowdin(&identity(20)).unwrap()] {
        let ht = congruence(&h, &f.z).unwrap();
        assert!(ht.to_dense_real().unwrap().sub(&h.to_dense_real().unwrap()).max_abs() < 1e-14);
    }
}

#[test]
fn congruence_solves_generalized_problem() {
    let h = common::random_banded(100, 3, 12);
    let s = banded_spd(100, 2, 20.0, 13).unwrap();
    let want = na_generalized(&h, &s);
    let ic = inverse_cholesky(&s, 0.0).unwrap();
    let lw = lowdin(&s).unwrap();
    for f in [&ic, &lw] {
        let ht = congruence(&h, &f.z).unwrap();
        let got = na_eigenvalues(&ht.to_dense_real().unwrap());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-8, "{a} vs {b}");
        }
    }
    let g = generalized_eigenvalues(&h, &s).unwrap();
    assert!(g.iter().zip(&want).all(|(a, b)| (a - b).abs() <= 1e-8));
}

#[test]
fn complex_overlap_pipeline() {
    let n = 40;
    let mut r = rng(31);
    let mut e = Vec::new();
    for i in 0..n {
        e.push((i, i, Complex64::new(1.0, 0.0)));
        if i + 1 < n {
            e.push((i, i + 1, Complex64::new(r.gen_range(-0.2..0.2), r.gen_range(-0.2..0.2))));
        }
    }
    let s = SparseHermitian::from_triplets(n, e).unwrap();
    let ic = inverse_cholesky(&s, 0.0).unwrap();
    let lw = lowdin(&s).unwrap();
    assert!(matches!(ic.z, FactorMatrix::Complex(_)));
    assert!(orthogonality_defect(&s, &ic.z).unwrap() < 1e-10);
    assert!(orthogonality_defect(&s, &lw.z).unwrap() < 1e-10);
    assert!(cholesky_banded(&s).unwrap().residual(&s) < 1e-14);
    // Both transforms give the same spectrum.
    let h = common::random_banded(n, 2, 5);
    let a = congruence(&h, &ic.z).unwrap();
    let b = congruence(&h, &lw.z).unwrap();
    let ea = decayproj::linalg::symmetric_eigenvalues(&a.realify().to_dense_real().unwrap()).unwrap();
    let eb = decayproj::linalg::symmetric_eigenvalues(&b.realify().to_dense_real().unwrap()).unwrap();
    assert!(ea.iter().zip(&eb).all(|(x, y)| (x - y).abs() < 1e-8));
}

#[test]
fn pipeline_reproduces_pencil_projector() {
    let h = common::random_banded(60, 2, 41);
    let s = banded_spd(60, 2, 8.0, 42).unwrap();
    let gen = na_generalized(&h, &s);
    let mu = 0.5 * (gen[29] + gen[30]);
    let ht = congruence(&h, &inverse_cholesky(&s, 0.0).unwrap().z).unwrap();
    let p = decayproj::projector::oracle_projector(&ht, mu).unwrap();
    let spec = p.spec.unwrap();
    assert_eq!(spec.n_e, 30);
    assert!((spec.eps_minus - gen[29]).abs() < 1e-8 && (spec.eps_plus - gen[30]).abs() < 1e-8);
}

#[test]
fn drop_sweep_defect_decreases() {
    let s = banded_spd(150, 2, 50.0, 9).unwrap();
    let tols = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 0.0];
    let rows = drop_sweep(&s, &tols).unwrap();
    for w in rows.windows(2) {
        assert!(w[1].defect <= w[0].defect * 1.1, "{rows:?}");
        assert!(w[1].nnz >= w[0].nnz);
    }
    assert!(rows.last().unwrap().defect < 1e-10);
}

#[test]
fn product_bound_examples() {
    let id = DenseMatrix::<f64>::identity(30);
    let chk = product_decay_check(&id, &id, 1.0, 1.0, 1.0, 0.5).unwrap();
    assert_eq!(chk.violations, 0);
    let n = 200;
    let (c1, c2, alpha) = (1.5, 0.7, 1.0);
    let a = DenseMatrix::from_fn(n, n, |i, j| c1 * (-alpha * i.abs_diff(j) as f64).exp());
    let b = DenseMatrix::from_fn(n, n, |i, j| c2 * (-alpha * i.abs_diff(j) as f64).exp());
    let chk = product_decay_check(&a, &b, alpha, c1, c2, 0.5).unwrap();
    assert_eq!(chk.violations, 0);
    // Oracle: the product of exact kernels, summed over all k in Z, is
    // c1 c2 e^{-a d} (d + (1 + e^{-2a})/(1 - e^{-2a})) which the constant dominates.
    let e = (-0.5f64).exp();
    assert_abs_diff_eq!(chk.c, c1 * c2 * (1.0 + e) / (1.0 - e), epsilon = 1e-14);
    assert!(product_decay_check(&a, &b, alpha, c1, c2, 1.0).is_err());
}

#[test]
fn three_factor_chain_bound() {
    let s = banded_spd(120, 2, 10.0, 2).unwrap();
    let h = common::random_banded(120, 2, 3);
    let f = lowdin(&s).unwrap();
    let z = real_z(&f).clone();
    let hd = h.to_dense_real().unwrap();
    // Measured constants at rate alpha for Z and H.
    let alpha = 0.4;
    let measure = |m: &DenseMatrix<f64>| {
        (0..120)
            .flat_map(|i| (0..120).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].abs() * (alpha * i.abs_diff(j) as f64).exp())
            .fold(0.0f64, f64::max)
    };
    let (cz, ch) = (measure(&z), measure(&hd));
    let hz = hd.matmul(&z);
    let c_hz = product_constant(ch, cz, alpha, 0.3).unwrap();
    let chk = product_decay_check(&z.adjoint(), &hz, 0.3, cz, c_hz, 0.15).unwrap();
    assert_eq!(chk.violations, 0);
    let chk = product_decay_check(&hd, &z, alpha, ch, cz, 0.3).unwrap();
    assert_eq!(chk.violations, 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn inverse_factor_reproduces_inverse(seed in 0u64..1000, kappa in 2.0f64..1e3, m in 1usize..4) {
        let s = banded_spd(40, m, kappa, seed).unwrap();
        let f = inverse_cholesky(&s, 0.0).unwrap();
        let z = real_z(&f);
        let zzt = z.matmul(&z.adjoint());
        let inv = nalgebra::DMatrix::from_fn(40, 40, |i, j| s.get_re(i, j)).try_inverse().unwrap();
        let scale = inv.amax();
        for i in 0..40 {
            for j in 0..40 {
                prop_assert!((zzt[(i, j)] - inv[(i, j)]).abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn product_constant_dominates_exact_kernel(c1 in 0.1f64..3.0, c2 in 0.1f64..3.0, alpha in 0.2f64..2.0, frac in 0.05f64..0.95) {
        let ap = alpha * frac;
        let c = product_constant(c1, c2, alpha, ap).unwrap();
        // sum_k e^{-a|i-k|} e^{-a|k-j|} over all integers k, at distance d.
        for d in 0..40 {
            let df = d as f64;
            let x = (-2.0 * alpha).exp();
            let exact = c1 * c2 * (-alpha * df).exp() * (df + 1.0 + 2.0 * x / (1.0 - x));
            prop_assert!(exact <= c * (-ap * df).exp() * (1.0 + 1e-12));
        }
    }
}
