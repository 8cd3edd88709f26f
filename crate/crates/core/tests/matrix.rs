mod common;

use common::{na_eigenvalues, rng};
use decayproj::linalg::DenseMatrix;
use decayproj::matrix::{
    gershgorin_interval, graph_distances, normalize, norms, read_matrix_market, spectral_interval, truncate_band,
    truncate_graph, write_dense_general, write_matrix_market, IntervalMethod, UNREACHABLE,
};
use decayproj::models::{gapped_random, kron_2d, toeplitz_1d, GappedParams};
use decayproj::projector::{cheb_apply, cheb_coeffs_fd, PatternSpec};
use decayproj::{Error, SparseHermitian, SpectralModel};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

fn random_sparse(seed: u64, n: usize, density: f64, complex: bool) -> SparseHermitian {
    let mut r = rng(seed);
    let mut e = Vec::new();
    for i in 0..n {
        e.push((i, i, Complex64::new(r.gen_range(-2.0..2.0), 0.0)));
        for j in i + 1..n {
            if r.gen::<f64>() < density {
                let im = if complex { r.gen_range(-1.0..1.0) } else { 0.0 };
                e.push((i, j, Complex64::new(r.gen_range(-1.0..1.0), im)));
            }
        }
    }
    SparseHermitian::from_triplets(n, e).unwrap()
}

fn roundtrip(h: &SparseHermitian) -> SparseHermitian {
    let mut buf = Vec::new();
    write_matrix_market(h, &mut buf).unwrap();
    read_matrix_market(buf.as_slice()).unwrap()
}

#[test]
fn matrix_market_roundtrip_is_exact() {
    for (seed, complex) in [(1, false), (2, true)] {
        let h = random_sparse(seed, 40, 0.2, complex);
        let back = roundtrip(&h);
        assert_eq!(back.is_real(), !complex);
        for i in 0..40 {
            for j in 0..40 {
                assert_eq!(back.get(i, j), h.get(i, j));
            }
        }
    }
}

#[test]
fn matrix_market_header_variants() {
    let sym = "%%MatrixMarket matrix coordinate real symmetric\n% comment\n\n3 3 3\n1 1 2.0\n2 1 -1.0\n3 3 4\n";
    let h = read_matrix_market(sym.as_bytes()).unwrap();
    assert_eq!(h.get_re(0, 1), -1.0);
    assert_eq!(h.get_re(1, 0), -1.0);
    assert_eq!(h.get_re(2, 2), 4.0);

    let gen = "%%MatrixMarket matrix coordinate integer general\n2 2 4\n1 1 1\n1 2 3\n2 1 3\n2 2 5\n";
    let h = read_matrix_market(gen.as_bytes()).unwrap();
    assert_eq!(h.get_re(0, 1), 3.0);
    assert_eq!(h.nnz(), 4);

    let herm = "%%MatrixMarket matrix coordinate complex hermitian\n2 2 2\n1 1 1.0 0.0\n2 1 0.5 0.25\n";
    let h = read_matrix_market(herm.as_bytes()).unwrap();
    assert_eq!(h.get(1, 0), Complex64::new(0.5, 0.25));
    assert_eq!(h.get(0, 1), Complex64::new(0.5, -0.25));
}

#[test]
fn matrix_market_rejects_bad_input() {
    let cases = [
        ("", 1),
        ("%%MatrixMarket matrix array real general\n2 2\n", 1),
        ("%%MatrixMarket matrix coordinate real hermitian\n1 1 1\n1 1 1\n", 1),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 3 1\n1 1 1\n", 2),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n", 3),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n1 1 x\n", 3),
        ("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n", 0),
    ];
    for (text, line) in cases {
        match read_matrix_market(text.as_bytes()) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
            other => panic!("{text:?}: expected parse error, got {other:?}"),
        }
    }
    // A general file must still describe a Hermitian matrix.
    let non_herm = "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 2 1\n2 1 2\n";
    assert!(read_matrix_market(non_herm.as_bytes()).is_err());
}

#[test]
fn dense_general_writer_lists_every_entry() {
    let a = DenseMatrix::from_fn(3, 2, |i, j| if i == j { 0.0 } else { (i + 10 * j) as f64 + 0.5 });
    let mut buf = Vec::new();
    write_dense_general(&a, 0.0, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "%%MatrixMarket matrix coordinate real general");
    assert_eq!(lines.next().unwrap(), "3 2 4");
    for l in lines {
        let f: Vec<&str> = l.split_whitespace().collect();
        let (i, j): (usize, usize) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        assert_eq!(f[2].parse::<f64>().unwrap(), a[(i - 1, j - 1)]);
    }
}

#[test]
fn inconsistent_triplets_are_rejected() {
    let ok = SparseHermitian::from_real_triplets(2, [(0, 1, 1.0), (1, 0, 1.0)]);
    assert!(ok.is_ok());
    assert!(SparseHermitian::from_real_triplets(2, [(0, 1, 1.0), (1, 0, 2.0)]).is_err());
    assert!(SparseHermitian::from_triplets(2, [(0, 0, Complex64::new(1.0, 1.0))]).is_err());
    assert!(SparseHermitian::from_real_triplets(2, [(0, 2, 1.0)]).is_err());
    assert!(SparseHermitian::from_real_triplets(2, [(0, 1, f64::NAN)]).is_err());
}

#[test]
fn path_graph_distances_are_index_gaps() {
    let h = toeplitz_1d(30).unwrap();
    let d = graph_distances(&h, 5, None).unwrap();
    for i in 0..30usize {
        for j in 0..30 {
            let want = if i.abs_diff(j) <= 5 { i.abs_diff(j) as u32 } else { UNREACHABLE };
            assert_eq!(d.get(i, j), Some(want));
        }
    }
    assert_eq!(d.max_degree(), 2);
}

#[test]
fn lattice_distances_are_manhattan() {
    let n = 7;
    let h = kron_2d(n).unwrap();
    let d = graph_distances(&h, 2 * n, Some(&[0, 10, 24])).unwrap();
    for &s in &[0usize, 10, 24] {
        for t in 0..n * n {
            let man = (s / n).abs_diff(t / n) + (s % n).abs_diff(t % n);
            assert_eq!(d.get(s, t), Some(man as u32));
        }
    }
    assert!(!d.has_source(1));
    assert_eq!(d.get(1, 2), None);
    assert!(graph_distances(&h, 1, Some(&[n * n])).is_err());
}

#[test]
fn truncations_keep_exactly_the_near_entries() {
    let n = 6;
    let h = kron_2d(n).unwrap();
    let full = h.filter(|_, _, _| true);
    let p = decayproj::projector::oracle_projector(&h.scale_shift(1.0, 0.013), 0.0)
        .unwrap()
        .matrix;
    let tb = truncate_band(&p, 4);
    for i in 0..n * n {
        for j in 0..n * n {
            let keep = i.abs_diff(j) <= 4;
            assert_eq!(tb.get(i, j), if keep { p.get(i, j) } else { Complex64::new(0.0, 0.0) });
        }
    }
    let d = graph_distances(&h, 3, None).unwrap();
    let tg = truncate_graph(&p, &d, 3).unwrap();
    for i in 0..n * n {
        for j in 0..n * n {
            let man = (i / n).abs_diff(j / n) + (i % n).abs_diff(j % n);
            let want = if man <= 3 { p.get(i, j) } else { Complex64::new(0.0, 0.0) };
            assert_eq!(tg.get(i, j), want);
        }
    }
    assert!(matches!(
        truncate_graph(&p, &d, 4),
        Err(Error::InsufficientRadius { needed: 4, available: 3 })
    ));
    assert_eq!(full, h);
}

#[test]
fn norms_match_dense_definitions() {
    let h = random_sparse(5, 25, 0.3, true);
    let d = h.to_dense_complex();
    let rows: Vec<f64> = (0..25).map(|i| (0..25).map(|j| d[(i, j)].norm()).sum()).collect();
    let inf = rows.iter().copied().fold(0.0, f64::max);
    let fro = (0..25)
        .flat_map(|i| (0..25).map(move |j| (i, j)))
        .map(|(i, j)| d[(i, j)].norm_sqr())
        .sum::<f64>()
        .sqrt();
    let nm = norms(&h);
    assert!((nm.inf - inf).abs() <= 1e-12 * inf);
    assert!((nm.one - inf).abs() <= 1e-12 * inf);
    assert!((nm.frobenius - fro).abs() <= 1e-12 * fro);
    let real = h.realify().to_dense_real().unwrap();
    let ev = na_eigenvalues(&real);
    let two = ev[0].abs().max(ev[ev.len() - 1].abs());
    assert!(nm.two_norm_bound >= two * (1.0 - 1e-12));
}

#[test]
fn trace_product_matches_dense() {
    let a = random_sparse(6, 20, 0.3, true);
    let b = random_sparse(7, 20, 0.4, true);
    let (da, db) = (a.to_dense_complex(), b.to_dense_complex());
    let mut t = Complex64::new(0.0, 0.0);
    for i in 0..20 {
        for k in 0..20 {
            t += da[(i, k)] * db[(k, i)];
        }
    }
    assert!(t.im.abs() <= 1e-12);
    assert!((a.trace_product(&b) - t.re).abs() <= 1e-12 * t.re.abs().max(1.0));
}

#[test]
fn realify_doubles_the_spectrum() {
    let h = random_sparse(8, 12, 0.5, true);
    let r = h.realify();
    assert_eq!(r.n(), 24);
    assert!(r.is_real());
    let ev = na_eigenvalues(&r.to_dense_real().unwrap());
    for k in 0..12 {
        assert!((ev[2 * k] - ev[2 * k + 1]).abs() <= 1e-10);
    }
}

#[test]
fn normalization_maps_spectrum_into_unit_interval() {
    let g = gapped_random(&GappedParams {
        n: 60,
        m: 3,
        occupied: [-3.0, -1.0],
        unoccupied: [2.0, 5.0],
        n_e: 20,
        seed: 11,
    })
    .unwrap();
    let iv = spectral_interval(&g.h).unwrap();
    let (lo, hi) = (g.eigenvalues[0], g.eigenvalues[59]);
    assert!(iv.lo <= lo && iv.hi >= hi);
    assert_eq!(iv.method, IntervalMethod::Lanczos);
    assert!(iv.hi - iv.lo <= 1.05 * (hi - lo) + 1e-9);
    let (hn, map) = normalize(&g.h, iv.lo, iv.hi).unwrap();
    let ev = na_eigenvalues(&hn.to_dense_real().unwrap());
    for (x, y) in ev.iter().zip(&g.eigenvalues) {
        assert!((x - map.apply(*y)).abs() <= 1e-12);
        assert!(x.abs() <= 1.0);
    }
    assert!((map.invert(map.apply(0.3)) - 0.3).abs() <= 1e-15);
    assert!(normalize(&g.h, 1.0, 1.0).is_err());
}

#[test]
fn lanczos_enclosure_on_clustered_spectrum() {
    // Extreme eigenvalues of the chain are about 1e-4 apart at n = 200.
    let n = 200;
    let top = (std::f64::consts::PI / (n + 1) as f64).cos();
    let h = toeplitz_1d(n).unwrap();
    let (hn, _) = normalize(&h, -top, top).unwrap();
    let iv = spectral_interval(&hn).unwrap();
    assert_eq!(iv.method, IntervalMethod::Lanczos);
    let (rlo, rhi) = iv.ritz.unwrap();
    assert!(rlo >= -1.0 - 1e-12 && rhi <= 1.0 + 1e-12, "{iv:?}");
    assert!(iv.lo <= -1.0 && iv.hi >= 1.0);
    let coeffs = cheb_coeffs_fd(20.0, 0.0, 40).unwrap();
    cheb_apply(&hn, &coeffs, PatternSpec::None).unwrap();
}

#[test]
fn spectral_model_invariants() {
    assert!(SpectralModel::new(-1.0, 1.0, 0.0, -0.2, 0.3, 5).is_ok());
    assert!(SpectralModel::new(-1.0, 1.0, 0.4, -0.2, 0.3, 5).is_err());
    assert!(SpectralModel::new(-1.0, 1.0, 0.0, -0.2, 1.3, 5).is_err());
    let m = SpectralModel::new(-1.0, 1.0, 0.0, -0.2, 0.3, 5).unwrap();
    assert!((m.gap() - 0.5).abs() < 1e-15);
    assert!((m.effective_gap() - 0.4).abs() < 1e-15);
    let s = SpectralModel::from_eigenvalues(&[-2.0, -1.0, 0.5, 4.0], 0.0).unwrap();
    assert_eq!((s.lo, s.eps_minus, s.eps_plus, s.hi, s.n_e), (-2.0, -1.0, 0.5, 4.0, 2));
    let (nm, map) = s.with_beta(3.0).normalized().unwrap();
    assert_eq!((nm.lo, nm.hi), (-1.0, 1.0));
    assert!((nm.beta.unwrap() - 3.0 / map.scale).abs() < 1e-15);
    let c = SpectralModel::from_eigenvalues_count(&[3.0, -1.0, 1.0, -3.0], 2).unwrap();
    assert_eq!(c.mu, 0.0);
    assert!(SpectralModel::from_eigenvalues_count(&[1.0, 1.0], 1).is_err());
    assert!(matches!(
        SpectralModel::from_eigenvalues(&[-1.0, 0.0, 1.0], 0.0),
        Err(Error::EigenvalueAtFermiLevel { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn roundtrip_preserves_entries(seed in 0u64..1000, n in 1usize..30, complex in any::<bool>()) {
        let h = random_sparse(seed, n, 0.3, complex);
        let back = roundtrip(&h);
        prop_assert_eq!(back, h);
    }

    #[test]
    fn intervals_enclose_spectrum(seed in 0u64..1000, n in 2usize..40) {
        let h = random_sparse(seed, n, 0.2, false);
        let ev = na_eigenvalues(&h.to_dense_real().unwrap());
        let (glo, ghi) = gershgorin_interval(&h);
        let iv = spectral_interval(&h).unwrap();
        let tol = 1e-10 * (ghi - glo).max(1.0);
        prop_assert!(glo <= ev[0] + tol && ghi >= ev[n - 1] - tol);
        prop_assert!(iv.lo <= ev[0] + tol && iv.hi >= ev[n - 1] - tol);
        prop_assert!(iv.lo >= glo && iv.hi <= ghi);
    }

    #[test]
    fn band_truncation_bounds_offsets(seed in 0u64..1000, m in 0usize..6) {
        let h = random_sparse(seed, 20, 0.6, true);
        let t = truncate_band(&h, m);
        prop_assert!(t.bandwidth() <= m);
        for (i, j, v) in t.iter_upper() {
            prop_assert_eq!(v, h.get(i, j));
        }
        prop_assert_eq!(
            t.nnz_stored(),
            h.iter_upper().filter(|(i, j, _)| j - i <= m).count()
        );
    }
}
