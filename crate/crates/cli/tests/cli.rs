//! End-to-end tests of the `decayproj` binary.

use decayproj::matrix::{read_matrix_market_path, write_matrix_market_path};
use decayproj::SparseHermitian;
use serde_json::Value;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_decayproj"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn p(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Rows of a CSV written by the binary, without the header; checks the
/// schema column.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    assert_eq!(header[0], "schema_version");
    let rows = lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f[0], "1.0");
            f[1..].iter().map(|x| x.parse::<f64>().unwrap()).collect()
        })
        .collect();
    (header[1..].to_vec(), rows)
}

fn json(path: &Path) -> Value {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], "1.0");
    v
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

/// Maximum of `|1 / (1 + exp(beta z))|` over the Bernstein ellipse by a
/// fine scan.
fn ellipse_max_scan(beta: f64, chi: f64) -> f64 {
    let (k1, k2) = (0.5 * (chi + 1.0 / chi), 0.5 * (chi - 1.0 / chi));
    (0..200_000)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / 200_000.0;
            let (x, y) = (beta * k1 * t.cos(), beta * k2 * t.sin());
            // |1 + e^{x + iy}|^2
            let d = 1.0 + 2.0 * x.exp() * y.cos() + (2.0 * x).exp();
            1.0 / d.sqrt()
        })
        .fold(0.0, f64::max)
}

#[test]
fn chi_bar_prints_reference_value() {
    let out = run_ok(&["bounds", "--family", "bernstein", "--beta", "10", "--mu", "0", "--chi-bar"]);
    assert_eq!(out.trim(), "1.3623463");
}

#[test]
fn bernstein_csv_rows_follow_exponential() {
    let dir = TempDir::new().unwrap();
    let (csv, js) = (p(&dir, "b.csv"), p(&dir, "b.json"));
    run_ok(&[
        "bounds", "--family", "bernstein", "--beta", "10", "--mu", "0", "--chi", "1.3", "--m", "1", "--dmax", "200",
        "--out", s(&csv), "--json", s(&js),
    ]);
    let (head, rows) = csv_rows(&std::fs::read_to_string(&csv).unwrap());
    assert_eq!(head, ["d", "bound"]);
    assert_eq!(rows.len(), 200);
    let v = json(&js);
    assert_eq!(v["kind"], "bound");
    assert_eq!(v["family"], "bernstein");
    let (c, alpha) = (f(&v["constants"]["c"]), f(&v["constants"]["alpha"]));
    // Independent constants: c = 2 chi M / (chi - 1), alpha = ln chi.
    let m = ellipse_max_scan(10.0, 1.3);
    assert!((c - 2.0 * 1.3 * m / 0.3).abs() <= 1e-6 * c, "c = {c}, scan M = {m}");
    assert!((alpha - 1.3f64.ln()).abs() <= 1e-15);
    for (k, r) in rows.iter().enumerate() {
        let d = (k + 1) as f64;
        assert_eq!(r[0], d);
        let want = c * (-alpha * d).exp();
        assert!((r[1] - want).abs() <= 1e-14 * want, "row {d}");
    }
    assert_eq!(v["samples"].as_array().unwrap().len(), 200);
}

#[test]
fn envelope_is_below_each_grid_bound() {
    let dir = TempDir::new().unwrap();
    let (csv, js) = (p(&dir, "e.csv"), p(&dir, "e.json"));
    run_ok(&["bounds", "--family", "envelope", "--grid", "50", "--out", s(&csv), "--json", s(&js)]);
    let (_, env) = csv_rows(&std::fs::read_to_string(&csv).unwrap());
    let chis: Vec<f64> = json(&js)["parameters"]["chis"]
        .as_array()
        .unwrap()
        .iter()
        .map(f)
        .collect();
    assert_eq!(chis.len(), 50);
    for &chi in chis.iter().step_by(7) {
        let out = run_ok(&["bounds", "--family", "bernstein", "--chi", &chi.to_string()]);
        let (_, single) = csv_rows(&out);
        assert_eq!(single.len(), env.len());
        for (e, b) in env.iter().zip(&single) {
            assert!(e[1] <= b[1], "chi = {chi}, d = {}: {} > {}", e[0], e[1], b[1]);
        }
    }
}

#[test]
fn figure_columns_match_single_bounds() {
    let out = run_ok(&["bounds", "--figure", "fd-bounds"]);
    let (head, rows) = csv_rows(&out);
    assert_eq!(head, ["d", "chi=1.2", "chi=1.3", "chi=1.362346", "envelope"]);
    assert_eq!(rows.len(), 199);
    let (_, single) = csv_rows(&run_ok(&["bounds", "--chi", "1.3", "--dmax", "199"]));
    for (r, b) in rows.iter().zip(&single) {
        assert_eq!(r[2], b[1]);
    }
    // chi close to chi_bar has a huge constant but the fastest rate.
    let last = rows.last().unwrap();
    assert!(rows[0][3] > 1e5 * rows[0][2]);
    assert!(last[3] / rows[0][3] < last[2] / rows[0][2]);
}

#[test]
fn fd_constants_blow_up_at_both_ends() {
    let (head, rows) = csv_rows(&run_ok(&["bounds", "--figure", "fd-constants", "--grid", "30"]));
    assert_eq!(head, ["chi", "ellipse_max", "c", "alpha"]);
    assert_eq!(rows.len(), 30);
    // c = 2 chi M / (chi - 1) diverges as chi -> 1 and as M diverges at chi_bar.
    let cmin = rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    assert!(rows[0][2] > 1e3 * cmin);
    assert!(rows.last().unwrap()[2] > 1e3 * cmin);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][3] > w[0][3]));
}

#[test]
fn projector_bound_uses_beta_from_gap() {
    let dir = TempDir::new().unwrap();
    let js = p(&dir, "p.json");
    let out = run_ok(&["bounds", "--family", "projector", "--gap", "0.5", "--delta", "1e-6", "--json", s(&js)]);
    let (_, rows) = csv_rows(&out);
    let v = json(&js);
    let beta = f(&v["parameters"]["beta"]);
    assert!((beta - (2.0 / 0.5) * ((1.0 - 1e-6) / 1e-6f64).ln()).abs() <= 1e-12 * beta);
    assert!(rows.iter().all(|r| r[1] <= 1.0 + 1e-6 && r[1] > 1e-6));
    assert!(rows.windows(2).all(|w| w[1][1] <= w[0][1]));
}

#[test]
fn invalid_flags_exit_with_usage_code() {
    assert_eq!(code(&["bounds", "--family", "bernstein", "--chi", "1.5"]), 2);
    assert_eq!(code(&["bounds", "--family", "bernstein", "--beta", "-1"]), 2);
    assert_eq!(code(&["bounds", "--family", "nope"]), 2);
    assert_eq!(code(&["bounds", "--family", "demko", "--a", "2", "--b", "1"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    let dir = TempDir::new().unwrap();
    let out = p(&dir, "g.mtx");
    assert_eq!(code(&["model", "gapped-random", "--n", "20", "--gap", "0.5", "--out", s(&out)]), 2);
    assert!(!out.exists());
    assert_eq!(code(&["project", "--method", "oracle", "--mu", "0", s(&p(&dir, "missing.mtx"))]), 2);
    assert_eq!(code(&["validate", "--only", "nope"]), 2);
}

#[test]
fn models_are_reproducible_from_seed() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (p(&dir, "a.mtx"), p(&dir, "b.mtx"));
    for out in [&a, &b] {
        run_ok(&["model", "gapped-random", "--n", "40", "--m", "2", "--gap", "0.5", "--seed", "9", "--out", s(out)]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let prov = json(&p(&dir, "a.json"));
    assert_eq!(prov["kind"], "model");
    assert_eq!(prov["model"]["kind"], "gapped-random");
    assert_eq!(prov["model"]["seed"], 9);
    assert_eq!(prov["bandwidth"], 2);
    let h = read_matrix_market_path(&a).unwrap();
    assert_eq!(h.n(), 40);
    assert_eq!(h.bandwidth(), 2);
}

#[test]
fn oracle_projector_of_chain_has_half_trace() {
    let dir = TempDir::new().unwrap();
    let h = p(&dir, "toeplitz200.mtx");
    run_ok(&["model", "toeplitz1d", "--n", "200", "--out", s(&h)]);
    run_ok(&["project", "--method", "oracle", "--mu", "0", s(&h)]);
    let v = json(&p(&dir, "toeplitz200.mtx.metrics.json"));
    assert_eq!(v["kind"], "project");
    assert!((f(&v["metrics"]["trace"]) - 100.0).abs() <= 1e-10);
    assert!(f(&v["metrics"]["idempotency_defect"]) <= 1e-12);
    let pm = read_matrix_market_path(p(&dir, "toeplitz200.mtx.P.mtx")).unwrap();
    for i in 0..200 {
        assert!((pm.get_re(i, i) - 0.5).abs() <= 1e-12);
    }
}

#[test]
fn contour_matches_oracle_on_gapped_input() {
    let dir = TempDir::new().unwrap();
    let h = p(&dir, "g.mtx");
    let m = p(&dir, "m.json");
    run_ok(&["model", "gapped-random", "--n", "100", "--m", "2", "--gap", "1.4", "--seed", "3", "--out", s(&h)]);
    run_ok(&["project", "--method", "contour", "--nodes", "64", "--n-e", "50", s(&h), "--metrics", s(&m)]);
    let v = json(&m);
    let err = f(&v["metrics"]["sup_error"]);
    assert!(err <= 1e-8, "sup error {err}");
    assert!((f(&v["metrics"]["trace"]) - 50.0).abs() <= 1e-6);
}

#[test]
fn chebyshev_degree_zero_is_scaled_identity() {
    let dir = TempDir::new().unwrap();
    let h = p(&dir, "t.mtx");
    let (out, m) = (p(&dir, "c.mtx"), p(&dir, "c.json"));
    run_ok(&["model", "toeplitz1d", "--n", "50", "--out", s(&h)]);
    run_ok(&[
        "project", "--method", "chebyshev", "--degree", "0", "--mu", "0", s(&h), "--out", s(&out), "--metrics", s(&m),
    ]);
    let v = json(&m);
    let mu_n = f(&v["details"]["affine_map"]["shift"]);
    // c_0 of the step function 1_{x < mu}: (pi - arccos mu) / pi.
    let c0 = (PI - mu_n.acos()) / PI;
    let pm = read_matrix_market_path(&out).unwrap();
    assert_eq!(pm.nnz(), 50);
    for i in 0..50 {
        assert!((pm.get_re(i, i) - c0).abs() <= 1e-12);
    }
}

#[test]
fn auto_band_meets_requested_accuracy() {
    let dir = TempDir::new().unwrap();
    let h = p(&dir, "g.mtx");
    let m = p(&dir, "m.json");
    run_ok(&["model", "gapped-random", "--n", "120", "--m", "1", "--gap", "1.0", "--seed", "5", "--out", s(&h)]);
    let eps = 1e-3;
    run_ok(&["project", "--method", "chebyshev", "--auto-band", "1e-3", "--n-e", "60", s(&h), "--metrics", s(&m)]);
    let v = json(&m);
    let ab = &v["details"]["auto_band"];
    let (c, alpha) = (f(&ab["c"]), f(&ab["alpha"]));
    let mbar = ((2.0 * c / ((1.0 - (-alpha).exp()) * eps)).ln() / alpha).floor() as u64;
    assert_eq!(ab["bandwidth"].as_u64().unwrap(), mbar);
    assert_eq!(v["pattern"]["kind"], "band");
    assert_eq!(v["pattern"]["m"].as_u64().unwrap(), mbar);
    let err = f(&v["metrics"]["sup_error"]);
    assert!(err <= eps + f(&ab["delta"]), "sup error {err}");
}

fn identity(n: usize) -> SparseHermitian {
    SparseHermitian::from_real_triplets(n, (0..n).map(|i| (i, i, 1.0))).unwrap()
}

#[test]
fn ortho_with_identity_overlap_returns_hamiltonian() {
    let dir = TempDir::new().unwrap();
    let (sp, hp) = (p(&dir, "s.mtx"), p(&dir, "h.mtx"));
    write_matrix_market_path(&identity(30), &sp).unwrap();
    run_ok(&["model", "gapped-random", "--n", "30", "--m", "2", "--gap", "0.5", "--seed", "1", "--out", s(&hp)]);
    let h = read_matrix_market_path(&hp).unwrap();
    for factor in ["cholesky", "lowdin"] {
        let od = p(&dir, factor);
        run_ok(&["ortho", "--overlap", s(&sp), "--hamiltonian", s(&hp), "--factor", factor, "--out-dir", s(&od)]);
        let ht = read_matrix_market_path(od.join("Htilde.mtx")).unwrap();
        assert_eq!(ht.n(), 30);
        for i in 0..30 {
            for j in 0..30 {
                assert_eq!(ht.get(i, j), h.get(i, j), "{factor} ({i}, {j})");
            }
        }
    }
}

#[test]
fn lowdin_and_cholesky_spectra_agree() {
    let dir = TempDir::new().unwrap();
    let (sp, hp) = (p(&dir, "s.mtx"), p(&dir, "h.mtx"));
    run_ok(&["model", "banded-spd", "--n", "60", "--m", "2", "--kappa", "50", "--seed", "4", "--out", s(&sp)]);
    run_ok(&["model", "gapped-random", "--n", "60", "--m", "2", "--gap", "0.5", "--seed", "4", "--out", s(&hp)]);
    let mut spectra = Vec::new();
    for factor in ["lowdin", "cholesky"] {
        let od = p(&dir, factor);
        run_ok(&["ortho", "--overlap", s(&sp), "--hamiltonian", s(&hp), "--factor", factor, "--out-dir", s(&od)]);
        let v = json(&od.join("report.json"));
        assert!(f(&v["orthogonality_defect"]) <= 1e-10);
        assert!(f(&v["spectrum_check"]["max_abs_difference"]) <= 1e-8);
        assert!(f(&v["decay"]["envelope_slope"]) < 0.0);
        let ev: Vec<f64> = v["spectrum_check"]["eigenvalues"].as_array().unwrap().iter().map(f).collect();
        spectra.push(ev);
    }
    assert_eq!(spectra[0].len(), 60);
    let d = spectra[0]
        .iter()
        .zip(&spectra[1])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(d <= 1e-8, "spectra differ by {d}");
}

#[test]
fn drop_sweep_table_is_monotone() {
    let dir = TempDir::new().unwrap();
    let sp = p(&dir, "s.mtx");
    run_ok(&["model", "banded-spd", "--n", "80", "--m", "3", "--kappa", "200", "--seed", "2", "--out", s(&sp)]);
    let od = p(&dir, "o");
    run_ok(&["ortho", "--overlap", s(&sp), "--sweep", "--out-dir", s(&od)]);
    let (head, rows) = csv_rows(&std::fs::read_to_string(od.join("sweep.csv")).unwrap());
    assert_eq!(head, ["drop_tol", "nnz", "defect"]);
    assert!(rows.len() >= 5);
    for w in rows.windows(2) {
        assert!(w[1][0] < w[0][0]);
        assert!(w[1][1] >= w[0][1]);
        assert!(w[1][2] <= w[0][2], "defect rose from {} to {}", w[0][2], w[1][2]);
    }
    assert!(rows.last().unwrap()[2] <= 1e-12);
}

#[test]
fn indefinite_overlap_is_a_numeric_error() {
    let dir = TempDir::new().unwrap();
    let sp = p(&dir, "s.mtx");
    let s_ind = SparseHermitian::tridiagonal(&[1.0, 1.0, 1.0], &[2.0, 0.0]).unwrap();
    write_matrix_market_path(&s_ind, &sp).unwrap();
    for factor in ["cholesky", "lowdin"] {
        let c = code(&["ortho", "--overlap", s(&sp), "--factor", factor, "--out-dir", s(&p(&dir, factor))]);
        assert_eq!(c, 3, "{factor}");
    }
}

#[test]
fn validate_filters_and_reports() {
    let dir = TempDir::new().unwrap();
    let js = p(&dir, "v.json");
    let out = run_ok(&["validate", "--only", "bounds,asymptotics", "--json", s(&js)]);
    assert_eq!(out.lines().filter(|l| l.starts_with("[PASS]")).count(), 6);
    let v = json(&js);
    assert_eq!(v["kind"], "validation");
    assert_eq!(v["passed"], true);
    let groups: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["group"].as_str().unwrap()).collect();
    assert!(groups.iter().all(|g| *g == "bounds" || *g == "asymptotics"));
}

#[test]
fn validate_repeat_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let js = p(&dir, "v.json");
    run_ok(&["validate", "--only", "toeplitz", "--seed", "7", "--repeat", "2", "--json", s(&js)]);
    let v = json(&js);
    assert_eq!(v["deterministic"], true);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
}

#[test]
fn thread_cap_is_read_from_environment() {
    let out = bin()
        .args(["bounds", "--family", "envelope", "--grid", "10", "--dmax", "5"])
        .env("DECAYPROJ_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    let base = run_ok(&["bounds", "--family", "envelope", "--grid", "10", "--dmax", "5"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), base);
    let bad = bin()
        .args(["bounds", "--chi-bar"])
        .env("DECAYPROJ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
