use emfcov::network::ConfigFile;
use std::path::Path;
use std::process::{Command, Output};

fn emfcov(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_emfcov")).current_dir(dir).args(args).output().unwrap()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(|r| r.unwrap()).collect()
}

fn header(path: &Path) -> Vec<String> {
    csv::Reader::from_path(path).unwrap().headers().unwrap().iter().map(String::from).collect()
}

fn column(path: &Path, name: &str) -> Vec<f64> {
    let i = header(path).iter().position(|h| h == name).unwrap();
    rows(path).iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn emfe_writes_curve_and_manifest_that_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "# smaller array, m = 2\nm = 2\nn_elements = 16\nkmax = 2\n";
    std::fs::write(dir.path().join("cfg.toml"), cfg).unwrap();
    let out = emfcov(dir.path(), &["--config", "cfg.toml", "emfe", "--te-grid", "-80:-50:10", "--out", "iu.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = dir.path().join("iu.csv");
    assert_eq!(header(&csv), ["threshold", "value", "method", "config_hash", "threshold_dbm"]);
    let v = column(&csv, "value");
    assert_eq!(v.len(), 4);
    assert!(v.windows(2).all(|w| w[1] >= w[0]));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("iu.manifest.json")).unwrap()).unwrap();
    let hash = manifest["config_hash"].as_str().unwrap();
    assert!(rows(&csv).iter().all(|r| &r[3] == hash));
    let echo = ConfigFile::from_toml(manifest["config_echo"].as_str().unwrap()).unwrap();
    let original = ConfigFile::from_toml(cfg).unwrap();
    assert_eq!(echo.build().unwrap(), original.build().unwrap());
    assert_eq!(echo.config_hash(), hash);
}

#[test]
fn identical_invocations_give_identical_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["emfe", "--user", "au", "--te-grid", "-80,-60", "--mc", "1000", "--seed", "7"];
    for name in ["a.csv", "b.csv"] {
        let mut a = args.to_vec();
        a.extend(["--out", name]);
        assert!(emfcov(dir.path(), &a).status.success());
    }
    for suffix in ["", "_mc"] {
        let a = std::fs::read(dir.path().join(format!("a{suffix}.csv"))).unwrap();
        let b = std::fs::read(dir.path().join(format!("b{suffix}.csv"))).unwrap();
        assert_eq!(a, b, "suffix {suffix}");
    }
    let mc = dir.path().join("a_mc.csv");
    assert_eq!(header(&mc)[..8], ["threshold", "value", "method", "config_hash", "ci_lo", "ci_hi", "n", "seed"]);
    let (lo, hi, p) = (column(&mc, "ci_lo"), column(&mc, "ci_hi"), column(&mc, "value"));
    assert!((0..2).all(|k| lo[k] <= p[k] && p[k] <= hi[k]));
}

#[test]
fn configuration_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.toml"), "alpha = 3.25\nbogus_key = 1\n").unwrap();
    let out = emfcov(dir.path(), &["--config", "bad.toml", "emfe", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
    std::fs::write(dir.path().join("far.toml"), "d_m = 200.0\n").unwrap();
    let out = emfcov(dir.path(), &["--config", "far.toml", "emfe", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mean cell radius"));
    let out = emfcov(dir.path(), &["emfe", "--te-grid", "-40,-60", "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = emfcov(dir.path(), &["contour", "--metric", "median", "--out", "c.csv"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("emfe") && err.contains("cond_scaiu"), "{err}");
}

#[test]
fn random_user_warns_that_separation_is_ignored() {
    let dir = tempfile::tempdir().unwrap();
    let out = emfcov(dir.path(), &["emfe", "--user", "ru", "--te-grid", "-70", "--out", "ru.csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ignored"));
}

#[test]
fn coverage_snr_dominates_sinr() {
    let dir = tempfile::tempdir().unwrap();
    let out = emfcov(dir.path(), &["coverage", "--tc-grid", "-60,-10,0,10,20", "--include-snr", "--out", "cov.csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let sinr = column(&dir.path().join("cov.csv"), "value");
    let snr = column(&dir.path().join("cov_snr.csv"), "value");
    assert!(sinr.iter().zip(&snr).all(|(a, b)| b >= a));
    assert!(sinr[0] > 0.9999);
    assert_eq!(column(&dir.path().join("cov.csv"), "threshold_db"), vec![-60.0, -10.0, 0.0, 10.0, 20.0]);
}

#[test]
fn scaiu_columns_satisfy_identity_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scaiu", "--tc", "10", "--te-grid", "-70,-55", "--d-grid", "10,60", "--bounds", "--out", "j.csv"];
    let out = emfcov(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let p = dir.path().join("j.csv");
    let (j, h, f) = (column(&p, "value"), column(&p, "conditional"), column(&p, "f_cov"));
    let (lb, ub) = (column(&p, "frechet_lb"), column(&p, "frechet_ub"));
    assert_eq!(j.len(), 4);
    for k in 0..4 {
        assert!((j[k] - h[k] * f[k]).abs() <= 1e-12);
        assert!(j[k] >= lb[k] - 1e-3 && j[k] <= ub[k] + 1e-3);
    }
}

#[test]
fn contour_writes_grid_and_polylines() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["contour", "--n-list", "8,16", "--d-list", "10,30", "--te", "-70", "--levels", "0.9,0.95", "--out", "g.csv"];
    let out = emfcov(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g = dir.path().join("g.csv");
    assert_eq!(header(&g)[..3], ["n_elements", "d_m", "value"]);
    assert_eq!(rows(&g).len(), 4);
    for level in ["0.9", "0.95"] {
        let p = dir.path().join(format!("g_level_{level}.csv"));
        assert_eq!(header(&p), ["n_elements", "d_m", "level", "config_hash"]);
    }
}

#[test]
fn validation_suites_report_and_pass() {
    let dir = tempfile::tempdir().unwrap();
    for suite in ["moments", "gilpelaez"] {
        let out = emfcov(dir.path(), &["validate", "--suite", suite, "--out", "report.txt"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
        assert!(report.lines().last().unwrap().ends_with("status=PASS"));
        assert!(report.contains("max_deviation="));
    }
    let out = emfcov(dir.path(), &["validate", "--suite", "mc", "--n", "10", "--out", "r.txt"]);
    assert_eq!(out.status.code(), Some(2));
}
