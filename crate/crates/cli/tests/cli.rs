use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chernoff_core::oracle::exact_constant_solution;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn chernoff(args: &[&str], config: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chernoff"))
        .args(args)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

fn base_config() -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(configs().join("constant_1d.json")).unwrap())
        .unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn solve_constant_config_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u.csv");
    let o = chernoff(&["solve"], &configs().join("constant_1d.json"), &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("# command=solve\n"));
    assert!(csv.contains("\nx0,u\n"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 512);
    // interior of the 16-step chain: margin 6 on [-7.5, 7.5]
    for r in rows.iter().filter(|r| r[0].abs() < 1.5) {
        assert!((r[1] - exact_constant_solution(1.0, 0.5, 0.0, 1.0, 1.0, r[0])).abs() < 1e-5);
    }
}

#[test]
fn solve_constant_initial_stays_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["initial"] = serde_json::json!({ "kind": "constant", "value": 1.0 });
    let path = write_config(dir.path(), &cfg.to_string());
    let out = dir.path().join("u.csv");
    let o = chernoff(&["solve"], &path, &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for r in data_rows(&std::fs::read_to_string(&out).unwrap()) {
        assert!((r[1] - 1.0).abs() < 1e-9);
    }
}

#[test]
fn malformed_configs_exit_2_naming_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    let cases: Vec<(serde_json::Value, &str)> = {
        let mut v = Vec::new();
        let mut c = base_config();
        c["steps"] = serde_json::json!([4, 2]);
        v.push((c, "steps"));
        let mut c = base_config();
        c["grid"]["colour"] = serde_json::json!("red");
        v.push((c, "grid.colour"));
        let mut c = base_config();
        c["t_final"] = serde_json::json!("soon");
        v.push((c, "t_final"));
        let mut c = base_config();
        c["coefficients"]["g"] = serde_json::json!({ "kind": "one_plus_half_cos" });
        v.push((c, "coefficients.g.kind"));
        let mut c = base_config();
        c["coefficients"]["c"] = serde_json::json!({ "kind": "constant", "value": 2.0 });
        v.push((c, "coefficients.c"));
        let mut c = base_config();
        c.as_object_mut().unwrap().remove("eigenvalues");
        v.push((c, "eigenvalues"));
        v
    };
    for (cfg, field) in cases {
        let path = write_config(dir.path(), &cfg.to_string());
        let o = chernoff(&["solve"], &path, &out);
        assert_eq!(o.status.code(), Some(2), "{field}: {}", stderr(&o));
        assert!(
            stderr(&o).contains(&format!("`{field}`")),
            "{field}: {}",
            stderr(&o)
        );
    }
    let path = write_config(dir.path(), "{ not json");
    assert_eq!(chernoff(&["solve"], &path, &out).status.code(), Some(2));
    assert_eq!(
        chernoff(&["solve"], &dir.path().join("missing.json"), &out)
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn converge_without_oracle_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = chernoff(
        &["converge"],
        &configs().join("drift_1d.json"),
        &dir.path().join("c.csv"),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`oracle`"));
}

#[test]
fn engine_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["grid"]["bounds"] = serde_json::json!([[-2.0, 2.0]]);
    let path = write_config(dir.path(), &cfg.to_string());
    let o = chernoff(&["solve"], &path, &dir.path().join("u.csv"));
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("engine error"));
}

#[test]
fn converge_single_step_is_one_step_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = base_config();
    cfg["steps"] = serde_json::json!([1]);
    let path = write_config(dir.path(), &cfg.to_string());
    let out = dir.path().join("c.csv");
    let o = chernoff(&["converge"], &path, &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("\nn,sup_error,runtime_ms\n"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], 1.0);
    assert!(rows[0][1] < 1e-5);
}

#[test]
fn converge_variable_g_decreases() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.csv");
    let o = chernoff(&["converge"], &configs().join("variable_g_1d.json"), &out);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let errs: Vec<f64> = data_rows(&std::fs::read_to_string(&out).unwrap())
        .iter()
        .map(|r| r[1])
        .collect();
    assert_eq!(errs.len(), 5);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn solve_is_byte_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("monte_carlo_1d.json");
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert_eq!(
        chernoff(&["solve", "--seed", "3", "--threads", "1"], &cfg, &a)
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        chernoff(&["solve", "--seed", "3", "--threads", "3"], &cfg, &b)
            .status
            .code(),
        Some(0)
    );
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8_lossy(&a).contains("# seed=3\n"));
}

#[test]
fn verify_passes_on_one_dimensional_configs() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "constant_1d.json",
        "drift_1d.json",
        "potential_table_1d.json",
    ] {
        let out = dir.path().join("v.csv");
        let o = chernoff(&["verify"], &configs().join(name), &out);
        let csv = std::fs::read_to_string(&out).unwrap();
        assert_eq!(o.status.code(), Some(0), "{name}:\n{csv}");
        assert!(csv.contains("\nname,measured,threshold,pass\n"));
        assert!(csv
            .lines()
            .filter(|l| !l.starts_with('#'))
            .skip(1)
            .all(|l| l.ends_with(",true")));
    }
}
