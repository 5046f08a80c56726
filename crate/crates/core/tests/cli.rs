use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wicklab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn wicklab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wicklab"))
        .current_dir(dir)
        .env_remove("WICKLAB_OUT")
        .args(args)
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn spectrum_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("lambda"))
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn chaos_table_contains_fourth_wick_power() {
    let dir = scratch("chaos");
    let o = wicklab(&dir, &["chaos", "--out", "out"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&dir.join("out/chaos.json"));
    let rows = v["result"]["conversion_table"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["wick"] == ":φ⁴:" && r["monomials"] == "φ⁴ − 6φ² + 3"));
    for key in ["tool", "version", "config", "conventions", "seed"] {
        assert!(v["meta"].get(key).is_some(), "meta lacks {key}");
    }
}

#[test]
fn exact_flag_switches_to_rationals() {
    let dir = scratch("exact");
    std::fs::write(dir.join("c.toml"), "covariance = [[0.5]]\nmax_degree = 4\n").unwrap();
    let o = wicklab(&dir, &["chaos", "--config", "c.toml", "--exact", "--out", "out"]);
    assert_eq!(code(&o), 0);
    let v = json(&dir.join("out/chaos.json"));
    assert_eq!(v["result"]["arithmetic"], "rational");
    assert_eq!(v["result"]["closure_residual"], 0.0);
    let rows = v["result"]["conversion_table"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["monomials"] == "φ⁴ − 3φ² + 3/4"));
}

#[test]
fn missing_covariance_is_a_config_error() {
    let dir = scratch("missing");
    std::fs::write(dir.join("c.toml"), "max_degree = 4\n").unwrap();
    let o = wicklab(&dir, &["chaos", "--config", "c.toml", "--out", "out"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("covariance"));
    std::fs::write(dir.join("bad.toml"), "covariance = [[1.0]\n").unwrap();
    let o = wicklab(&dir, &["chaos", "--config", "bad.toml"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn transform_check_default_passes_and_corrupted_d_fails() {
    let dir = scratch("transform");
    assert_eq!(code(&wicklab(&dir, &["transform-check", "--out", "ok"])), 0);
    let v = json(&dir.join("ok/transform.json"));
    assert_eq!(v["result"]["pass"], true);
    std::fs::write(dir.join("d.toml"), "delta = [[1.0]]\nd_override = [[-3.0]]\ncutoff = 4\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["transform-check", "--config", "d.toml", "--out", "bad"])), 1);
    std::fs::write(dir.join("x.toml"), "delta = [[1.0, 0.2], [0.2, 1.0]]\na = [[0.0, 1.0], [0.0, 0.0]]\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["transform-check", "--config", "x.toml", "--out", "x"])), 2);
}

#[test]
fn transform_cutoff_sweep_table() {
    let dir = scratch("sweep");
    std::fs::write(dir.join("s.json"), r#"{"cutoff": 3, "cutoff_sweep": [2, 4]}"#).unwrap();
    assert_eq!(code(&wicklab(&dir, &["transform-check", "--config", "s.json", "--out", "out"])), 0);
    let v = json(&dir.join("out/transform.json"));
    assert_eq!(v["result"]["sweep"].as_array().unwrap().len(), 2);
}

#[test]
fn oracle_is_reproducible_with_a_seed() {
    let dir = scratch("oracle");
    std::fs::write(dir.join("o.toml"), "instances = 4\nmax_rank = 4\nstar_cases = 1\nmc_samples = 2000\n").unwrap();
    let a = wicklab(&dir, &["oracle", "--config", "o.toml", "--mc", "--seed", "5", "--out", "a"]);
    let b = wicklab(&dir, &["oracle", "--config", "o.toml", "--mc", "--seed", "5", "--out", "b"]);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(code(&b), 0);
    assert_eq!(std::fs::read(dir.join("a/oracle.json")).unwrap(), std::fs::read(dir.join("b/oracle.json")).unwrap());
    let v = json(&dir.join("a/oracle.json"));
    let odd = v["result"]["moments"].as_array().unwrap().iter().find(|r| r["rank"] == 9).unwrap().clone();
    assert_eq!(odd["pairing"], 0.0);
    std::fs::write(dir.join("big.toml"), "dim = 4\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["oracle", "--config", "big.toml"])), 2);
}

#[test]
fn quantize_check_runs() {
    let dir = scratch("quantize");
    std::fs::write(dir.join("q.toml"), "dim = 1\ninstances = 2\nstar_cases = 2\ncutoff = 6\n").unwrap();
    let o = wicklab(&dir, &["quantize-check", "--config", "q.toml", "--out", "out"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(json(&dir.join("out/quantize.json"))["meta"]["seed"], 7);
}

#[test]
fn constant_preset_gives_zero_spectrum() {
    let dir = scratch("constant");
    std::fs::write(dir.join("c.toml"), "preset = \"constant\"\nlambdas = [0.5, 1.0, 2.0]\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["cosmo", "run", "--config", "c.toml", "--out", "out"])), 0);
    let rows = spectrum_rows(&dir.join("out/spectrum.csv"));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] == 0.0));
    let text = std::fs::read_to_string(dir.join("out/spectrum.csv")).unwrap();
    assert!(text.contains("# delta-weight"));
    assert!(text.contains("# config: "));
}

#[test]
fn tanh_run_is_byte_identical_and_conserves_norm() {
    let dir = scratch("tanh");
    std::fs::write(dir.join("t.toml"), "preset = \"tanh\"\nlambda_grid = { min = 0.5, max = 2.0, count = 4 }\n").unwrap();
    let args = |out: &'static str| ["cosmo", "run", "--config", "t.toml", "--cutoff", "10", "--workers", "2", "--out", out];
    let a = wicklab(&dir, &args("a"));
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(code(&wicklab(&dir, &args("b"))), 0);
    for f in ["spectrum.csv", "consistency.json", "diagnostics.json", "modes/mode-0002.json"] {
        assert_eq!(std::fs::read(dir.join("a").join(f)).unwrap(), std::fs::read(dir.join("b").join(f)).unwrap(), "{f}");
    }
    let rows = spectrum_rows(&dir.join("a/spectrum.csv"));
    assert!(rows.iter().all(|r| r[1] > 0.0 && r[3] < 1e-6));
    let c = json(&dir.join("a/consistency.json"));
    assert_eq!(c["result"]["agree"], false);
    assert!(!c["result"]["discrepancies"].as_array().unwrap().is_empty());
}

#[test]
fn tabulated_csv_matches_preset() {
    let dir = scratch("tabulated");
    let mut csv = String::from("t,a\n");
    for i in 0..=2000 {
        let t = i as f64 * 0.005;
        csv += &format!("{t},{}\n", 1.0 + 0.5 * (1.0 + (t - 5.0).tanh()));
    }
    std::fs::write(dir.join("a.csv"), csv).unwrap();
    std::fs::write(dir.join("tab.toml"), "tabulated = \"a.csv\"\nlambdas = [0.5, 2.0]\n").unwrap();
    std::fs::write(dir.join("pre.toml"), "preset = \"tanh\"\nlambdas = [0.5, 2.0]\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["cosmo", "run", "--config", "tab.toml", "--out", "tab"])), 0);
    assert_eq!(code(&wicklab(&dir, &["cosmo", "run", "--config", "pre.toml", "--out", "pre"])), 0);
    let (a, b) = (spectrum_rows(&dir.join("tab/spectrum.csv")), spectrum_rows(&dir.join("pre/spectrum.csv")));
    for (x, y) in a.iter().zip(&b) {
        assert!((x[1] - y[1]).abs() < 1e-6 * (1.0 + y[1]));
    }
}

#[test]
fn out_directory_from_environment() {
    let dir = scratch("env");
    let o = Command::new(env!("CARGO_BIN_EXE_wicklab"))
        .current_dir(&dir)
        .env("WICKLAB_OUT", dir.join("from-env"))
        .args(["transform-check", "--cutoff", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.join("from-env/transform.json").exists());
}

#[test]
fn unsupported_curvature_and_failing_modes() {
    let dir = scratch("errors");
    std::fs::write(dir.join("k.toml"), "curvature = 1\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["cosmo", "run", "--config", "k.toml", "--out", "k"])), 2);
    std::fs::write(dir.join("m.toml"), "mass = 0.0\nlambdas = [0.0, 1.0]\n").unwrap();
    assert_eq!(code(&wicklab(&dir, &["cosmo", "run", "--config", "m.toml", "--out", "m"])), 1);
    let rows = spectrum_rows(&dir.join("m/spectrum.csv"));
    assert!(rows[0][1].is_nan() && rows[1][1].is_finite());
}
