//! End-to-end behaviour of the `acq` binary: exit codes, files, overrides.

use std::path::Path;
use std::process::Command;

fn acq(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_acq")).args(args).output().expect("spawn acq");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn out_arg(dir: &Path) -> String {
    dir.display().to_string()
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).expect("read output")
}

#[test]
fn bandit_writes_results_manifest_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let (code, stdout, _) = acq(&["bandit", "--trials", "50", "--out", &out, "--plot"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("results.csv"));
    let csv = read(dir.path().join("results.csv"));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("setting,setting_value,estimator,mean_bias,bias_squared,std_err"));
    let names: Vec<&str> = lines.map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(names, ["SE", "DE", "CDE", "AC-CDE", "Auto-AC-CDE"]);
    let manifest = read(dir.path().join("manifest.txt"));
    assert!(manifest.contains("seed = 0"));
    assert!(manifest.contains("trials = 50"));
    assert!(read(dir.path().join("plot.svg")).starts_with("<svg"));
}

#[test]
fn no_plot_unless_requested() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = acq(&["continuous", "--trials", "100", "--out", &out_arg(dir.path())]);
    assert_eq!(code, 0);
    assert!(dir.path().join("results.csv").exists());
    assert!(!dir.path().join("plot.svg").exists());
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    for args in [
        vec!["bandit", "--trials", "0", "--out", &out],
        vec!["gridworld", "--n", "1", "--out", &out],
        vec!["gridworld", "--gamma", "1.5", "--out", &out],
        vec!["gridworld", "--algos", "q,sarsa", "--out", &out],
        vec!["bandit", "--steps", "10", "--out", &out],
        vec!["check", "--property", "theorem9", "--out", &out],
        vec!["check", "--k", "11", "--out", &out],
        vec!["bandit", "--seed", "-3", "--out", &out],
        vec!["teleport"],
    ] {
        let (code, _, stderr) = acq(&args);
        assert_eq!(code, 1, "{args:?}: {stderr}");
        assert!(!stderr.is_empty());
    }
    assert!(!dir.path().join("results.csv").exists());
}

#[test]
fn missing_config_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let (code, _, stderr) = acq(&["bandit", "--config", &out_arg(&missing)]);
    assert_eq!(code, 1);
    assert!(stderr.contains("nope.toml"));
}

#[test]
fn failed_check_exits_two_and_still_writes_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    // the bound does not hold at K = N
    let (code, _, _) = acq(&["check", "--property", "lemma1", "--k", "10", "--trials", "20000", "--out", &out]);
    assert_eq!(code, 2);
    assert!(read(dir.path().join("results.csv")).contains(",fail"));

    let (code, _, _) = acq(&["check", "--property", "theorem1,var_halving", "--trials", "5000", "--out", &out]);
    assert_eq!(code, 0);
    assert!(!read(dir.path().join("results.csv")).contains(",fail"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "trials = 40\nseed = 7\nn_ads = 4\n").unwrap();
    let out = dir.path().join("a");
    let (code, _, stderr) = acq(&["bandit", "--config", &out_arg(&cfg), "--seed", "9", "--out", &out_arg(&out)]);
    assert_eq!(code, 0, "{stderr}");
    let manifest = read(out.join("manifest.txt"));
    assert!(manifest.contains("seed = 9"), "{manifest}");
    assert!(manifest.contains("trials = 40"), "{manifest}");
    assert!(manifest.contains("n_ads = 4"), "{manifest}");

    std::fs::write(&cfg, "trials = \"many\"\n").unwrap();
    let (code, _, stderr) = acq(&["bandit", "--config", &out_arg(&cfg), "--out", &out_arg(&out)]);
    assert_eq!(code, 1);
    assert!(stderr.contains("trials"), "{stderr}");
}

#[test]
fn same_seed_same_bytes_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, seed: &str| {
        let out = dir.path().join(format!("g{threads}-{seed}"));
        let args = ["gridworld", "--runs", "8", "--steps", "500", "--threads", threads, "--seed", seed, "--out", &out_arg(&out)];
        assert_eq!(acq(&args).0, 0);
        std::fs::read(out.join("results.csv")).unwrap()
    };
    let one = run("1", "3");
    assert_eq!(one, run("8", "3"));
    assert_ne!(one, run("1", "4"));
}

#[test]
fn converge_sweeps_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_arg(dir.path());
    let (code, _, _) = acq(&["converge", "--steps", "2000", "--algos", "cdq,ac2", "--out", &out, "--plot"]);
    assert_eq!(code, 0);
    let csv = read(dir.path().join("results.csv"));
    let rows: Vec<(String, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].to_string())
        })
        .collect();
    assert_eq!(rows.len(), 4);
    for mode in ["random", "simultaneous"] {
        assert!(rows.iter().any(|(a, m)| a == "ac2" && m == mode));
    }
}

#[test]
fn help_exits_zero() {
    let (code, stdout, _) = acq(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("gridworld"));
}
