use std::path::Path;
use std::process::{Command, Output};

fn regimes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regimes")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = regimes(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows of a CSV output: everything after the column header.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn code(args: &[&str]) -> i32 {
    regimes(args).status.code().unwrap()
}

#[test]
fn steady_row_counts() {
    let three = stdout(&["steady", "--preset", "set1", "--omega", "1", "--beta", "3"]);
    let labels: Vec<String> = rows(&three).into_iter().map(|r| r[0].clone()).collect();
    assert_eq!(labels, ["LOW", "UNBIASED", "HIGH"]);
    assert!(three.lines().any(|l| l.starts_with("# bounds: P_lo=")));
    let one = stdout(&["steady", "--preset", "set1", "--omega", "1", "--beta", "1"]);
    assert_eq!(rows(&one).len(), 1);
    assert_eq!(rows(&one)[0][0], "UNBIASED");
}

#[test]
fn header_records_version_and_config() {
    let text = stdout(&["steady"]);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# regimes {}", env!("CARGO_PKG_VERSION")));
    let config = lines.next().unwrap();
    assert!(config.starts_with("# config: {\"command\":\"steady\""));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["steady", "--set", "model.c=0.9", "--set", "model.h=1", "--set", "model.d=1"]), 3);
    assert_eq!(code(&["steady", "--set", "model.nonsense=1"]), 2);
    assert_eq!(code(&["steady", "--set", "orbit.transient=5"]), 2);
    assert_eq!(code(&["steady", "--set", "model.c=1.5"]), 2);
    assert_eq!(code(&["steady", "--set", "model.sig_I.a1=2"]), 2);
    assert_eq!(code(&["steady", "--preset", "nope"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["steady", "--config", "/nonexistent/cfg.json"]), 5);
    assert_eq!(code(&["steady", "--out", "/nonexistent/dir/out.csv"]), 5);
    assert_eq!(code(&["orbit", "--set", "trajectory.initial=\"explicit\""]), 2);
}

#[test]
fn explicit_bounds_are_used_verbatim() {
    let args = [
        "steady", "--beta", "3", "--set", "model.sig_I.a1=1", "--set", "model.sig_I.a2=2", "--set",
        "model.sig_P.a1=3", "--set", "model.sig_P.a2=4",
    ];
    let text = stdout(&args);
    assert!(text.contains("\"model.sig_P.a2\":4"));
}

fn round_trip(dir: &Path, args: &[&str], sidecar: bool) {
    let first = dir.join("first.csv");
    let second = dir.join("second.csv");
    let mut a: Vec<&str> = args.to_vec();
    a.extend(["--out", first.to_str().unwrap()]);
    assert_eq!(code(&a), 0);
    let command = args[0];
    assert_eq!(code(&[command, "--config", first.to_str().unwrap(), "--out", second.to_str().unwrap()]), 0);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap(), "{args:?}");
    if sidecar {
        let (c1, c2) = (dir.join("first.catalog.csv"), dir.join("second.catalog.csv"));
        assert_eq!(std::fs::read(c1).unwrap(), std::fs::read(c2).unwrap());
    }
}

#[test]
fn outputs_replay_from_their_header() {
    let dir = tempfile::tempdir().unwrap();
    round_trip(dir.path(), &["steady", "--preset", "fig1b", "--set", "sweep.points=11"], false);
    round_trip(dir.path(), &["stability", "--preset", "set1", "--beta", "2.5", "--omega", "0.7"], false);
    round_trip(dir.path(), &["region", "--preset", "fig3b", "--set", "grid.beta_points=6", "--set", "grid.omega_points=4"], false);
    round_trip(dir.path(), &["bifurcate", "--preset", "fig4b-red", "--set", "bifurcate.points=8"], false);
    round_trip(dir.path(), &["basin", "--preset", "fig5e", "--set", "basin.resolution=24"], true);
    round_trip(dir.path(), &["orbit", "--preset", "set2", "--beta", "3", "--set", "trajectory.lyapunov_steps=2000"], false);
    round_trip(dir.path(), &["stochastic", "--preset", "set1", "--seed", "9", "--set", "stochastic.length=3000", "--set", "stochastic.burn_in=100"], false);
}

#[test]
fn seeds_replay_and_differ() {
    let run = |seed: &str| {
        stdout(&["stochastic", "--preset", "set1", "--beta", "4", "--seed", seed, "--set", "stochastic.length=12000"])
    };
    assert_eq!(run("4"), run("4"));
    assert_ne!(rows(&run("4")), rows(&run("5")));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["region", "--preset", "fig3c", "--set", "grid.beta_points=9", "--set", "grid.omega_points=5"];
    let mut single = args.to_vec();
    single.extend(["--threads", "1"]);
    assert_eq!(stdout(&args), stdout(&single));
}

#[test]
fn region_cross_sections() {
    let text = stdout(&["region", "--preset", "fig3a", "--set", "grid.beta_points=51", "--set", "grid.omega_points=21"]);
    let cells = rows(&text);
    assert_eq!(cells.len(), 51 * 21);
    let at = |beta: f64| cells.iter().filter(move |r| (r[0].parse::<f64>().unwrap() - beta).abs() < 1e-9);
    assert!(at(0.1).all(|r| r[2] == "0"));
    assert!(at(1.5).all(|r| r[2] == "1"));
    let low = at(0.7).find(|r| r[1] == "0").unwrap();
    assert_eq!(low[2], "1");
}

#[test]
fn ascending_diagram_ends_on_the_unbiased_state() {
    let text = stdout(&["bifurcate", "--preset", "fig4b-blue", "--set", "bifurcate.points=40"]);
    let r = rows(&text);
    let first = r.first().unwrap();
    let last = r.last().unwrap();
    assert_eq!(first[0], "0");
    assert_eq!(last[0], "1.17");
    assert_eq!(last[2], "FP");
    let betas: Vec<f64> = r.iter().map(|x| x[0].parse().unwrap()).collect();
    assert!(betas.windows(2).all(|w| w[0] <= w[1]));
    assert!(r.iter().any(|x| x[2] == "P2"));
}

#[test]
fn basin_catalog_on_stdout_and_sidecar() {
    let text = stdout(&["basin", "--preset", "fig5", "--set", "basin.resolution=32"]);
    let catalog: Vec<&str> = text.lines().filter(|l| l.starts_with("# catalog: ")).collect();
    assert_eq!(catalog[0], "# catalog: label,kind,period,mean_Y,mean_P");
    assert_eq!(catalog.len(), 3);
    assert_eq!(rows(&text).len(), 32 * 32);
}

fn acf(args: &[&str]) -> Vec<f64> {
    let r = rows(&stdout(args));
    assert_eq!(r[0][0], "1");
    r.iter().map(|x| x[1].parse().unwrap()).collect()
}

#[test]
fn volatility_clustering() {
    let isolated = acf(&["stochastic", "--preset", "fig9"]);
    assert_eq!(isolated.len(), 50);
    assert!(isolated.iter().all(|&r| r > 0.0));
    // with full interaction the correlation has died out by lag 30 and the tail is sampling noise
    let coupled = acf(&["stochastic", "--preset", "fig9", "--omega", "1"]);
    assert!(coupled[..20].iter().all(|&r| r > 0.0));
    assert!(coupled.windows(2).take(10).all(|w| w[1] < w[0]));
}

#[test]
fn sweep_reports_blank_biased_columns_below_threshold() {
    let text = stdout(&["steady", "--preset", "fig1a", "--set", "sweep.points=11"]);
    let r = rows(&text);
    assert_eq!(r.len(), 11);
    assert_eq!(r[0][1], "");
    assert!(!r[10][1].is_empty());
}

#[test]
fn config_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"model": {"beta": 3.0, "omega": 1.0}, "model.b": 0.5}"#).unwrap();
    let from_file = stdout(&["steady", "--config", cfg.to_str().unwrap()]);
    assert_eq!(rows(&from_file).len(), 3);
    let overridden = stdout(&["steady", "--config", cfg.to_str().unwrap(), "--beta", "1"]);
    assert_eq!(rows(&overridden).len(), 1);
    std::fs::write(&cfg, r#"{"command": "orbit"}"#).unwrap();
    assert_eq!(code(&["steady", "--config", cfg.to_str().unwrap()]), 2);
}
