use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nctorus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("nctorus-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn verify_z3_passes() {
    let o = run(&["verify", "--gamma", "z3", "--quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("7 projections verified"));
}

#[test]
fn verify_is_deterministic_for_a_seed() {
    let a = run(&["verify", "--gamma", "z4", "--quick", "--seed", "42"]);
    let b = run(&["verify", "--gamma", "z4", "--quick", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn small_window_is_a_usage_error() {
    assert_eq!(run(&["verify", "--window", "2"]).status.code(), Some(2));
    assert_eq!(run(&["pair", "--gamma", "z5"]).status.code(), Some(2));
}

#[test]
fn dims_reports_claimed_values() {
    let o = run(&["dims", "--gamma", "z6", "--quick"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("| HP_even | 10 | 10 |"));
    let z3 = stdout(&run(&["dims", "--gamma", "z3", "--quick"]));
    assert!(z3.contains("| H0 | 7 | 7 |"));
}

#[test]
fn dims_stable_across_windows() {
    let a = run(&["dims", "--gamma", "z4", "--quick", "--format", "csv"]);
    let b = run(&[
        "dims", "--gamma", "z4", "--quick", "--format", "csv", "--window", "8",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pair_z4_markdown_shape() {
    let o = run(&["pair", "--gamma", "z4", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let rows: Vec<&str> = s
        .lines()
        .filter(|l| l.starts_with('|') && !l.starts_with("|---"))
        .collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.matches(" | ").count() == 9));
    assert!(s.contains("component map"));
}

#[test]
fn pair_all_csv_writes_three_files() {
    let dir = scratch_dir("csv");
    let o = run(&[
        "pair",
        "--gamma",
        "all",
        "--format",
        "csv",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for g in ["z3", "z4", "z6"] {
        assert!(dir.join(format!("{g}-table.csv")).exists(), "{g}");
    }
    let again = scratch_dir("csv2");
    run(&[
        "pair",
        "--gamma",
        "all",
        "--format",
        "csv",
        "--out",
        again.to_str().unwrap(),
    ]);
    for g in ["z3", "z4", "z6"] {
        let f = format!("{g}-table.csv");
        assert_eq!(
            std::fs::read(dir.join(&f)).unwrap(),
            std::fs::read(again.join(&f)).unwrap()
        );
    }
}

#[test]
fn reconcile_z3_flags_conflicts() {
    let dir = scratch_dir("rec");
    let o = run(&["reconcile", "--gamma", "z3", "--out", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("z3-reconcile.json")).unwrap())
            .unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), 56);
    assert!(json["summary"]["paper-internal-conflict"].as_u64().unwrap() >= 1);
    assert_eq!(json["conventions"]["component_map"], "conj-label");
}

#[test]
fn numeric_check_flag() {
    let o = run(&[
        "pair",
        "--gamma",
        "z6",
        "--format",
        "json",
        "--numeric-check",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS numeric cross-check Z6"));
}
