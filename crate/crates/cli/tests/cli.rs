use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn bratteli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bratteli"))
        .args(args)
        .env_remove("BRATTELI_HORIZON")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn d(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn odometer_is_properly_ordered() {
    let o = bratteli(&["check", "--properly-ordered", &d("odometer2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Holds");
}

#[test]
fn successor_past_a_finite_presentation_needs_deeper() {
    let o = bratteli(&["vershik", "--path", "1,1,1", &d("odometer2-depth3.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("NeedsDeeper"));
}

#[test]
fn fibonacci_eigenvalue() {
    let o = bratteli(&["dimgroup", &d("fibonacci.json"), "--stationary"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().find(|l| l.starts_with("lambda = ")).expect("lambda line");
    let lambda: f64 = line["lambda = ".len()..].parse().unwrap();
    assert!((lambda - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-6);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(bratteli(&["check", &d("odometer2.json")]).status.code(), Some(3));
    assert_eq!(bratteli(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(bratteli(&["--horizon", "0", "info", &d("odometer2.json")]).status.code(), Some(3));
    assert_eq!(bratteli(&["--tol", "-1", "info", &d("odometer2.json")]).status.code(), Some(3));
}

#[test]
fn fails_and_unknown_exit_codes() {
    let o = bratteli(&["check", "--simple", "--witness", &d("double-odometer.json")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.starts_with("Fails\nwitness: "), "{out}");

    let o = bratteli(&["check", "--essentially-simple", &d("odometer2-depth3.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("UnknownUpTo("));

    let o = bratteli(&["k0", &d("double-odometer.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn witness_accompanies_every_certified_verdict() {
    for flag in ["--properly-ordered", "--simple", "--essentially-simple", "--cantor", "--tower-property"] {
        for file in ["odometer2.json", "chain.json", "double-odometer.json", "fibonacci-proper.json"] {
            let o = bratteli(&["check", flag, "--witness", &d(file)]);
            let out = stdout(&o);
            if matches!(o.status.code(), Some(0 | 1)) {
                assert!(out.lines().nth(1).is_some_and(|l| l.starts_with("witness: ")), "{flag} {file}: {out}");
            }
        }
    }
}

#[test]
fn canonical_json_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["odometer2.json", "fibonacci.json", "double-odometer.json", "chain.json"] {
        let once = stdout(&bratteli(&["convert", &d(file)]));
        assert_eq!(once, std::fs::read_to_string(data(file)).unwrap(), "{file}");

        let mf = dir.path().join("m.json");
        std::fs::write(&mf, stdout(&bratteli(&["convert", "--to", "matrix-form", &d(file)]))).unwrap();
        let again = stdout(&bratteli(&["convert", "--to", "matrix-form", mf.to_str().unwrap()]));
        assert_eq!(again, std::fs::read_to_string(&mf).unwrap(), "{file}");
    }
}

#[test]
fn telescoping_then_info() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    std::fs::write(&t, stdout(&bratteli(&["telescope", &d("odometer2.json"), "--levels", "0,3,..."]))).unwrap();
    let out = stdout(&bratteli(&["info", t.to_str().unwrap()]));
    assert!(out.contains("path counts (8)"), "{out}");
}

#[test]
fn composed_premorphism_is_valid_and_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("h.json");
    let composed = bratteli(&["compose", &d("odometer2-telescope.json"), &d("odometer2-shift.json")]);
    assert_eq!(composed.status.code(), Some(0));
    std::fs::write(&h, stdout(&composed)).unwrap();
    let h = h.to_str().unwrap();
    assert_eq!(bratteli(&["morphism-validate", h]).status.code(), Some(0));
    assert_eq!(bratteli(&["validate", h]).status.code(), Some(0));
    let o = bratteli(&["equiv", &d("odometer2-telescope.json"), h, "--variant", "third", "--witness"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("witness: "));
}

#[test]
fn induced_map_regroups_binary_digits() {
    let o = bratteli(&["induced-map", &d("odometer2-telescope.json"), "--path", "1,0,0,1"]);
    assert_eq!(stdout(&o).trim(), "1,2");
}

#[test]
fn orbit_reports_towers_and_floors() {
    let o = bratteli(&["vershik", "--path", "0,1", &d("odometer2.json"), "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(
        lines,
        ["0,1  tower v floor 2", "1,1  tower v floor 3", "0,0  tower v floor 0 (wrap)", "1,0  tower v floor 1"]
    );
}

#[test]
fn seeded_orbits_are_reproducible() {
    let a = bratteli(&["vershik", "--random", "8", "--seed", "5", &d("odometer2.json"), "--steps", "3"]);
    let b = bratteli(&["vershik", "--random", "8", "--seed", "5", &d("odometer2.json"), "--steps", "3"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 4);
}

#[test]
fn element_operations() {
    let fib = d("fibonacci.json");
    assert_eq!(stdout(&bratteli(&["element", &fib, "3:(2,1)"])).trim(), "1:(1,0)");
    let o = bratteli(&["element", &fib, "2:(-1,1)", "--positive"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let o = bratteli(&["element", &fib, "1:(1,-1)", "--positive"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bratteli(&["element", &d("odometer2.json"), "1:(1)", "--equal", "2:(2)"]);
    assert_eq!(o.status.code(), Some(0));
    let o = bratteli(&["element", &d("odometer2.json"), "1:(3)", "--in-scale"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn json_reports_parse() {
    let o = bratteli(&["--format", "json", "--witness", "check", "--simple", &d("fibonacci.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "Holds");
    assert!(v["witness"].is_string());
    assert_eq!(v["horizon"], 8);
}

#[test]
fn horizon_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_bratteli"))
        .args(["--format", "json", "check", "--simple", &d("fibonacci.json")])
        .env("BRATTELI_HORIZON", "5")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["horizon"], 5);
}

#[test]
fn dot_export_labels_ranks() {
    let out = stdout(&bratteli(&["export-dot", &d("fibonacci-proper.json"), "--depth", "2"]));
    assert!(out.starts_with("digraph"));
    assert!(out.contains("[label=\"1\"]"));
}

#[test]
fn rebuilt_odometer_is_an_odometer() {
    let o = bratteli(&["rebuild", &d("odometer2.json"), "--depth", "3"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("\"depth\": 3"));
    assert_eq!(out.matches("\"src\"").count(), 6);
}

#[test]
fn invalid_files_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"presentation":{"kind":"finite","depth":1},"levels":[{"vertices":["r"]},{"vertices":["a","b"]}],"edges":[[{"src":"r","dst":"a"}]]}"#).unwrap();
    let o = bratteli(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}
