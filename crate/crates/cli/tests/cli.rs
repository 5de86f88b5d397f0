use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stableforms"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn lambda_of_generic_ansatz() {
    let o = run(&["lambda", "--psi", "p1*e135+p2*e146+p3*e235+p4*e246"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(p1*p4 - p2*p3)^2");
}

#[test]
fn explicit_solution_meets_expectation() {
    let args = [
        "check", "--coframe", "a1", "--omega", "@fixtures/a1_omega.txt", "--psi", "@fixtures/a1_psi.txt",
        "--orientation", "-1", "--at", "-0.5,0,0.5", "--expect", "balanced-nonkahler",
    ];
    assert_eq!(run(&args).status.code(), Some(0));
    let mut wrong = args.to_vec();
    wrong[8] = "+1";
    assert_eq!(run(&wrong).status.code(), Some(1));
}

#[test]
fn flat_model_is_kahler() {
    let o = run(&["check", "--coframe", "abelian", "--omega", "e12+e34+e56", "--psi", "@fixtures/flat_psi.txt", "--at", "0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["report"]["verdict"], "balanced-kahler");
}

#[test]
fn degenerate_omega() {
    let o = run(&["check", "--coframe", "a1", "--omega", "e12"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("omega is degenerate: omega^3 = 0"));
    let o = run(&["check", "--coframe", "a1", "--omega", "e12", "--psi", "@fixtures/flat_psi.txt", "--at", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: not-su3"));
}

#[test]
fn c3_closure_system() {
    let o = run(&["closure", "--coframe", "c3", "--psi", "@fixtures/c3_ansatz.txt"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&"p4 = 0".to_string()));
    assert!(lines.contains(&"p6' - 2*sqrt(3)*p2 = 0".to_string()));
}

#[test]
fn invariant_count() {
    let o = run(&["invariants", "--generator", "phi_f1", "--degree", "3", "--count"]);
    assert_eq!(stdout(&o).trim(), "8");
}

#[test]
fn exterior_derivative() {
    let o = run(&["d", "--coframe", "a1", "e2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-2*e34");
}

#[test]
fn bad_inputs_exit_2() {
    assert_eq!(run(&["reproduce", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "--psi", "e12"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--coframe", "nowhere", "--omega", "e12", "--psi", "e135"]).status.code(), Some(2));
    assert_eq!(run(&["lambda", "--psi", "@fixtures/missing.txt"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn reproduce_json_is_deterministic() {
    let a = run(&["reproduce", "c3", "--json"]);
    let b = run(&["reproduce", "c3", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["reports"][0]["case"], "c3");
}

#[test]
fn presets_directory_override() {
    let dir = std::env::temp_dir().join(format!("stableforms-presets-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("custom.toml"), "name = \"custom\"\n[d]\ne2 = \"e34\"\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_stableforms"))
        .args(["d", "--coframe", "custom", "e2"])
        .env("STABLEFORMS_PRESETS", &dir)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "e34");
}
