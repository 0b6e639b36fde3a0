use serde_json::Value;
use std::process::{Command, Output};

fn k3cone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3cone")).args(args).output().expect("spawn")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn verify_is_reproducible_and_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let claims = "C03,C04,C05,C07,C12,A01";
    let ra = k3cone(&["verify", "--claims", claims, "--report", a.to_str().unwrap()]);
    let rb = k3cone(&["--sequential", "verify", "--claims", claims, "--report", b.to_str().unwrap()]);
    assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
    assert_eq!(rb.status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let stderr = String::from_utf8_lossy(&ra.stderr);
    assert!(stderr.contains("assumed-by-paper") && stderr.contains("pass"));

    let rc = k3cone(&["recheck", "--report", a.to_str().unwrap()]);
    assert_eq!(rc.status.code(), Some(0));
    assert_eq!(json(&rc)["all_consistent"], Value::Bool(true));

    let mut v: Value = serde_json::from_slice(&ta).unwrap();
    v["claims"][1]["certificate"]["result"]["trace"] = "16".into();
    std::fs::write(&a, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(k3cone(&["recheck", "--report", a.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(k3cone(&["verify", "--scenario", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(k3cone(&["verify", "--claims", "C99"]).status.code(), Some(3));
    assert_eq!(k3cone(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(k3cone(&["verify", "--scenario", "no-such-builtin"]).status.code(), Some(3));
    assert_eq!(k3cone(&["conic", "--gram", "[[1,2],[3,4]]", "--target", "1"]).status.code(), Some(3));
}

#[test]
fn wrong_expectation_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = k3cone(&["verify", "--scenario", "hilb3-deg6", "--claims", "C04"]);
    let mut rep = json(&out);
    let mut scn = rep["claims"][0]["certificate"]["input"]["scenario"].take();
    scn["expected"]["f_star"][0][0] = 28.into();
    let path = dir.path().join("s.json");
    std::fs::write(&path, serde_json::to_string(&scn).unwrap()).unwrap();
    let out = k3cone(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["claims"][0]["status"], "fail");
}

#[test]
fn conic_finds_minus_two_classes() {
    let out = k3cone(&["conic", "--gram", "[[6,8],[8,6]]", "--target", "-2", "--bound", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let v = json(&out);
    assert!(text.contains("solutions"));
    let sols = v["solutions"].as_array().unwrap();
    assert!(sols.iter().any(|s| s == &serde_json::json!([2, -1])));
}

#[test]
fn pell_lists_orbits_and_window() {
    let out = k3cone(&["pell", "--d", "7", "--target", "-3", "--bound", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["unit"], serde_json::json!(["8", "3"]));
    let w = v["window"]["solutions"].as_array().unwrap();
    assert!(w.contains(&serde_json::json!(["2", "1"])));
    assert!(w.contains(&serde_json::json!(["5", "2"])));
}

#[test]
fn orbit_and_periodicity() {
    let out = k3cone(&["orbit", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let steps = json(&out)["steps"].as_array().unwrap().clone();
    assert_eq!(steps.len(), 6);
    assert!(steps.iter().all(|s| s["in_j1"] == Value::Bool(true)));
    // the fixed line is periodic
    let out = k3cone(&["periodicity", "--class", "2,-7,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(k3cone(&["periodicity"]).status.code(), Some(0));
}

#[test]
fn isotropy_and_cone_commands() {
    let out = k3cone(&["isotropy", "--gram", "[[6,0,8],[0,-4,0],[8,0,6]]", "--bound", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "anisotropic");
    for cmd in ["cone-dual", "mori-replay", "invariant-divisors"] {
        assert_eq!(k3cone(&[cmd]).status.code(), Some(0), "{cmd}");
    }
}
