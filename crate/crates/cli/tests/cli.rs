use std::process::{Command, Output};

use serde_json::Value;

fn sf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superforms"))
        .args(args)
        .env("SUPERFORMS_COLOR", "never")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = sf(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    (o.status.code().unwrap(), v)
}

#[test]
fn check_cartan_passes() {
    let o = sf(&["check", "cartan"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("status: ok"));
}

#[test]
fn thom_on_the_odd_plane() {
    let (code, v) = json(&["thom", "--space", "0,2", "--action", "rot", "--param", "z"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    let t = &v["result"]["thom"];
    assert_eq!(t["closed"], true);
    assert_eq!(t["normalized"], true);
    assert_eq!(t["pushforward"], "1");
    assert_eq!(v["caveats"].as_array().unwrap().len(), 1);
}

#[test]
fn localize_at_a_point() {
    let (code, v) = json(&["localize", "--alpha", "theta", "--point", "z=1"]);
    assert_eq!(code, 0);
    let l = &v["result"]["localization"];
    assert_eq!(l["equal"], true);
    assert_eq!(l["lhs"], l["rhs"]);
}

#[test]
fn fourier_inverts() {
    let (code, v) = json(&["fourier", "-e", "odd xi; param a b; a + xi*b", "--var", "xi:f"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["inverse_holds"], true);
}

#[test]
fn berezinian_of_a_diagonal_matrix() {
    let (code, v) = json(&["ber", "-e", "smat(2, 2, 3, 0, 0, 0, 0, 5, 0, 0, 0, 0, 7, 0, 0, 0, 0, 11)"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "ok");
}

#[test]
fn syntax_errors_exit_two() {
    let o = sf(&["eval", "-e", "even x; x +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:12"));
}

#[test]
fn unknown_names_exit_two() {
    assert_eq!(sf(&["eval", "-e", "even x; y"]).status.code(), Some(2));
    assert_eq!(sf(&["thom", "--action", "nope"]).status.code(), Some(2));
    assert_eq!(sf(&["check", "nope"]).status.code(), Some(2));
}

#[test]
fn engine_errors_exit_three() {
    let (code, v) = json(&["eval", "-e", "even x; int(x; x)"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("superforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let o = sf(&["--json", "--seed", "3", "-o", path.to_str().unwrap(), "check", "scalars"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["seed"], 3);
    assert_eq!(v["timing_ms"], 0);
    std::fs::remove_dir_all(dir).ok();
}
