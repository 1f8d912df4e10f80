use std::path::Path;
use std::process::{Command, Output};

fn infmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infmat")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"ring": "Z", "derivation": {"kind": "inner", "operator": "shift"}, "window": 6}"#, 0),
        (
            r#"{"ring": "Z", "window": 4, "derivation": {"kind": "lie", "ambient": "sl_inf", "derivation": {"kind": "inner", "operator": "shift"}}}"#,
            3,
        ),
        (r#"{"ring": "Q", "derivation": {"kind": "lift", "derivation": "zero"}, "window": 3}"#, 1),
        ("{\"ring\": \"Z\",\n \"window\": 3,\n", 1),
    ];
    for (k, (text, want)) in cases.iter().enumerate() {
        let path = write(dir.path(), &format!("s{k}.json"), text);
        let out = infmat(&["run", &path]);
        assert_eq!(out.status.code(), Some(*want), "{text}\n{}", String::from_utf8_lossy(&out.stderr));
        if *want == 1 {
            let err = String::from_utf8_lossy(&out.stderr);
            assert!(err.contains(&format!("s{k}.json:")), "{err}");
        }
    }
    assert_eq!(infmat(&["run", "/nonexistent/s.json"]).status.code(), Some(1));
}

#[test]
fn run_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(
        dir.path(),
        "diag.json",
        r#"{"ring": "Z", "window": 4, "derivation": {"kind": "inner", "operator": {"kind": "diag", "formula": "i"}}}"#,
    );
    let target = dir.path().join("report.json");
    let out = infmat(&["run", &path, "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(report["status"], "decomposed");
    assert_eq!(report["residual"], "zero");
    let stdout = infmat(&["run", &path]).stdout;
    assert_eq!(stdout, std::fs::read(&target).unwrap());
}

#[test]
fn demo_names() {
    for name in infmat::demo::DEMOS {
        let out = infmat(&["demo", name]);
        assert!(out.status.success(), "{name}");
    }
    let out = infmat(&["demo", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(infmat::demo::DEMOS.iter().all(|d| err.contains(d)), "{err}");
}

#[test]
fn planted_mutation_fails_selftest() {
    let out = infmat(&["selftest", "--seed", "3", "--plant", "bracket-sign-flip"]);
    assert_ne!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("result: FAIL"), "{text}");
}
