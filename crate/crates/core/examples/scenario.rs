//! Running a JSON scenario and reading its canonical report.

use infmat::scenario;

fn main() {
    let text = r#"{
  "ring": "Z/5",
  "window": 6,
  "seed": 3,
  "derivation": {"kind": "sum", "parts": [
    {"kind": "inner", "operator": {"kind": "diag", "formula": "2*i+1"}},
    {"kind": "inner", "operator": "shift"}
  ]}
}"#;
    let loaded = scenario::parse(text, "inline.json").unwrap();
    let out = loaded.run().unwrap();
    println!("exit code {}", out.exit_code);
    print!("{}", out.canonical());

    match scenario::parse(r#"{"ring": "Q", "window": 2, "derivation": {"kind": "lift", "derivation": "zero"}}"#, "bad.json") {
        Ok(_) => unreachable!(),
        Err(e) => println!("{e}"),
    }
}
