use std::path::PathBuf;
use std::process::{Command, Output};

use tropfan_core::zlinalg::AbGroup;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn tropfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfan")).args(args).env("TROPFAN_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cube_table_over_z() {
    let o = tropfan(&["cohomology", "--fan", &data("cube.json"), "--space", "comp", "--coeff", "Z"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("2    0  Z^2  Z"), "{text}");
    let o = tropfan(&["cohomology", "--fan", &data("cube.json"), "--space", "fan", "--variant", "c"]);
    assert!(stdout(&o).contains("1    0  0    Z^3 x Z/2Z"));
}

#[test]
fn json_table_round_trips() {
    let o = tropfan(&["cohomology", "--fan", &data("sigma3.json"), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let table: Vec<Vec<String>> = serde_json::from_value(value["table"].clone()).unwrap();
    let rerendered: Vec<Vec<String>> =
        table.iter().map(|row| row.iter().map(|g| g.parse::<AbGroup>().unwrap().to_string()).collect()).collect();
    assert_eq!(rerendered, table);
    assert_eq!(table[1][2], "Z/3Z");
    let again = serde_json::to_string_pretty(&value).unwrap();
    assert_eq!(format!("{again}\n"), stdout(&o));
}

#[test]
fn manifold_checks() {
    let o = tropfan(&["manifold-check", "--fan", &data("u23.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("true"));
    let o = tropfan(&["manifold-check", "--fan", &data("cube.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("H^{2,1} = Z^2"));
}

#[test]
fn manifold_check_needs_unimodular_fan_over_z() {
    let o = tropfan(&["manifold-check", "--fan", &data("sigma3.json"), "--coeff", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(tropfan(&["manifold-check", "--fan", &data("sigma3.json"), "--coeff", "Q"]).status.code(), Some(0));
}

#[test]
fn ample_modes() {
    let zero = tropfan(&["ample", "--fan", &data("p2.json"), "--function", &data("zero.json"), "--mode", "both"]);
    assert_eq!(zero.status.code(), Some(1));
    let text = stdout(&zero);
    assert!(text.contains("lp: false") && text.contains("kleiman: false"));
    let own = tropfan(&["ample", "--fan", &data("p2.json")]);
    assert_eq!(own.status.code(), Some(0));
    let half = tropfan(&["ample", "--fan", &data("p2.json"), "--function", &data("p2_half.json"), "--mode", "kleiman", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&half.stdout).unwrap();
    assert_eq!(v["ray_values"][0], "1/2");
    assert_eq!(v["kleiman"]["positive"], serde_json::json!(true));
}

#[test]
fn verify_reports() {
    let o = tropfan(&["verify", "--fan", &data("delta.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("surjective over Z with kernel Z/3Z"));
    let o = tropfan(&["verify", "--fan", &data("cube.json"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["theorem_holds"], serde_json::json!(true));
}

#[test]
fn diagnostics_after_rebasing() {
    let ambient = stdout(&tropfan(&["diagnostics", "--fan", &data("cube_ambient.json")]));
    assert!(ambient.contains("unimodular: false"));
    let rebased = stdout(&tropfan(&["diagnostics", "--fan", &data("cube.json")]));
    assert!(rebased.contains("unimodular: true"));
}

#[test]
fn chow_and_weights() {
    let o = stdout(&tropfan(&["chow", "--fan", &data("delta.json")]));
    assert!(o.contains("A^1 = Z x Z/3Z"));
    let o = stdout(&tropfan(&["chow", "--fan", &data("sigma3.json"), "--degree", "2"]));
    assert!(o.contains("n/a"));
    let o = stdout(&tropfan(&["mw", "--fan", &data("cube.json"), "--dim", "1"]));
    assert!(o.starts_with("MW_1 has rank 5"));
}

#[test]
fn bergman_output_is_a_fan_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("u24.json");
    let o = tropfan(&["bergman", "--matroid", &data("u24.json"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = tropfan(&["manifold-check", "--fan", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn invalid_inputs_exit_with_two() {
    let o = tropfan(&["cohomology", "--fan", &data("bad_index.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("bad_index.json"));
    assert_eq!(tropfan(&["cohomology", "--fan", &data("missing.json")]).status.code(), Some(2));
    assert_eq!(tropfan(&["cohomology", "--fan", &data("p2.json"), "--coeff", "R"]).status.code(), Some(2));
    assert_eq!(tropfan(&["mw", "--fan", &data("p2.json"), "--dim", "7"]).status.code(), Some(2));
}
