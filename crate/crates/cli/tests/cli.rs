//! Black-box tests of the command-line interface: output shapes, exit
//! codes, and flag plumbing.

use std::process::{Command, Output};

fn preproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_preproj"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(args: &[&str]) -> serde_json::Value {
    let out = preproj(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn cartan_reports_matrix_and_symmetrizers() {
    let v = stdout_json(&["cartan", "c2"]);
    assert_eq!(v["C"], serde_json::json!([[2, -2], [-1, 2]]));
    assert_eq!(v["d"], serde_json::json!([1, 2]));
    assert_eq!(v["finite_type"], serde_json::json!(true));
}

#[test]
fn kostant_counts_partitions() {
    let v = stdout_json(&["kostant", "c2", "--weight", "3,2"]);
    assert_eq!(v["count"], serde_json::json!(5));
    let v = stdout_json(&["kostant", "a2-lusztig", "--weight", "1,1"]);
    assert_eq!(v["count"], serde_json::json!(2));
}

#[test]
fn algebra_dims_defaults_to_degree_eight() {
    let v = stdout_json(&["algebra-dims", "c2"]);
    assert_eq!(
        v["dims"],
        serde_json::json!([3, 4, 3, 0, 0, 0, 0, 0, 0])
    );
    assert_eq!(
        v["verdict"],
        serde_json::json!("finite-dimensional, total = 10")
    );
    let v = stdout_json(&["algebra-dims", "c2", "--max-degree", "2"]);
    assert_eq!(v["dims"], serde_json::json!([3, 4, 3]));
}

#[test]
fn roots_lists_positive_roots_in_order() {
    let v = stdout_json(&["roots", "c2"]);
    assert_eq!(v["count"], serde_json::json!(4));
    assert_eq!(
        v["roots"],
        serde_json::json!([[0, 1], [1, 0], [1, 1], [2, 1]])
    );
}

#[test]
fn crystal_json_counts_weight_32_components() {
    let v = stdout_json(&["crystal", "c2", "--depth", "5"]);
    let counts = v["counts_by_weight"].as_array().unwrap();
    let entry = counts
        .iter()
        .find(|e| e["weight"] == serde_json::json!([3, 2]))
        .expect("weight (3,2) present");
    assert_eq!(entry["count"], serde_json::json!(5));
    assert_eq!(v["depth"], serde_json::json!(5));
}

#[test]
fn crystal_dot_is_a_digraph() {
    let out = preproj(&["crystal", "c2", "--depth", "2", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph crystal {"));
    assert!(text.contains("style=solid"));
    assert!(text.contains("style=dashed"));
}

#[test]
fn check_axioms_is_clean_on_a_small_run() {
    let out = preproj(&["check-axioms", "c2", "--depth", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("no violations"));
}

#[test]
fn ext_reports_hom_and_ext_in_both_directions() {
    let dir = std::env::temp_dir().join(format!("preproj-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    std::fs::write(
        &a,
        r#"{"graph": "c2", "dims": {"1": 1, "2": 1},
            "maps": [{"from": "1", "to": "2", "matrix": [["1", "0"], ["0", "1"]]}]}"#,
    )
    .unwrap();
    std::fs::write(&b, r#"{"graph": "c2", "dims": {"1": 1, "2": 0}, "maps": []}"#).unwrap();
    let v = stdout_json(&["ext", "c2", "--module-a", a.to_str().unwrap(), "--module-b", b.to_str().unwrap()]);
    assert_eq!(v["hom_ab"], serde_json::json!(1));
    assert_eq!(v["hom_ba"], serde_json::json!(0));
    assert_eq!(v["ext_ab"], serde_json::json!(1));
    assert_eq!(v["ext_ba"], serde_json::json!(1));

    // a module violating the relations is refused
    let c = dir.join("c.json");
    std::fs::write(
        &c,
        r#"{"graph": "c2", "dims": {"1": 1, "2": 1},
            "maps": [{"from": "1", "to": "2", "matrix": [["1", "0"], ["0", "1"]]},
                     {"from": "2", "to": "1", "matrix": [["1", "0"]]}]}"#,
    )
    .unwrap();
    let out = preproj(&["ext", "c2", "--module-a", c.to_str().unwrap(), "--module-b", b.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn deformation_parameter_is_plumbed_through() {
    let v = stdout_json(&["cartan", "sl2hat-z", "--z", "3/2"]);
    assert_eq!(v["finite_type"], serde_json::json!(false));
    // z is rejected for presets that do not take it
    let out = preproj(&["cartan", "c2", "--z", "2"]);
    assert_eq!(out.status.code(), Some(1));
    // zero is rejected
    let out = preproj(&["cartan", "sl2hat-z", "--z", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes_distinguish_domain_and_usage_errors() {
    let out = preproj(&["validate", "nosuch"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));

    let out = preproj(&["crystal", "sl2hat-z", "--depth", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = preproj(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));

    let out = preproj(&["kostant", "c2", "--weight", "1,2,3"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn validate_accepts_files_and_all_builtins() {
    for name in ["a1xa1", "a2-lusztig", "a3", "c2", "c2-sqrt2", "sl2hat-z"] {
        let out = preproj(&["validate", name]);
        assert!(out.status.success(), "{name} failed");
    }
}

#[test]
fn samples_flag_controls_the_genericity_budget() {
    let out = preproj(&["crystal", "c2", "--depth", "3", "--samples", "2"]);
    assert!(out.status.success());
}
