use std::process::{Command, Output};

use serde_json::Value;

fn ribtor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribtor"))
        .args(args)
        .output()
        .expect("ribtor runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = ribtor(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn genus_of_catalog_graphs() {
    assert_eq!(stdout(&ribtor(&["--catalog", "k4:1000", "genus"])).lines().next().unwrap(), "genus 1");
    let v = json(&["--catalog", "triangle", "--json", "genus"]);
    assert_eq!(v["genus"], 0);
}

#[test]
fn tree_counts() {
    assert_eq!(stdout(&ribtor(&["--catalog", "k4:0000", "trees", "--count"])).trim(), "16");
    assert_eq!(stdout(&ribtor(&["--catalog", "k5", "trees", "--count"])).trim(), "125");
    let v = json(&["--catalog", "triangle", "--json", "trees"]);
    assert_eq!(v["count"], 3);
    assert_eq!(v["trees"][0]["index"], 1);
}

#[test]
fn picard_order_matches_tree_count() {
    let v = json(&["--catalog", "k33", "--json", "picard"]);
    assert_eq!(v["order"], 81);
}

#[test]
fn rotor_trace_on_triangle() {
    let v = json(&[
        "--catalog", "triangle", "--json", "action", "--kind", "rotor", "--base", "x", "--generator", "y",
        "--tree", "1", "--trace",
    ]);
    assert_eq!(v["cycle_type"], serde_json::json!([3]));
    assert!(!v["tree"]["trace"].as_array().unwrap().is_empty());
}

#[test]
fn graph_file_is_accepted() {
    let dir = std::env::temp_dir().join(format!("ribtor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("k4.txt");
    let text = stdout(&ribtor(&["--catalog", "k4:1000", "catalog"]));
    std::fs::write(&path, text).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&ribtor(&["genus", p])).lines().next().unwrap(), "genus 1");
    assert_eq!(stdout(&ribtor(&["--file", p, "trees", "--count"])).trim(), "16");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compare_all_bases_on_planar_and_nonplanar() {
    let planar = json(&["--catalog", "k4:0000", "--json", "compare", "--all-bases"]);
    assert!(planar["bases"].as_array().unwrap().iter().all(|b| b["agree"] == true));
    let torus = json(&["--catalog", "k4:1000", "--json", "compare"]);
    assert!(torus["bases"].as_array().unwrap().iter().any(|b| b["agree"] == false));
    let one = json(&["--catalog", "k4:1000", "--json", "compare", "--base", "a"]);
    assert_eq!(one["vertex"], "a");
    assert!(one["witness"].is_object() == (one["agree"] == false));
}

#[test]
fn witness_construction_disagrees() {
    for name in ["k5", "pointed-bowtie"] {
        let v = json(&["--catalog", name, "--json", "witness", "--construct"]);
        assert_eq!(v["construction"]["disagree"], true, "{name}");
    }
}

#[test]
fn missing_witness_is_a_domain_error() {
    let o = ribtor(&["--catalog", "rounded-bowtie", "witness", "--proper"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ribtor(&["--catalog", "nope", "genus"]).status.code(), Some(2));
    assert_eq!(ribtor(&["genus"]).status.code(), Some(2));
    assert_eq!(ribtor(&["frobnicate"]).status.code(), Some(2));
    let o = ribtor(&["--catalog", "triangle", "action", "--kind", "rotor", "--base", "x", "--generator", "w"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn catalog_listing_and_calibration() {
    let v = json(&["--json", "catalog"]);
    assert!(v.as_array().unwrap().iter().any(|e| e["name"] == "k5"));
    let o = ribtor(&["catalog", "--calibrate"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rounded-bowtie"));
}
