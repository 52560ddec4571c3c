use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn vlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(args)
        .env_remove("VLAB_CATALOG")
        .output()
        .expect("vlab runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn order_of_a5() {
    let out = vlab(&["order", "A5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["result"]["order"], "60");
    assert_eq!(v["budgets"]["element_cap"], 100_000);
}

#[test]
fn epi_a4_in_a5_under_product() {
    let out = vlab(&["epi", "--variety", "prod(var:A5,A)", "--group", "A5", "--sub", "A4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["result"]["outcome"], "Epi");
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["certificate"]["rule"], "product-conditions");
}

#[test]
fn unknown_exits_with_two() {
    let out = vlab(&["epi", "--group", "S5", "--sub", "A4", "--variety", "var:A5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["outcome"], "Unknown");
}

#[test]
fn budget_exhaustion_is_unknown() {
    let out = vlab(&["--wreath-top-cap", "2", "wreath", "C2", "C4"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["budgets"]["wreath_top_cap"], 2);
    assert!(v["result"]["reason"].as_str().unwrap().contains("budget"));
}

#[test]
fn escape_for_abelian_variety() {
    let out = vlab(&["escape", "--base", "C2", "--variety", "A"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["top"], "C2");
    assert_eq!(v["result"]["witness_order"], "8");
    assert_eq!(v["result"]["nilpotency_class"], 2);
}

#[test]
fn parse_errors_name_token_and_position() {
    let out = vlab(&["epi", "--group", "A5", "--sub", "A4", "--variety", "prod(var:A5,Q)"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("--variety") && err.contains("position 12") && err.contains("'Q)'"), "{err}");

    let out = vlab(&["order", "<(0 1 2); (0 x)>"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("position") && err.contains('x'), "{err}");

    let out = vlab(&["magnus", "--word", "[x1,,x2]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--word"));
}

#[test]
fn generator_lists_and_embedded_subgroups() {
    let out = vlab(&["order", "<(0 1 2 3 4); (0 1 2)>"]);
    assert_eq!(json(&out)["result"]["order"], "60");
    let out = vlab(&["order", "<(0 1)>@6"]);
    assert_eq!(json(&out)["result"]["degree"], 6);
    // C2 as (0 1) is odd, so inside A5 it is taken through an embedding.
    let out = vlab(&["bounds", "--group", "A5", "--sub", "C2", "--variety", "prod(var:A5,A)"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json(&out)["result"]["sub_order"], "2");
    let out = vlab(&["epi", "--group", "A4", "--sub", "<(0 1)>", "--variety", "A"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn kk_embedding_report() {
    let out = vlab(&["kk-embed", "--group", "D4", "--normal", "<(0 1 2 3)>"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &json(&out)["result"];
    assert_eq!(r["homomorphism"], true);
    assert_eq!(r["injective"], true);
    assert_eq!(r["image_order"], "8");
    assert_eq!(r["wreath_order"], "32");
}

#[test]
fn verbal_and_magnus() {
    let v = json(&vlab(&["verbal", "--group", "S4", "--variety", "A"]));
    assert_eq!(v["result"]["verbal"]["order"], "12");
    assert_eq!(v["result"]["member"], "no");
    let v = json(&vlab(&["magnus", "--word", "x1^2", "--prime", "2"]));
    assert_eq!(v["result"]["verified"], true);
    assert_eq!(v["result"]["monomial_text"], "y1^2");
}

#[test]
fn text_format_is_aligned() {
    let out = vlab(&["--format", "text", "order", "S4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.starts_with("result.order")).unwrap();
    assert!(line.ends_with(" 24"));
    let col = |l: &str| l.len() - l.split_whitespace().last().unwrap().len();
    assert!(text.lines().filter(|l| !l.contains(", ")).all(|l| col(l) == col(line)));
}

#[test]
fn user_catalog_from_environment() {
    let dir = std::env::temp_dir().join(format!("vlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::File::create(&good).unwrap().write_all(b"# custom\nMyC3 3 1,2,0\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_vlab"))
        .args(["order", "MyC3"])
        .env("VLAB_CATALOG", &good)
        .output()
        .unwrap();
    assert_eq!(json(&out)["result"]["order"], "3");

    let bad = dir.join("bad.txt");
    std::fs::File::create(&bad).unwrap().write_all(b"Ok 2 1,0\nBroken 3 0,0,1\n").unwrap();
    let out = vlab(&["--catalog", bad.to_str().unwrap(), "order", "A5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));

    let fixtures = dir.join("fixtures.txt");
    std::fs::File::create(&fixtures).unwrap().write_all(b"known-epi | A4 < A5 | var:A5 |\n").unwrap();
    let out = vlab(&["--fixtures", fixtures.to_str().unwrap(), "order", "A5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scenarios_match_their_recorded_outcomes() {
    let list = json(&vlab(&["scenario", "list"]));
    let names: Vec<String> = list["result"]["scenarios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names.len(), 8);
    for name in &names {
        let out = vlab(&["scenario", name]);
        let v = json(&out);
        assert_eq!(v["result"]["matches"], true, "{name}: {}", v["result"]["observed"]);
        assert_eq!(out.status.code(), Some(0));
    }
}

#[test]
fn scenarios_are_deterministic() {
    let first = vlab(&["scenario", "all"]);
    let second = vlab(&["scenario", "all"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(!first.stdout.is_empty());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn unknown_scenario_is_an_error() {
    let out = vlab(&["scenario", "nope"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("nope"));
}
