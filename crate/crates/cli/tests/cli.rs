use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn satmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_satmod"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn enumerate_prints_class_size() {
    let o = satmod(&["enumerate", "catalog/x7.json"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("class size: 2\n"));
    let dot = satmod(&["enumerate", "x6", "--format", "dot"]);
    assert!(stdout(&dot).starts_with("graph modular {"));
}

#[test]
fn empty_word_echoes_the_quiver() {
    let o = satmod(&["mutate", "catalog/a2.json", ""]);
    assert_eq!(o.status.code(), Some(0));
    let got: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let want: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(root().join("catalog/a2.json")).unwrap()).unwrap();
    assert_eq!(got, want);
}

#[test]
fn mutate_reads_words_from_files_and_labels_from_one() {
    let dir = std::env::temp_dir().join(format!("satmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let word = dir.join("phi5.txt");
    std::fs::write(&word, "(1 2) m1 (1 2) m1 (1 2) m1 (1 2) m1 (1 2) m1\n").unwrap();
    let o = satmod(&["mutate", "a2", &format!("@{}", word.display()), "--index", "1", "--c-matrix"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["c_matrix"], serde_json::json!([[1, 0], [0, 1]]));
}

#[test]
fn abelianize_quivers_and_presentations() {
    let o = satmod(&["abelianize", "catalog/x7.json"]);
    assert_eq!(stdout(&o), "free rank 0, torsion [10]\nZ/2 x Z/5\n");
    let x6 = satmod(&["abelianize", "catalog/x6.json"]);
    assert_eq!(x6.status.code(), Some(0));
    assert!(stdout(&x6).contains("torsion [2]"));
    let golden = root().join("crates/core/tests/golden/x7.txt");
    let p = satmod(&["abelianize", golden.to_str().unwrap()]);
    assert_eq!(stdout(&p), stdout(&o));
}

#[test]
fn present_ends_with_the_abelianization() {
    let o = satmod(&["present", "g2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("# abelianization: Z^2"));
    let j = satmod(&["present", "x7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(v["abelianization"]["torsion"], serde_json::json!(["10"]));
}

#[test]
fn verify_exit_status_reflects_the_result() {
    let ok = satmod(&["verify", "x7", "relations/x7_dehn_twists.rel", "--mode", "both"]);
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("6 of 6 checks trivial"));
    let dir = std::env::temp_dir().join(format!("satmod-verify-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.rel");
    std::fs::write(&bad, "let phi = (0 1) m0\nrel square: phi^2 = 1\n").unwrap();
    let o = satmod(&["verify", "a2", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL square"));
}

#[test]
fn malformed_input_exits_two_with_a_position() {
    let dir = std::env::temp_dir().join(format!("satmod-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let q = dir.join("q.json");
    std::fs::write(&q, "{\"n\": 2,\n \"matrix\": [[0, 1], [-1 0]]}").unwrap();
    let o = satmod(&["mutate", q.to_str().unwrap(), "m0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error at 2:"));
    let w = satmod(&["mutate", "a2", "m0 (0 5)"]);
    assert_eq!(w.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&w.stderr).contains("1:"));
    let rel = dir.join("r.rel");
    std::fs::write(&rel, "index 1\nrel x: m1 = nope\n").unwrap();
    let r = satmod(&["verify", "a2", rel.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("parse error at 2:"));
    assert_eq!(satmod(&["mutate", "no-such-quiver", ""]).status.code(), Some(2));
    assert_eq!(satmod(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn twists_lists_the_double_arrows_of_x7() {
    let o = satmod(&["twists", "x7"]);
    let base: Vec<(u64, u64)> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["class"] == 0)
        .map(|v| (v["i"].as_u64().unwrap(), v["j"].as_u64().unwrap()))
        .collect();
    assert_eq!(base, [(1, 2), (3, 4), (5, 6)]);
}
