use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn isl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isl"))
        .args(args)
        .env_remove("ISL_ORACLE_MAX_LEN")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = isl(&all);
    (
        o.status.code().unwrap(),
        serde_json::from_slice(&o.stdout).expect("stdout is JSON"),
    )
}

fn export(name: &str, dir: &Path) {
    let o = isl(&["corpus", name, "--export", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn characterize_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    export("abcd", dir.path());
    let spec = dir.path().join("spec.json");
    let o = isl(&["characterize", "--blocks", spec.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "NotCFL (crossing arcs (1,3)×(2,4))");

    let o = isl(&["characterize", "--blocks", "nested"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "CFL (jointly well-nested)");
}

#[test]
fn refutation_crossing_row() {
    let o = isl(&["crossings", "--pair", "gap-refutation", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().find(|l| l.contains("gap=")).unwrap().to_string();
    assert!(row.contains("gap=7") && row.contains("inner=1"), "{row}");

    let (code, v) = json(&["crossings", "--pair", "gap-refutation", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["version"], "isl-cli-v1");
    let c = &v["result"]["analyses"][0]["crossings"][0]["measures"];
    assert_eq!((c["gap"].as_u64(), c["inner"].as_u64()), (Some(7), Some(1)));
}

#[test]
fn verify_buffered_product() {
    let o = isl(&[
        "verify",
        "--construct",
        "buffered",
        "--d",
        "1",
        "--pair",
        "gap-refutation",
        "--max-len",
        "12",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("language equality confirmed, 0 mismatches"));
    // Progress goes to stderr only.
    assert!(String::from_utf8_lossy(&o.stderr).contains("enumerating"));
    assert!(!stdout(&o).contains("enumerating"));
}

#[test]
fn oracle_cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_isl"))
        .args([
            "--json",
            "verify",
            "--construct",
            "displacement",
            "--k",
            "1",
            "--pair",
            "interleaved-palindrome",
        ])
        .env("ISL_ORACLE_MAX_LEN", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["result"]["check"].as_str().unwrap().ends_with("length 4"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("capped at 4"));
}

#[test]
fn linkage_exit_codes_and_counterexample() {
    let (code, v) = json(&["linkage", "--blocks", "abcd", "--n", "4"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["report"]["all_hold"], false);

    let (code, _) = json(&["linkage", "--blocks", "abcd", "--n", "4", "--short-pumps"]);
    assert_eq!(code, 0);

    let (code, v) = json(&["linkage", "--blocks", "abcd", "--n", "4", "--oracle", "first"]);
    assert_eq!(code, 1);
    let c = &v["result"]["report"]["linkages"][0]["counterexample"];
    assert_eq!(c["v"], "");
    assert!(c["x"].as_str().unwrap().starts_with('a'));
    assert_eq!(c["u"], "aaa");
}

#[test]
fn case_table_has_seven_rows() {
    let o = isl(&["linkage", "--blocks", "abcd", "--n", "3", "--short-pumps", "--cases"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for k in 1..=7 {
        assert!(
            text.lines().any(|l| l.starts_with(&format!("case {k} "))),
            "case {k}\n{text}"
        );
    }
}

#[test]
fn errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{ not json").unwrap();
    for args in [
        vec!["characterize", "--blocks", bad.to_str().unwrap()],
        vec!["characterize", "--blocks", "/no/such/file.json"],
        vec!["simulate", "--word", "ab"],
        vec!["crossings", "--pair", "anbn", "--n", "2"],
        vec!["verify", "--pair", "abcd", "--construct", "displacement"],
        vec!["corpus", "no-such-example"],
    ] {
        let o = isl(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--json", "report", "--pair", "interleaved-palindrome"];
    let a = isl(&args);
    let b = isl(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["result"]["family"]["regime"], "bounded-gap");
}

#[test]
fn report_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("r.svg");
    let o = isl(&["report", "--pair", "gap-refutation", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("Inner segment measure | Crossing gap | Intersection"));
    assert!(text.contains("buffered product"));
    let body = fs::read_to_string(&svg).unwrap();
    assert!(body.starts_with("<svg") && body.contains("<path"));
}

#[test]
fn constructed_fragment_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.json");
    let o = isl(&[
        "construct",
        "--pair",
        "gap-refutation",
        "--construct",
        "buffered",
        "--d",
        "1",
        "--max-len",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let p = out.to_str().unwrap();
    assert_eq!(
        isl(&["simulate", "--pda", p, "--word", "abadef"]).status.code(),
        Some(0)
    );
    assert_eq!(
        isl(&["simulate", "--pda", p, "--word", "abadde"]).status.code(),
        Some(1)
    );

    // Not jointly well-nested: a negative answer, not an error.
    assert_eq!(isl(&["construct", "--blocks", "abcd"]).status.code(), Some(1));
}

#[test]
fn grammar_from_text_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    fs::write(&g, "S -> a S b | ε\n").unwrap();
    let o = isl(&["verify", "--grammar", g.to_str().unwrap(), "--max-len", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 mismatches (5 words)"));
    assert_eq!(
        isl(&["simulate", "--grammar", g.to_str().unwrap(), "--word", "aabb"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        isl(&["simulate", "--grammar", g.to_str().unwrap(), "--word", "aab"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn pda_pair_from_files() {
    let dir = tempfile::tempdir().unwrap();
    export("interleaved-palindrome", dir.path());
    let m1 = dir.path().join("m1.json");
    let m2 = dir.path().join("m2.json");
    let (m1, m2) = (m1.to_str().unwrap(), m2.to_str().unwrap());
    let o = isl(&["crossings", "--pda", m1, "--pda", m2, "--word", "0101"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("gap=1"));
    let o = isl(&["runs", "--pda", m1, "--word", "0101"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("run 0:"));
}

#[test]
fn corpus_listing() {
    let o = isl(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for name in [
        "interleaved-palindrome",
        "gap-refutation",
        "abcd",
        "abc-shared-endpoint",
        "arithmetic",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let o = isl(&["corpus", "anbn", "--replay"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
}
