use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pathcoalg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, contents).unwrap();
    p
}

const SINGLE_EDGE: &str = r#"{"vertices": ["v1", "v2"], "edges": [["v1", "v2"]]}"#;
const TWO_CYCLE: &str = r#"{"vertices": ["a", "b"], "edges": [["a", "b"], ["b", "a"]]}"#;

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn coalg_build_dimensions() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", SINGLE_EDGE);
    let out = dir.path().join("c.json");
    let o = run(&["coalg", "build", s(&g), "--field", "2^1", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dim 3 (|V| = 2, |E| = 1)"));
    let c: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(c["basis"].as_array().unwrap().len(), 3);

    let g = write(&dir, "g2.json", TWO_CYCLE);
    let o = run(&[
        "--format",
        "json",
        "coalg",
        "build",
        s(&g),
        "--field",
        "3^1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let c: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c["basis"].as_array().unwrap().len(), 4);
    assert_eq!(c["field"], "3^1");
}

#[test]
fn coalg_build_rejects_unknown_vertex() {
    let dir = TempDir::new().unwrap();
    let g = write(
        &dir,
        "g.json",
        r#"{"vertices": ["a"], "edges": [["a", "z"]]}"#,
    );
    let o = run(&["coalg", "build", s(&g), "--field", "2^1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("edge a->z"));
}

#[test]
fn coalg_aut_modes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", SINGLE_EDGE);
    let o = run(&["coalg", "aut", s(&g), "--field", "2^1", "--mode", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "structured = brute = 2; formula (2·1)^1·1 = 2 ✓\n"
    );

    let c = write(&dir, "c.json", TWO_CYCLE);
    let o = run(&["coalg", "aut", s(&c), "--field", "2^1", "--mode", "both"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("structured = brute = 8;"));

    let o = run(&[
        "--format",
        "json",
        "coalg",
        "aut",
        s(&g),
        "--field",
        "3^1",
        "--mode",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["structured_count"], 6);
    assert_eq!(v["triples"].as_array().unwrap().len(), 6);
}

#[test]
fn coalg_aut_cap_exit_code() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", TWO_CYCLE);
    let o = run(&[
        "--cap-brute-oracle",
        "100",
        "coalg",
        "aut",
        s(&g),
        "--field",
        "2^1",
        "--mode",
        "brute",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("exceeds cap 100"));
    let o = run(&[
        "--cap-field-size",
        "4",
        "coalg",
        "build",
        s(&g),
        "--field",
        "2^3",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn coalg_verify_and_grouplikes() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", SINGLE_EDGE);
    let o = run(&["coalg", "verify", s(&g), "--field", "3^1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "coassociativity PASS\ncounit PASS\n");

    // Δ(e) = v1⊗e only: the right counit law fails.
    let broken = write(
        &dir,
        "bad.json",
        r#"{"field": "3^1", "basis": ["v1", "v2", "e"],
            "comult": {"v1": [["v1", "v1", [1]]], "v2": [["v2", "v2", [1]]], "e": [["v1", "e", [1]]]},
            "counit": {"v1": [1], "v2": [1], "e": [0]}}"#,
    );
    let o = run(&["coalg", "verify", s(&broken)]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("counit FAIL"));

    let o = run(&["coalg", "grouplikes", s(&g), "--field", "2^1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("2 grouplike elements\n  v1\n  v2\n"));

    let o = run(&["coalg", "verify", s(&g)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn graph_aut_and_sequence() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", TWO_CYCLE);
    let o = run(&["graph", "aut", s(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("|Aut| = 2\n"));

    let o = run(&["sequence", "check", s(&g), "--field", "3^1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("kernel order 36, |Aut(C)| = 72"));
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn group_class_verdicts() {
    let dir = TempDir::new().unwrap();
    let s3 = write(
        &dir,
        "s3.json",
        r#"{"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}"#,
    );
    let z2 = write(&dir, "z2.json", r#"{"degree": 2, "generators": [[1, 0]]}"#);
    let trivial = write(&dir, "t.json", r#"{"degree": 1, "generators": []}"#);
    assert_eq!(
        stdout(&run(&["group", "class", s(&s3), "--p", "2", "--n", "1"])),
        "IN\n"
    );
    let o = run(&[
        "--format",
        "json",
        "group",
        "class",
        s(&z2),
        "--p",
        "2",
        "--n",
        "1",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "NOT-IN");
    assert_eq!(v["witness_order"], 2);
    assert_eq!(
        stdout(&run(&[
            "group",
            "class",
            s(&trivial),
            "--p",
            "2",
            "--n",
            "1"
        ])),
        "IN\n"
    );
    let o = run(&[
        "--cap-subgroup-enum",
        "1",
        "group",
        "class",
        s(&s3),
        "--p",
        "2",
        "--n",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn realize_writes_deterministic_bundle() {
    let dir = TempDir::new().unwrap();
    let rep = write(
        &dir,
        "rep.json",
        r#"{"group": {"degree": 2, "generators": [[1, 0]]}, "v_size": 2, "gen_images": [[1, 0]]}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["realize", s(&rep), "--field", "2^1", "--out", s(out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = stdout(&o);
        for item in ["item1", "item2", "item3", "item4"] {
            assert!(
                text.lines().any(|l| l.contains(item) && l.contains("PASS")),
                "{text}"
            );
        }
        assert!(text.contains("notice: some checks were skipped"));
    }
    for file in [
        "system.json",
        "simple.json",
        "simple.dot",
        "coalgebra.json",
        "report.json",
    ] {
        let x = fs::read(a.join(file)).unwrap();
        assert_eq!(x, fs::read(b.join(file)).unwrap(), "{file} differs");
    }
    let report: serde_json::Value =
        serde_json::from_slice(&fs::read(a.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["v_subset"], serde_json::json!(["v0", "v1"]));
}

#[test]
fn realize_s3_passes_with_skipped_brute() {
    let dir = TempDir::new().unwrap();
    let rep = write(
        &dir,
        "rep.json",
        r#"{"group": {"degree": 3, "generators": [[1, 0, 2], [1, 2, 0]]}, "v_size": 3,
            "gen_images": [[1, 0, 2], [1, 2, 0]]}"#,
    );
    let o = run(&["--format", "json", "realize", s(&rep), "--field", "2^1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["items"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "PASS"));
    let brute = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "coalgebra_brute_count")
        .unwrap();
    assert_eq!(brute["status"], "SKIPPED");
}

#[test]
fn realize_rejects_inconsistent_rep() {
    let dir = TempDir::new().unwrap();
    let rep = write(
        &dir,
        "rep.json",
        r#"{"group": {"degree": 3, "generators": [[1, 2, 0]]}, "v_size": 2, "gen_images": [[1, 0]]}"#,
    );
    let o = run(&["realize", s(&rep)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ρ not well-defined at word"));
}

#[test]
fn bad_arguments() {
    assert_eq!(run(&["coalg"]).status.code(), Some(2));
    assert_eq!(
        run(&["--cap-brute-oracle", "0", "graph", "aut", "x"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["graph", "aut", "/nonexistent.json"]).status.code(),
        Some(2)
    );
}
