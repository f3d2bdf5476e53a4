//! The command-line contract: exit codes, output shape and report determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/golden").join(format!("{name}.json"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli_contract");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn chiralx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiralx")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Drops the fields that legitimately differ between runs.
fn normalized(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("millis");
    }
    v
}

#[test]
fn describe_prints_invariants() {
    let o = chiralx(&["describe", path(&golden("sl2"))]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("validation: ok"), "{s}");
    assert!(s.contains("rho(e) = 0, rho(h) = 0, rho(f) = 0"), "{s}");

    let s = stdout(&chiralx(&["describe", path(&golden("borel"))]));
    assert!(s.contains("rho(h) = 2"), "{s}");
}

#[test]
fn malformed_and_missing_input_exit_with_two() {
    let p = scratch("malformed.json");
    std::fs::write(&p, "{\"schema\": }").unwrap();
    let o = chiralx(&["describe", path(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("byte 11"), "{}", stderr(&o));

    let o = chiralx(&["verify", path(&scratch("absent.json"))]);
    assert_eq!(o.status.code(), Some(2));

    let o = chiralx(&["verify", path(&golden("gm1")), "--form", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown form `nope`"));
}

#[test]
fn reports_are_deterministic_across_worker_counts() {
    let a = scratch("gm2-a.json");
    let b = scratch("gm2-b.json");
    let args = |out: &Path, jobs: &str| {
        vec!["verify".to_string(), path(&golden("gm2")).into(), "--weight".into(), "1".into(), "--degree".into(), "1".into(), "--jobs".into(), jobs.into(), "--json".into(), path(out).into()]
    };
    for (out, jobs) in [(&a, "1"), (&b, "3")] {
        let o = Command::new(env!("CARGO_BIN_EXE_chiralx")).args(args(out, jobs)).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let (ra, rb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(normalized(&ra), normalized(&rb));
    let v = normalized(&ra);
    assert_eq!(v["schema"], "chiralx-report/1");
    assert_eq!(v["summary"]["fail"], 0);
    // keys keep their declared order
    let keys: Vec<&str> = ra.lines().filter_map(|l| l.strip_prefix("  \"")).filter_map(|l| l.split('"').next()).collect();
    assert_eq!(keys, ["schema", "document", "suite", "form", "bounds", "timestamp", "summary", "checks"]);
}

#[test]
fn reports_match_the_recorded_fixtures() {
    // regenerate with CHIRALX_BLESS=1 after an intended change
    let bless = std::env::var_os("CHIRALX_BLESS").is_some();
    for name in ["gm1", "gm2", "borel"] {
        let out = scratch(&format!("{name}-fixture.json"));
        let o = chiralx(&["verify", path(&golden(name)), "--weight", "1", "--degree", "1", "--json", path(&out)]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        let got = normalized(&std::fs::read_to_string(&out).unwrap());
        let fixture = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/expected").join(format!("{name}.json"));
        if bless {
            std::fs::create_dir_all(fixture.parent().unwrap()).unwrap();
            std::fs::write(&fixture, serde_json::to_string_pretty(&got).unwrap() + "\n").unwrap();
        }
        let want: Value = serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn non_unimodular_right_bracket_is_skipped() {
    let o = chiralx(&["verify", path(&golden("borel")), "--suite", "rightbracket", "--weight", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().any(|l| l.starts_with("SKIPPED") && l.contains("cdo.right-bracket ")), "{s}");
}

#[test]
fn character_table() {
    let o = chiralx(&["char", path(&golden("gm1")), "--weight", "2", "--degree", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    let row: Vec<&str> = s.lines().find(|l| l.trim_start().starts_with("2 ")).unwrap().split_whitespace().collect();
    assert_eq!(row, ["2", "0", "5", "5"]);
}

#[test]
fn brst_tables() {
    let s = stdout(&chiralx(&["brst", path(&golden("gm2")), "--weight", "1", "--degree", "1"]));
    assert!(s.contains("w=0: 1 2 1   oracle: 1 2 1"), "{s}");
    assert!(s.contains("w=1: 0 0 0"), "{s}");
    let s = stdout(&chiralx(&["brst", path(&golden("gm1")), "--weight", "1", "--degree", "1"]));
    assert!(s.contains("w=0: 1 1   oracle: 1 1"), "{s}");

    // the weight-zero block is closed under the differential even when the degree is only a filtration
    let s = stdout(&chiralx(&["brst", path(&golden("sl2")), "--weight", "0", "--degree", "1"]));
    assert!(s.contains("w=0: 1 0 0 1   oracle: 1 0 0 1"), "{s}");
    let o = chiralx(&["brst", path(&golden("sl2")), "--weight", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--filtered"));
    let o = chiralx(&["brst", path(&golden("sl2")), "--weight", "0", "--degree", "1", "--filtered"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("w=0 D<=1: 1 0 0 1"), "{}", stdout(&o));
}

#[test]
fn corrupted_document_fails_verification() {
    let text = std::fs::read_to_string(golden("sl2")).unwrap().replace(r#"["e", "f", "h", "1"]"#, r#"["e", "f", "h", "3"]"#);
    let p = scratch("sl2-corrupt.json");
    std::fs::write(&p, text).unwrap();
    let o = chiralx(&["verify", path(&p), "--weight", "1", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("data.structure")), "{}", stdout(&o));
}
