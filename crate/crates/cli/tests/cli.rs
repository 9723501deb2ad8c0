use std::path::Path;
use std::process::{Command, Output};

use coxdec::catalog::CatalogFile;

fn coxdec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coxdec"))
        .args(args)
        .env_remove("COXDEC_SEED")
        .output()
        .expect("runs")
}

fn enumerate_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["enumerate", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    coxdec(&args)
}

fn load(path: &Path) -> CatalogFile {
    CatalogFile::from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn no_heptagonal_pyramids() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pyr7.json");
    let out = enumerate_to(&path, &["--shape", "pyr7", "--fundamental", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(load(&path).entries.is_empty());
    // An empty catalog verifies.
    assert_eq!(coxdec(&["verify", path.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn one_hexagonal_pyramid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pyr6.json");
    let out = enumerate_to(&path, &["--shape", "pyr6", "--fundamental", "all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(load(&path).entries.len(), 1);
}

#[test]
fn identical_flags_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        assert!(enumerate_to(p, &["--shape", "prism-into-tetra", "--fundamental", "2"]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn fresh_catalog_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tetra.json");
    assert!(enumerate_to(&path, &["--shape", "all", "--fundamental", "0"]).status.success());
    let out = coxdec(&["verify", path.to_str().unwrap(), "--samples", "200000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn corrupted_fraction_fails_and_names_the_entry() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tetra.json");
    assert!(enumerate_to(&path, &["--shape", "tetra", "--fundamental", "0"]).status.success());
    let mut cat = load(&path);
    let entry = &mut cat.entries[1];
    let record = entry.record.record.replacen("1/3", "1/4", 1);
    assert_ne!(record, entry.record.record);
    entry.record.record = record.clone();
    std::fs::write(&path, cat.to_json()).unwrap();
    let out = coxdec(&["verify", path.to_str().unwrap(), "--samples", "100000"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(&record), "{stderr}");
    assert!(stderr.contains("checksum mismatch"), "{stderr}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(coxdec(&["enumerate", "--bogus"]).status.code(), Some(2));
    assert_eq!(coxdec(&["enumerate", "--shape", "pyr9"]).status.code(), Some(2));
    assert_eq!(coxdec(&["enumerate", "--fundamental", "x"]).status.code(), Some(2));
    assert_eq!(coxdec(&["enumerate", "--fundamental", "42"]).status.code(), Some(2));
    assert_eq!(coxdec(&["verify", "/nonexistent/catalog.json"]).status.code(), Some(2));
    assert_eq!(coxdec(&[]).status.code(), Some(2));
}

#[test]
fn level_bound_is_reported() {
    let out = coxdec(&["enumerate", "--shape", "prism-into-tetra", "--max-level", "1"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the bound 1"));
}

#[test]
fn tables_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f1.json");
    assert!(enumerate_to(&path, &["--fundamental", "1", "--shape", "all"]).status.success());
    let out = coxdec(&["tables", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("fundamental 1") && text.contains(". . . . . . . ."));
    let csv = coxdec(&["enumerate", "--fundamental", "1", "--shape", "pyr5", "--format", "csv"]);
    let csv = String::from_utf8(csv.stdout).unwrap();
    assert!(csv.starts_with("fundamental,shape,"));
    assert!(csv.lines().skip(1).all(|l| l.starts_with("1,pyr5,")));
}
