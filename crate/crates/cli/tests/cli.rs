use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn oaforge(args: &[&str]) -> (i32, Vec<Value>) {
    let out = Command::new(env!("CARGO_BIN_EXE_oaforge")).args(args).output().unwrap();
    let records = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    (out.status.code().unwrap(), records)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_expand_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let loa = dir.path().join("l.loa");
    let (code, rec) = oaforge(&["construct", "sylvester2", "--n", "3", "--k", "7", "--expand", "-o", path(&loa)]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["members"], 16);
    let (code, rec) = oaforge(&["verify", "loa", path(&loa), "--strength", "2"]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["status"], "verified");
}

#[test]
fn mutated_fixture_names_the_pair() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(oaforge(&["fixtures", "export", "--dir", path(dir.path())]).0, 0);
    let file = dir.path().join("oa20.oa");
    assert_eq!(oaforge(&["verify", "oa", path(&file), "--strength", "2"]).0, 0);

    let text = std::fs::read_to_string(&file).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<u32> = lines[1].split(' ').map(|s| s.parse().unwrap()).collect();
    cells[3] = 1 - cells[3];
    lines[1] = cells.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    std::fs::write(&file, lines.join("\n") + "\n").unwrap();

    let (code, rec) = oaforge(&["verify", "oa", path(&file)]);
    assert_eq!(code, 1);
    assert!(!rec.is_empty());
    for r in &rec {
        assert_eq!(r["status"], "failed");
        let cols: Vec<u64> = r["columns"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
        assert!(cols.contains(&3), "{r}");
        assert!(r["tuple"].is_array());
    }
    let (code, fast) = oaforge(&["--fail-fast", "verify", "oa", path(&file)]);
    assert_eq!(code, 1);
    assert!(fast.len() <= rec.len());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(oaforge(&["bogus"]).0, 2);
    assert_eq!(oaforge(&["theorem", "v1+v3-2", "--params", "v=6,k=5"]).0, 2);
    assert_eq!(oaforge(&["catalog", "table9"]).0, 2);
    assert_eq!(oaforge(&["construct", "q4t3", "--q", "6", "--k", "5"]).0, 2);
}

#[test]
fn catalog_listing_and_run() {
    let (code, rec) = oaforge(&["catalog", "table5"]);
    assert_eq!(code, 0);
    assert_eq!(rec.len(), 5);
    assert!(rec.iter().all(|r| r["status"] == "synthesizable"));

    let (code, rec) = oaforge(&["catalog", "table4", "--run", "--budget", "1e8"]);
    assert_eq!(code, 0);
    assert_eq!(rec.len(), 21);
    assert_eq!(rec.iter().filter(|r| r["verdict"] == "verified").count(), 5);
    assert!(rec.iter().any(|r| r["status"] == "fixture-required"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t4.oa");
    let (code, rec) = oaforge(&["catalog", "table4", "--run", "--entry", "1", "-o", path(&out)]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["verdict"], "verified");
    let (code, rec) = oaforge(&["verify", "oa", path(&out)]);
    assert_eq!((code, rec[0]["runs"].as_u64()), (0, Some(352)));

    let (_, rec) = oaforge(&["catalog", "table6", "--run", "--entry", "12"]);
    assert_eq!(rec[0]["verdict"], "skipped(budget)");
}

#[test]
fn theorem_and_compose() {
    let dir = tempfile::tempdir().unwrap();
    let (code, rec) = oaforge(&["theorem", "tt-1n2-3", "--params", "s=2,t=2,n=2,k1=3", "-o", path(&dir.path().join("t.oa"))]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["runs"], 16);

    let c = dir.path().join("c.loa");
    assert_eq!(oaforge(&["construct", "cosets", "--levels", "2^2", "-o", path(&c)]).0, 0);
    let k = dir.path().join("k.oa");
    let (code, rec) = oaforge(&["compose", "kronecker", path(&c), path(&c), "-o", path(&k)]);
    assert_eq!(code, 0);
    assert_eq!((rec[0]["runs"].as_u64(), rec[0]["strength"].as_u64()), (Some(8), Some(3)));
    let j = dir.path().join("j.loa");
    let (code, rec) = oaforge(&["compose", "juxtapose", path(&c), path(&c), "-o", path(&j)]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["levels"], "4^1 2^1");
}

#[test]
fn dm_search_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.dm");
    let (code, rec) = oaforge(&["search", "dm", "--v", "5", "--k", "4", "-o", path(&f)]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["status"], "found");
    assert_eq!(oaforge(&["verify", "dm", path(&f)]).0, 0);
    let (code, rec) = oaforge(&["search", "dm", "--v", "3", "--k", "4"]);
    assert_eq!((code, rec[0]["status"].as_str()), (0, Some("none")));
    let (code, _) = oaforge(&["construct", "chai1", "--v", "5", "--dm-file", path(&f), "--k", "6"]);
    assert_eq!(code, 0);
}

#[test]
fn fixtures_and_oracle() {
    let (code, rec) = oaforge(&["fixtures", "check"]);
    assert_eq!(code, 0);
    assert_eq!(rec.len(), 8);
    let empty = tempfile::tempdir().unwrap();
    let (code, rec) = oaforge(&["fixtures", "check", "--dir", path(empty.path())]);
    assert_eq!(code, 1);
    assert_eq!(rec[0]["status"], "no fixtures installed");

    let dir = tempfile::tempdir().unwrap();
    oaforge(&["fixtures", "export", "--dir", path(dir.path())]);
    let (code, rec) = oaforge(&["--threads", "2", "oracle", path(&dir.path().join("oa54.oa"))]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["agree"], true);
}

#[test]
fn expand_searches_for_columns() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.oa");
    oaforge(&["construct", "bush", "--q", "2^2", "--t", "2", "--k", "4", "-o", path(&a)]);
    let (code, rec) = oaforge(&["expand", path(&a), "-o", path(&dir.path().join("a.loa"))]);
    assert_eq!(code, 0);
    assert_eq!(rec[0]["members"], 16);
    let (code, _) = oaforge(&["expand", path(&a), "--columns", "0", "-o", path(&dir.path().join("b.loa"))]);
    assert_eq!(code, 2);
}
