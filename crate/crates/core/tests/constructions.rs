use num_bigint::BigUint;

use oaforge_core::algebraic::{bush_oa, projective_oa, q4_oa};
use oaforge_core::catalog::{catalog, run_entry, Status, Verdict};
use oaforge_core::diffmatrix::{develop_chai1, dm_for, field_dm, format_dm, parse_dm, search_dm, verify_dm};
use oaforge_core::fixtures::{builtin_corpus, fixtures_check};
use oaforge_core::plan::{parse_params, plan_cost, DEFAULT_BUDGET};
use oaforge_core::{expand_shift, plan_theorem, read_array, verify_large_set, verify_strength, write_array, Artifact, Error};

#[test]
fn linear_families() {
    let (a, p) = bush_oa(5, 3, 6).unwrap();
    assert_eq!(a.runs(), 125);
    assert!(verify_strength(&a, 3).unwrap().passed());
    assert!(verify_large_set(&expand_shift(&a, &p).unwrap(), 3).unwrap().passed());

    let (a, _) = projective_oa(3, 3, 13).unwrap();
    assert!(verify_strength(&a, 2).unwrap().passed());
    assert!(projective_oa(3, 3, 14).is_err());

    let (a, _) = q4_oa(5, 26).unwrap();
    assert!(verify_strength(&a, 3).unwrap().passed());
    assert!(q4_oa(5, 27).is_err());
}

#[test]
fn dm_text_round_trip() {
    for v in [4u64, 5, 7, 9, 12] {
        let d = dm_for(v).unwrap();
        assert!(verify_dm(&d).passed(), "v = {v}");
        assert_eq!(parse_dm(&format_dm(&d)).unwrap(), d);
    }
    let d = search_dm(7, 4, 1_000_000).unwrap().unwrap();
    assert!(verify_dm(&d).passed());
    assert!(verify_dm(&field_dm(8, 8).unwrap()).passed());
}

#[test]
fn chai1_for_composite_orders() {
    let (a, p) = develop_chai1(&dm_for(12).unwrap()).unwrap();
    assert_eq!(a.runs(), 1728);
    assert!(verify_strength(&a, 2).unwrap().passed());
    assert_eq!(p.columns, vec![0, 1, 6]);
    assert!(dm_for(6).is_err());
}

#[test]
fn artifact_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.loa");
    let (a, p) = bush_oa(3, 2, 4).unwrap();
    let l = expand_shift(&a, &p).unwrap();
    write_array(&Artifact::Loa(l.clone()), &path).unwrap();
    assert_eq!(read_array(&path).unwrap(), Artifact::Loa(l));
}

#[test]
fn catalog_rows_are_unique_and_runnable() {
    let all = catalog("all").unwrap();
    let mut keys: Vec<(&str, usize)> = all.iter().map(|e| (e.table, e.row)).collect();
    let n = keys.len();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), n);
    assert_eq!(n, 44 + 37 + 24 + 21 + 5 + 15 + 13);
    for e in &all {
        match e.status {
            Status::Synthesizable => assert!(e.plan.is_some() && e.command.is_some(), "{}", e.source()),
            Status::FixtureRequired => assert!(e.plan.is_none() && e.note.is_some(), "{}", e.source()),
            Status::Unreconciled => assert!(e.note.is_some()),
            Status::OutOfScope => {}
        }
    }
    for e in all.iter().filter(|e| e.table == "table5") {
        assert!(matches!(run_entry(e, DEFAULT_BUDGET).0, Verdict::Verified { .. }), "{}", e.source());
    }
}

#[test]
fn theorem_budget_and_errors() {
    let plan = plan_theorem("qt2n2-3", &parse_params("q=8,t=6,k1=7,n=3,k2p=7").unwrap()).unwrap();
    assert_eq!(plan.claim.runs, BigUint::from(1u64 << 25));
    assert!(plan_cost(&plan).unwrap() > BigUint::from(DEFAULT_BUDGET));
    let err = plan_theorem("v1+v3-2", &parse_params("v=6,k=5").unwrap()).unwrap_err();
    assert!(err.to_string().contains("constraints"), "{err}");
    assert!(matches!(plan_theorem("nope", &Default::default()), Err(Error::Unknown { .. })));
}

#[test]
fn large_recipe_exceeds_default_budget() {
    let plan = plan_theorem("v1+v3-2", &parse_params("v=4,k=14").unwrap()).unwrap();
    let cost = plan_cost(&plan).unwrap();
    assert!(cost > BigUint::from(DEFAULT_BUDGET));
}

#[test]
fn builtin_fixtures_expand() {
    let status = fixtures_check(&builtin_corpus().unwrap()).unwrap();
    assert!(status.passed());
}
