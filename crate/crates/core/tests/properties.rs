use proptest::prelude::*;

use oaforge_core::algebraic::{sylvester_oa2, sylvester_oa3};
use oaforge_core::compose::{cosets_strength1, kronecker};
use oaforge_core::gf::field_of_order;
use oaforge_core::io::{format_artifact, parse_array};
use oaforge_core::{
    brute_force_strength, expand_shift, project_columns, verify_large_set, verify_strength, Artifact, FieldElement,
    LevelProfile, SymbolMatrix,
};

/// Random array with 2..=4 columns of 2..=4 levels, built from a full
/// factorial with some rows duplicated or replaced, so both verdicts occur.
fn arb_array() -> impl Strategy<Value = SymbolMatrix> {
    prop::collection::vec(2u32..=4, 2..=4).prop_flat_map(|levels| {
        let profile = LevelProfile::new(levels.clone()).unwrap();
        let runs = profile.universe_u64().unwrap() as usize;
        let k = levels.len();
        (Just(profile), prop::collection::vec((0..runs, 0..k, 0u32..4), 0..3), 1..=k)
    })
    .prop_map(|(profile, edits, t)| {
        let mut a = SymbolMatrix::full_factorial(profile).unwrap().with_strength(t).unwrap();
        for (r, c, s) in edits {
            let lv = a.profile().level(c);
            a.set_cell(r, c, s % lv).unwrap();
        }
        a
    })
}

fn arb_maps(a: &SymbolMatrix) -> impl Strategy<Value = Vec<Vec<u32>>> {
    let strategies: Vec<_> = a
        .profile()
        .levels()
        .iter()
        .map(|&s| Just((0..s).collect::<Vec<u32>>()).prop_shuffle())
        .collect();
    strategies
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn kernel_matches_oracle(a in arb_array()) {
        let t = a.strength();
        let fast = verify_strength(&a, t).unwrap();
        let slow = brute_force_strength(&a, t).unwrap();
        prop_assert!(fast.same_verdict(&slow));
    }

    #[test]
    fn verdict_survives_level_permutation((a, maps) in arb_array().prop_flat_map(|a| { let m = arb_maps(&a); (Just(a), m) })) {
        let t = a.strength();
        let b = a.relabel(&maps).unwrap();
        prop_assert_eq!(verify_strength(&a, t).unwrap().passed(), verify_strength(&b, t).unwrap().passed());
    }

    #[test]
    fn column_deletion_keeps_strength(a in arb_array(), drop in 0usize..4) {
        let t = a.strength();
        prop_assume!(verify_strength(&a, t).unwrap().passed());
        let drop = drop % a.k();
        let keep: Vec<usize> = (0..a.k()).filter(|&c| c != drop).collect();
        let b = project_columns(&a, &keep).unwrap();
        prop_assert!(verify_strength(&b, t.min(keep.len())).unwrap().passed());
    }

    #[test]
    fn text_round_trip(a in arb_array()) {
        let text = format_artifact(&Artifact::Oa(a.clone()));
        prop_assert_eq!(parse_array(&text).unwrap(), Artifact::Oa(a));
    }

    #[test]
    fn sylvester_expansion_invariants(n in 2u32..=4, extra in 0usize..16, three in any::<bool>()) {
        let (a, p) = if three {
            let k = n as usize + 1 + extra % ((1usize << n) - n as usize);
            sylvester_oa3(n, k).unwrap()
        } else {
            let k = n as usize + extra % ((1usize << n) - n as usize);
            sylvester_oa2(n, k).unwrap()
        };
        let l = expand_shift(&a, &p).unwrap();
        prop_assert_eq!(l.member(0), &a);
        prop_assert!(verify_large_set(&l, a.strength()).unwrap().passed());
        let loa = Artifact::Loa(l);
        prop_assert_eq!(parse_array(&format_artifact(&loa)).unwrap(), loa);
    }

    #[test]
    fn field_axioms(qi in 0usize..8, x in 0u32..4096, y in 0u32..4096, z in 0u32..4096) {
        let q = [2u64, 3, 4, 8, 9, 16, 25, 27][qi];
        let f = field_of_order(q).unwrap();
        let (a, b, c) = (f.element(x % q as u32), f.element(y % q as u32), f.element(z % q as u32));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElement::ONE);
        }
    }

    #[test]
    fn coset_kronecker_strength(s1 in 2u32..=3, k1 in 1usize..=2, s2 in 2u32..=3, k2 in 1usize..=2) {
        let a = cosets_strength1(&LevelProfile::uniform(s1, k1).unwrap()).unwrap();
        let b = cosets_strength1(&LevelProfile::uniform(s2, k2).unwrap()).unwrap();
        let out = kronecker(&a, &b).unwrap();
        prop_assert_eq!(out.strength(), 3.min(k1 + k2));
    }
}
