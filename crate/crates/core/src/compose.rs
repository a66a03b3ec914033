//! Composition of large sets: juxtaposition, Kronecker pairing and the
//! small strength-one and zero-sum ingredients.

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;

use crate::array::{has_strength, project_columns, verify_large_set, LargeSet, LevelProfile, SymbolMatrix};
use crate::array::{verify_strength, LargeSetReport};
use crate::combin::mixed_radix_digits;
use crate::error::{Error, Result};
use crate::expand::MAX_EXPANSION_CELLS;

/// Largest universe enumerated by [`cosets_strength1`].
pub const MAX_COSET_UNIVERSE: u64 = 1 << 26;

/// Cosets of the cyclic subgroup generated by `(1, ..., 1)`.
///
/// Each coset is an `OA(lcm, profile, 1)`; representatives are taken in
/// mixed-radix order of their smallest element.
pub fn cosets_strength1(profile: &LevelProfile) -> Result<LargeSet> {
    let universe = profile
        .universe_u64()
        .filter(|&u| u <= MAX_COSET_UNIVERSE)
        .ok_or_else(|| Error::BudgetExceeded(format!("universe of {profile} exceeds {MAX_COSET_UNIVERSE}")))?;
    let levels = profile.levels();
    let n = levels.iter().fold(1u64, |acc, &s| acc.lcm(&(s as u64)));
    let index = |row: &[u32]| row.iter().zip(levels).fold(0u64, |acc, (&x, &s)| acc * s as u64 + x as u64);
    let mut seen = vec![false; universe as usize];
    let mut members = Vec::with_capacity((universe / n) as usize);
    for start in 0..universe {
        if seen[start as usize] {
            continue;
        }
        let rep = mixed_radix_digits(start, levels);
        let mut cells = Vec::with_capacity(n as usize * levels.len());
        for r in 0..n {
            let row: Vec<u32> = rep.iter().zip(levels).map(|(&x, &s)| ((x as u64 + r) % s as u64) as u32).collect();
            seen[index(&row) as usize] = true;
            cells.extend(row);
        }
        members.push(SymbolMatrix::from_cells(profile.clone(), 1, cells)?);
    }
    LargeSet::new(members)
}

/// `OA(s^t, t + 1, s, t)`: every `x ∈ Z_s^t` followed by `-Σx mod s`, in
/// lexicographic order of `x`.
pub fn zero_sum(s: u32, t: usize) -> Result<SymbolMatrix> {
    if s < 2 || t == 0 {
        return Err(Error::Precondition(format!("zero-sum array needs s >= 2 and t >= 1, got s={s}, t={t}")));
    }
    let runs = (s as u64)
        .checked_pow(t as u32)
        .filter(|&n| n.saturating_mul(t as u64 + 1) <= MAX_EXPANSION_CELLS)
        .ok_or_else(|| Error::BudgetExceeded(format!("{s}^{t} runs is too large")))?;
    let radices = vec![s; t];
    let mut cells = Vec::with_capacity(runs as usize * (t + 1));
    for i in 0..runs {
        let x = mixed_radix_digits(i, &radices);
        let sum: u64 = x.iter().map(|&d| d as u64).sum();
        cells.extend_from_slice(&x);
        cells.push(((s as u64 - sum % s as u64) % s as u64) as u32);
    }
    SymbolMatrix::from_cells(LevelProfile::uniform(s, t + 1)?, t, cells)
}

/// Reorders the columns of every member. `order` must be a permutation.
pub fn permute_columns(l: &LargeSet, order: &[usize]) -> Result<LargeSet> {
    let k = l.profile().k();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..k).collect::<Vec<_>>() {
        return Err(Error::Precondition(format!(
            "{order:?} is not a permutation of the {k} columns; a large set cannot drop columns"
        )));
    }
    let members = l.members().iter().map(|m| project_columns(m, order)).collect::<Result<Vec<_>>>()?;
    LargeSet::new(members)
}

/// Stacks member `i` of `l1` over member `i` of `l2`, relabelling column 0
/// of `l2` to `a1..a1+b1`. The result is verified before it is returned.
pub fn juxtapose(l1: &LargeSet, l2: &LargeSet) -> Result<LargeSet> {
    let (p1, p2) = (l1.profile(), l2.profile());
    if p1.k() != p2.k() || p1.levels()[1..] != p2.levels()[1..] {
        return Err(Error::Mismatch(format!("profiles {p1} and {p2} differ outside column 0")));
    }
    let (a1, b1) = (p1.level(0) as u64, p2.level(0) as u64);
    let (n1, n2) = (l1.runs() as u64, l2.runs() as u64);
    if n1 * b1 != n2 * a1 {
        return Err(Error::Mismatch(format!("run ratio {n1}/{a1} differs from {n2}/{b1}")));
    }
    if l1.len() != l2.len() {
        return Err(Error::Mismatch(format!("member counts {} and {} differ", l1.len(), l2.len())));
    }
    let mut levels = p1.levels().to_vec();
    levels[0] = (a1 + b1) as u32;
    let profile = LevelProfile::new(levels)?;
    let t = l1.strength().min(l2.strength());
    let k = profile.k();
    let members = l1
        .members()
        .par_iter()
        .zip(l2.members())
        .map(|(a, b)| {
            let mut cells = a.cells().to_vec();
            cells.extend(b.cells().iter().enumerate().map(|(i, &s)| if i % k == 0 { s + a1 as u32 } else { s }));
            SymbolMatrix::from_cells(profile.clone(), t, cells)
        })
        .collect::<Result<Vec<_>>>()?;
    let out = LargeSet::new(members)?;
    let report = verify_large_set(&out, t)?;
    if !report.passed() {
        return Err(Error::Verification(format!("juxtaposed set fails: {}", describe_large_set_failure(&report))));
    }
    Ok(out)
}

/// One-line summary of the first defect in a failing large-set report.
pub fn describe_large_set_failure(r: &LargeSetReport) -> String {
    if !r.count_matches {
        return format!("{} members of {} runs do not cover a universe of {}", r.members, r.runs, r.universe);
    }
    if let Some((i, f)) = r.strength_failures.first() {
        return format!("member {i}: {f}");
    }
    if let Some((i, (a, b))) = r.non_simple.first() {
        return format!("member {i} repeats rows {a} and {b}");
    }
    if let Some(o) = r.overlaps.first() {
        return format!("tuple {:?} lies in members {} and {}", o.tuple, o.first_member, o.second_member);
    }
    format!("union covers {} of {} tuples", r.covered, r.universe)
}

/// `(h·N1·N2, k1 + k2, h)` for the Kronecker pairing, where `h = lcm(M1, M2)`.
pub fn kronecker_size(l1: &LargeSet, l2: &LargeSet) -> (BigUint, usize, u64) {
    let h = (l1.len() as u64).lcm(&(l2.len() as u64));
    let runs = BigUint::from(h) * l1.runs() * l2.runs();
    (runs, l1.profile().k() + l2.profile().k(), h)
}

fn check_member_count(l: &LargeSet, which: &str) -> Result<()> {
    let expected = l.profile().universe_size();
    if BigUint::from(l.len()) * l.runs() != expected {
        return Err(Error::Precondition(format!(
            "{which}: {} members of {} runs do not partition a universe of {expected}",
            l.len(),
            l.runs()
        )));
    }
    Ok(())
}

/// The cyclic pairing `⋃_{s<h} A_{s mod M1} × B_{s mod M2}` without the
/// strength check. The claimed strength is `min(t1 + t2 + 1, k1 + k2)`.
pub fn kronecker_unchecked(l1: &LargeSet, l2: &LargeSet) -> Result<SymbolMatrix> {
    check_member_count(l1, "first large set")?;
    check_member_count(l2, "second large set")?;
    let (runs, k, h) = kronecker_size(l1, l2);
    let cells_needed = runs.clone() * k;
    if cells_needed > BigUint::from(MAX_EXPANSION_CELLS) {
        return Err(Error::BudgetExceeded(format!("Kronecker product with {runs} runs is too large")));
    }
    let profile = l1.profile().concat(l2.profile());
    let t = (l1.strength() + l2.strength() + 1).min(k);
    let (m1, m2) = (l1.len() as u64, l2.len() as u64);
    let cells: Vec<u32> = (0..h)
        .into_par_iter()
        .flat_map_iter(|s| {
            let a = l1.member((s % m1) as usize);
            let b = l2.member((s % m2) as usize);
            let mut block = Vec::with_capacity(a.runs() * b.runs() * k);
            for ra in a.rows() {
                for rb in b.rows() {
                    block.extend_from_slice(ra);
                    block.extend_from_slice(rb);
                }
            }
            block
        })
        .collect();
    SymbolMatrix::from_cells(profile, t, cells)
}

/// [`kronecker_unchecked`] followed by a full strength check.
pub fn kronecker(l1: &LargeSet, l2: &LargeSet) -> Result<SymbolMatrix> {
    let out = kronecker_unchecked(l1, l2)?;
    let t = out.strength();
    if !has_strength(&out, t) {
        let report = verify_strength(&out, t)?;
        let first = report.failures.first().map(|f| f.to_string()).unwrap_or_default();
        return Err(Error::Verification(format!("Kronecker product fails strength {t}: {first}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::sylvester_oa2;
    use crate::expand::{expand_full_strength, expand_shift};

    #[test]
    fn cosets() {
        let l = cosets_strength1(&LevelProfile::parse("2^1,3^1").unwrap()).unwrap();
        assert_eq!((l.len(), l.runs()), (1, 6));
        let l = cosets_strength1(&LevelProfile::uniform(2, 2).unwrap()).unwrap();
        assert_eq!((l.len(), l.runs()), (2, 2));
        assert_eq!(l.member(0).cells(), &[0, 0, 1, 1]);
        assert_eq!(l.member(1).cells(), &[0, 1, 1, 0]);
        let l = cosets_strength1(&LevelProfile::parse("4^1,6^1").unwrap()).unwrap();
        assert_eq!((l.len(), l.runs()), (2, 12));
        assert!(verify_large_set(&l, 1).unwrap().passed());
    }

    #[test]
    fn zero_sum_is_index_one() {
        let a = zero_sum(3, 2).unwrap();
        assert_eq!((a.runs(), a.k()), (9, 3));
        assert!(has_strength(&a, 2));
        let l = expand_full_strength(&a).unwrap();
        assert_eq!(l.len(), 3);
        assert!(verify_large_set(&l, 2).unwrap().passed());
    }

    #[test]
    fn kronecker_toys() {
        let c = cosets_strength1(&LevelProfile::uniform(2, 2).unwrap()).unwrap();
        let a = kronecker(&c, &c).unwrap();
        assert_eq!((a.runs(), a.k(), a.strength()), (8, 4, 3));

        let (s, p) = sylvester_oa2(2, 3).unwrap();
        let l = expand_shift(&s, &p).unwrap();
        let a = kronecker(&l, &l).unwrap();
        assert_eq!((a.runs(), a.k(), a.strength()), (32, 6, 5));
    }

    #[test]
    fn juxtapose_halves() {
        // Two strength-1 sets over 2^2 glued on column 0: 2^2 and 2^2 -> 4 2.
        let c = cosets_strength1(&LevelProfile::uniform(2, 2).unwrap()).unwrap();
        let j = juxtapose(&c, &c).unwrap();
        assert_eq!(j.profile().levels(), &[4, 2]);
        assert_eq!((j.len(), j.runs()), (2, 4));
    }

    #[test]
    fn permutation_only() {
        let c = cosets_strength1(&LevelProfile::parse("2^1,3^1").unwrap()).unwrap();
        let p = permute_columns(&c, &[1, 0]).unwrap();
        assert_eq!(p.profile().levels(), &[3, 2]);
        assert!(permute_columns(&c, &[0]).is_err());
    }
}
