//! Turning an array with a resolvable column projection into a large set by
//! translating the remaining columns.

use rayon::prelude::*;

use crate::array::{has_strength, LargeSet, SymbolMatrix};
use crate::combin::mixed_radix_digits;
use crate::error::{Error, Result};

/// Columns on which the rows of an array are in bijection with all tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvableProjection {
    pub columns: Vec<usize>,
    pub level_product: u64,
}

impl ResolvableProjection {
    /// Checks `columns` against `a`, returning the projection on success.
    pub fn new(a: &SymbolMatrix, columns: Vec<usize>) -> Result<ResolvableProjection> {
        let check = check_resolvable_projection(a, &columns);
        match check.defect {
            None => Ok(ResolvableProjection { columns, level_product: a.runs() as u64 }),
            Some(defect) => Err(Error::Precondition(format!("columns {columns:?} are not resolvable: {defect}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionDefect {
    InvalidColumns(String),
    LevelProduct { product: Option<u64>, runs: usize },
    /// Two rows agree on the projection columns.
    RepeatedTuple { tuple: Vec<u32>, rows: (usize, usize) },
}

impl std::fmt::Display for ProjectionDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjectionDefect::InvalidColumns(msg) => f.write_str(msg),
            ProjectionDefect::LevelProduct { product: Some(p), runs } => {
                write!(f, "level product {p} differs from N = {runs}")
            }
            ProjectionDefect::LevelProduct { product: None, runs } => {
                write!(f, "level product overflows, N = {runs}")
            }
            ProjectionDefect::RepeatedTuple { tuple, rows } => {
                write!(f, "rows {} and {} both project to {tuple:?}", rows.0, rows.1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionCheck {
    pub defect: Option<ProjectionDefect>,
}

impl ProjectionCheck {
    pub fn passed(&self) -> bool {
        self.defect.is_none()
    }
}

pub fn check_resolvable_projection(a: &SymbolMatrix, columns: &[usize]) -> ProjectionCheck {
    let fail = |d| ProjectionCheck { defect: Some(d) };
    let mut seen_cols = vec![false; a.k()];
    for &c in columns {
        if c >= a.k() {
            return fail(ProjectionDefect::InvalidColumns(format!("column {c} out of range for {} columns", a.k())));
        }
        if std::mem::replace(&mut seen_cols[c], true) {
            return fail(ProjectionDefect::InvalidColumns(format!("column {c} repeated")));
        }
    }
    let product = a.profile().level_product(columns);
    if product != Some(a.runs() as u64) {
        return fail(ProjectionDefect::LevelProduct { product, runs: a.runs() });
    }
    // N equal tuples slots and N rows: injective iff bijective.
    let mut owner = vec![usize::MAX; a.runs()];
    for (r, row) in a.rows().enumerate() {
        let idx = columns.iter().fold(0usize, |acc, &c| acc * a.profile().level(c) as usize + row[c] as usize);
        if owner[idx] != usize::MAX {
            let tuple = columns.iter().map(|&c| row[c]).collect();
            return fail(ProjectionDefect::RepeatedTuple { tuple, rows: (owner[idx], r) });
        }
        owner[idx] = r;
    }
    ProjectionCheck { defect: None }
}

pub const SEARCH_BUDGET: u64 = 1_000_000;

/// Searches subsets of columns whose levels divide `N` for one with level
/// product `N` that passes [`check_resolvable_projection`]. Candidates are
/// tried in colexicographic (bitmask) order, so the first hit is the
/// colex-least resolvable subset.
pub fn find_resolvable_projection(a: &SymbolMatrix) -> Result<Option<ResolvableProjection>> {
    find_resolvable_projection_with(a, SEARCH_BUDGET)
}

pub fn find_resolvable_projection_with(a: &SymbolMatrix, budget: u64) -> Result<Option<ResolvableProjection>> {
    let n = a.runs() as u64;
    if n == 0 {
        return Ok(None);
    }
    let levels = a.profile().levels();
    let eligible: Vec<usize> = (0..a.k()).filter(|&c| n % levels[c] as u64 == 0).collect();

    struct Search<'a> {
        a: &'a SymbolMatrix,
        eligible: &'a [usize],
        // Chosen columns, largest first.
        stack: Vec<usize>,
        spent: u64,
        budget: u64,
    }

    impl Search<'_> {
        // Visits subsets of eligible[..limit] with the given level product,
        // in bitmask order, together with the columns already on the stack.
        fn visit(&mut self, limit: usize, target: u64) -> Result<Option<Vec<usize>>> {
            self.spent += 1;
            if self.spent > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "resolvable projection search exceeded {} candidates",
                    self.budget
                )));
            }
            if target == 1 {
                let mut columns = self.stack.clone();
                columns.reverse();
                if check_resolvable_projection(self.a, &columns).passed() {
                    return Ok(Some(columns));
                }
                return Ok(None);
            }
            for i in 0..limit {
                let c = self.eligible[i];
                let s = self.a.profile().level(c) as u64;
                if target % s != 0 {
                    continue;
                }
                self.stack.push(c);
                let found = self.visit(i, target / s)?;
                self.stack.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
    }

    // Bitmask order: fix the largest column first, ascending; the rest is
    // the bitmask-least completion below it.
    let mut search = Search { a, eligible: &eligible, stack: Vec::new(), spent: 0, budget };
    for top in 0..eligible.len() {
        let c = eligible[top];
        let s = levels[c] as u64;
        search.stack.push(c);
        let found = search.visit(top, n / s)?;
        search.stack.pop();
        if let Some(columns) = found {
            return Ok(Some(ResolvableProjection { columns, level_product: n }));
        }
    }
    Ok(None)
}

/// Largest number of cells a single expansion may allocate.
pub const MAX_EXPANSION_CELLS: u64 = 1 << 28;

/// Emits one member per shift vector on the complementary columns, in
/// mixed-radix order of the shift. Member 0 is `a` itself.
pub fn expand_shift(a: &SymbolMatrix, proj: &ResolvableProjection) -> Result<LargeSet> {
    if let Some(defect) = check_resolvable_projection(a, &proj.columns).defect {
        return Err(Error::Precondition(format!("projection {:?} is not resolvable: {defect}", proj.columns)));
    }
    let k = a.k();
    let free: Vec<usize> = (0..k).filter(|c| !proj.columns.contains(c)).collect();
    let radices: Vec<u32> = free.iter().map(|&c| a.profile().level(c)).collect();
    let members = radices.iter().try_fold(1u64, |acc, &r| acc.checked_mul(r as u64));
    let cells = members.and_then(|m| m.checked_mul(a.cells().len() as u64));
    let (members, _) = match (members, cells) {
        (Some(m), Some(c)) if c <= MAX_EXPANSION_CELLS => (m, c),
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "expansion of {} over {} would exceed {MAX_EXPANSION_CELLS} cells",
                a.runs(),
                a.profile()
            )))
        }
    };
    let profile = a.profile().clone();
    let out: Vec<SymbolMatrix> = (0..members)
        .into_par_iter()
        .map(|index| {
            let delta = mixed_radix_digits(index, &radices);
            let mut shift = vec![0u32; k];
            for (&c, &d) in free.iter().zip(&delta) {
                shift[c] = d;
            }
            let cells = a
                .cells()
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let j = i % k;
                    (s + shift[j]) % profile.level(j)
                })
                .collect();
            SymbolMatrix::from_cells(profile.clone(), a.strength(), cells)
        })
        .collect::<Result<_>>()?;
    LargeSet::new(out)
}

/// Expands an index-one array `OA(v^t, k, v, t)` using columns `0..t`.
pub fn expand_full_strength(a: &SymbolMatrix) -> Result<LargeSet> {
    let t = a.strength();
    let v = a.profile().level(0);
    if a.profile().levels().iter().any(|&s| s != v) {
        return Err(Error::Precondition(format!("profile {} is not symmetric", a.profile())));
    }
    if t == 0 || (v as u64).checked_pow(t as u32) != Some(a.runs() as u64) {
        return Err(Error::Precondition(format!(
            "{} runs is not {v}^{t}; the array does not have index one at strength {t}",
            a.runs()
        )));
    }
    if !has_strength(a, t) {
        return Err(Error::Verification(format!("array does not have strength {t}")));
    }
    let proj = ResolvableProjection { columns: (0..t).collect(), level_product: a.runs() as u64 };
    expand_shift(a, &proj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{project_columns, verify_large_set, LevelProfile};

    fn even_weight() -> SymbolMatrix {
        SymbolMatrix::new(
            LevelProfile::uniform(2, 3).unwrap(),
            2,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn resolvable_checks() {
        let a = even_weight();
        assert!(check_resolvable_projection(&a, &[0, 1]).passed());
        assert!(matches!(
            check_resolvable_projection(&a, &[0]).defect,
            Some(ProjectionDefect::LevelProduct { product: Some(2), runs: 4 })
        ));
        assert!(!check_resolvable_projection(&a, &[0, 0]).passed());
        let constant = SymbolMatrix::new(LevelProfile::uniform(2, 2).unwrap(), 0, vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert!(matches!(
            check_resolvable_projection(&constant, &[0]).defect,
            Some(ProjectionDefect::RepeatedTuple { rows: (0, 1), .. })
        ));
    }

    #[test]
    fn finds_colex_first() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(2, 3).unwrap()).unwrap();
        assert_eq!(find_resolvable_projection(&ff).unwrap().unwrap().columns, vec![0, 1, 2]);
        assert_eq!(find_resolvable_projection(&even_weight()).unwrap().unwrap().columns, vec![0, 1]);
        let constant = SymbolMatrix::new(LevelProfile::uniform(2, 3).unwrap(), 0, vec![vec![0, 0, 0]; 4]).unwrap();
        assert_eq!(find_resolvable_projection(&constant).unwrap(), None);
        // Mixed levels: {0,1} precedes {2} in bitmask order.
        let mixed = SymbolMatrix::new(
            LevelProfile::new(vec![2, 2, 4]).unwrap(),
            1,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 2], vec![1, 1, 3]],
        )
        .unwrap();
        assert_eq!(find_resolvable_projection(&mixed).unwrap().unwrap().columns, vec![0, 1]);
    }

    #[test]
    fn budget_is_enforced() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(2, 3).unwrap()).unwrap();
        assert!(matches!(find_resolvable_projection_with(&ff, 2), Err(Error::BudgetExceeded(_))));
    }

    #[test]
    fn parity_expansion() {
        let a = even_weight();
        let proj = ResolvableProjection::new(&a, vec![0, 1]).unwrap();
        let l = expand_shift(&a, &proj).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.member(0), &a);
        let odd: Vec<u32> = l.member(1).rows().map(|r| r.iter().sum::<u32>() % 2).collect();
        assert_eq!(odd, vec![1; 4]);
        assert!(verify_large_set(&l, 2).unwrap().passed());
    }

    #[test]
    fn expand_then_project_commutes() {
        let a = SymbolMatrix::full_factorial(LevelProfile::new(vec![2, 3]).unwrap()).unwrap();
        let a = project_columns(&a, &[0, 1]).unwrap();
        let proj = ResolvableProjection::new(&a, vec![0, 1]).unwrap();
        assert_eq!(expand_shift(&a, &proj).unwrap().len(), 1);

        let b = even_weight();
        let l = expand_shift(&b, &ResolvableProjection::new(&b, vec![0, 1]).unwrap()).unwrap();
        let sub = project_columns(&b, &[0, 1]).unwrap();
        let l_sub = expand_shift(&sub, &ResolvableProjection::new(&sub, vec![0, 1]).unwrap()).unwrap();
        assert_eq!(project_columns(l.member(0), &[0, 1]).unwrap(), *l_sub.member(0));
    }

    #[test]
    fn full_strength_rules() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(3, 2).unwrap()).unwrap();
        assert_eq!(expand_full_strength(&ff).unwrap().len(), 1);
        let lambda_two = even_weight().with_strength(1).unwrap();
        assert!(expand_full_strength(&lambda_two).is_err());
        assert!(expand_full_strength(&even_weight()).is_ok());
        let bad = SymbolMatrix::new(LevelProfile::uniform(2, 2).unwrap(), 1, vec![vec![0, 0], vec![0, 1]]).unwrap();
        assert!(matches!(expand_full_strength(&bad), Err(Error::Verification(_))));
    }
}
