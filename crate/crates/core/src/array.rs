//! Data model for mixed-level orthogonal arrays and large sets, together with
//! the exhaustive verifiers.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::combin::{binomial, mixed_radix_digits, Colex};
use crate::error::{Error, Result};

/// Per-column symbol counts of an array, e.g. `2^8,5^1`.
///
/// Columns keep their order; [`LevelProfile::groups`] reports maximal runs of
/// equal levels in that order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LevelProfile {
    levels: Vec<u32>,
}

impl LevelProfile {
    pub fn new(levels: Vec<u32>) -> Result<LevelProfile> {
        if levels.is_empty() {
            return Err(Error::InvalidProfile("no columns".into()));
        }
        if let Some(bad) = levels.iter().find(|&&s| s < 2) {
            return Err(Error::InvalidProfile(format!("level count {bad} is below 2")));
        }
        Ok(LevelProfile { levels })
    }

    pub fn uniform(levels: u32, columns: usize) -> Result<LevelProfile> {
        LevelProfile::new(vec![levels; columns])
    }

    /// Builds a profile from `(s_i, k_i)` groups in column order. Groups with
    /// `k_i = 0` contribute nothing.
    pub fn from_groups(groups: &[(u32, usize)]) -> Result<LevelProfile> {
        LevelProfile::new(groups.iter().flat_map(|&(s, k)| std::iter::repeat(s).take(k)).collect())
    }

    /// Parses `2^8,5^1` (commas or spaces); a bare `s` means `s^1`.
    pub fn parse(text: &str) -> Result<LevelProfile> {
        let mut groups = Vec::new();
        for token in text.split([',', ' ']).filter(|t| !t.is_empty()) {
            let (s, k) = match token.split_once('^') {
                Some((s, k)) => (s, k),
                None => (token, "1"),
            };
            let s: u32 = s.parse().map_err(|_| Error::InvalidProfile(format!("bad level `{token}`")))?;
            let k: usize = k.parse().map_err(|_| Error::InvalidProfile(format!("bad count `{token}`")))?;
            groups.push((s, k));
        }
        LevelProfile::from_groups(&groups)
    }

    pub fn k(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, column: usize) -> u32 {
        self.levels[column]
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn groups(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &s in &self.levels {
            match out.last_mut() {
                Some((last, count)) if *last == s => *count += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }

    /// Level multiset, largest level first. Two profiles describe the same
    /// factor structure up to column order iff their signatures agree.
    pub fn signature(&self) -> Vec<(u32, usize)> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for &s in &self.levels {
            *counts.entry(s).or_default() += 1;
        }
        counts.into_iter().rev().collect()
    }

    /// Signature rendered the usual way, e.g. `11^1 2^7`.
    pub fn notation(&self) -> String {
        self.signature().iter().map(|(s, k)| format!("{s}^{k}")).collect::<Vec<_>>().join(" ")
    }

    pub fn universe_size(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, &s| acc * s)
    }

    pub fn universe_u64(&self) -> Option<u64> {
        self.levels.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64))
    }

    pub fn project(&self, columns: &[usize]) -> Result<LevelProfile> {
        let levels = columns
            .iter()
            .map(|&c| {
                self.levels.get(c).copied().ok_or(Error::ColumnOutOfRange { index: c, columns: self.k() })
            })
            .collect::<Result<Vec<_>>>()?;
        LevelProfile::new(levels)
    }

    pub fn concat(&self, other: &LevelProfile) -> LevelProfile {
        LevelProfile { levels: self.levels.iter().chain(&other.levels).copied().collect() }
    }

    /// Product of the levels of `columns`, `None` on overflow.
    pub fn level_product(&self, columns: &[usize]) -> Option<u64> {
        columns.iter().try_fold(1u64, |acc, &c| acc.checked_mul(self.levels[c] as u64))
    }
}

impl fmt::Display for LevelProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.groups().iter().map(|(s, k)| format!("{s}^{k}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// An `N × k` array of column-local symbols with a claimed strength.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolMatrix {
    profile: LevelProfile,
    strength: usize,
    runs: usize,
    cells: Vec<u32>,
}

impl SymbolMatrix {
    pub fn new(profile: LevelProfile, strength: usize, rows: Vec<Vec<u32>>) -> Result<SymbolMatrix> {
        let k = profile.k();
        let mut cells = Vec::with_capacity(rows.len() * k);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Mismatch(format!("row {r} has {} symbols, expected {k}", row.len())));
            }
            cells.extend_from_slice(row);
        }
        SymbolMatrix::from_cells(profile, strength, cells)
    }

    /// Builds from row-major cells; the cell count must be a multiple of `k`.
    pub fn from_cells(profile: LevelProfile, strength: usize, cells: Vec<u32>) -> Result<SymbolMatrix> {
        let k = profile.k();
        if cells.len() % k != 0 {
            return Err(Error::Mismatch(format!("{} cells do not fill rows of {k}", cells.len())));
        }
        if strength > k {
            return Err(Error::StrengthTooLarge { t: strength, k });
        }
        for (i, &symbol) in cells.iter().enumerate() {
            let levels = profile.levels[i % k];
            if symbol >= levels {
                return Err(Error::SymbolOutOfRange { row: i / k, column: i % k, symbol, levels });
            }
        }
        let runs = cells.len() / k;
        Ok(SymbolMatrix { profile, strength, runs, cells })
    }

    /// The full factorial over `profile`, rows in lexicographic order.
    pub fn full_factorial(profile: LevelProfile) -> Result<SymbolMatrix> {
        let n = profile
            .universe_u64()
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| Error::BudgetExceeded(format!("full factorial over {profile} is too large")))?;
        let mut cells = Vec::with_capacity(n as usize * profile.k());
        for i in 0..n {
            cells.extend(mixed_radix_digits(i, profile.levels()));
        }
        let k = profile.k();
        SymbolMatrix::from_cells(profile, k, cells)
    }

    pub fn profile(&self) -> &LevelProfile {
        &self.profile
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn k(&self) -> usize {
        self.profile.k()
    }

    /// Strength claimed for this array (written to the `t=` header field).
    pub fn strength(&self) -> usize {
        self.strength
    }

    pub fn with_strength(mut self, t: usize) -> Result<SymbolMatrix> {
        if t > self.k() {
            return Err(Error::StrengthTooLarge { t, k: self.k() });
        }
        self.strength = t;
        Ok(self)
    }

    pub fn row(&self, r: usize) -> &[u32] {
        let k = self.k();
        &self.cells[r * k..(r + 1) * k]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        self.cells.chunks_exact(self.k())
    }

    pub fn cell(&self, r: usize, column: usize) -> u32 {
        self.cells[r * self.k() + column]
    }

    pub fn cells(&self) -> &[u32] {
        &self.cells
    }

    /// Replaces one symbol, checking its range. Used for fault injection.
    pub fn set_cell(&mut self, r: usize, column: usize, symbol: u32) -> Result<()> {
        let levels = self.profile.level(column);
        if symbol >= levels {
            return Err(Error::SymbolOutOfRange { row: r, column, symbol, levels });
        }
        let k = self.k();
        self.cells[r * k + column] = symbol;
        Ok(())
    }

    /// Applies a per-column symbol bijection; `maps[j][s]` is the image of `s`.
    pub fn relabel(&self, maps: &[Vec<u32>]) -> Result<SymbolMatrix> {
        let k = self.k();
        let cells = self.cells.iter().enumerate().map(|(i, &s)| maps[i % k][s as usize]).collect();
        SymbolMatrix::from_cells(self.profile.clone(), self.strength, cells)
    }

    /// Appends the rows of `other`, which must have the same profile.
    pub fn vstack(&self, other: &SymbolMatrix) -> Result<SymbolMatrix> {
        if self.profile != other.profile {
            return Err(Error::Mismatch(format!("profiles {} and {} differ", self.profile, other.profile)));
        }
        let mut cells = self.cells.clone();
        cells.extend_from_slice(&other.cells);
        SymbolMatrix::from_cells(self.profile.clone(), self.strength.min(other.strength), cells)
    }
}

/// Restriction of `a` to the given columns, in the given order.
///
/// The claimed strength becomes `min(t, |columns|)`, which deletion of
/// columns always preserves.
pub fn project_columns(a: &SymbolMatrix, columns: &[usize]) -> Result<SymbolMatrix> {
    if columns.is_empty() {
        return Err(Error::Precondition("column subset is empty".into()));
    }
    let mut seen = HashSet::new();
    for &c in columns {
        if c >= a.k() {
            return Err(Error::ColumnOutOfRange { index: c, columns: a.k() });
        }
        if !seen.insert(c) {
            return Err(Error::Precondition(format!("column {c} repeated")));
        }
    }
    let profile = a.profile.project(columns)?;
    let mut cells = Vec::with_capacity(a.runs * columns.len());
    for row in a.rows() {
        cells.extend(columns.iter().map(|&c| row[c]));
    }
    SymbolMatrix::from_cells(profile, a.strength.min(columns.len()), cells)
}

/// `N / Π levels(subset)` as an exact rational.
pub fn lambda_of(a: &SymbolMatrix, columns: &[usize]) -> Result<Ratio<u64>> {
    if let Some(&bad) = columns.iter().find(|&&c| c >= a.k()) {
        return Err(Error::ColumnOutOfRange { index: bad, columns: a.k() });
    }
    let product = a
        .profile
        .level_product(columns)
        .ok_or_else(|| Error::BudgetExceeded("level product overflows u64".into()))?;
    Ok(Ratio::new(a.runs as u64, product))
}

/// One column subset's outcome in a strength check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSummary {
    pub columns: Vec<usize>,
    pub lambda: Ratio<u64>,
    /// Number of tuples whose count differs from λ (all of them when λ is
    /// not an integer).
    pub bad_tuples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrengthFailure {
    /// A tuple whose count differs from λ.
    Imbalance { columns: Vec<usize>, tuple: Vec<u32>, observed: u64, expected: u64 },
    /// `N` is not divisible by the subset's level product, so no balance is
    /// possible.
    NonIntegralIndex { columns: Vec<usize>, runs: usize, level_product: u64 },
}

impl StrengthFailure {
    pub fn columns(&self) -> &[usize] {
        match self {
            StrengthFailure::Imbalance { columns, .. } | StrengthFailure::NonIntegralIndex { columns, .. } => {
                columns
            }
        }
    }
}

impl fmt::Display for StrengthFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrengthFailure::Imbalance { columns, tuple, observed, expected } => {
                write!(f, "columns {columns:?}: tuple {tuple:?} occurs {observed} times, expected {expected}")
            }
            StrengthFailure::NonIntegralIndex { columns, runs, level_product } => {
                write!(f, "columns {columns:?}: {runs} runs not divisible by level product {level_product}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrengthReport {
    pub t: usize,
    pub runs: usize,
    /// Per-subset index λ, in colexicographic subset order.
    pub lambda_by_subset: Vec<SubsetSummary>,
    /// At most [`VerifyOptions::max_tuples_per_subset`] entries per subset.
    pub failures: Vec<StrengthFailure>,
}

impl StrengthReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Distinct failing column subsets in report order.
    pub fn failing_subsets(&self) -> Vec<Vec<usize>> {
        self.lambda_by_subset.iter().filter(|s| s.bad_tuples > 0).map(|s| s.columns.clone()).collect()
    }

    /// Order-independent comparison of two reports' verdicts: pass/fail, and
    /// for every subset the index and the number of unbalanced tuples.
    pub fn same_verdict(&self, other: &StrengthReport) -> bool {
        let key = |r: &StrengthReport| {
            r.lambda_by_subset.iter().map(|s| (s.columns.clone(), (s.lambda, s.bad_tuples))).collect::<BTreeMap<_, _>>()
        };
        self.t == other.t && self.passed() == other.passed() && key(self) == key(other)
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// Stop at the first failing subset.
    pub fail_fast: bool,
    pub max_tuples_per_subset: usize,
    pub parallel: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { fail_fast: false, max_tuples_per_subset: 8, parallel: true }
    }
}

fn check_subset(
    a: &SymbolMatrix,
    columns: &[usize],
    max_tuples: usize,
    counts: &mut Vec<u64>,
) -> (SubsetSummary, Vec<StrengthFailure>) {
    let runs = a.runs as u64;
    let radices: Vec<u32> = columns.iter().map(|&c| a.profile.level(c)).collect();
    let product = a.profile.level_product(columns);
    let Some(product) = product.filter(|&p| runs % p == 0) else {
        // Product overflow or non-divisibility: structurally unbalanced.
        let level_product = product.unwrap_or(u64::MAX);
        let summary =
            SubsetSummary { columns: columns.to_vec(), lambda: Ratio::new(runs, level_product), bad_tuples: level_product };
        let failure = StrengthFailure::NonIntegralIndex { columns: columns.to_vec(), runs: a.runs, level_product };
        return (summary, vec![failure]);
    };
    let lambda = runs / product;
    counts.clear();
    counts.resize(product as usize, 0);
    let k = a.k();
    for row in a.cells.chunks_exact(k) {
        let mut idx = 0usize;
        for (&c, &r) in columns.iter().zip(&radices) {
            idx = idx * r as usize + row[c] as usize;
        }
        counts[idx] += 1;
    }
    let mut failures = Vec::new();
    let mut bad = 0;
    for (idx, &observed) in counts.iter().enumerate() {
        if observed != lambda {
            bad += 1;
            if failures.len() < max_tuples {
                failures.push(StrengthFailure::Imbalance {
                    columns: columns.to_vec(),
                    tuple: mixed_radix_digits(idx as u64, &radices),
                    observed,
                    expected: lambda,
                });
            }
        }
    }
    (SubsetSummary { columns: columns.to_vec(), lambda: Ratio::new(runs, product), bad_tuples: bad }, failures)
}

/// Exhaustively checks that every `t`-subset of columns is balanced.
pub fn verify_strength(a: &SymbolMatrix, t: usize) -> Result<StrengthReport> {
    verify_strength_with(a, t, &VerifyOptions::default())
}

pub fn verify_strength_with(a: &SymbolMatrix, t: usize, opts: &VerifyOptions) -> Result<StrengthReport> {
    if t > a.k() {
        return Err(Error::StrengthTooLarge { t, k: a.k() });
    }
    let mut report = StrengthReport { t, runs: a.runs, lambda_by_subset: Vec::new(), failures: Vec::new() };
    if opts.fail_fast || !opts.parallel {
        let mut counts = Vec::new();
        for columns in Colex::new(a.k(), t) {
            let (summary, failures) = check_subset(a, &columns, opts.max_tuples_per_subset, &mut counts);
            let failed = summary.bad_tuples > 0;
            report.lambda_by_subset.push(summary);
            report.failures.extend(failures);
            if failed && opts.fail_fast {
                break;
            }
        }
    } else {
        let subsets: Vec<Vec<usize>> = Colex::new(a.k(), t).collect();
        let results: Vec<_> = subsets
            .par_iter()
            .map_init(Vec::new, |counts, columns| check_subset(a, columns, opts.max_tuples_per_subset, counts))
            .collect();
        for (summary, failures) in results {
            report.lambda_by_subset.push(summary);
            report.failures.extend(failures);
        }
    }
    Ok(report)
}

/// Whether every `t`-subset is balanced, stopping at the first failure.
pub fn has_strength(a: &SymbolMatrix, t: usize) -> bool {
    if t > a.k() {
        return false;
    }
    let mut counts = Vec::new();
    Colex::new(a.k(), t).all(|columns| check_subset(a, &columns, 0, &mut counts).0.bad_tuples == 0)
}

/// Naive oracle for [`verify_strength`]: for every subset and every possible
/// tuple, rescans all rows. Shares no counting code with the kernel.
pub fn brute_force_strength(a: &SymbolMatrix, t: usize) -> Result<StrengthReport> {
    const BUDGET: u64 = 100_000_000;
    if t > a.k() {
        return Err(Error::StrengthTooLarge { t, k: a.k() });
    }
    let work = (a.runs as u64).saturating_mul(binomial(a.k() as u64, t as u64));
    if work > BUDGET {
        return Err(Error::BudgetExceeded(format!("oracle needs N*C(k,t) = {work} > {BUDGET}")));
    }

    fn subsets(k: usize, t: usize, start: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if acc.len() == t {
            out.push(acc.clone());
            return;
        }
        for c in start..k {
            acc.push(c);
            subsets(k, t, c + 1, acc, out);
            acc.pop();
        }
    }
    let mut all = Vec::new();
    subsets(a.k(), t, 0, &mut Vec::new(), &mut all);

    let mut report = StrengthReport { t, runs: a.runs, lambda_by_subset: Vec::new(), failures: Vec::new() };
    for columns in all {
        let mut product: u64 = 1;
        for &c in &columns {
            product *= a.profile().level(c) as u64;
        }
        let lambda = Ratio::new(a.runs() as u64, product);
        if !lambda.is_integer() {
            report.failures.push(StrengthFailure::NonIntegralIndex {
                columns: columns.clone(),
                runs: a.runs(),
                level_product: product,
            });
            report.lambda_by_subset.push(SubsetSummary { columns, lambda, bad_tuples: product });
            continue;
        }
        let expected = lambda.to_integer();
        let mut tuple = vec![0u32; columns.len()];
        let mut bad = 0;
        loop {
            let mut observed = 0;
            for r in 0..a.runs() {
                if columns.iter().zip(&tuple).all(|(&c, &s)| a.cell(r, c) == s) {
                    observed += 1;
                }
            }
            if observed != expected {
                bad += 1;
                report.failures.push(StrengthFailure::Imbalance {
                    columns: columns.clone(),
                    tuple: tuple.clone(),
                    observed,
                    expected,
                });
            }
            if !advance(&mut tuple, &columns, a.profile()) {
                break;
            }
        }
        report.lambda_by_subset.push(SubsetSummary { columns, lambda, bad_tuples: bad });
    }
    Ok(report)
}

// Odometer step over the tuples of `columns`; false once it wraps.
fn advance(tuple: &mut [u32], columns: &[usize], profile: &LevelProfile) -> bool {
    for pos in (0..tuple.len()).rev() {
        tuple[pos] += 1;
        if tuple[pos] < profile.level(columns[pos]) {
            return true;
        }
        tuple[pos] = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleReport {
    pub simple: bool,
    /// First pair of identical rows, by the later row's index.
    pub duplicate: Option<(usize, usize)>,
}

pub fn verify_simple(a: &SymbolMatrix) -> SimpleReport {
    let mut seen: HashMap<&[u32], usize> = HashMap::with_capacity(a.runs);
    for (r, row) in a.rows().enumerate() {
        if let Some(&first) = seen.get(row) {
            return SimpleReport { simple: false, duplicate: Some((first, r)) };
        }
        seen.insert(row, r);
    }
    SimpleReport { simple: true, duplicate: None }
}

/// An ordered collection of arrays sharing one profile and run count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LargeSet {
    profile: LevelProfile,
    runs: usize,
    members: Vec<SymbolMatrix>,
}

impl LargeSet {
    pub fn new(members: Vec<SymbolMatrix>) -> Result<LargeSet> {
        let first = members.first().ok_or_else(|| Error::Precondition("large set has no members".into()))?;
        let (profile, runs) = (first.profile.clone(), first.runs);
        for (i, m) in members.iter().enumerate() {
            if m.profile != profile || m.runs != runs {
                return Err(Error::Mismatch(format!(
                    "member {i} is {}x{} over {}, expected {runs} runs over {profile}",
                    m.runs,
                    m.k(),
                    m.profile
                )));
            }
        }
        Ok(LargeSet { profile, runs, members })
    }

    pub fn profile(&self) -> &LevelProfile {
        &self.profile
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn members(&self) -> &[SymbolMatrix] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &SymbolMatrix {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Smallest claimed strength among the members.
    pub fn strength(&self) -> usize {
        self.members.iter().map(|m| m.strength).min().unwrap_or(0)
    }

    pub fn into_members(self) -> Vec<SymbolMatrix> {
        self.members
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Overlap {
    pub tuple: Vec<u32>,
    pub first_member: usize,
    pub second_member: usize,
}

#[derive(Clone, Debug)]
pub struct LargeSetReport {
    pub t: usize,
    pub members: usize,
    pub runs: usize,
    pub universe: BigUint,
    /// `M · N == universe`.
    pub count_matches: bool,
    /// First strength failure of each failing member.
    pub strength_failures: Vec<(usize, StrengthFailure)>,
    pub non_simple: Vec<(usize, (usize, usize))>,
    pub overlaps: Vec<Overlap>,
    /// Distinct tuples covered by the union of all members.
    pub covered: BigUint,
}

impl LargeSetReport {
    pub fn passed(&self) -> bool {
        self.count_matches
            && self.strength_failures.is_empty()
            && self.non_simple.is_empty()
            && self.overlaps.is_empty()
            && self.covered == self.universe
    }
}

const BITMAP_LIMIT: u64 = 1 << 24;
const MAX_OVERLAPS: usize = 16;

fn tuple_index(row: &[u32], levels: &[u32]) -> u128 {
    row.iter().zip(levels).fold(0u128, |acc, (&s, &r)| acc * r as u128 + s as u128)
}

/// Checks that `l` partitions the full factorial into simple arrays of
/// strength `t`.
pub fn verify_large_set(l: &LargeSet, t: usize) -> Result<LargeSetReport> {
    if t > l.profile.k() {
        return Err(Error::StrengthTooLarge { t, k: l.profile.k() });
    }
    let universe = l.profile.universe_size();
    let count_matches = BigUint::from(l.len()) * l.runs == universe;

    let per_member: Vec<(Option<StrengthFailure>, SimpleReport)> = l
        .members
        .par_iter()
        .map_init(Vec::new, |counts, m| {
            let mut first = None;
            for columns in Colex::new(m.k(), t) {
                let (_, mut failures) = check_subset(m, &columns, 1, counts);
                if !failures.is_empty() {
                    first = Some(failures.swap_remove(0));
                    break;
                }
            }
            (first, verify_simple(m))
        })
        .collect();
    let mut strength_failures = Vec::new();
    let mut non_simple = Vec::new();
    for (i, (failure, simple)) in per_member.into_iter().enumerate() {
        if let Some(f) = failure {
            strength_failures.push((i, f));
        }
        if let Some(d) = simple.duplicate {
            non_simple.push((i, d));
        }
    }

    let levels = l.profile.levels();
    let mut overlaps = Vec::new();
    let covered: BigUint;
    let mut note_overlap = |tuple: &[u32], first: usize, second: usize| {
        if overlaps.len() < MAX_OVERLAPS {
            overlaps.push(Overlap { tuple: tuple.to_vec(), first_member: first, second_member: second });
        }
    };
    match universe.to_u64() {
        Some(u) if u <= BITMAP_LIMIT => {
            // Occupancy table: owner + 1, 0 for unoccupied.
            let mut owner = vec![0u32; u as usize];
            let mut distinct = 0u64;
            for (i, m) in l.members.iter().enumerate() {
                for row in m.rows() {
                    let slot = &mut owner[tuple_index(row, levels) as usize];
                    if *slot == 0 {
                        *slot = i as u32 + 1;
                        distinct += 1;
                    } else if *slot as usize - 1 != i {
                        note_overlap(row, *slot as usize - 1, i);
                    }
                }
            }
            covered = BigUint::from(distinct);
        }
        _ if universe.bits() < 128 => {
            let mut owner: HashMap<u128, u32> = HashMap::new();
            for (i, m) in l.members.iter().enumerate() {
                for row in m.rows() {
                    match owner.entry(tuple_index(row, levels)) {
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(i as u32);
                        }
                        std::collections::hash_map::Entry::Occupied(o) => {
                            if *o.get() as usize != i {
                                note_overlap(row, *o.get() as usize, i);
                            }
                        }
                    }
                }
            }
            covered = BigUint::from(owner.len());
        }
        _ => {
            let mut owner: HashMap<Vec<u32>, u32> = HashMap::new();
            for (i, m) in l.members.iter().enumerate() {
                for row in m.rows() {
                    if let Some(&prev) = owner.get(row) {
                        if prev as usize != i {
                            note_overlap(row, prev as usize, i);
                        }
                    } else {
                        owner.insert(row.to_vec(), i as u32);
                    }
                }
            }
            covered = BigUint::from(owner.len());
        }
    }

    Ok(LargeSetReport {
        t,
        members: l.len(),
        runs: l.runs,
        universe,
        count_matches,
        strength_failures,
        non_simple,
        overlaps,
        covered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn even_weight() -> SymbolMatrix {
        SymbolMatrix::new(
            LevelProfile::uniform(2, 3).unwrap(),
            2,
            vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]],
        )
        .unwrap()
    }

    fn odd_weight() -> SymbolMatrix {
        SymbolMatrix::new(
            LevelProfile::uniform(2, 3).unwrap(),
            2,
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0], vec![1, 1, 1]],
        )
        .unwrap()
    }

    #[test]
    fn profile_basics() {
        let p = LevelProfile::parse("2^8,5^1").unwrap();
        assert_eq!(p.k(), 9);
        assert_eq!(p.universe_size(), BigUint::from(1280u32));
        assert_eq!(p.to_string(), "2^8,5^1");
        assert_eq!(p.notation(), "5^1 2^8");
        assert_eq!(LevelProfile::parse("5 2^2").unwrap().levels(), &[5, 2, 2]);
        assert!(LevelProfile::parse("1^3").is_err());
        assert!(LevelProfile::new(vec![]).is_err());
        assert_eq!(LevelProfile::from_groups(&[(3, 0), (2, 2)]).unwrap().levels(), &[2, 2]);
    }

    #[test]
    fn full_factorial_strength() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(2, 3).unwrap()).unwrap();
        assert_eq!(ff.runs(), 8);
        let r = verify_strength(&ff, 3).unwrap();
        assert!(r.passed());
        assert!(r.lambda_by_subset.iter().all(|s| s.lambda == Ratio::from_integer(1)));
    }

    #[test]
    fn even_weight_is_strength_two_only() {
        let a = even_weight();
        assert!(verify_strength(&a, 2).unwrap().passed());
        assert!(verify_strength(&a, 0).unwrap().passed());
        let r3 = verify_strength(&a, 3).unwrap();
        assert!(!r3.passed());
        assert!(matches!(r3.failures[0], StrengthFailure::NonIntegralIndex { level_product: 8, .. }));
        assert!(matches!(verify_strength(&a, 4), Err(Error::StrengthTooLarge { .. })));
    }

    #[test]
    fn imbalance_is_reported_with_tuple() {
        let a = SymbolMatrix::new(
            LevelProfile::uniform(2, 2).unwrap(),
            2,
            vec![vec![0, 0], vec![0, 0], vec![1, 0], vec![1, 1]],
        )
        .unwrap();
        let r = verify_strength(&a, 2).unwrap();
        assert_eq!(r.failing_subsets(), vec![vec![0, 1]]);
        assert!(r.failures.contains(&StrengthFailure::Imbalance {
            columns: vec![0, 1],
            tuple: vec![0, 0],
            observed: 2,
            expected: 1
        }));
        let fast = verify_strength_with(&a, 1, &VerifyOptions { fail_fast: true, ..Default::default() }).unwrap();
        assert_eq!(fast.lambda_by_subset.len(), 2);
        assert!(!fast.passed());
    }

    #[test]
    fn simple_check() {
        assert!(verify_simple(&even_weight()).simple);
        let doubled = even_weight().vstack(&even_weight()).unwrap();
        assert_eq!(verify_simple(&doubled), SimpleReport { simple: false, duplicate: Some((0, 4)) });
    }

    #[test]
    fn lambda_values() {
        let a = even_weight();
        assert_eq!(lambda_of(&a, &[0, 1]).unwrap(), Ratio::from_integer(1));
        assert_eq!(lambda_of(&a, &[0, 1, 2]).unwrap(), Ratio::new(1, 2));
        assert!(lambda_of(&a, &[3]).is_err());
    }

    #[test]
    fn projection() {
        let a = even_weight();
        assert_eq!(project_columns(&a, &[0, 1, 2]).unwrap(), a);
        let p = project_columns(&a, &[2, 0]).unwrap();
        assert_eq!(p.row(1), &[1, 0]);
        assert_eq!(p.strength(), 2);
        assert!(project_columns(&a, &[0, 0]).is_err());
        assert!(project_columns(&a, &[5]).is_err());
        assert!(project_columns(&a, &[]).is_err());
    }

    #[test]
    fn large_set_examples() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(2, 3).unwrap()).unwrap();
        let single = LargeSet::new(vec![ff]).unwrap();
        assert!(verify_large_set(&single, 3).unwrap().passed());

        let pair = LargeSet::new(vec![even_weight(), odd_weight()]).unwrap();
        let r = verify_large_set(&pair, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.covered, BigUint::from(8u32));

        let dup = LargeSet::new(vec![even_weight(), even_weight()]).unwrap();
        let r = verify_large_set(&dup, 2).unwrap();
        assert!(!r.passed());
        assert_eq!(r.overlaps.len(), 4);
        assert_eq!(r.overlaps[0].first_member, 0);
    }

    #[test]
    fn mismatched_members_rejected() {
        let other = SymbolMatrix::full_factorial(LevelProfile::uniform(2, 3).unwrap()).unwrap();
        assert!(matches!(LargeSet::new(vec![even_weight(), other]), Err(Error::Mismatch(_))));
    }

    #[test]
    fn oracle_agrees_on_small_cases() {
        let ff = SymbolMatrix::full_factorial(LevelProfile::uniform(3, 2).unwrap()).unwrap();
        for t in 0..=2 {
            assert!(verify_strength(&ff, t).unwrap().same_verdict(&brute_force_strength(&ff, t).unwrap()));
        }
        let a = even_weight();
        for t in 0..=3 {
            assert!(verify_strength(&a, t).unwrap().same_verdict(&brute_force_strength(&a, t).unwrap()));
        }
    }

    #[test]
    fn hashed_union_path() {
        // 2^25 universe exceeds the bitmap limit; a two-row set is enough to
        // exercise the hashed path and its count mismatch.
        let profile = LevelProfile::uniform(2, 25).unwrap();
        let a = SymbolMatrix::new(profile, 0, vec![vec![0; 25], vec![1; 25]]).unwrap();
        let r = verify_large_set(&LargeSet::new(vec![a]).unwrap(), 0).unwrap();
        assert_eq!(r.covered, BigUint::from(2u32));
        assert!(!r.count_matches);
        assert!(!r.passed());
    }
}
