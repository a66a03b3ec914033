//! Difference matrices over finite abelian groups and their developments
//! into strength-2 arrays with a full-factorial projection.

use std::fmt;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::array::{verify_strength, LevelProfile, StrengthReport, SymbolMatrix};
use crate::error::{Error, Result};
use crate::expand::{check_resolvable_projection, ResolvableProjection};
use crate::gf::{field_of_order, prime_power, FieldElement};

/// `Z_{z_1} × ⋯ × Z_{z_r}`. Elements are encoded little-endian:
/// `x = d_1 + z_1 (d_2 + z_2 (…))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    factors: Vec<u32>,
    order: u32,
}

impl AbelianGroup {
    pub fn new(factors: Vec<u32>) -> Result<AbelianGroup> {
        if let Some(&z) = factors.iter().find(|&&z| z < 2) {
            return Err(Error::Precondition(format!("cyclic factor of order {z}")));
        }
        let order = factors
            .iter()
            .try_fold(1u32, |acc, &z| acc.checked_mul(z))
            .filter(|&o| o <= 1 << 20)
            .ok_or_else(|| Error::Precondition("group order too large".into()))?;
        Ok(AbelianGroup { factors, order })
    }

    pub fn cyclic(v: u32) -> Result<AbelianGroup> {
        AbelianGroup::new(vec![v])
    }

    /// The one-element group.
    pub fn trivial() -> AbelianGroup {
        AbelianGroup { factors: Vec::new(), order: 1 }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn digits(&self, mut x: u32) -> Vec<u32> {
        self.factors
            .iter()
            .map(|&z| {
                let d = x % z;
                x /= z;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> u32 {
        digits.iter().zip(&self.factors).rev().fold(0, |acc, (&d, &z)| acc * z + d)
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if let [z] = self.factors[..] {
            return (a + b) % z;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        for &z in &self.factors {
            out += ((a % z + b % z) % z) * place;
            a /= z;
            b /= z;
            place *= z;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let (mut a, mut out, mut place) = (a, 0, 1);
        for &z in &self.factors {
            out += ((z - a % z) % z) * place;
            a /= z;
            place *= z;
        }
        out
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// `G × H` with `(g, h) ↦ g + |G| h`.
    pub fn product(&self, other: &AbelianGroup) -> AbelianGroup {
        AbelianGroup { factors: self.factors.iter().chain(&other.factors).copied().collect(), order: self.order * other.order }
    }

    pub fn format_element(&self, x: u32) -> String {
        if self.factors.len() <= 1 {
            return x.to_string();
        }
        self.digits(x).iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }

    pub fn parse_element(&self, text: &str) -> Option<u32> {
        if self.factors.len() <= 1 {
            return text.parse().ok().filter(|&x| x < self.order);
        }
        let digits: Vec<u32> = text.split(',').map(|d| d.parse().ok()).collect::<Option<_>>()?;
        if digits.len() != self.factors.len() || digits.iter().zip(&self.factors).any(|(&d, &z)| d >= z) {
            return None;
        }
        Some(self.from_digits(&digits))
    }

    /// Parses `Z4xZ5`; `Z1` denotes the trivial group.
    pub fn parse(text: &str) -> Result<AbelianGroup> {
        if text == "Z1" {
            return Ok(AbelianGroup::trivial());
        }
        let factors = text
            .split('x')
            .map(|f| f.strip_prefix('Z').and_then(|z| z.parse().ok()))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::Precondition(format!("malformed group `{text}`")))?;
        AbelianGroup::new(factors)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("Z1");
        }
        let parts: Vec<String> = self.factors.iter().map(|z| format!("Z{z}")).collect();
        f.write_str(&parts.join("x"))
    }
}

/// A `v × k` matrix over a group of order `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DifferenceMatrix {
    group: AbelianGroup,
    k: usize,
    entries: Vec<u32>,
}

impl DifferenceMatrix {
    /// Builds from `v` rows of `k` encoded elements. The difference property
    /// is not checked; see [`verify_dm`].
    pub fn new(group: AbelianGroup, rows: Vec<Vec<u32>>) -> Result<DifferenceMatrix> {
        let v = group.order() as usize;
        if rows.len() != v {
            return Err(Error::Mismatch(format!("{} rows for a group of order {v}", rows.len())));
        }
        let k = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(v * k);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::Mismatch(format!("row {i} has {} entries, expected {k}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= group.order()) {
                return Err(Error::Precondition(format!("row {i}: element {x} outside a group of order {v}")));
            }
            entries.extend(row);
        }
        Ok(DifferenceMatrix { group, k, entries })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn v(&self) -> usize {
        self.group.order() as usize
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.k + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.k..(i + 1) * self.k]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmFailure {
    pub pair: (usize, usize),
    pub missing: Vec<u32>,
    pub repeated: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DmReport {
    pub failures: Vec<DmFailure>,
}

impl DmReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every column pair's difference list covers the group once.
pub fn verify_dm(d: &DifferenceMatrix) -> DmReport {
    let pairs: Vec<(usize, usize)> = (0..d.k).flat_map(|h| (0..h).map(move |l| (l, h))).collect();
    let failures = pairs
        .par_iter()
        .filter_map(|&(l, h)| {
            let mut count = vec![0u32; d.v()];
            for i in 0..d.v() {
                count[d.group.sub(d.get(i, h), d.get(i, l)) as usize] += 1;
            }
            let missing: Vec<u32> = (0..d.v() as u32).filter(|&x| count[x as usize] == 0).collect();
            let repeated: Vec<u32> = (0..d.v() as u32).filter(|&x| count[x as usize] > 1).collect();
            (!missing.is_empty() || !repeated.is_empty()).then_some(DmFailure { pair: (l, h), missing, repeated })
        })
        .collect();
    DmReport { failures }
}

/// `d_{i,j} = α_i α_j` over the additive group of `GF(q)`, whose encoding
/// coincides with the group's.
pub fn field_dm(q: u64, k: usize) -> Result<DifferenceMatrix> {
    let field = field_of_order(q)?;
    if k == 0 || k as u64 > q {
        return Err(Error::Precondition(format!("k = {k} outside 1..={q}")));
    }
    let group = AbelianGroup::new(vec![field.p(); field.e() as usize])?;
    let rows = (0..field.q())
        .map(|i| (0..k as u32).map(|j| field.mul(FieldElement(i), FieldElement(j)).0).collect())
        .collect();
    DifferenceMatrix::new(group, rows)
}

/// Direct product: row `(i₁, i₂)` (index `i₁ v₂ + i₂`) has entries
/// `(d¹_{i₁,j}, d²_{i₂,j})`.
pub fn product_dm(d1: &DifferenceMatrix, d2: &DifferenceMatrix) -> Result<DifferenceMatrix> {
    if d1.k != d2.k {
        return Err(Error::Mismatch(format!("column counts {} and {} differ", d1.k, d2.k)));
    }
    let group = d1.group.product(&d2.group);
    let v1 = d1.group.order();
    let mut rows = Vec::with_capacity(d1.v() * d2.v());
    for i1 in 0..d1.v() {
        for i2 in 0..d2.v() {
            rows.push((0..d1.k).map(|j| d1.get(i1, j) + v1 * d2.get(i2, j)).collect());
        }
    }
    DifferenceMatrix::new(group, rows)
}

/// Single-row matrix over the trivial group; the identity for [`product_dm`].
pub fn trivial_dm(k: usize) -> DifferenceMatrix {
    DifferenceMatrix { group: AbelianGroup::trivial(), k, entries: vec![0; k] }
}

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Backtracking search for a `(v, k, 1)`-DM over `Z_v`.
pub fn search_dm(v: u32, k: usize, budget: u64) -> Result<Option<DifferenceMatrix>> {
    search_dm_in(&AbelianGroup::cyclic(v)?, k, budget)
}

/// Backtracking search over `group`. Row 0 and column 0 are fixed to zero
/// and column 1 to the elements in encoding order (rows may be permuted
/// freely), then columns `2..k` are filled top to bottom. `Ok(None)` means
/// the space was exhausted.
pub fn search_dm_in(group: &AbelianGroup, k: usize, budget: u64) -> Result<Option<DifferenceMatrix>> {
    let v = group.order() as usize;
    if v * k > 200 {
        return Err(Error::Precondition(format!("search limited to v*k <= 200, got {}", v * k)));
    }
    let mut m = vec![vec![0u32; k]; v];
    if k >= 2 {
        for (i, row) in m.iter_mut().enumerate() {
            row[1] = i as u32;
        }
    }
    if k <= 2 {
        let rows = m;
        return Ok(Some(DifferenceMatrix::new(group.clone(), rows)?));
    }
    // used[j][l][x]: difference x already taken between columns l < j.
    let mut used = vec![vec![vec![false; v]; k]; k];
    for j in 1..k {
        for l in 0..j {
            used[j][l][0] = true;
        }
    }
    for i in 1..v {
        used[1][0][i] = true;
    }
    let mut nodes = 0u64;

    fn place(
        g: &AbelianGroup,
        m: &mut Vec<Vec<u32>>,
        used: &mut Vec<Vec<Vec<bool>>>,
        cell: usize,
        v: usize,
        k: usize,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<bool> {
        let j = 2 + cell / (v - 1);
        if j == k {
            return Ok(true);
        }
        let i = 1 + cell % (v - 1);
        for x in 0..v as u32 {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded(format!("difference matrix search exceeded {budget} nodes")));
            }
            let diffs: Vec<usize> = (0..j).map(|l| g.sub(x, m[i][l]) as usize).collect();
            if diffs.iter().enumerate().any(|(l, &d)| used[j][l][d]) {
                continue;
            }
            m[i][j] = x;
            for (l, &d) in diffs.iter().enumerate() {
                used[j][l][d] = true;
            }
            if place(g, m, used, cell + 1, v, k, nodes, budget)? {
                return Ok(true);
            }
            for (l, &d) in diffs.iter().enumerate() {
                used[j][l][d] = false;
            }
        }
        m[i][j] = 0;
        Ok(false)
    }

    if place(group, &mut m, &mut used, 0, v, k, &mut nodes, budget)? {
        Ok(Some(DifferenceMatrix::new(group.clone(), m)?))
    } else {
        Ok(None)
    }
}

/// Prime-power factorization `[(p, e)]` in ascending `p`.
fn factorize(mut v: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= v {
        if v % p == 0 {
            let mut e = 0;
            while v % p == 0 {
                v /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if v > 1 {
        out.push((v, 1));
    }
    out
}

/// A `(v, 4, 1)`-DM for `v ≥ 4`, `v ≢ 2 (mod 4)`.
///
/// Orders whose prime-power parts are all at least 4 use products of field
/// matrices. A lone factor 3 falls back to a bounded search over the
/// elementary abelian decomposition.
pub fn dm_for(v: u64) -> Result<DifferenceMatrix> {
    if v < 4 || v % 4 == 2 {
        return Err(Error::Precondition(format!("no (v,4,1) difference matrix is available for v = {v}; need v >= 4 and v != 2 mod 4")));
    }
    let parts = factorize(v);
    let d = if parts.iter().all(|&(p, e)| p.pow(e) >= 4) {
        parts.iter().try_fold(trivial_dm(4), |acc, &(p, e)| product_dm(&acc, &field_dm(p.pow(e), 4)?))?
    } else {
        let factors: Vec<u32> = parts.iter().flat_map(|&(p, e)| std::iter::repeat(p as u32).take(e as usize)).collect();
        let group = AbelianGroup::new(factors)?;
        match search_dm_in(&group, 4, DEFAULT_SEARCH_BUDGET) {
            Ok(Some(d)) => d,
            Ok(None) | Err(Error::BudgetExceeded(_)) | Err(Error::Precondition(_)) => {
                return Err(Error::NotCovered { v })
            }
            Err(e) => return Err(e),
        }
    };
    let report = verify_dm(&d);
    if !report.passed() {
        return Err(Error::Verification(format!("difference matrix for v = {v} fails at pairs {:?}", report.failures)));
    }
    Ok(d)
}

pub fn format_dm(d: &DifferenceMatrix) -> String {
    let mut out = format!("DM v={} k={} group={}\n", d.v(), d.k, d.group);
    for i in 0..d.v() {
        let row: Vec<String> = d.row(i).iter().map(|&x| d.group.format_element(x)).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_dm(text: &str) -> Result<DifferenceMatrix> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let rest = header.strip_prefix("DM ").ok_or_else(|| Error::parse(1, "expected a `DM` header"))?;
    let (mut v, mut k, mut group) = (None, None, None);
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("v", x)) => v = x.parse::<usize>().ok(),
            Some(("k", x)) => k = x.parse::<usize>().ok(),
            Some(("group", x)) => group = Some(AbelianGroup::parse(x).map_err(|e| Error::parse(1, e.to_string()))?),
            _ => return Err(Error::parse(1, format!("unknown header field `{field}`"))),
        }
    }
    let (Some(v), Some(k), Some(group)) = (v, k, group) else {
        return Err(Error::parse(1, "header needs v=, k= and group="));
    };
    if group.order() as usize != v {
        return Err(Error::parse(1, format!("group {group} has order {}, not {v}", group.order())));
    }
    let mut rows = Vec::with_capacity(v);
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|t| group.parse_element(t).ok_or_else(|| Error::parse(n + 1, format!("bad group element `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != k {
            return Err(Error::parse(n + 1, format!("row has {} entries, expected {k}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != v {
        return Err(Error::parse(text.lines().count(), format!("found {} rows, expected {v}", rows.len())));
    }
    DifferenceMatrix::new(group, rows)
}

pub fn read_dm(path: impl AsRef<Path>) -> Result<DifferenceMatrix> {
    parse_dm(&fs::read_to_string(path)?)
}

pub fn write_dm(d: &DifferenceMatrix, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_dm(d))?;
    Ok(())
}

/// One output column of a development: `Σ c_j d_{i,j} + a u + b e + c w`.
#[derive(Clone, Copy)]
struct Term {
    d: [i8; 4],
    u: bool,
    e: bool,
    w: bool,
}

const fn t(d: [i8; 4], u: bool, e: bool, w: bool) -> Term {
    Term { d, u, e, w }
}

const CHAI1: [Term; 13] = [
    t([1, 0, 0, 0], true, false, false),
    t([0, 1, 0, 0], true, false, false),
    t([0, 0, 1, 0], true, false, false),
    t([0, 0, 0, 1], true, false, false),
    t([1, 0, 0, 0], true, true, false),
    t([0, 1, 0, 0], true, true, false),
    t([0, 0, 1, 0], true, true, false),
    t([0, 0, 0, 1], true, true, false),
    t([1, -1, 0, 0], false, false, false),
    t([1, -1, 0, 0], false, true, false),
    t([1, 0, -1, 0], false, true, false),
    t([1, 0, 0, -1], false, true, false),
    t([0, 0, 0, 0], false, true, false),
];

const CHAI2: [Term; 29] = [
    t([1, 0, 0, 0], true, false, false),
    t([0, 1, 0, 0], true, false, false),
    t([0, 0, 1, 0], true, true, false),
    t([0, 0, 0, 1], true, true, true),
    t([0, 0, 0, 0], false, false, true),
    t([0, 0, 1, 0], true, false, true),
    t([0, 0, 0, 1], true, false, true),
    t([1, 0, 0, 0], true, true, true),
    t([0, 0, 1, 0], true, false, false),
    t([0, 0, 0, 1], true, false, false),
    t([1, 0, 0, 0], true, true, false),
    t([0, 1, 0, 0], true, true, false),
    t([0, 0, 0, 1], true, true, false),
    t([1, 0, 0, 0], true, false, true),
    t([0, 1, 0, 0], false, true, true),
    t([0, 0, 1, 0], false, true, true),
    t([0, 0, 0, 1], false, true, true),
    t([1, 0, 0, 0], true, false, true),
    t([0, 1, 0, 0], true, false, true),
    t([0, 1, 0, 0], true, true, true),
    t([0, 0, 1, 0], true, true, true),
    t([1, -1, 0, 0], false, false, false),
    t([1, -1, 0, 0], false, true, false),
    t([1, 0, -1, 0], false, true, false),
    t([1, 0, 0, -1], false, true, false),
    t([1, -1, 0, 0], false, false, true),
    t([1, 0, -1, 0], false, false, true),
    t([1, 0, 0, -1], false, false, true),
    t([0, 0, 0, 0], false, true, false),
];

fn develop(d: &DifferenceMatrix, terms: &[Term], with_w: bool) -> Result<SymbolMatrix> {
    let report = verify_dm(d);
    if !report.passed() {
        return Err(Error::Precondition(format!("input is not a difference matrix: {:?}", report.failures)));
    }
    if d.k != 4 {
        return Err(Error::Precondition(format!("development needs a (v,4,1)-DM, got k = {}", d.k)));
    }
    let g = &d.group;
    let v = d.v() as u32;
    let ws = if with_w { v } else { 1 };
    let mut cells = Vec::with_capacity((v * v * v * ws) as usize * terms.len());
    for i in 0..d.v() {
        let base: Vec<u32> = terms
            .iter()
            .map(|term| {
                term.d.iter().zip(d.row(i)).fold(0, |acc, (&c, &x)| match c {
                    1 => g.add(acc, x),
                    -1 => g.sub(acc, x),
                    _ => acc,
                })
            })
            .collect();
        for u in 0..v {
            for e in 0..v {
                for w in 0..ws {
                    for (term, &b) in terms.iter().zip(&base) {
                        let mut x = b;
                        if term.u {
                            x = g.add(x, u);
                        }
                        if term.e {
                            x = g.add(x, e);
                        }
                        if term.w {
                            x = g.add(x, w);
                        }
                        cells.push(x);
                    }
                }
            }
        }
    }
    SymbolMatrix::from_cells(LevelProfile::uniform(v, terms.len())?, 2, cells)
}

/// Rows `C(i, u, e)` of the 13-column development, `i` outermost, then `u`,
/// then `e`. Projection: columns `{0, 1, 6}`.
pub fn develop_chai1(d: &DifferenceMatrix) -> Result<(SymbolMatrix, ResolvableProjection)> {
    let a = develop(d, &CHAI1, false)?;
    let report = verify_strength(&a, 2)?;
    if !report.passed() {
        return Err(Error::Verification(format!(
            "13-column development fails strength 2 at column pairs {:?}",
            report.failing_subsets()
        )));
    }
    let columns = vec![0, 1, 6];
    if let Some(defect) = check_resolvable_projection(&a, &columns).defect {
        return Err(Error::Verification(format!("columns {columns:?} are not a full factorial: {defect}")));
    }
    let level_product = a.runs() as u64;
    Ok((a, ResolvableProjection { columns, level_product }))
}

/// Outcome of the 29-column development and its self-check.
#[derive(Clone, Debug)]
pub struct Chai2Development {
    pub array: SymbolMatrix,
    pub projection: ResolvableProjection,
    pub strength: StrengthReport,
    /// Defect of the claimed projection, if any.
    pub projection_defect: Option<String>,
}

impl Chai2Development {
    pub fn passed(&self) -> bool {
        self.strength.passed() && self.projection_defect.is_none()
    }

    /// Column pairs that fail the strength-2 balance.
    pub fn failing_pairs(&self) -> Vec<(usize, usize)> {
        self.strength.failing_subsets().iter().map(|s| (s[0], s[1])).collect()
    }

    /// Greedy column subset with no failing pair, keeping columns in order.
    pub fn passing_columns(&self) -> Vec<usize> {
        let bad = self.failing_pairs();
        let mut keep: Vec<usize> = Vec::new();
        for c in 0..self.array.k() {
            if keep.iter().all(|&x| !bad.contains(&(x.min(c), x.max(c)))) {
                keep.push(c);
            }
        }
        keep
    }

    /// The array and projection, or the diagnostic as an error.
    pub fn into_verified(self) -> Result<(SymbolMatrix, ResolvableProjection)> {
        if self.passed() {
            return Ok((self.array, self.projection));
        }
        let mut msg = format!("29-column development fails strength 2 at column pairs {:?}", self.failing_pairs());
        if let Some(d) = &self.projection_defect {
            msg.push_str(&format!("; projection defect: {d}"));
        }
        Err(Error::Verification(msg))
    }
}

/// Rows `C(i, u, e, w)` of the 29-column development.
/// Always returns the self-check verdict rather than failing.
pub fn develop_chai2(d: &DifferenceMatrix) -> Result<Chai2Development> {
    let array = develop(d, &CHAI2, true)?;
    let strength = verify_strength(&array, 2)?;
    let columns = vec![0, 1, 2, 3];
    let projection_defect = check_resolvable_projection(&array, &columns).defect.map(|d| d.to_string());
    let projection = ResolvableProjection { columns, level_product: array.runs() as u64 };
    Ok(Chai2Development { array, projection, strength, projection_defect })
}

/// Whether `v` is a prime power at least 4.
pub fn is_field_order(v: u64) -> bool {
    v >= 4 && prime_power(v).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups() {
        let g = AbelianGroup::parse("Z2xZ3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.to_string(), "Z2xZ3");
        assert_eq!(g.digits(5), vec![1, 2]);
        assert_eq!(g.add(5, 1), g.from_digits(&[0, 2]));
        assert_eq!(g.sub(0, 5), g.from_digits(&[1, 1]));
        assert_eq!(g.format_element(5), "1,2");
        assert_eq!(g.parse_element("1,2"), Some(5));
        assert_eq!(g.parse_element("2,0"), None);
        assert!(AbelianGroup::parse("Z1x").is_err());
        assert_eq!(AbelianGroup::parse("Z1").unwrap().order(), 1);
    }

    #[test]
    fn vacuous_and_zero() {
        let single = DifferenceMatrix::new(AbelianGroup::cyclic(3).unwrap(), vec![vec![0], vec![1], vec![1]]).unwrap();
        assert!(verify_dm(&single).passed());
        let zeros = DifferenceMatrix::new(AbelianGroup::cyclic(3).unwrap(), vec![vec![0, 0]; 3]).unwrap();
        let r = verify_dm(&zeros);
        assert_eq!(r.failures, vec![DmFailure { pair: (0, 1), missing: vec![1, 2], repeated: vec![0] }]);
    }

    #[test]
    fn field_matrices() {
        for q in [4u64, 5, 7, 8, 9, 11, 13, 16] {
            for k in [2, 4, q as usize] {
                assert!(verify_dm(&field_dm(q, k).unwrap()).passed(), "q={q} k={k}");
            }
        }
        assert!(field_dm(3, 4).is_err());
    }

    #[test]
    fn products() {
        let d = product_dm(&field_dm(4, 4).unwrap(), &field_dm(5, 4).unwrap()).unwrap();
        assert_eq!(d.v(), 20);
        assert!(verify_dm(&d).passed());
        let d = product_dm(&field_dm(5, 4).unwrap(), &field_dm(7, 4).unwrap()).unwrap();
        assert!(verify_dm(&d).passed());
        let base = field_dm(5, 4).unwrap();
        assert_eq!(product_dm(&base, &trivial_dm(4)).unwrap(), base);
        assert!(product_dm(&base, &trivial_dm(3)).is_err());
    }

    #[test]
    fn searches() {
        let d = search_dm(5, 4, 1_000_000).unwrap().unwrap();
        assert!(verify_dm(&d).passed());
        assert!(verify_dm(&search_dm(7, 4, 1_000_000).unwrap().unwrap()).passed());
        assert_eq!(search_dm(3, 4, 1_000_000).unwrap(), None);
        assert!(matches!(search_dm(7, 4, 3), Err(Error::BudgetExceeded(_))));
        assert!(search_dm(40, 6, 10).is_err());
    }

    #[test]
    fn dm_for_orders() {
        assert!(verify_dm(&dm_for(4).unwrap()).passed());
        assert_eq!(dm_for(20).unwrap().v(), 20);
        assert!(matches!(dm_for(6), Err(Error::Precondition(_))));
        assert!(matches!(dm_for(3), Err(Error::Precondition(_))));
        assert!(verify_dm(&dm_for(12).unwrap()).passed());
    }

    #[test]
    fn dm_text_round_trip() {
        let d = field_dm(4, 4).unwrap();
        let text = format_dm(&d);
        assert!(text.starts_with("DM v=4 k=4 group=Z2xZ2\n0,0 0,0"));
        assert_eq!(parse_dm(&text).unwrap(), d);
        let c = field_dm(5, 3).unwrap();
        assert_eq!(parse_dm(&format_dm(&c)).unwrap(), c);
        assert!(matches!(parse_dm("DM v=2 k=1 group=Z2\n0\n7\n"), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn chai1_small() {
        let (a, p) = develop_chai1(&field_dm(4, 4).unwrap()).unwrap();
        assert_eq!((a.runs(), a.k()), (64, 13));
        assert_eq!(p.columns, vec![0, 1, 6]);
    }

    #[test]
    fn chai2_verdict_is_definitive() {
        let dev = develop_chai2(&field_dm(4, 4).unwrap()).unwrap();
        assert_eq!((dev.array.runs(), dev.array.k()), (256, 29));
        if !dev.passed() {
            assert!(!dev.failing_pairs().is_empty());
            let keep = dev.passing_columns();
            let sub = crate::array::project_columns(&dev.array, &keep).unwrap();
            assert!(verify_strength(&sub, 2).unwrap().passed());
        }
    }
}
