//! Sylvester-type binary arrays and linear arrays from generator columns over
//! finite fields.

use rayon::prelude::*;

use crate::array::{has_strength, LevelProfile, SymbolMatrix};
use crate::combin::{binomial, Colex};
use crate::error::{Error, Result};
use crate::expand::{check_resolvable_projection, ResolvableProjection};
use crate::gf::{field_of_order, FieldElement, FieldSpec};

/// A `2^n × 2^n` matrix over `{+1, -1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    n: u32,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i8 {
        self.entries[r * self.size() + c]
    }

    pub fn row(&self, r: usize) -> &[i8] {
        let size = self.size();
        &self.entries[r * size..(r + 1) * size]
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &SignMatrix) -> SignMatrix {
        let (a, b) = (self.size(), other.size());
        let size = a * b;
        let mut entries = vec![0i8; size * size];
        for r1 in 0..a {
            for c1 in 0..a {
                let x = self.get(r1, c1);
                for r2 in 0..b {
                    for c2 in 0..b {
                        entries[(r1 * b + r2) * size + c1 * b + c2] = x * other.get(r2, c2);
                    }
                }
            }
        }
        SignMatrix { n: self.n + other.n, entries }
    }

    /// `H Hᵀ = 2^n I`.
    pub fn is_hadamard(&self) -> bool {
        let size = self.size();
        (0..size).all(|i| {
            (0..size).all(|j| {
                let dot: i64 = self.row(i).iter().zip(self.row(j)).map(|(&x, &y)| (x * y) as i64).sum();
                dot == if i == j { size as i64 } else { 0 }
            })
        })
    }
}

pub const MAX_SYLVESTER: u32 = 10;

/// `S_n` with entry `(-1)^{x·y}` for labels `x, y ∈ Z_2^n`.
pub fn sylvester(n: u32) -> Result<SignMatrix> {
    if !(1..=MAX_SYLVESTER).contains(&n) {
        return Err(Error::Precondition(format!("Sylvester order exponent {n} outside 1..={MAX_SYLVESTER}")));
    }
    let size = 1usize << n;
    let entries = (0..size * size)
        .map(|i| if ((i / size) & (i % size)).count_ones() % 2 == 0 { 1 } else { -1 })
        .collect();
    Ok(SignMatrix { n, entries })
}

/// `S_1^{⊗n}` built by repeated Kronecker products.
pub fn kronecker_power(n: u32) -> Result<SignMatrix> {
    if !(1..=MAX_SYLVESTER).contains(&n) {
        return Err(Error::Precondition(format!("Sylvester order exponent {n} outside 1..={MAX_SYLVESTER}")));
    }
    let s1 = SignMatrix { n: 1, entries: vec![1, 1, 1, -1] };
    let mut acc = s1.clone();
    for _ in 1..n {
        acc = s1.kronecker(&acc);
    }
    Ok(acc)
}

fn parity(x: usize) -> u32 {
    x.count_ones() % 2
}

fn binary_array(n: u32, labels: &[usize], stacked: bool, t: usize) -> Result<SymbolMatrix> {
    let size = 1usize << n;
    let mut cells = Vec::with_capacity(size * labels.len() * if stacked { 2 } else { 1 });
    for flip in 0..if stacked { 2 } else { 1 } {
        for r in 0..size {
            cells.extend(labels.iter().map(|&c| parity(r & c) ^ flip));
        }
    }
    SymbolMatrix::from_cells(LevelProfile::uniform(2, labels.len())?, t, cells)
}

fn self_check(a: SymbolMatrix, columns: Vec<usize>, what: &str) -> Result<(SymbolMatrix, ResolvableProjection)> {
    if !has_strength(&a, a.strength()) {
        return Err(Error::Verification(format!("{what} does not have strength {}", a.strength())));
    }
    if let Some(defect) = check_resolvable_projection(&a, &columns).defect {
        return Err(Error::Verification(format!("{what}: projection {columns:?} is not resolvable: {defect}")));
    }
    let level_product = a.runs() as u64;
    Ok((a, ResolvableProjection { columns, level_product }))
}

/// Positions of the weight-one labels within a sorted label list.
fn weight_one_positions(labels: &[usize]) -> Vec<usize> {
    labels.iter().enumerate().filter(|(_, &l)| l.count_ones() == 1).map(|(i, _)| i).collect()
}

/// `OA(2^n, k, 2, 2)` from the nonzero-labelled columns of `S_n`, with
/// `+1 → 0` and `-1 → 1`. Keeps the `n` weight-one labels and the first
/// `k - n` others, all in label order.
pub fn sylvester_oa2(n: u32, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    if !(2..=MAX_SYLVESTER).contains(&n) {
        return Err(Error::Precondition(format!("n = {n} outside 2..={MAX_SYLVESTER}")));
    }
    let size = 1usize << n;
    if k < n as usize || k > size - 1 {
        return Err(Error::Precondition(format!("k = {k} outside {n}..={}", size - 1)));
    }
    let mut others = (1..size).filter(|l| l.count_ones() != 1);
    let mut labels: Vec<usize> = (0..n).map(|i| 1usize << i).collect();
    labels.extend(others.by_ref().take(k - n as usize));
    labels.sort_unstable();
    let a = binary_array(n, &labels, false, 2)?;
    self_check(a, weight_one_positions(&labels), "Sylvester strength-2 array")
}

/// `OA(2^{n+1}, k, 2, 3)` from `S_n` stacked over its negation. Keeps label
/// 0, the weight-one labels and the first `k - n - 1` others.
pub fn sylvester_oa3(n: u32, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    if !(2..=MAX_SYLVESTER).contains(&n) {
        return Err(Error::Precondition(format!("n = {n} outside 2..={MAX_SYLVESTER}")));
    }
    let size = 1usize << n;
    if k < n as usize + 1 || k > size {
        return Err(Error::Precondition(format!("k = {k} outside {}..={size}", n + 1)));
    }
    let mut labels: Vec<usize> = std::iter::once(0).chain((0..n).map(|i| 1usize << i)).collect();
    labels.extend((1..size).filter(|l| l.count_ones() != 1).take(k - n as usize - 1));
    labels.sort_unstable();
    let a = binary_array(n, &labels, true, 3)?;
    let mut proj = vec![0];
    proj.extend(weight_one_positions(&labels));
    self_check(a, proj, "Sylvester strength-3 array")
}

/// Rank of a list of vectors over `field`.
pub fn rank(field: &FieldSpec, vectors: &[Vec<FieldElement>]) -> usize {
    let mut rows: Vec<Vec<FieldElement>> = vectors.to_vec();
    let width = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = field.inv(rows[r][c]).expect("pivot is nonzero");
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = field.mul(rows[i][c], inv);
                for j in c..width {
                    let sub = field.mul(factor, rows[r][j]);
                    rows[i][j] = field.sub(rows[i][j], sub);
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Determinant of the square matrix whose columns are `columns`.
pub fn determinant(field: &FieldSpec, columns: &[Vec<FieldElement>]) -> Result<FieldElement> {
    let n = columns.len();
    if columns.iter().any(|c| c.len() != n) {
        return Err(Error::Mismatch(format!("determinant needs a square matrix, got {n} columns")));
    }
    // Work on the transpose; the determinant is unchanged.
    let mut m: Vec<Vec<FieldElement>> = columns.to_vec();
    let mut det = FieldElement::ONE;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else { return Ok(FieldElement::ZERO) };
        if p != c {
            m.swap(p, c);
            det = field.neg(det);
        }
        det = field.mul(det, m[c][c]);
        let inv = field.inv(m[c][c])?;
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let factor = field.mul(m[i][c], inv);
                for j in c..n {
                    let sub = field.mul(factor, m[c][j]);
                    m[i][j] = field.sub(m[i][j], sub);
                }
            }
        }
    }
    Ok(det)
}

/// Largest number of `t`-subsets whose independence is checked exhaustively.
pub const INDEPENDENCE_LIMIT: u64 = 10_000_000;

/// Column vectors in `F_q^m`, any `t` of which are linearly independent.
#[derive(Clone, Debug)]
pub struct GeneratorColumns {
    field: FieldSpec,
    m: usize,
    columns: Vec<Vec<FieldElement>>,
    t: usize,
    exhaustive: bool,
}

impl GeneratorColumns {
    /// Verifies rank `m` and, when at most [`INDEPENDENCE_LIMIT`] subsets are
    /// involved, that every `t` columns are independent.
    pub fn new(field: FieldSpec, m: usize, columns: Vec<Vec<FieldElement>>, t: usize) -> Result<GeneratorColumns> {
        if let Some((i, c)) = columns.iter().enumerate().find(|(_, c)| c.len() != m) {
            return Err(Error::Mismatch(format!("column {i} has length {}, expected {m}", c.len())));
        }
        if t > m {
            return Err(Error::Precondition(format!("strength {t} exceeds dimension {m}")));
        }
        if columns.iter().flatten().any(|x| x.0 >= field.q()) {
            return Err(Error::Precondition(format!("entry outside GF({})", field.q())));
        }
        let r = rank(&field, &columns);
        if r < m {
            return Err(Error::Verification(format!("generator columns have rank {r} < {m}")));
        }
        let exhaustive = binomial(columns.len() as u64, t as u64) <= INDEPENDENCE_LIMIT;
        let gc = GeneratorColumns { field, m, columns, t, exhaustive };
        if exhaustive {
            if let Some(bad) = gc.first_dependent_subset(t) {
                return Err(Error::Verification(format!("columns {bad:?} are linearly dependent")));
            }
        }
        Ok(gc)
    }

    /// Colex-first `size`-subset of columns that is linearly dependent.
    pub fn first_dependent_subset(&self, size: usize) -> Option<Vec<usize>> {
        let l = self.columns.len();
        if size == 0 || size > l {
            return None;
        }
        // Colex order groups subsets by largest element.
        let found: Vec<Option<Vec<usize>>> = (size - 1..l)
            .into_par_iter()
            .map(|top| {
                Colex::new(top, size - 1).find_map(|mut s| {
                    s.push(top);
                    let vecs: Vec<_> = s.iter().map(|&c| self.columns[c].clone()).collect();
                    (rank(&self.field, &vecs) < size).then_some(s)
                })
            })
            .collect();
        found.into_iter().flatten().next()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<FieldElement>] {
        &self.columns
    }

    /// Whether every `t`-subset was checked at construction.
    pub fn exhaustively_verified(&self) -> bool {
        self.exhaustive
    }

    /// Column order with the greedy independent columns rotated to the
    /// front and the rest in construction order.
    pub fn independent_first_order(&self) -> Vec<usize> {
        let mut basis: Vec<usize> = Vec::new();
        for c in 0..self.columns.len() {
            if basis.len() == self.m {
                break;
            }
            let mut trial: Vec<_> = basis.iter().map(|&b| self.columns[b].clone()).collect();
            trial.push(self.columns[c].clone());
            if rank(&self.field, &trial) == trial.len() {
                basis.push(c);
            }
        }
        let rest = (0..self.columns.len()).filter(|c| !basis.contains(c));
        basis.iter().copied().chain(rest).collect()
    }
}

/// Largest run count emitted by [`linear_oa`].
pub const MAX_LINEAR_RUNS: u64 = 1 << 22;

/// `OA(q^m, k, q, t)` with rows `x · M` for `x ∈ F_q^m` in lexicographic
/// order. Columns are the first `k` of [`GeneratorColumns::independent_first_order`],
/// so the projection is `0..m`.
pub fn linear_oa(gc: &GeneratorColumns, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    let (m, t, l) = (gc.m, gc.t, gc.len());
    if !(t <= m && m <= k && k <= l) {
        return Err(Error::Precondition(format!("need t <= m <= k <= l, got t={t}, m={m}, k={k}, l={l}")));
    }
    let q = gc.field.q() as u64;
    let runs = q.checked_pow(m as u32).filter(|&n| n <= MAX_LINEAR_RUNS).ok_or_else(|| {
        Error::BudgetExceeded(format!("{q}^{m} runs exceeds the limit of {MAX_LINEAR_RUNS}"))
    })?;
    let order = gc.independent_first_order();
    let chosen: Vec<&Vec<FieldElement>> = order[..k].iter().map(|&c| &gc.columns[c]).collect();
    let field = &gc.field;
    let cells: Vec<u32> = (0..runs)
        .into_par_iter()
        .flat_map_iter(|index| {
            let x = crate::combin::mixed_radix_digits(index, &vec![q as u32; m]);
            chosen
                .iter()
                .map(|col| {
                    x.iter()
                        .zip(col.iter())
                        .fold(FieldElement::ZERO, |acc, (&xi, &ci)| field.add(acc, field.mul(FieldElement(xi), ci)))
                        .0
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let a = SymbolMatrix::from_cells(LevelProfile::uniform(q as u32, k)?, t, cells)?;
    self_check(a, (0..m).collect(), "linear array")
}

fn vector(field: &FieldSpec, digits: &[u32]) -> Vec<FieldElement> {
    digits.iter().map(|&d| field.element(d)).collect()
}

/// One column per point of `PG(n-1, q)`: first nonzero coordinate 1,
/// vectors in lexicographic order.
pub fn projective_columns(q: u64, n: usize) -> Result<GeneratorColumns> {
    let field = field_of_order(q)?;
    if n < 2 {
        return Err(Error::Precondition(format!("projective dimension n = {n} must be at least 2")));
    }
    let total = (q as u128).pow(n as u32);
    if total > 1 << 24 {
        return Err(Error::BudgetExceeded(format!("{q}^{n} vectors is too many")));
    }
    let radices = vec![q as u32; n];
    let columns: Vec<Vec<FieldElement>> = (0..total as u64)
        .map(|i| crate::combin::mixed_radix_digits(i, &radices))
        .filter(|d| d.iter().find(|&&x| x != 0) == Some(&1))
        .map(|d| vector(&field, &d))
        .collect();
    GeneratorColumns::new(field, n, columns, 2)
}

/// Moment-curve columns `(1, c, …, c^{t-1})` for `c ∈ F_q` in encoding
/// order, then `(0, …, 0, 1)`; for even `q` and `t = 3` also `(0, 1, 0)`.
pub fn bush_columns(q: u64, t: usize) -> Result<GeneratorColumns> {
    let field = field_of_order(q)?;
    if t < 2 || t as u64 > q + 1 {
        return Err(Error::Precondition(format!("t = {t} outside 2..={}", q + 1)));
    }
    let mut columns: Vec<Vec<FieldElement>> =
        field.enumerate_elements().into_iter().map(|c| (0..t).map(|i| field.pow(c, i as u64)).collect()).collect();
    let mut last = vec![FieldElement::ZERO; t];
    last[t - 1] = FieldElement::ONE;
    columns.push(last);
    if field.p() == 2 && t == 3 {
        columns.push(vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]);
    }
    GeneratorColumns::new(field, t, columns, t)
}

/// Coefficient `a` with `z² + a z + 1` rootless over `F_q`.
#[derive(Clone, Debug)]
pub struct QuadraticCoefficient {
    field: FieldSpec,
    a: FieldElement,
}

impl QuadraticCoefficient {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn a(&self) -> FieldElement {
        self.a
    }

    /// `g(x, y) = -(x² + a x y + y²)`.
    pub fn g(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        let f = &self.field;
        let xx = f.mul(x, x);
        let axy = f.mul(self.a, f.mul(x, y));
        let yy = f.mul(y, y);
        f.neg(f.add(f.add(xx, axy), yy))
    }

    /// First `(x, y) ≠ (0, 0)` with `g(x, y) = 0`, if any.
    pub fn find_zero(&self) -> Option<(FieldElement, FieldElement)> {
        let els = self.field.enumerate_elements();
        els.iter()
            .flat_map(|&x| els.iter().map(move |&y| (x, y)))
            .skip(1)
            .find(|&(x, y)| self.g(x, y).is_zero())
    }
}

/// Smallest `a` outside `{-z - z⁻¹ : z ≠ 0}`, checked exhaustively.
pub fn quad_coefficient(q: u64) -> Result<QuadraticCoefficient> {
    if q < 3 {
        return Err(Error::Precondition(format!("q = {q} must be at least 3")));
    }
    let field = field_of_order(q)?;
    let mut forbidden = vec![false; field.q() as usize];
    for z in field.enumerate_elements().into_iter().skip(1) {
        let w = field.neg(field.add(z, field.inv(z)?));
        forbidden[w.0 as usize] = true;
    }
    let a = forbidden
        .iter()
        .position(|&f| !f)
        .ok_or_else(|| Error::Verification(format!("no rootless quadratic found over GF({q})")))?;
    let qc = QuadraticCoefficient { a: field.element(a as u32), field };
    if let Some((x, y)) = qc.find_zero() {
        return Err(Error::Verification(format!("g({}, {}) = 0 over GF({q})", x.0, y.0)));
    }
    Ok(qc)
}

/// Columns `(0,0,1,0)` then `(α_u, α_v, g(α_u, α_v), 1)` in `(u, v)` order;
/// any three are independent.
pub fn q4_matrix(q: u64) -> Result<GeneratorColumns> {
    let qc = quad_coefficient(q)?;
    let f = qc.field.clone();
    let mut columns = vec![vec![FieldElement::ZERO, FieldElement::ZERO, FieldElement::ONE, FieldElement::ZERO]];
    for u in f.enumerate_elements() {
        for v in f.enumerate_elements() {
            columns.push(vec![u, v, qc.g(u, v), FieldElement::ONE]);
        }
    }
    let check: Vec<_> = [0, 1, 2, q as usize + 1].iter().map(|&c| columns[c].clone()).collect();
    if determinant(&f, &check)?.is_zero() {
        return Err(Error::Verification(format!("columns 0, 1, 2, {} are dependent", q + 1)));
    }
    GeneratorColumns::new(f, 4, columns, 3)
}

/// `OA(q^4, k, q, 3)` from [`q4_matrix`].
pub fn q4_oa(q: u64, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    let gc = q4_matrix(q)?;
    if k < 4 || k > gc.len() {
        return Err(Error::Precondition(format!("k = {k} outside 4..={}", gc.len())));
    }
    linear_oa(&gc, k)
}

/// `OA(q^t, k, q, t)` from [`bush_columns`].
pub fn bush_oa(q: u64, t: usize, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    let gc = bush_columns(q, t)?;
    if k < t || k > gc.len() {
        return Err(Error::Precondition(format!("k = {k} outside {t}..={}", gc.len())));
    }
    linear_oa(&gc, k)
}

/// `OA(q^n, k, q, 2)` from [`projective_columns`].
pub fn projective_oa(q: u64, n: usize, k: usize) -> Result<(SymbolMatrix, ResolvableProjection)> {
    let gc = projective_columns(q, n)?;
    if k < n || k > gc.len() {
        return Err(Error::Precondition(format!("k = {k} outside {n}..={}", gc.len())));
    }
    linear_oa(&gc, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::verify_strength;
    use crate::expand::{expand_shift, find_resolvable_projection};
    use crate::array::verify_large_set;

    #[test]
    fn sylvester_small() {
        let s1 = sylvester(1).unwrap();
        assert_eq!(s1.entries, vec![1, 1, 1, -1]);
        let s2 = sylvester(2).unwrap();
        assert_eq!(
            s2.entries,
            vec![1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1]
        );
        for n in 1..=6 {
            let s = sylvester(n).unwrap();
            assert!(s.is_hadamard());
            assert_eq!(s, kronecker_power(n).unwrap());
        }
        assert!(sylvester(0).is_err());
        assert!(sylvester(11).is_err());
    }

    #[test]
    fn sylvester_two() {
        let (a, p) = sylvester_oa2(2, 3).unwrap();
        assert_eq!(a.runs(), 4);
        // Labels 01, 10, 11 in order; the weight-one ones are 01 and 10.
        assert_eq!(p.columns, vec![0, 1]);
        let (a, p) = sylvester_oa2(3, 7).unwrap();
        assert_eq!(p.columns, vec![0, 1, 3]);
        assert_eq!(find_resolvable_projection(&a).unwrap().unwrap().columns, p.columns);
        assert_eq!(expand_shift(&a, &p).unwrap().len(), 16);
        let (a, _) = sylvester_oa2(4, 15).unwrap();
        assert!(verify_strength(&a, 2).unwrap().passed());
        assert!(!verify_strength(&a, 3).unwrap().passed());
        assert!(sylvester_oa2(3, 2).is_err());
        assert!(sylvester_oa2(3, 8).is_err());
        assert!(sylvester_oa2(1, 1).is_err());
    }

    #[test]
    fn sylvester_three() {
        let (a, p) = sylvester_oa3(2, 4).unwrap();
        assert_eq!((a.runs(), a.k()), (8, 4));
        assert_eq!(p.columns, vec![0, 1, 2]);
        let (a, p) = sylvester_oa3(3, 7).unwrap();
        assert_eq!(a.runs(), 16);
        let l = expand_shift(&a, &p).unwrap();
        assert!(verify_large_set(&l, 3).unwrap().passed());
        let (a, _) = sylvester_oa3(4, 16).unwrap();
        assert_eq!(a.runs(), 32);
        assert!(sylvester_oa3(3, 3).is_err());
        assert!(sylvester_oa3(3, 9).is_err());
    }

    #[test]
    fn linear_algebra() {
        let f = field_of_order(3).unwrap();
        let e = |d: &[u32]| vector(&f, d);
        assert_eq!(rank(&f, &[e(&[1, 2]), e(&[2, 1])]), 1);
        assert_eq!(rank(&f, &[e(&[1, 0]), e(&[1, 1])]), 2);
        assert_eq!(determinant(&f, &[e(&[1, 0]), e(&[1, 1])]).unwrap(), FieldElement(1));
        assert_eq!(determinant(&f, &[e(&[0, 1]), e(&[1, 0])]).unwrap(), FieldElement(2));
        assert_eq!(determinant(&f, &[e(&[1, 2]), e(&[2, 1])]).unwrap(), FieldElement(0));
    }

    #[test]
    fn linear_examples() {
        let gc = projective_columns(2, 3).unwrap();
        assert_eq!(gc.len(), 7);
        let (a, _) = linear_oa(&gc, 7).unwrap();
        assert_eq!(a.runs(), 8);
        let gc = projective_columns(3, 2).unwrap();
        assert_eq!(gc.len(), 4);
        let (a, p) = linear_oa(&gc, 4).unwrap();
        assert_eq!(a.runs(), 9);
        assert_eq!(expand_shift(&a, &p).unwrap().len(), 9);
        assert_eq!(projective_columns(4, 2).unwrap().len(), 5);
        let (a, _) = bush_oa(4, 3, 6).unwrap();
        assert_eq!((a.runs(), a.k()), (64, 6));
        assert!(verify_strength(&a, 3).unwrap().passed());
        assert!(linear_oa(&gc, 5).is_err());
    }

    #[test]
    fn linear_arrays_are_codes() {
        let (a, _) = projective_oa(3, 3, 13).unwrap();
        assert!(a.row(0).iter().all(|&s| s == 0));
        let rows: std::collections::HashSet<Vec<u32>> = a.rows().map(|r| r.to_vec()).collect();
        let f = field_of_order(3).unwrap();
        for (x, y) in [(1, 2), (5, 17), (20, 26)] {
            let sum: Vec<u32> =
                a.row(x).iter().zip(a.row(y)).map(|(&p, &q)| f.add(FieldElement(p), FieldElement(q)).0).collect();
            assert!(rows.contains(&sum));
        }
    }

    #[test]
    fn bush_counts() {
        assert_eq!(bush_columns(3, 3).unwrap().len(), 4);
        assert_eq!(bush_columns(4, 3).unwrap().len(), 6);
        assert_eq!(bush_columns(5, 4).unwrap().len(), 6);
        assert!(bush_columns(3, 5).is_err());
        assert!(bush_columns(3, 1).is_err());
    }

    #[test]
    fn quadratic_coefficients() {
        assert_eq!(quad_coefficient(3).unwrap().a(), FieldElement(0));
        assert_eq!(quad_coefficient(5).unwrap().a(), FieldElement(1));
        assert_eq!(quad_coefficient(4).unwrap().a(), FieldElement(2));
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32] {
            assert!(quad_coefficient(q).unwrap().find_zero().is_none(), "q = {q}");
        }
        assert!(quad_coefficient(2).is_err());
    }

    #[test]
    fn q4_matrix_small() {
        let gc = q4_matrix(3).unwrap();
        assert_eq!(gc.len(), 10);
        assert!(gc.exhaustively_verified());
        let cols: Vec<_> = [0, 1, 2, 4].iter().map(|&c| gc.columns()[c].clone()).collect();
        let f = gc.field();
        assert_eq!(determinant(f, &cols).unwrap(), f.neg(FieldElement::ONE));
        assert_eq!(&gc.independent_first_order()[..4], &[0, 1, 2, 4]);
        assert_eq!(q4_matrix(4).unwrap().len(), 17);
    }
}
