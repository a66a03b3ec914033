//! Transcribed source arrays with their marked resolvable columns.

use std::fs;
use std::path::Path;

use crate::array::{verify_large_set, verify_strength, LevelProfile, SymbolMatrix};
use crate::compose::describe_large_set_failure;
use crate::error::{Error, Result};
use crate::expand::{check_resolvable_projection, expand_shift, find_resolvable_projection, ResolvableProjection};
use crate::io::parse_array;

/// A transcribed array and the columns marked as resolvable.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub array: SymbolMatrix,
    pub marked_columns: Vec<usize>,
    /// Set when the marked columns were found by search rather than supplied.
    pub inferred: bool,
    pub expected: (usize, LevelProfile, usize),
}

struct Builtin {
    name: &'static str,
    text: &'static str,
    marked: &'static [usize],
}

macro_rules! builtin {
    ($name:literal, $file:literal, $marked:expr) => {
        Builtin { name: $name, text: include_str!(concat!("../fixtures/", $file)), marked: $marked }
    };
}

const BUILTIN: &[Builtin] = &[
    builtin!("oa20", "oa20_2e8_5e1.oa", &[0, 1, 8]),
    builtin!("oa24", "oa24_2e13_3e1_4e1.oa", &[12, 13, 14]),
    builtin!("oa28", "oa28_2e12_7e1.oa", &[0, 11, 12]),
    builtin!("oa44", "oa44_2e16_11e1.oa", &[0, 11, 16]),
    builtin!("oa40", "oa40_5e1_2e6.oa", &[0, 1, 2, 3]),
    builtin!("oa48a", "oa48_4e1_3e1_2e4.oa", &[0, 1, 2, 3]),
    builtin!("oa48b", "oa48_3e1_2e9.oa", &[0, 1, 2, 7, 9]),
    builtin!("oa54", "oa54_3e5_2e1.oa", &[0, 1, 2, 5]),
];

/// Names of the built-in fixtures, in corpus order.
pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|b| b.name).collect()
}

fn from_text(name: &str, text: &str, marked: Option<Vec<usize>>) -> Result<Fixture> {
    let array = parse_array(text)
        .and_then(|a| a.into_oa())
        .map_err(|e| Error::Precondition(format!("fixture {name}: {e}")))?;
    let expected = (array.runs(), array.profile().clone(), array.strength());
    let (marked_columns, inferred) = match marked {
        Some(m) => (m, false),
        None => match find_resolvable_projection(&array)? {
            Some(p) => (p.columns, true),
            None => (Vec::new(), true),
        },
    };
    Ok(Fixture { name: name.to_string(), array, marked_columns, inferred, expected })
}

/// The built-in fixture called `name`.
pub fn fixture(name: &str) -> Result<Fixture> {
    let b = BUILTIN
        .iter()
        .find(|b| b.name == name)
        .ok_or_else(|| Error::Unknown { kind: "fixture", name: name.to_string() })?;
    from_text(b.name, b.text, Some(b.marked.to_vec()))
}

/// All built-in fixtures.
pub fn builtin_corpus() -> Result<Vec<Fixture>> {
    BUILTIN.iter().map(|b| fixture(b.name)).collect()
}

/// Reads every `*.oa` file in `dir`. Files named after a built-in fixture
/// reuse its marked columns; others have them inferred.
pub fn load_corpus(dir: impl AsRef<Path>) -> Result<Vec<Fixture>> {
    let mut paths: Vec<_> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "oa"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("").to_string();
            let text = fs::read_to_string(p)?;
            let marked = BUILTIN
                .iter()
                .find(|b| b.name == stem || stem.starts_with(&format!("{}_", b.name)))
                .map(|b| b.marked.to_vec());
            from_text(&stem, &text, marked)
        })
        .collect()
}

impl Fixture {
    /// The marked columns as a checked projection.
    pub fn projection(&self) -> Result<ResolvableProjection> {
        ResolvableProjection::new(&self.array, self.marked_columns.clone())
    }
}

#[derive(Clone, Debug)]
pub struct FixtureOutcome {
    pub name: String,
    pub strength_ok: bool,
    pub projection_ok: bool,
    pub expansion_ok: bool,
    pub members: usize,
    pub inferred: bool,
    /// First defect found, with cell coordinates when it is an imbalance.
    pub defect: Option<String>,
}

impl FixtureOutcome {
    pub fn passed(&self) -> bool {
        self.strength_ok && self.projection_ok && self.expansion_ok
    }
}

#[derive(Clone, Debug)]
pub enum CorpusStatus {
    /// The corpus was empty; nothing was checked.
    NoFixtures,
    Checked(Vec<FixtureOutcome>),
}

impl CorpusStatus {
    pub fn passed(&self) -> bool {
        matches!(self, CorpusStatus::Checked(v) if v.iter().all(FixtureOutcome::passed))
    }
}

/// Rows of `a` contributing to the first failing tuple, as `(row, column)` cells.
fn localize(a: &SymbolMatrix, columns: &[usize], tuple: &[u32]) -> Vec<(usize, usize)> {
    a.rows()
        .enumerate()
        .filter(|(_, row)| columns.iter().zip(tuple).all(|(&c, &s)| row[c] == s))
        .flat_map(|(r, _)| columns.iter().map(move |&c| (r, c)))
        .take(12)
        .collect()
}

pub fn check_fixture(f: &Fixture) -> Result<FixtureOutcome> {
    let a = &f.array;
    let report = verify_strength(a, a.strength())?;
    let mut defect = None;
    if let Some(first) = report.failures.first() {
        let mut msg = first.to_string();
        if let crate::array::StrengthFailure::Imbalance { columns, tuple, .. } = first {
            msg.push_str(&format!("; cells {:?}", localize(a, columns, tuple)));
        }
        defect = Some(msg);
    }
    let strength_ok = report.passed();
    let check = check_resolvable_projection(a, &f.marked_columns);
    let projection_ok = check.passed();
    if let (None, Some(d)) = (&defect, &check.defect) {
        defect = Some(format!("marked columns {:?}: {d}", f.marked_columns));
    }
    let (mut expansion_ok, mut members) = (false, 0);
    if strength_ok && projection_ok {
        let proj = ResolvableProjection { columns: f.marked_columns.clone(), level_product: a.runs() as u64 };
        let l = expand_shift(a, &proj)?;
        members = l.len();
        let r = verify_large_set(&l, a.strength())?;
        expansion_ok = r.passed();
        if !expansion_ok {
            defect = Some(describe_large_set_failure(&r));
        }
    }
    Ok(FixtureOutcome {
        name: f.name.clone(),
        strength_ok,
        projection_ok,
        expansion_ok,
        members,
        inferred: f.inferred,
        defect,
    })
}

/// Strength, marked-column and expansion checks over a corpus.
pub fn fixtures_check(corpus: &[Fixture]) -> Result<CorpusStatus> {
    if corpus.is_empty() {
        return Ok(CorpusStatus::NoFixtures);
    }
    Ok(CorpusStatus::Checked(corpus.iter().map(check_fixture).collect::<Result<_>>()?))
}
