//! Plain-text interchange for arrays and large sets.
//!
//! ```text
//! OA N=4 t=2 levels=2^3
//! 0 0 0
//! 0 1 1
//! 1 0 1
//! 1 1 0
//! ```
//!
//! A large set is `LOA M=<int>` followed by `M` such blocks separated by one
//! blank line.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::array::{LargeSet, LevelProfile, SymbolMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Artifact {
    Oa(SymbolMatrix),
    Loa(LargeSet),
}

impl Artifact {
    pub fn into_oa(self) -> Result<SymbolMatrix> {
        match self {
            Artifact::Oa(a) => Ok(a),
            Artifact::Loa(_) => Err(Error::Mismatch("expected an OA file, found a large set".into())),
        }
    }

    pub fn into_loa(self) -> Result<LargeSet> {
        match self {
            Artifact::Loa(l) => Ok(l),
            Artifact::Oa(_) => Err(Error::Mismatch("expected a large-set file, found a single OA".into())),
        }
    }
}

impl From<SymbolMatrix> for Artifact {
    fn from(a: SymbolMatrix) -> Self {
        Artifact::Oa(a)
    }
}

impl From<LargeSet> for Artifact {
    fn from(l: LargeSet) -> Self {
        Artifact::Loa(l)
    }
}

pub fn format_oa(a: &SymbolMatrix) -> String {
    let mut out = String::with_capacity(a.runs() * a.k() * 3 + 40);
    write_oa_block(&mut out, a);
    out
}

fn write_oa_block(out: &mut String, a: &SymbolMatrix) {
    let _ = writeln!(out, "OA N={} t={} levels={}", a.runs(), a.strength(), a.profile());
    for row in a.rows() {
        for (j, s) in row.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{s}");
        }
        out.push('\n');
    }
}

pub fn format_loa(l: &LargeSet) -> String {
    let mut out = format!("LOA M={}\n", l.len());
    for (i, m) in l.members().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_oa_block(&mut out, m);
    }
    out
}

pub fn format_artifact(x: &Artifact) -> String {
    match x {
        Artifact::Oa(a) => format_oa(a),
        Artifact::Loa(l) => format_loa(l),
    }
}

pub fn write_array(x: &Artifact, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_artifact(x))?;
    Ok(())
}

pub fn read_array(path: impl AsRef<Path>) -> Result<Artifact> {
    parse_array(&fs::read_to_string(path)?)
}

fn header_fields<'a>(line_no: usize, rest: &'a str, keys: &[&str]) -> Result<Vec<&'a str>> {
    let mut values = vec![None; keys.len()];
    for field in rest.split_whitespace() {
        let (key, value) =
            field.split_once('=').ok_or_else(|| Error::parse(line_no, format!("malformed header field `{field}`")))?;
        let slot = keys
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| Error::parse(line_no, format!("unknown header field `{key}`")))?;
        if values[slot].replace(value).is_some() {
            return Err(Error::parse(line_no, format!("repeated header field `{key}`")));
        }
    }
    keys.iter()
        .zip(values)
        .map(|(k, v)| v.ok_or_else(|| Error::parse(line_no, format!("header lacks `{k}=`"))))
        .collect()
}

fn parse_int<T: std::str::FromStr>(line_no: usize, what: &str, text: &str) -> Result<T> {
    text.parse().map_err(|_| Error::parse(line_no, format!("{what} `{text}` is not a valid integer")))
}

struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    /// 1-based number of the next line.
    fn number(&self) -> usize {
        self.pos + 1
    }

    fn next(&mut self) -> Option<&'a str> {
        let line = self.lines.get(self.pos).copied();
        if line.is_some() {
            self.pos += 1;
        }
        line
    }

    fn at_end(&self) -> bool {
        self.pos >= self.lines.len()
    }
}

fn parse_block(lines: &mut Lines<'_>) -> Result<SymbolMatrix> {
    let line_no = lines.number();
    let header = lines.next().ok_or_else(|| Error::parse(line_no, "expected an `OA` header, found end of input"))?;
    let rest = header
        .strip_prefix("OA ")
        .ok_or_else(|| Error::parse(line_no, format!("expected an `OA` header, found `{header}`")))?;
    let fields = header_fields(line_no, rest, &["N", "t", "levels"])?;
    let n: usize = parse_int(line_no, "N", fields[0])?;
    let t: usize = parse_int(line_no, "t", fields[1])?;
    let profile = LevelProfile::parse(fields[2]).map_err(|e| Error::parse(line_no, e.to_string()))?;
    let k = profile.k();
    if t > k {
        return Err(Error::parse(line_no, format!("strength {t} exceeds {k} columns")));
    }
    let mut cells = Vec::with_capacity(n * k);
    for r in 0..n {
        let line_no = lines.number();
        let line = lines
            .next()
            .filter(|l| !l.trim().is_empty())
            .ok_or_else(|| Error::parse(line_no, format!("expected row {} of {n}", r + 1)))?;
        let mut count = 0;
        for token in line.split_whitespace() {
            if count == k {
                return Err(Error::parse(line_no, format!("row has more than {k} symbols")));
            }
            let symbol: u32 = parse_int(line_no, "symbol", token)?;
            let levels = profile.level(count);
            if symbol >= levels {
                return Err(Error::parse(
                    line_no,
                    format!("symbol {symbol} in column {count} outside 0..{levels}"),
                ));
            }
            cells.push(symbol);
            count += 1;
        }
        if count != k {
            return Err(Error::parse(line_no, format!("row has {count} symbols, expected {k}")));
        }
    }
    SymbolMatrix::from_cells(profile, t, cells)
}

/// Parses either format; errors carry 1-based line numbers.
pub fn parse_array(text: &str) -> Result<Artifact> {
    let mut lines = Lines { lines: text.lines().collect(), pos: 0 };
    let first = lines.lines.first().copied().unwrap_or("");
    if let Some(rest) = first.strip_prefix("LOA ") {
        lines.next();
        let m: usize = parse_int(1, "M", header_fields(1, rest, &["M"])?[0])?;
        let mut members = Vec::with_capacity(m);
        for i in 0..m {
            if i > 0 {
                let line_no = lines.number();
                match lines.next() {
                    Some(l) if l.trim().is_empty() => {}
                    _ => return Err(Error::parse(line_no, "expected one blank line between blocks")),
                }
            }
            members.push(parse_block(&mut lines)?);
        }
        expect_end(&mut lines)?;
        let l = LargeSet::new(members).map_err(|e| Error::parse(1, e.to_string()))?;
        Ok(Artifact::Loa(l))
    } else {
        let a = parse_block(&mut lines)?;
        expect_end(&mut lines)?;
        Ok(Artifact::Oa(a))
    }
}

fn expect_end(lines: &mut Lines<'_>) -> Result<()> {
    while !lines.at_end() {
        let line_no = lines.number();
        if !lines.next().unwrap_or("").trim().is_empty() {
            return Err(Error::parse(line_no, "unexpected content after the last block"));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EVEN: &str = "OA N=4 t=2 levels=2^3\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n";

    #[test]
    fn reads_oa() {
        let a = parse_array(EVEN).unwrap().into_oa().unwrap();
        assert_eq!(a.runs(), 4);
        assert_eq!(a.strength(), 2);
        assert_eq!(format_oa(&a), EVEN);
    }

    #[test]
    fn reads_loa() {
        let text = format!("LOA M=2\n{EVEN}\nOA N=4 t=2 levels=2^3\n0 0 1\n0 1 0\n1 0 0\n1 1 1\n");
        let l = parse_array(&text).unwrap().into_loa().unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(format_loa(&l), text);
    }

    #[test]
    fn errors_carry_lines() {
        let bad = "OA N=2 t=1 levels=4^1\n0\n5\n";
        match parse_array(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_array("OA N=2 t=1 levels=2^2\n0 1\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match parse_array("OA N=2 t=1\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse_array("OA N=3 t=1 levels=2^1\n0\n1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let two_blanks = format!("LOA M=2\n{EVEN}\n\n{EVEN}");
        assert!(matches!(parse_array(&two_blanks), Err(Error::Parse { line: 8, .. })));
    }
}
