//! Text formats for monoids and acts.
//!
//! ```text
//! # comment
//! monoid 3
//! 0 1 2
//! 1 1 2
//! 2 1 2
//! ```
//!
//! An act file starts with `act <monoid-file> <m>` followed by one row of `m`
//! integers per monoid element; row `s`, column `x` holds `s·x`.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::act::Act;
use crate::error::{Error, Result};
use crate::monoid::Monoid;

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_row(line: usize, text: &str, expected: usize) -> Result<Vec<usize>> {
    let row = text
        .split_whitespace()
        .map(|w| {
            w.parse::<usize>()
                .map_err(|_| parse_err(line, format!("`{w}` is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    if row.len() != expected {
        return Err(parse_err(
            line,
            format!("expected {expected} entries, found {}", row.len()),
        ));
    }
    Ok(row)
}

fn parse_count(line: usize, word: Option<&str>) -> Result<usize> {
    let word = word.ok_or_else(|| parse_err(line, "missing size"))?;
    word.parse()
        .map_err(|_| parse_err(line, format!("`{word}` is not a size")))
}

pub fn parse_monoid(text: &str) -> Result<Monoid> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("monoid") {
        return Err(parse_err(hl, "expected header `monoid <n>`"));
    }
    let n = parse_count(hl, words.next())?;
    if words.next().is_some() {
        return Err(parse_err(hl, "trailing words after header"));
    }
    let mut rows = Vec::with_capacity(n);
    let mut last = hl;
    for (ln, text) in lines {
        if rows.len() == n {
            return Err(parse_err(ln, "more rows than declared"));
        }
        rows.push(parse_row(ln, text, n)?);
        last = ln;
    }
    if rows.len() != n {
        return Err(parse_err(
            last,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    Monoid::from_table(&rows).map_err(|e| match e {
        Error::MalformedTable(msg) => parse_err(hl, msg),
        other => other,
    })
}

/// Header of an act file: the referenced monoid file and the carrier size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActHeader {
    pub monoid_ref: String,
    pub size: usize,
}

pub fn parse_act_header(text: &str) -> Result<ActHeader> {
    let (hl, header) = content_lines(text)
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("act") {
        return Err(parse_err(hl, "expected header `act <monoid-file> <m>`"));
    }
    let monoid_ref = words
        .next()
        .ok_or_else(|| parse_err(hl, "missing monoid file"))?
        .to_string();
    let size = parse_count(hl, words.next())?;
    if words.next().is_some() {
        return Err(parse_err(hl, "trailing words after header"));
    }
    Ok(ActHeader { monoid_ref, size })
}

/// Parses an act file against an already loaded monoid.
pub fn parse_act(text: &str, monoid: Arc<Monoid>) -> Result<Act> {
    let header = parse_act_header(text)?;
    let n = monoid.size();
    let mut rows = Vec::with_capacity(n);
    let mut last = 1;
    for (ln, text) in content_lines(text).skip(1) {
        if rows.len() == n {
            return Err(parse_err(ln, "more rows than monoid elements"));
        }
        rows.push(parse_row(ln, text, header.size)?);
        last = ln;
    }
    if header.size == 0 && rows.is_empty() {
        rows = vec![Vec::new(); n];
    }
    if rows.len() != n {
        return Err(parse_err(
            last,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    Act::from_table(monoid, &rows)
}

pub fn format_monoid(monoid: &Monoid) -> String {
    let mut out = format!("monoid {}\n", monoid.size());
    for row in monoid.rows() {
        out.push_str(&join(row));
        out.push('\n');
    }
    out
}

/// Act file text; a size-0 act has no rows.
pub fn format_act(act: &Act, monoid_ref: &str) -> String {
    let mut out = format!("act {} {}\n", monoid_ref, act.size());
    if act.size() > 0 {
        for row in act.rows() {
            out.push_str(&join(&row));
            out.push('\n');
        }
    }
    out
}

fn join(row: &[usize]) -> String {
    row.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_monoid(path: &Path) -> Result<Monoid> {
    parse_monoid(&read(path)?)
}

/// A loaded act file with the resolved monoid path and raw text.
#[derive(Clone, Debug)]
pub struct LoadedAct {
    pub act: Act,
    pub monoid_path: PathBuf,
    pub monoid_ref: String,
    pub text: String,
}

/// Loads an act file; the monoid path is resolved relative to the act file.
pub fn load_act(path: &Path) -> Result<LoadedAct> {
    let text = read(path)?;
    let header = parse_act_header(&text)?;
    let monoid_path = path
        .parent()
        .unwrap_or(Path::new("."))
        .join(&header.monoid_ref);
    let monoid = Arc::new(load_monoid(&monoid_path)?);
    let act = parse_act(&text, monoid)?;
    Ok(LoadedAct {
        act,
        monoid_path,
        monoid_ref: header.monoid_ref,
        text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const RZ3: &str = "# right zero\nmonoid 3\n0 1 2\n1 1 2\n\n2 1 2\n";

    #[test]
    fn monoid_round_trip() {
        let m = parse_monoid(RZ3).unwrap();
        assert_eq!(m.mul(2, 1), 1);
        assert_eq!(parse_monoid(&format_monoid(&m)).unwrap(), m);
    }

    #[test]
    fn monoid_errors_carry_line_numbers() {
        assert_eq!(
            parse_monoid("monoid 2\n0 1\n1 x\n"),
            Err(Error::Parse {
                line: 3,
                msg: "`x` is not a non-negative integer".into()
            })
        );
        assert!(matches!(
            parse_monoid("monoid 2\n0 1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_monoid("monoid 2\n0 1\n1 0\n1 0\n"),
            Err(Error::Parse { line: 4, .. })
        ));
        assert!(matches!(
            parse_monoid("act m 2\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_monoid("monoid 2\n0 1\n1 5\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            parse_monoid("monoid 2\n1 0\n0 1\n"),
            Err(Error::IdentityLawFails(0))
        );
    }

    #[test]
    fn act_round_trip_and_empty() {
        let m = Arc::new(parse_monoid(RZ3).unwrap());
        let text = "act rz3.monoid 3\n0 1 2\n0 1 0\n0 1 1\n";
        let a = parse_act(text, m.clone()).unwrap();
        assert_eq!(format_act(&a, "rz3.monoid"), text);
        let e = parse_act("act rz3.monoid 0\n", m.clone()).unwrap();
        assert!(e.is_empty());
        assert_eq!(format_act(&e, "rz3.monoid"), "act rz3.monoid 0\n");
        assert_eq!(
            parse_act_header(text).unwrap(),
            ActHeader {
                monoid_ref: "rz3.monoid".into(),
                size: 3
            }
        );
        assert!(matches!(
            parse_act("act rz3.monoid 2\n0 1\n", m),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
