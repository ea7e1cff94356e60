//! The `cra-records 1` text format.
//!
//! One record per line, fields separated by tabs. A stream starts with the
//! header `cra-records<TAB>1`. An atom structure is written as
//!
//! ```text
//! algebra  <atom count>
//! atom     <id>  <label>  <1 if identity atom, else 0>  <converse id>
//! compose  <a>  <b>  <comma-separated atom ids, or ->
//! ```
//!
//! with one `atom` line per atom and one `compose` line per ordered pair of
//! atoms, both in ascending order. Reports use
//!
//! ```text
//! failure  <condition>  <location>  <witness>
//! note     <text>
//! verdict  pass|fail
//! ```
//!
//! Other commands add their own record kinds; readers skip kinds they do not
//! know.

use std::fmt::Write as _;

use thiserror::Error;

use crate::algebra::{AlgebraError, AtomStructure, FiniteRelationAlgebra};
use crate::report::ConditionReport;

pub const HEADER: &str = "cra-records\t1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("no algebra record")]
    MissingAlgebra,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Replaces tabs and line breaks so a field stays on its line.
pub fn field(text: &str) -> String {
    text.replace(['\t', '\n', '\r'], " ")
}

pub fn write_algebra(out: &mut String, algebra: &FiniteRelationAlgebra) {
    let s = algebra.structure();
    let n = s.atom_count();
    writeln!(out, "algebra\t{n}").unwrap();
    for a in 0..n {
        writeln!(
            out,
            "atom\t{a}\t{}\t{}\t{}",
            field(s.label(a)),
            s.is_identity_atom(a) as u8,
            s.converse(a)
        )
        .unwrap();
    }
    for a in 0..n {
        for b in 0..n {
            let c = s.compose(a, b);
            let list = if c.is_empty() {
                "-".to_string()
            } else {
                c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            writeln!(out, "compose\t{a}\t{b}\t{list}").unwrap();
        }
    }
}

pub fn write_report(out: &mut String, report: &ConditionReport) {
    for f in &report.failures {
        writeln!(out, "failure\t{}\t{}\t{}", f.condition, f.location, field(&f.witness)).unwrap();
    }
    for note in &report.notes {
        writeln!(out, "note\t{}", field(note)).unwrap();
    }
}

pub fn write_verdict(out: &mut String, pass: bool) {
    writeln!(out, "verdict\t{}", if pass { "pass" } else { "fail" }).unwrap();
}

/// Reads the first algebra of a record stream.
pub fn parse_algebra(text: &str) -> Result<FiniteRelationAlgebra, RecordError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    if lines.next().map(|(_, l)| l) != Some(HEADER) {
        return Err(RecordError::Syntax {
            line: 1,
            message: format!("expected header {HEADER:?}"),
        });
    }
    let syntax = |line: usize, message: String| RecordError::Syntax { line, message };
    let number = |line: usize, s: &str| s.parse::<usize>().map_err(|_| syntax(line, format!("not a number: {s:?}")));

    let mut count = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut identity = Vec::new();
    let mut converse: Vec<Option<usize>> = Vec::new();
    let mut table: Vec<Option<Vec<usize>>> = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split('\t').collect();
        match fields[0] {
            "algebra" if count.is_none() => {
                let [_, n] = fields[..] else {
                    return Err(syntax(line, "algebra takes one field".into()));
                };
                let n = number(line, n)?;
                count = Some(n);
                labels = vec![None; n];
                converse = vec![None; n];
                table = vec![None; n * n];
            }
            "algebra" => break,
            "atom" => {
                let n = count.ok_or_else(|| syntax(line, "atom before algebra".into()))?;
                let [_, id, label, ident, conv] = fields[..] else {
                    return Err(syntax(line, "atom takes four fields".into()));
                };
                let id = number(line, id)?;
                if id >= n || labels[id].is_some() {
                    return Err(syntax(line, format!("bad or repeated atom id {id}")));
                }
                labels[id] = Some(label.to_string());
                match ident {
                    "1" => identity.push(id),
                    "0" => {}
                    other => return Err(syntax(line, format!("identity flag {other:?}"))),
                }
                converse[id] = Some(number(line, conv)?);
            }
            "compose" => {
                let n = count.ok_or_else(|| syntax(line, "compose before algebra".into()))?;
                let [_, a, b, list] = fields[..] else {
                    return Err(syntax(line, "compose takes three fields".into()));
                };
                let (a, b) = (number(line, a)?, number(line, b)?);
                if a >= n || b >= n || table[a * n + b].is_some() {
                    return Err(syntax(line, format!("bad or repeated pair ({a},{b})")));
                }
                let atoms = if list == "-" {
                    Vec::new()
                } else {
                    list.split(',').map(|c| number(line, c)).collect::<Result<_, _>>()?
                };
                table[a * n + b] = Some(atoms);
            }
            _ => {}
        }
    }
    let n = count.ok_or(RecordError::MissingAlgebra)?;
    let last = text.lines().count();
    let labels: Vec<String> = labels
        .into_iter()
        .enumerate()
        .map(|(a, l)| l.ok_or_else(|| syntax(last, format!("atom {a} missing"))))
        .collect::<Result<_, _>>()?;
    let converse: Vec<usize> = converse.into_iter().map(|c| c.unwrap()).collect();
    if let Some(i) = table.iter().position(|c| c.is_none()) {
        return Err(syntax(last, format!("compose ({},{}) missing", i / n, i % n)));
    }
    let structure = AtomStructure::new(n, identity, converse, |a, b| table[a * n + b].clone().unwrap())?
        .with_labels(labels)?;
    Ok(FiniteRelationAlgebra::new(structure))
}
