//! Relation files and their verification as trivial mutation loops.
//!
//! ```text
//! # X7 relations, 1-based labels
//! index 1
//! let phi1 = (2 3) m2
//! let psi1 = (1 2 3)(4 5 6 7) m3 m2 m1
//! rel phi1_psi1: phi1 = psi1^2 sigma35
//! rel order: phi1^2 psi1 = psi1 phi1^2 = ...
//! ```
//!
//! `let` names may use earlier names. A relation with several sides is the
//! chain of equalities between consecutive sides.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::expr::{parse_expr, GroupOps, RawContext};
use crate::group::presentation::WordEval;
use crate::matrix::ExchangeMatrix;
use crate::seed::{is_trivial_loop, matrix_trail, Mode};
use crate::word::MutationWord;

#[derive(Clone, Debug)]
pub struct NamedRelation {
    pub name: String,
    pub line: usize,
    pub sides: Vec<MutationWord>,
}

#[derive(Clone, Debug, Default)]
pub struct RelationFile {
    pub base: usize,
    pub names: BTreeMap<String, MutationWord>,
    pub relations: Vec<NamedRelation>,
}

impl RelationFile {
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut out = RelationFile::default();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            let trimmed = body.trim_start();
            if trimmed.trim().is_empty() {
                continue;
            }
            let indent = body.len() - trimmed.len();
            let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed.trim_end(), ""));
            let rest_col = indent + key.len() + 2;
            let ctx = RawContext { n: Some(n), base: out.base };
            let eval = |text: &str, col: usize| -> Result<MutationWord> {
                let e = parse_expr(text, &ctx, line, col)?;
                WordEval { n, lets: &out.names }.eval(&e).map_err(|err| match err {
                    Error::Parse { msg, .. } => Error::parse(line, col, msg),
                    other => other,
                })
            };
            match key {
                "index" => match rest.trim() {
                    "0" => out.base = 0,
                    "1" => out.base = 1,
                    _ => return Err(Error::parse(line, rest_col, "index must be 0 or 1")),
                },
                "let" => {
                    let (name, def) = rest
                        .split_once('=')
                        .ok_or_else(|| Error::parse(line, rest_col, "expected 'let name = word'"))?;
                    let name = name.trim();
                    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                        return Err(Error::parse(line, rest_col, format!("invalid name '{name}'")));
                    }
                    let w = eval(def, rest_col + rest.find('=').unwrap_or(0) + 1)?;
                    out.names.insert(name.to_string(), w);
                }
                "rel" => {
                    let (name, body) = rest
                        .split_once(':')
                        .ok_or_else(|| Error::parse(line, rest_col, "expected 'rel name: lhs = rhs'"))?;
                    let mut col = rest_col + name.chars().count() + 1;
                    let mut sides = Vec::new();
                    for piece in body.split('=') {
                        sides.push(eval(piece, col)?);
                        col += piece.chars().count() + 1;
                    }
                    if sides.len() < 2 {
                        return Err(Error::parse(line, rest_col, "a relation needs at least two sides"));
                    }
                    out.relations.push(NamedRelation {
                        name: name.trim().to_string(),
                        line,
                        sides,
                    });
                }
                other => return Err(Error::parse(line, indent + 1, format!("unknown directive '{other}'"))),
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub trivial: bool,
    pub mode: Mode,
    pub lhs_length: usize,
    pub rhs_length: usize,
    pub elapsed_ms: f64,
    /// Matrices along `lhs · rhs⁻¹`, kept only when the loop is not trivial.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub trail: Vec<Vec<Vec<i64>>>,
}

/// Checks `lhs = rhs` at `base`, i.e. that `lhs · rhs⁻¹` is a trivial loop.
pub fn verify_relation(
    base: &ExchangeMatrix,
    lhs: &MutationWord,
    rhs: &MutationWord,
    mode: Mode,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let w = lhs.then_after(&rhs.inverse());
    let report = is_trivial_loop(base, &w, mode)?;
    let trail = if report.trivial {
        Vec::new()
    } else {
        matrix_trail(base, &w)?.iter().map(ExchangeMatrix::rows).collect()
    };
    Ok(VerificationReport {
        name: String::new(),
        trivial: report.trivial,
        mode,
        lhs_length: lhs.len(),
        rhs_length: rhs.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        trail,
    })
}

/// Verifies every equality of every relation in the file; one report per
/// consecutive pair of sides.
pub fn verify_file(base: &ExchangeMatrix, file: &RelationFile, mode: Mode) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for rel in &file.relations {
        for (i, pair) in rel.sides.windows(2).enumerate() {
            let mut r = verify_relation(base, &pair[0], &pair[1], mode)?;
            r.name = if rel.sides.len() == 2 {
                rel.name.clone()
            } else {
                format!("{}#{}", rel.name, i + 1)
            };
            out.push(r);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_verifies_pentagon() {
        let text = "index 1\nlet phi = (1 2) m1\nrel order5: phi^5 = 1\nrel inverse: phi^-1 phi = 1 = phi^5\n";
        let f = RelationFile::parse(2, text).unwrap();
        assert_eq!(f.relations.len(), 2);
        let a2 = ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let reports = verify_file(&a2, &f, Mode::Full).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports.iter().all(|r| r.trivial));
        assert_eq!(reports[1].name, "inverse#1");
    }

    #[test]
    fn nontrivial_relation_keeps_trail() {
        let f = RelationFile::parse(2, "let phi = (0 1) m0\nrel bad: phi^2 = 1\n").unwrap();
        let a2 = ExchangeMatrix::skew_symmetric(vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let r = verify_file(&a2, &f, Mode::CMatrix).unwrap();
        assert!(!r[0].trivial);
        assert_eq!(r[0].trail.len(), 5);
    }

    #[test]
    fn errors_are_positioned() {
        match RelationFile::parse(2, "let a = m0\nrel x: a = b\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(RelationFile::parse(2, "rel x: m0\n").is_err());
        assert!(RelationFile::parse(2, "index 2\n").is_err());
    }
}
