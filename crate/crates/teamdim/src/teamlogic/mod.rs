//! Formula language, parser and lax team-semantics evaluator over finite
//! structures, with family extraction and Lindström quantifier projections.
//!
//! Teams over a variable context `(x_0, …, x_{m−1})` on a universe of size
//! `n` are identified with subsets of a base of size `n^m`: an assignment
//! maps to the row index `Σ s(x_i)·n^i` (variable 0 least significant).

mod ast;
mod classes;
mod eval;
mod family;
mod parser;

pub use ast::{formula_free_vars, Formula};
pub use classes::{standard_classes, ClassRegistry, QuantifierClass};
pub use eval::{naive_satisfies, satisfies, AtomRegistry, Evaluator};
pub use family::{
    check_formula_locality, dim_function, lindstrom_apply, proper_projection, shuffle_tuple,
    split_tuple, team_family, team_family_composed, DimKind,
};
pub use parser::parse_formula;

use crate::{Error, Result};
use std::collections::BTreeMap;

/// A finite first-order structure: universe `{0, …, n−1}` plus named
/// relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    universe: usize,
    relations: BTreeMap<String, Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub arity: usize,
    pub tuples: std::collections::BTreeSet<Vec<u8>>,
}

impl Structure {
    /// A structure with equality only.
    pub fn bare(universe: usize) -> Result<Self> {
        if universe == 0 || universe > 255 {
            return Err(Error::Invalid(format!(
                "universe size {universe} out of range"
            )));
        }
        Ok(Structure {
            universe,
            relations: BTreeMap::new(),
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, &Relation)> {
        self.relations.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn add_relation(&mut self, name: &str, arity: usize, tuples: Vec<Vec<u8>>) -> Result<()> {
        if self.relations.contains_key(name) {
            return Err(Error::Invalid(format!("relation `{name}` already defined")));
        }
        let mut set = std::collections::BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::Arity(format!(
                    "tuple of length {} in relation `{name}` of arity {arity}",
                    t.len()
                )));
            }
            if t.iter().any(|&v| v as usize >= self.universe) {
                return Err(Error::Invalid(format!(
                    "tuple value out of universe in relation `{name}`"
                )));
            }
            set.insert(t);
        }
        self.relations
            .insert(name.to_string(), Relation { arity, tuples: set });
        Ok(())
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn holds(&self, name: &str, tuple: &[u8]) -> Result<bool> {
        let rel = self
            .relations
            .get(name)
            .ok_or_else(|| Error::Invalid(format!("unknown relation `{name}`")))?;
        if rel.arity != tuple.len() {
            return Err(Error::Arity(format!(
                "relation `{name}` has arity {}, applied to {} variables",
                rel.arity,
                tuple.len()
            )));
        }
        Ok(rel.tuples.contains(tuple))
    }

    /// Parse the model file format: `universe n`, then per relation
    /// `rel NAME ARITY`, tuple lines, and `end`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().peekable();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
        let n: usize = header
            .trim()
            .strip_prefix("universe ")
            .ok_or_else(|| Error::parse(1, 1, "expected `universe n` header"))?
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, 1, "invalid universe size"))?;
        let mut st = Structure::bare(n)?;
        while let Some((idx, line)) = lines.next() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "rel" {
                return Err(Error::parse(idx + 1, 1, "expected `rel NAME ARITY`"));
            }
            let name = parts[1];
            let arity: usize = parts[2]
                .parse()
                .map_err(|_| Error::parse(idx + 1, 1, "invalid arity"))?;
            let mut tuples = Vec::new();
            loop {
                let Some((tidx, tline)) = lines.next() else {
                    return Err(Error::parse(idx + 1, 1, "relation not closed with `end`"));
                };
                let tline = tline.trim();
                if tline == "end" {
                    break;
                }
                if tline.is_empty() {
                    continue;
                }
                let tuple = parse_tuple(tline, tidx + 1, n)?;
                if tuple.len() != arity {
                    return Err(Error::parse(tidx + 1, 1, format!("expected {arity} values")));
                }
                tuples.push(tuple);
            }
            st.add_relation(name, arity, tuples)?;
        }
        Ok(st)
    }
}

fn parse_tuple(line: &str, lineno: usize, universe: usize) -> Result<Vec<u8>> {
    line.split_whitespace()
        .map(|tok| {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(lineno, 1, format!("invalid value `{tok}`")))?;
            if v >= universe {
                return Err(Error::parse(
                    lineno,
                    1,
                    format!("value {v} out of universe of size {universe}"),
                ));
            }
            Ok(v as u8)
        })
        .collect()
}

/// A team: an ordered variable context plus a set of value rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Team {
    vars: Vec<String>,
    rows: Vec<Vec<u8>>,
}

impl Team {
    pub fn new(vars: Vec<String>, mut rows: Vec<Vec<u8>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(Error::Invalid(format!("duplicate variable `{v}`")));
            }
        }
        for r in &rows {
            if r.len() != vars.len() {
                return Err(Error::Arity(format!(
                    "row of length {} in a team over {} variables",
                    r.len(),
                    vars.len()
                )));
            }
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(Team { vars, rows })
    }

    pub fn empty(vars: Vec<String>) -> Result<Self> {
        Team::new(vars, Vec::new())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Restriction to a subsequence of the variables.
    pub fn restrict(&self, vars: &[String]) -> Result<Team> {
        let positions: Vec<usize> = vars
            .iter()
            .map(|v| {
                self.vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnboundVariable(v.clone()))
            })
            .collect::<Result<_>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| positions.iter().map(|&p| r[p]).collect())
            .collect();
        Team::new(vars.to_vec(), rows)
    }

    /// Decode a subset of the base `M^m` into a team, row index
    /// `Σ s(x_i)·n^i`.
    pub fn from_mask(vars: Vec<String>, universe: usize, mask: u32) -> Result<Self> {
        let m = vars.len();
        let rows = (0..pow_checked(universe, m)?)
            .filter(|&r| mask >> r & 1 == 1)
            .map(|r| decode_row(r, universe, m))
            .collect();
        Team::new(vars, rows)
    }

    /// Encode the team as a subset of the base `M^m`.
    pub fn to_mask(&self, universe: usize) -> Result<u32> {
        pow_checked(universe, self.vars.len())?;
        let mut mask = 0u32;
        for r in &self.rows {
            mask |= 1 << encode_row(r, universe);
        }
        Ok(mask)
    }

    /// Parse the team file format: `vars x y …`, then tuple lines.
    pub fn parse(text: &str, universe: usize) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, 1, "empty input"))?;
        let header = header.trim();
        let rest = header
            .strip_prefix("vars")
            .ok_or_else(|| Error::parse(1, 1, "expected `vars x y …` header"))?;
        let vars: Vec<String> = rest.split_whitespace().map(|s| s.to_string()).collect();
        if vars.is_empty() {
            return Err(Error::parse(1, 1, "team needs at least one variable"));
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = parse_tuple(line, idx + 1, universe)?;
            if row.len() != vars.len() {
                return Err(Error::parse(
                    idx + 1,
                    1,
                    format!("expected {} values", vars.len()),
                ));
            }
            rows.push(row);
        }
        Team::new(vars, rows)
    }
}

pub(crate) fn pow_checked(n: usize, m: usize) -> Result<u32> {
    let mut out: u64 = 1;
    for _ in 0..m {
        out *= n as u64;
        if out > crate::setfam::MAX_BASE as u64 {
            return Err(Error::CapExceeded(format!(
                "team base {n}^{m} exceeds the supported maximum"
            )));
        }
    }
    Ok(out as u32)
}

pub(crate) fn decode_row(index: u32, n: usize, m: usize) -> Vec<u8> {
    let mut r = index as usize;
    (0..m)
        .map(|_| {
            let v = (r % n) as u8;
            r /= n;
            v
        })
        .collect()
}

pub(crate) fn encode_row(row: &[u8], n: usize) -> u32 {
    row.iter()
        .rev()
        .fold(0u32, |acc, &v| acc * n as u32 + v as u32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_encoding_is_mixed_radix_first_var_fastest() {
        // (x=1, y=0) over n=2 → index 1
        assert_eq!(encode_row(&[1, 0], 2), 1);
        assert_eq!(encode_row(&[0, 1], 2), 2);
        assert_eq!(decode_row(5, 2, 3), vec![1, 0, 1]);
        for n in [2usize, 3] {
            for idx in 0..(n * n * n) as u32 {
                assert_eq!(encode_row(&decode_row(idx, n, 3), n), idx);
            }
        }
    }

    #[test]
    fn structure_parsing() {
        let st = Structure::parse("universe 3\nrel E 2\n0 1\n1 2\nend\n").unwrap();
        assert_eq!(st.universe(), 3);
        assert!(st.holds("E", &[0, 1]).unwrap());
        assert!(!st.holds("E", &[1, 0]).unwrap());
        assert!(st.holds("Q", &[0]).is_err());
        assert!(Structure::parse("universe 2\nrel E 2\n0 5\nend\n").is_err());
    }

    #[test]
    fn team_parsing_and_masks() {
        let t = Team::parse("vars x y\n0 0\n1 1\n", 2).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.to_mask(2).unwrap(), 0b1001);
        let back = Team::from_mask(vec!["x".into(), "y".into()], 2, 0b1001).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn restriction() {
        let t = Team::parse("vars x y z\n0 0 1\n0 1 1\n", 2).unwrap();
        let r = t.restrict(&["x".into(), "z".into()]).unwrap();
        assert_eq!(r.rows(), &[vec![0, 1]]);
    }
}
