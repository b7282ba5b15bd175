//! Text exchange formats.
//!
//! `dgr v1` (digraphs):
//!
//! ```text
//! n 3
//! 0 1
//! 1 2   # trailing comments are fine
//! 2 0
//! ```
//!
//! `psys v1` (path systems): `s <v>`, then `k <count>`, then one
//! space-separated vertex sequence per line.
//!
//! In both formats `#` starts a comment that runs to the end of the line and
//! blank lines are skipped.

use std::fmt::Write as _;

use thiserror::Error;

use crate::digraph::{Digraph, GraphError};
use crate::path_system::PathSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("missing header line `{0}`")]
    MissingHeader(&'static str),
}

fn parse_err(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse { line, message: message.into() }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_usize(line: usize, tok: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| parse_err(line, format!("expected a non-negative integer, found `{tok}`")))
}

fn header(line: usize, body: &str, key: &'static str) -> Result<usize, FormatError> {
    let mut toks = body.split_whitespace();
    match (toks.next(), toks.next(), toks.next()) {
        (Some(k), Some(v), None) if k == key => parse_usize(line, v),
        _ => Err(parse_err(line, format!("expected `{key} <count>`"))),
    }
}

pub fn parse_dgr(text: &str) -> Result<Digraph, FormatError> {
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or(FormatError::MissingHeader("n"))?;
    let n = header(line, body, "n")?;
    let mut d = Digraph::empty(n);
    for (line, body) in lines {
        let mut toks = body.split_whitespace();
        let (Some(u), Some(v), None) = (toks.next(), toks.next(), toks.next()) else {
            return Err(parse_err(line, "expected an arc `u v`"));
        };
        let (u, v) = (parse_usize(line, u)?, parse_usize(line, v)?);
        match d.add_arc(u, v) {
            Ok(true) => {}
            Ok(false) => return Err(FormatError::Graph { line, source: GraphError::DuplicateArc(u, v) }),
            Err(source) => return Err(FormatError::Graph { line, source }),
        }
    }
    Ok(d)
}

/// Serializes `d`, arcs in row-major order. `comments` are written as
/// leading `#` lines.
pub fn write_dgr(d: &Digraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n {}", d.order());
    for (u, v) in d.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_psys(text: &str) -> Result<PathSystem, FormatError> {
    let mut lines = content_lines(text);
    let (line, body) = lines.next().ok_or(FormatError::MissingHeader("s"))?;
    let s = header(line, body, "s")?;
    let (line, body) = lines.next().ok_or(FormatError::MissingHeader("k"))?;
    let k = header(line, body, "k")?;
    let mut paths = Vec::with_capacity(k);
    let mut last_line = line;
    for (line, body) in lines {
        if paths.len() == k {
            return Err(parse_err(line, format!("more than k={k} paths")));
        }
        let path = body.split_whitespace().map(|t| parse_usize(line, t)).collect::<Result<Vec<_>, _>>()?;
        paths.push(path);
        last_line = line;
    }
    if paths.len() != k {
        return Err(parse_err(last_line, format!("expected {k} paths, found {}", paths.len())));
    }
    Ok(PathSystem::from_paths(s, paths))
}

pub fn write_psys(sys: &PathSystem) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s {}", sys.source());
    let _ = writeln!(out, "k {}", sys.k());
    for p in sys.paths() {
        let line: Vec<String> = p.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}
