//! One-to-many path systems: `k` paths from a common source to distinct
//! sinks, pairwise meeting only at the source.

use std::fmt;
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::digraph::{Digraph, VertexSet};

/// `k` paths `P_i` from `source` to `sinks[i]`.
///
/// Construction does not validate; call [`validate_system`] against the host
/// digraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathSystem {
    source: usize,
    sinks: Vec<usize>,
    paths: Vec<Vec<usize>>,
}

impl PathSystem {
    pub fn new(source: usize, sinks: Vec<usize>, paths: Vec<Vec<usize>>) -> Self {
        Self { source, sinks, paths }
    }

    /// Sinks are read off the last vertex of each path.
    pub fn from_paths(source: usize, paths: Vec<Vec<usize>>) -> Self {
        let sinks = paths.iter().map(|p| p.last().copied().unwrap_or(source)).collect();
        Self { source, sinks, paths }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn paths(&self) -> &[Vec<usize>] {
        &self.paths
    }

    pub fn path(&self, i: usize) -> &[usize] {
        &self.paths[i]
    }

    pub fn k(&self) -> usize {
        self.sinks.len()
    }

    pub fn into_paths(self) -> Vec<Vec<usize>> {
        self.paths
    }

    /// Number of distinct covered vertices, counting the shared source once.
    pub fn cover_count(&self) -> usize {
        1 + self.paths.iter().map(|p| p.len().saturating_sub(1)).sum::<usize>()
    }

    /// Covered vertex set in a digraph of order `n`.
    pub fn covered(&self, n: usize) -> VertexSet {
        let mut set = VertexSet::with_capacity(n);
        for p in &self.paths {
            for &v in p {
                if v < n {
                    set.insert(v);
                }
            }
        }
        if self.source < n {
            set.insert(self.source);
        }
        set
    }

    /// Hash of the full system, used to detect stale partitions and moves.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    /// For every vertex other than the source: `(path index, position)`.
    pub fn positions(&self, n: usize) -> Vec<Option<(usize, usize)>> {
        let mut pos = vec![None; n];
        for (i, p) in self.paths.iter().enumerate() {
            for (j, &v) in p.iter().enumerate().skip(1) {
                if v < n {
                    pos[v] = Some((i, j));
                }
            }
        }
        pos
    }
}

/// One broken invariant of a path system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoPaths,
    PathCount { sinks: usize, paths: usize },
    SourceOutOfRange(usize),
    SourceIsSink,
    DuplicateSink(usize),
    EmptyPath { path: usize },
    StartMismatch { path: usize, found: usize },
    EndMismatch { path: usize, expected: usize, found: usize },
    VertexOutOfRange { path: usize, vertex: usize },
    RepeatedVertex { path: usize, vertex: usize },
    Overlap { vertex: usize, first: usize, second: usize },
    MissingArc { path: usize, from: usize, to: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoPaths => write!(f, "no_paths"),
            Violation::PathCount { sinks, paths } => write!(f, "path_count sinks={sinks} paths={paths}"),
            Violation::SourceOutOfRange(v) => write!(f, "source_out_of_range vertex={v}"),
            Violation::SourceIsSink => write!(f, "source_is_sink"),
            Violation::DuplicateSink(v) => write!(f, "duplicate_sink vertex={v}"),
            Violation::EmptyPath { path } => write!(f, "empty_path path={path}"),
            Violation::StartMismatch { path, found } => write!(f, "start_mismatch path={path} found={found}"),
            Violation::EndMismatch { path, expected, found } => {
                write!(f, "end_mismatch path={path} expected={expected} found={found}")
            }
            Violation::VertexOutOfRange { path, vertex } => {
                write!(f, "vertex_out_of_range path={path} vertex={vertex}")
            }
            Violation::RepeatedVertex { path, vertex } => {
                write!(f, "repeated_vertex path={path} vertex={vertex}")
            }
            Violation::Overlap { vertex, first, second } => {
                write!(f, "overlap vertex={vertex} paths={first},{second}")
            }
            Violation::MissingArc { path, from, to } => write!(f, "missing_arc path={path} arc={from}->{to}"),
        }
    }
}

/// All violations found by [`validate_system`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural invariant of `sys` against `d`. Violations are
/// collected, not raised.
pub fn validate_system(d: &Digraph, sys: &PathSystem) -> ValidationReport {
    let n = d.order();
    let mut violations = Vec::new();
    let s = sys.source;
    if sys.paths.is_empty() {
        violations.push(Violation::NoPaths);
    }
    if sys.paths.len() != sys.sinks.len() {
        violations.push(Violation::PathCount { sinks: sys.sinks.len(), paths: sys.paths.len() });
    }
    if s >= n {
        violations.push(Violation::SourceOutOfRange(s));
    }
    if sys.sinks.contains(&s) {
        violations.push(Violation::SourceIsSink);
    }
    for (i, &t) in sys.sinks.iter().enumerate() {
        if sys.sinks[..i].contains(&t) {
            violations.push(Violation::DuplicateSink(t));
        }
    }

    // owner[v] = first path that used v (source excluded)
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (i, p) in sys.paths.iter().enumerate() {
        let Some(&first) = p.first() else {
            violations.push(Violation::EmptyPath { path: i });
            continue;
        };
        if first != s {
            violations.push(Violation::StartMismatch { path: i, found: first });
        }
        let last = *p.last().unwrap();
        if let Some(&t) = sys.sinks.get(i) {
            if last != t || p.len() < 2 {
                violations.push(Violation::EndMismatch { path: i, expected: t, found: last });
            }
        }
        for (j, &v) in p.iter().enumerate() {
            if v >= n {
                violations.push(Violation::VertexOutOfRange { path: i, vertex: v });
                continue;
            }
            if j > 0 {
                if v == s {
                    violations.push(Violation::RepeatedVertex { path: i, vertex: v });
                } else {
                    match owner[v] {
                        Some(o) if o == i => violations.push(Violation::RepeatedVertex { path: i, vertex: v }),
                        Some(o) => violations.push(Violation::Overlap { vertex: v, first: o, second: i }),
                        None => owner[v] = Some(i),
                    }
                }
                let u = p[j - 1];
                if u < n && !d.has_arc(u, v) {
                    violations.push(Violation::MissingArc { path: i, from: u, to: v });
                }
            }
        }
    }
    ValidationReport { violations }
}

/// Valid and spanning.
pub fn is_ddpc(d: &Digraph, sys: &PathSystem) -> Result<bool, ValidationReport> {
    let report = validate_system(d, sys);
    if !report.is_valid() {
        return Err(report);
    }
    Ok(sys.cover_count() == d.order())
}
