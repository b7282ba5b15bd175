//! Exhaustive reference solvers for path-system questions.
//!
//! All three searches share one backtracking engine. Paths grow from the
//! source one vertex at a time; at every node the unfinished path with the
//! fewest legal extensions is branched on (fail-first), candidates in
//! ascending vertex order. A path is finished when it steps onto its own
//! sink; other sinks are never used as interior vertices.
//!
//! The search works on 64-bit adjacency masks, so the oracle accepts
//! digraphs of order at most 64. The node budget counts search-tree nodes;
//! running out is reported as [`VerdictKind::BudgetExceeded`], never as
//! "none exists".

use thiserror::Error;

use crate::digraph::Digraph;
use crate::path_system::{validate_system, PathSystem, ValidationReport};

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const MAX_ORACLE_ORDER: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle supports at most {MAX_ORACLE_ORDER} vertices (got {0})")]
    TooLarge(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("at least one sink is required")]
    NoSinks,
    #[error("source {0} is also a sink")]
    SourceIsSink(usize),
    #[error("sink {0} listed twice")]
    DuplicateSink(usize),
    #[error("invalid path system: {0:?}")]
    InvalidSystem(ValidationReport),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    Found,
    NoneExists,
    BudgetExceeded,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Found => "found",
            VerdictKind::NoneExists => "none_exists",
            VerdictKind::BudgetExceeded => "budget_exceeded",
        }
    }
}

impl std::fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub kind: VerdictKind,
    pub system: Option<PathSystem>,
    pub nodes_explored: u64,
    /// Largest cover seen. For maximum-system queries that exhaust the
    /// space this is the optimum.
    pub max_cover: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Any complete system.
    Linkage,
    /// A complete system covering every vertex.
    Spanning,
    /// Best complete system; stop early once `target` vertices are covered.
    Max { target: usize },
}

struct Search {
    n: usize,
    out: Vec<u64>,
    inn: Vec<u64>,
    all: u64,
    sinks: Vec<usize>,
    sink_mask: u64,
    mode: Mode,
    budget: u64,

    paths: Vec<Vec<usize>>,
    finished: Vec<bool>,
    used: u64,
    nodes: u64,
    exceeded: bool,
    best: Option<(usize, Vec<Vec<usize>>)>,
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Search {
    fn new(d: &Digraph, s: usize, sinks: &[usize], mode: Mode, budget: u64) -> Self {
        let n = d.order();
        let mask = |set: &crate::digraph::VertexSet| set.ones().fold(0u64, |m, v| m | bit(v));
        let out = (0..n).map(|v| mask(d.out_neighbors(v))).collect();
        let inn = (0..n).map(|v| mask(d.in_neighbors(v))).collect();
        let all = if n == 64 { u64::MAX } else { bit(n) - 1 };
        Search {
            n,
            out,
            inn,
            all,
            sinks: sinks.to_vec(),
            sink_mask: sinks.iter().fold(0, |m, &t| m | bit(t)),
            mode,
            budget,
            paths: vec![vec![s]; sinks.len()],
            finished: vec![false; sinks.len()],
            used: bit(s),
            nodes: 0,
            exceeded: false,
            best: None,
        }
    }

    fn free(&self) -> u64 {
        self.all & !self.used & !self.sink_mask
    }

    fn candidates(&self, i: usize) -> u64 {
        let end = *self.paths[i].last().unwrap();
        self.out[end] & (self.free() | bit(self.sinks[i]))
    }

    fn endpoints(&self) -> u64 {
        (0..self.paths.len()).filter(|&i| !self.finished[i]).fold(0, |m, i| m | bit(*self.paths[i].last().unwrap()))
    }

    /// Vertices reachable from `from` by walking through `through`.
    fn reach(&self, from: u64, through: u64) -> u64 {
        let mut seen = 0u64;
        let mut frontier = from;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let next = self.out[v] & through & !seen;
            seen |= next;
            frontier |= next;
        }
        seen
    }

    fn unfinished_sinks(&self) -> u64 {
        (0..self.sinks.len()).filter(|&i| !self.finished[i]).fold(0, |m, i| m | bit(self.sinks[i]))
    }

    /// False when the current state provably cannot be completed (or, in
    /// max mode, cannot beat the best so far).
    fn feasible(&self) -> bool {
        let free = self.free();
        match self.mode {
            Mode::Linkage => (0..self.paths.len()).filter(|&i| !self.finished[i]).all(|i| {
                let end = bit(*self.paths[i].last().unwrap());
                self.reach(end, free | bit(self.sinks[i])) & bit(self.sinks[i]) != 0
            }),
            Mode::Spanning => {
                let ends = self.endpoints();
                let open_sinks = self.unfinished_sinks();
                let mut rest = free;
                while rest != 0 {
                    let v = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let others = free & !bit(v);
                    if self.inn[v] & (ends | others) == 0 || self.out[v] & (others | open_sinks) == 0 {
                        return false;
                    }
                }
                // every open sink needs an arc from something still extendable
                let mut sinks = open_sinks;
                while sinks != 0 {
                    let t = sinks.trailing_zeros() as usize;
                    sinks &= sinks - 1;
                    if self.inn[t] & (ends | free) == 0 {
                        return false;
                    }
                }
                self.reach(ends, free) & free == free
            }
            Mode::Max { .. } => {
                let Some((best, _)) = self.best.as_ref() else { return true };
                let reachable = self.reach(self.endpoints(), free);
                let bound = self.used.count_ones() as usize
                    + reachable.count_ones() as usize
                    + self.unfinished_sinks().count_ones() as usize;
                bound > *best
            }
        }
    }

    /// Returns true when the search should stop.
    fn dfs(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exceeded = true;
            return true;
        }
        let open: Vec<usize> = (0..self.paths.len()).filter(|&i| !self.finished[i]).collect();
        if open.is_empty() {
            let cover = self.used.count_ones() as usize;
            return match self.mode {
                Mode::Linkage => {
                    self.best = Some((cover, self.paths.clone()));
                    true
                }
                Mode::Spanning => {
                    if cover == self.n {
                        self.best = Some((cover, self.paths.clone()));
                        true
                    } else {
                        false
                    }
                }
                Mode::Max { target } => {
                    if self.best.as_ref().is_none_or(|(b, _)| cover > *b) {
                        self.best = Some((cover, self.paths.clone()));
                    }
                    cover >= target
                }
            };
        }
        if !self.feasible() {
            return false;
        }
        let (i, mut cands) =
            open.iter().map(|&i| (i, self.candidates(i))).min_by_key(|&(i, c)| (c.count_ones(), i)).unwrap();
        while cands != 0 {
            let v = cands.trailing_zeros() as usize;
            cands &= cands - 1;
            self.paths[i].push(v);
            self.used |= bit(v);
            let done = v == self.sinks[i];
            self.finished[i] = done;
            let stop = self.dfs();
            self.finished[i] = false;
            self.used &= !bit(v);
            self.paths[i].pop();
            if stop {
                return true;
            }
        }
        false
    }

    fn run(mut self, s: usize) -> OracleVerdict {
        self.dfs();
        let nodes_explored = self.nodes.min(self.budget);
        let max_cover = self.best.as_ref().map_or(0, |(c, _)| *c);
        let system = self.best.map(|(_, paths)| PathSystem::new(s, self.sinks.clone(), paths));
        let kind = match (self.mode, self.exceeded, &system) {
            (_, true, _) => VerdictKind::BudgetExceeded,
            (_, false, Some(_)) => VerdictKind::Found,
            (_, false, None) => VerdictKind::NoneExists,
        };
        OracleVerdict { kind, system, nodes_explored, max_cover }
    }
}

fn check_terminals(d: &Digraph, s: usize, sinks: &[usize]) -> Result<(), OracleError> {
    let n = d.order();
    if n > MAX_ORACLE_ORDER {
        return Err(OracleError::TooLarge(n));
    }
    if sinks.is_empty() {
        return Err(OracleError::NoSinks);
    }
    if let Some(&v) = std::iter::once(&s).chain(sinks).find(|&&v| v >= n) {
        return Err(OracleError::VertexOutOfRange(v));
    }
    if sinks.contains(&s) {
        return Err(OracleError::SourceIsSink(s));
    }
    for (i, t) in sinks.iter().enumerate() {
        if sinks[..i].contains(t) {
            return Err(OracleError::DuplicateSink(*t));
        }
    }
    Ok(())
}

/// Any valid (not necessarily spanning) system from `s` to `sinks`.
pub fn exact_st_linkage(d: &Digraph, s: usize, sinks: &[usize], budget: u64) -> Result<OracleVerdict, OracleError> {
    check_terminals(d, s, sinks)?;
    Ok(Search::new(d, s, sinks, Mode::Linkage, budget).run(s))
}

/// A spanning system (one-to-many k-DDPC), if one exists.
pub fn exact_ddpc(d: &Digraph, s: usize, sinks: &[usize], budget: u64) -> Result<OracleVerdict, OracleError> {
    check_terminals(d, s, sinks)?;
    Ok(Search::new(d, s, sinks, Mode::Spanning, budget).run(s))
}

/// A system of maximum cover. `kind` is `Found` when some system exists
/// and the search completed (or hit a spanning one).
pub fn exact_max_system(d: &Digraph, s: usize, sinks: &[usize], budget: u64) -> Result<OracleVerdict, OracleError> {
    check_terminals(d, s, sinks)?;
    let target = d.order();
    Ok(Search::new(d, s, sinks, Mode::Max { target }, budget).run(s))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Maximality {
    Maximal,
    /// A strictly larger system exists; here is one.
    NotMaximal(PathSystem),
    BudgetExceeded,
}

impl Maximality {
    pub fn is_maximal(&self) -> bool {
        matches!(self, Maximality::Maximal)
    }
}

/// Whether no valid system with the same terminals covers more vertices.
pub fn certify_maximal(d: &Digraph, sys: &PathSystem, budget: u64) -> Result<Maximality, OracleError> {
    let report = validate_system(d, sys);
    if !report.is_valid() {
        return Err(OracleError::InvalidSystem(report));
    }
    check_terminals(d, sys.source(), sys.sinks())?;
    let cover = sys.cover_count();
    if cover == d.order() {
        return Ok(Maximality::Maximal);
    }
    let verdict = Search::new(d, sys.source(), sys.sinks(), Mode::Max { target: cover + 1 }, budget).run(sys.source());
    Ok(match verdict.kind {
        VerdictKind::BudgetExceeded => Maximality::BudgetExceeded,
        _ if verdict.max_cover > cover => Maximality::NotMaximal(verdict.system.expect("larger system recorded")),
        _ => Maximality::Maximal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_system::is_ddpc;

    fn tt3() -> Digraph {
        Digraph::from_arcs(3, [(0, 1), (0, 2), (1, 2)]).unwrap()
    }

    #[test]
    fn linkage_examples() {
        let v = exact_st_linkage(&Digraph::complete(4), 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.kind, VerdictKind::Found);
        assert!(validate_system(&Digraph::complete(4), v.system.as_ref().unwrap()).is_valid());

        let star = Digraph::from_arcs(3, [(0, 1), (0, 2)]).unwrap();
        let v = exact_st_linkage(&star, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.system.unwrap().paths(), &[vec![0, 1], vec![0, 2]]);

        let stuck = Digraph::from_arcs(3, [(1, 0), (2, 0), (1, 2)]).unwrap();
        let v = exact_st_linkage(&stuck, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.kind, VerdictKind::NoneExists);
        assert!(v.system.is_none());
    }

    #[test]
    fn ddpc_examples() {
        let k5 = Digraph::complete(5);
        let v = exact_ddpc(&k5, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.kind, VerdictKind::Found);
        assert_eq!(is_ddpc(&k5, v.system.as_ref().unwrap()), Ok(true));

        let v = exact_ddpc(&tt3(), 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.kind, VerdictKind::Found);
        assert_eq!(v.system.unwrap().paths(), &[vec![0, 1], vec![0, 2]]);

        let single = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        let v = exact_ddpc(&single, 0, &[1], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.system.unwrap().paths(), &[vec![0, 1]]);
    }

    #[test]
    fn ddpc_none_exists() {
        // 3 can only be entered from 1, and 1 is a sink
        let d = Digraph::from_arcs(4, [(0, 1), (0, 2), (1, 3), (3, 2), (2, 1)]).unwrap();
        let v = exact_ddpc(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(v.kind, VerdictKind::NoneExists);
        let m = exact_max_system(&d, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(m.kind, VerdictKind::Found);
        assert_eq!(m.max_cover, 3);
    }

    #[test]
    fn max_system_and_certification() {
        let k5 = Digraph::complete(5);
        let m = exact_max_system(&k5, 0, &[1, 2], DEFAULT_BUDGET).unwrap();
        assert_eq!(m.max_cover, 5);

        let short = PathSystem::from_paths(0, vec![vec![0, 1], vec![0, 2]]);
        match certify_maximal(&k5, &short, DEFAULT_BUDGET).unwrap() {
            Maximality::NotMaximal(bigger) => assert!(bigger.cover_count() > 3),
            other => panic!("expected NotMaximal, got {other:?}"),
        }
        let full = PathSystem::from_paths(0, vec![vec![0, 3, 1], vec![0, 4, 2]]);
        assert_eq!(certify_maximal(&k5, &full, DEFAULT_BUDGET).unwrap(), Maximality::Maximal);
    }

    #[test]
    fn budget_is_reported() {
        let d = Digraph::complete(12);
        let m = exact_max_system(&d, 0, &[1, 2], 5).unwrap();
        assert_eq!(m.kind, VerdictKind::BudgetExceeded);
        assert!(m.nodes_explored <= 5);
    }

    #[test]
    fn terminal_errors() {
        let d = Digraph::complete(3);
        assert_eq!(exact_ddpc(&d, 0, &[], 10), Err(OracleError::NoSinks));
        assert_eq!(exact_ddpc(&d, 0, &[0], 10), Err(OracleError::SourceIsSink(0)));
        assert_eq!(exact_ddpc(&d, 0, &[1, 1], 10), Err(OracleError::DuplicateSink(1)));
        assert_eq!(exact_ddpc(&d, 0, &[3], 10), Err(OracleError::VertexOutOfRange(3)));
        assert_eq!(exact_ddpc(&Digraph::empty(65), 0, &[1], 10), Err(OracleError::TooLarge(65)));
    }
}
