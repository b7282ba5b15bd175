//! Dense digraph representation over vertices `0..n`.
//!
//! Adjacency is stored twice, as out-rows and in-rows of bitsets, so that
//! both `N+(v)` and `N-(v)` are available as sets without a transpose.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// A set of vertices of one digraph, indexed `0..n`.
pub type VertexSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for digraph of order {n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate arc {0} -> {1}")]
    DuplicateArc(usize, usize),
    #[error("degree threshold needs n >= 1 and k >= 1 (got n={n}, k={k})")]
    InvalidThreshold { n: usize, k: usize },
}

/// Simple digraph (digons allowed, no self-loops) with dense adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph").field("n", &self.n).field("arcs", &self.arcs().collect::<Vec<_>>()).finish()
    }
}

impl Digraph {
    /// Digraph on `n` vertices with no arcs.
    pub fn empty(n: usize) -> Self {
        Self { n, out: vec![FixedBitSet::with_capacity(n); n], inn: vec![FixedBitSet::with_capacity(n); n] }
    }

    /// Complete digraph: every ordered pair of distinct vertices is an arc.
    pub fn complete(n: usize) -> Self {
        let mut d = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    d.insert(u, v);
                }
            }
        }
        d
    }

    /// Builds a digraph from an arc list. Duplicates and self-loops are errors.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut d = Self::empty(n);
        for (u, v) in arcs {
            if !d.add_arc(u, v)? {
                return Err(GraphError::DuplicateArc(u, v));
            }
        }
        Ok(d)
    }

    /// Adds `u -> v`. Returns `false` if the arc was already present.
    pub fn add_arc(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.out[u].contains(v) {
            return Ok(false);
        }
        self.insert(u, v);
        Ok(true)
    }

    fn insert(&mut self, u: usize, v: usize) {
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && self.out[u].contains(v)
    }

    /// `u -> v` and `v -> u` both present.
    pub fn has_digon(&self, u: usize, v: usize) -> bool {
        self.has_arc(u, v) && self.has_arc(v, u)
    }

    pub fn out_neighbors(&self, v: usize) -> &VertexSet {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &VertexSet {
        &self.inn[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].count_ones(..)
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.inn[v].count_ones(..)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(|row| row.count_ones(..)).sum()
    }

    /// Arcs in row-major order: by tail, then by head.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out.iter().enumerate().flat_map(|(u, row)| row.ones().map(move |v| (u, v)))
    }

    /// Empty set sized for this digraph.
    pub fn vertex_set(&self) -> VertexSet {
        FixedBitSet::with_capacity(self.n)
    }

    /// At least one arc between every pair of distinct vertices.
    pub fn is_semicomplete(&self) -> bool {
        (0..self.n).all(|u| {
            let mut joined = self.out[u].clone();
            joined.union_with(&self.inn[u]);
            joined.count_ones(..) == self.n - 1
        })
    }

    /// No pair joined in both directions.
    pub fn is_tournament(&self) -> bool {
        self.is_semicomplete() && self.out.iter().zip(&self.inn).all(|(o, i)| o.is_disjoint(i))
    }

    pub fn degree_report(&self) -> DegreeReport {
        let out_degree: Vec<usize> = (0..self.n).map(|v| self.out_degree(v)).collect();
        let in_degree: Vec<usize> = (0..self.n).map(|v| self.in_degree(v)).collect();
        let delta_plus = out_degree.iter().copied().min().unwrap_or(0);
        let delta_minus = in_degree.iter().copied().min().unwrap_or(0);
        DegreeReport { delta_zero: delta_plus.min(delta_minus), out_degree, in_degree, delta_plus, delta_minus }
    }

    /// Minimum semi-degree, `min(δ+, δ-)`. Zero for the empty digraph.
    pub fn min_semi_degree(&self) -> usize {
        (0..self.n).map(|v| self.out_degree(v).min(self.in_degree(v))).min().unwrap_or(0)
    }

    /// Vertices reachable from `start` following arcs forward (`forward = true`)
    /// or backward.
    pub fn reachable(&self, start: usize, forward: bool) -> VertexSet {
        let rows = if forward { &self.out } else { &self.inn };
        let mut seen = self.vertex_set();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in rows[u].ones() {
                if !seen.put(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Strongly connected. The empty digraph and single vertex count as strong.
    pub fn is_strong(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.reachable(0, true).count_ones(..) == self.n && self.reachable(0, false).count_ones(..) == self.n
    }

    /// Subdigraph induced by `vertices`, relabelled `0..|vertices|` in
    /// ascending order of the original labels. The returned map sends new
    /// labels back to originals.
    pub fn induced_subdigraph(&self, vertices: &VertexSet) -> Result<(Digraph, Vec<usize>), GraphError> {
        if let Some(v) = vertices.ones().find(|&v| v >= self.n) {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        let map: Vec<usize> = vertices.ones().collect();
        let mut sub = Digraph::empty(map.len());
        for (i, &u) in map.iter().enumerate() {
            for (j, &v) in map.iter().enumerate() {
                if self.has_arc(u, v) {
                    sub.insert(i, j);
                }
            }
        }
        Ok((sub, map))
    }

    /// Convenience wrapper taking a vertex slice.
    pub fn induced_by(&self, vertices: &[usize]) -> Result<(Digraph, Vec<usize>), GraphError> {
        let mut set = FixedBitSet::with_capacity(self.n.max(vertices.iter().map(|v| v + 1).max().unwrap_or(0)));
        set.extend(vertices.iter().copied());
        self.induced_subdigraph(&set)
    }
}

/// Per-vertex degrees and the minimum semi-degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeReport {
    pub out_degree: Vec<usize>,
    pub in_degree: Vec<usize>,
    pub delta_plus: usize,
    pub delta_minus: usize,
    pub delta_zero: usize,
}

/// `⌈(n + k − 1) / 2⌉`, the minimum semi-degree that guarantees a
/// one-to-many k-path cover for large `n`.
pub fn degree_threshold(n: usize, k: usize) -> Result<usize, GraphError> {
    if n == 0 || k == 0 {
        return Err(GraphError::InvalidThreshold { n, k });
    }
    Ok((n + k - 1).div_ceil(2))
}
