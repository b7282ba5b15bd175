//! Hamiltonian paths and cycles in semicomplete digraphs.
//!
//! Paths are built by insertion: each new vertex goes in front, at the back,
//! or between the first consecutive pair `p_i -> v -> p_{i+1}`. One of the
//! three always exists when every pair is joined by an arc.
//!
//! Cycles are built by extension. Starting from a shortest cycle through
//! vertex 0, an outside vertex with both an in- and an out-neighbour on the
//! cycle is inserted between some consecutive pair. When no such vertex
//! exists, every outside vertex either dominates or is dominated by the whole
//! cycle, and strong connectivity yields an arc `x -> y` from a dominated `x`
//! to a dominating `y`; both are appended at once.

use std::collections::VecDeque;

use thiserror::Error;

use crate::digraph::Digraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum HamError {
    #[error("digraph is not semicomplete")]
    NotSemicomplete,
    #[error("digraph is not strongly connected")]
    NotStrong,
    #[error("a Hamiltonian cycle needs at least 3 vertices (got {0})")]
    TooSmall(usize),
    #[error("digraph has no vertices")]
    Empty,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// Hamiltonian path of a semicomplete digraph.
pub fn hamiltonian_path(d: &Digraph) -> Result<Vec<usize>, HamError> {
    if d.order() == 0 {
        return Err(HamError::Empty);
    }
    if !d.is_semicomplete() {
        return Err(HamError::NotSemicomplete);
    }
    Ok(insertion_path(d, 0..d.order()))
}

/// Insertion over `vertices`, assuming they induce a semicomplete digraph.
pub(crate) fn insertion_path(d: &Digraph, vertices: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut path: Vec<usize> = Vec::new();
    for v in vertices {
        if path.is_empty() || d.has_arc(v, path[0]) {
            path.insert(0, v);
        } else if d.has_arc(*path.last().unwrap(), v) {
            path.push(v);
        } else {
            let i = path
                .windows(2)
                .position(|w| d.has_arc(w[0], v) && d.has_arc(v, w[1]))
                .expect("semicomplete digraph admits an insertion point");
            path.insert(i + 1, v);
        }
    }
    path
}

/// Hamiltonian cycle of a strong semicomplete digraph on at least 3
/// vertices, listed from vertex 0. The closing arc is last -> first.
pub fn hamiltonian_cycle(d: &Digraph) -> Result<Vec<usize>, HamError> {
    let n = d.order();
    if n < 3 {
        return Err(HamError::TooSmall(n));
    }
    if !d.is_semicomplete() {
        return Err(HamError::NotSemicomplete);
    }
    if !d.is_strong() {
        return Err(HamError::NotStrong);
    }
    Ok(extend_cycle(d))
}

/// Shortest cycle through vertex 0 (BFS back to it).
fn short_cycle(d: &Digraph) -> Vec<usize> {
    let n = d.order();
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut queue = VecDeque::from([0]);
    while let Some(u) = queue.pop_front() {
        if d.has_arc(u, 0) {
            let mut cycle = vec![u];
            let mut v = u;
            while v != 0 {
                v = parent[v];
                cycle.push(v);
            }
            cycle.reverse();
            return cycle;
        }
        for v in d.out_neighbors(u).ones() {
            if parent[v] == usize::MAX {
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    unreachable!("strong digraph has a cycle through 0")
}

fn extend_cycle(d: &Digraph) -> Vec<usize> {
    let n = d.order();
    let mut cycle = short_cycle(d);
    let mut on_cycle = d.vertex_set();
    on_cycle.extend(cycle.iter().copied());

    while cycle.len() < n {
        let outside: Vec<usize> = (0..n).filter(|&v| !on_cycle.contains(v)).collect();
        let mixed = outside
            .iter()
            .copied()
            .find(|&v| !d.in_neighbors(v).is_disjoint(&on_cycle) && !d.out_neighbors(v).is_disjoint(&on_cycle));
        if let Some(v) = mixed {
            let m = cycle.len();
            let i = (0..m)
                .find(|&i| d.has_arc(cycle[i], v) && d.has_arc(v, cycle[(i + 1) % m]))
                .expect("vertex with arcs both ways has an insertion point");
            cycle.insert(i + 1, v);
            on_cycle.insert(v);
            continue;
        }
        // every outside vertex is dominated by the cycle (no arc back) or
        // dominates it (no arc from it)
        let dominated: Vec<usize> =
            outside.iter().copied().filter(|&v| d.out_neighbors(v).is_disjoint(&on_cycle)).collect();
        let (x, y) = dominated
            .iter()
            .find_map(|&x| {
                outside
                    .iter()
                    .copied()
                    .find(|&y| d.in_neighbors(y).is_disjoint(&on_cycle) && d.has_arc(x, y))
                    .map(|y| (x, y))
            })
            .expect("strong digraph has an arc from the dominated side to the dominating side");
        // last -> x -> y -> first
        cycle.push(x);
        cycle.push(y);
        on_cycle.insert(x);
        on_cycle.insert(y);
    }
    cycle
}

/// Hamiltonian `from -> to` path obtained by cutting a Hamiltonian cycle at
/// the arc `to -> from`. Returns `None` if the constructed cycle does not
/// have `to` immediately before `from`. Handles `n <= 2` directly.
pub fn hamiltonian_path_between(d: &Digraph, from: usize, to: usize) -> Result<Option<Vec<usize>>, HamError> {
    let n = d.order();
    if from >= n {
        return Err(HamError::VertexOutOfRange(from));
    }
    if to >= n {
        return Err(HamError::VertexOutOfRange(to));
    }
    if !d.is_semicomplete() {
        return Err(HamError::NotSemicomplete);
    }
    if !d.is_strong() {
        return Err(HamError::NotStrong);
    }
    match n {
        1 => return Ok(Some(vec![from])),
        2 => return Ok((from != to).then(|| vec![from, to])),
        _ => {}
    }
    let cycle = extend_cycle(d);
    Ok(cut_cycle(&cycle, from, to))
}

/// Cut `cycle` so it runs `from .. to`, if `to` directly precedes `from`.
pub fn cut_cycle(cycle: &[usize], from: usize, to: usize) -> Option<Vec<usize>> {
    let m = cycle.len();
    let i = cycle.iter().position(|&v| v == from)?;
    if cycle[(i + m - 1) % m] != to {
        return None;
    }
    Some((0..m).map(|j| cycle[(i + j) % m]).collect())
}

/// Arc-walk check: distinct vertices, consecutive arcs present.
pub fn is_path(d: &Digraph, seq: &[usize]) -> bool {
    let mut seen = d.vertex_set();
    seq.iter().all(|&v| v < d.order() && !seen.put(v)) && seq.windows(2).all(|w| d.has_arc(w[0], w[1]))
}

pub fn is_hamiltonian_path(d: &Digraph, seq: &[usize]) -> bool {
    seq.len() == d.order() && is_path(d, seq)
}

pub fn is_hamiltonian_cycle(d: &Digraph, seq: &[usize]) -> bool {
    is_hamiltonian_path(d, seq) && seq.len() >= 2 && d.has_arc(seq[seq.len() - 1], seq[0])
}
