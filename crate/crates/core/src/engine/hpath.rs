//! Paths through the uncovered subdigraph `H` that attach to given vertices
//! of the path system.

use std::collections::{HashMap, VecDeque};

use crate::digraph::{Digraph, VertexSet};
use crate::ham;

/// Finds `H`-paths `Q` with `tail -> Q[0]` and `Q[last] -> head`.
///
/// Preference order: a cut of a Hamiltonian cycle of `H` (absorbs all of
/// `H`), then a Hamiltonian path of `H`, then a shortest attachable path.
pub(crate) struct HPaths<'a> {
    d: &'a Digraph,
    h: Vec<usize>,
    in_h: VertexSet,
    cycle: Option<Vec<usize>>,
    ham_path: Option<Vec<usize>>,
    cache: HashMap<(usize, usize), Option<Vec<usize>>>,
}

impl<'a> HPaths<'a> {
    pub(crate) fn new(d: &'a Digraph, in_h: &VertexSet) -> Self {
        let h: Vec<usize> = in_h.ones().collect();
        let (sub, map) = d.induced_subdigraph(in_h).expect("H within V(D)");
        let back = |seq: Vec<usize>| seq.into_iter().map(|v| map[v]).collect::<Vec<_>>();
        let cycle = match h.len() {
            2 if sub.has_digon(0, 1) => Some(h.clone()),
            m if m >= 3 => ham::hamiltonian_cycle(&sub).ok().map(back),
            _ => None,
        };
        let ham_path = if h.len() == 1 { Some(h.clone()) } else { ham::hamiltonian_path(&sub).ok().map(back) };
        HPaths { d, h, in_h: in_h.clone(), cycle, ham_path, cache: HashMap::new() }
    }

    fn attaches(&self, tail: usize, q: &[usize], head: usize) -> bool {
        !q.is_empty() && self.d.has_arc(tail, q[0]) && self.d.has_arc(q[q.len() - 1], head)
    }

    fn cycle_cuts(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        let c = self.cycle.as_deref().unwrap_or(&[]);
        let m = c.len();
        (0..m).map(move |i| (0..m).map(|j| c[(i + j) % m]).collect())
    }

    /// Best `H`-path from an out-neighbour of `tail` to an in-neighbour of
    /// `head`, if any.
    pub(crate) fn between(&mut self, tail: usize, head: usize) -> Option<Vec<usize>> {
        if let Some(hit) = self.cache.get(&(tail, head)) {
            return hit.clone();
        }
        let found = self
            .cycle_cuts()
            .find(|q| self.attaches(tail, q, head))
            .or_else(|| self.ham_path.clone().filter(|q| self.attaches(tail, q, head)))
            .or_else(|| self.shortest(tail, head));
        self.cache.insert((tail, head), found.clone());
        found
    }

    fn shortest(&self, tail: usize, head: usize) -> Option<Vec<usize>> {
        let n = self.d.order();
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for h in self.d.out_neighbors(tail).intersection(&self.in_h) {
            parent[h] = h;
            queue.push_back(h);
        }
        while let Some(u) = queue.pop_front() {
            if self.d.has_arc(u, head) {
                let mut path = vec![u];
                let mut v = u;
                while parent[v] != v {
                    v = parent[v];
                    path.push(v);
                }
                path.reverse();
                return Some(path);
            }
            for v in self.d.out_neighbors(u).intersection(&self.in_h) {
                if parent[v] == usize::MAX {
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }

    /// Two vertex-disjoint `H`-paths, the first attaching `tail1 .. head1`
    /// and the second `tail2 .. head2`.
    pub(crate) fn disjoint_pair(
        &self,
        (tail1, head1): (usize, usize),
        (tail2, head2): (usize, usize),
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let ok = |a: &[usize], b: &[usize]| self.attaches(tail1, a, head1) && self.attaches(tail2, b, head2);
        let try_split = |a: Vec<usize>, b: Vec<usize>| {
            if ok(&a, &b) {
                Some((a, b))
            } else if ok(&b, &a) {
                Some((b, a))
            } else {
                None
            }
        };
        if let Some(c) = self.cycle.as_deref() {
            let m = c.len();
            for i in 0..m {
                for j in i + 1..m {
                    let a: Vec<usize> = c[i + 1..=j].to_vec();
                    let b: Vec<usize> = c[j + 1..].iter().chain(&c[..=i]).copied().collect();
                    if let Some(pair) = try_split(a, b) {
                        return Some(pair);
                    }
                }
            }
        }
        if let Some(p) = self.ham_path.as_deref() {
            for m in 0..p.len().saturating_sub(1) {
                if let Some(pair) = try_split(p[..=m].to_vec(), p[m + 1..].to_vec()) {
                    return Some(pair);
                }
            }
        }
        for &u in &self.h {
            for &v in &self.h {
                if u != v && ok(&[u], &[v]) {
                    return Some((vec![u], vec![v]));
                }
            }
        }
        None
    }
}
