//! Deliberately naive reference implementations used to cross-check the
//! library. They share no code with it beyond `Digraph` and `PathSystem`.

#![allow(dead_code)]

use std::collections::BTreeSet;

use ddpc::{Digraph, PathSystem};
use itertools::Itertools;

pub type Set = BTreeSet<usize>;

pub struct NaivePartition {
    pub f: Set,
    pub r: Set,
    pub f_m: Set,
    pub r_m: Set,
    pub f_minus: Set,
    pub r_plus: Set,
    pub fm_minus: Set,
    pub rm_plus: Set,
    pub h: Set,
}

fn succ_set(sys: &PathSystem, of: &Set) -> Set {
    let mut out = Set::new();
    for p in sys.paths() {
        for i in 0..p.len() - 1 {
            if of.contains(&p[i]) {
                out.insert(p[i + 1]);
            }
        }
    }
    out
}

fn pred_set(sys: &PathSystem, of: &Set) -> Set {
    let mut out = Set::new();
    for p in sys.paths() {
        for i in 1..p.len() {
            if of.contains(&p[i]) {
                out.insert(p[i - 1]);
            }
        }
    }
    out
}

pub fn naive_partition(d: &Digraph, sys: &PathSystem) -> NaivePartition {
    let covered: Set = sys.paths().iter().flatten().copied().collect();
    let h: Set = (0..d.order()).filter(|v| !covered.contains(v)).collect();
    let mut f = Set::new();
    let mut r = Set::new();
    for &x in &covered {
        for &y in &h {
            if d.has_arc(y, x) {
                f.insert(x);
            }
            if d.has_arc(x, y) {
                r.insert(x);
            }
        }
    }
    let f_m: Set = f.difference(&r).copied().collect();
    let r_m: Set = r.difference(&f).copied().collect();
    NaivePartition {
        f_minus: pred_set(sys, &f),
        r_plus: succ_set(sys, &r),
        fm_minus: pred_set(sys, &f_m),
        rm_plus: succ_set(sys, &r_m),
        f,
        r,
        f_m,
        r_m,
        h,
    }
}

pub fn to_set(s: &ddpc::VertexSet) -> Set {
    s.ones().collect()
}

fn is_walk(d: &Digraph, seq: &[usize]) -> bool {
    seq.windows(2).all(|w| d.has_arc(w[0], w[1]))
}

/// Whether a spanning system exists, by trying every assignment of the
/// inner vertices to paths and every order within each path.
pub fn brute_ddpc(d: &Digraph, s: usize, sinks: &[usize]) -> bool {
    let k = sinks.len();
    let inner: Vec<usize> = (0..d.order()).filter(|v| *v != s && !sinks.contains(v)).collect();
    (0..inner.len()).map(|_| 0..k).multi_cartesian_product().any(|labels| {
        (0..k).all(|i| {
            let mine: Vec<usize> = inner.iter().zip(&labels).filter(|(_, &l)| l == i).map(|(&v, _)| v).collect();
            let len = mine.len();
            mine.into_iter().permutations(len).any(|order| {
                let mut seq = vec![s];
                seq.extend(order);
                seq.push(sinks[i]);
                is_walk(d, &seq)
            })
        })
    }) || (inner.is_empty() && sinks.iter().all(|&t| d.has_arc(s, t)))
}

fn extend_paths(
    d: &Digraph,
    s: usize,
    sinks: &[usize],
    used: &mut Vec<bool>,
    i: usize,
    cover: usize,
    best: &mut Option<usize>,
) {
    if i == sinks.len() {
        *best = Some(best.map_or(cover, |b| b.max(cover)));
        return;
    }
    #[allow(clippy::too_many_arguments)]
    fn walk(
        d: &Digraph,
        at: usize,
        s: usize,
        sinks: &[usize],
        used: &mut Vec<bool>,
        i: usize,
        cover: usize,
        best: &mut Option<usize>,
    ) {
        let t = sinks[i];
        for v in 0..d.order() {
            if !d.has_arc(at, v) || used[v] {
                continue;
            }
            if v == t {
                used[v] = true;
                extend_paths(d, s, sinks, used, i + 1, cover + 1, best);
                used[v] = false;
            } else if !sinks.contains(&v) {
                used[v] = true;
                walk(d, v, s, sinks, used, i, cover + 1, best);
                used[v] = false;
            }
        }
    }
    walk(d, s, s, sinks, used, i, cover, best);
}

/// Largest cover of any valid system, by enumerating every simple path
/// for each sink in turn. `None` if no system exists.
pub fn brute_max_cover(d: &Digraph, s: usize, sinks: &[usize]) -> Option<usize> {
    let mut used = vec![false; d.order()];
    used[s] = true;
    let mut best = None;
    extend_paths(d, s, sinks, &mut used, 0, 1, &mut best);
    best
}

/// Every valid system with the given terminals.
pub fn all_systems(d: &Digraph, s: usize, sinks: &[usize]) -> Vec<PathSystem> {
    fn go(
        d: &Digraph,
        s: usize,
        sinks: &[usize],
        used: &mut Vec<bool>,
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<PathSystem>,
    ) {
        let i = acc.len();
        if i == sinks.len() {
            out.push(PathSystem::new(s, sinks.to_vec(), acc.clone()));
            return;
        }
        let mut path = vec![s];
        walk(d, s, sinks, used, &mut path, acc, out);
    }
    fn walk(
        d: &Digraph,
        s: usize,
        sinks: &[usize],
        used: &mut Vec<bool>,
        path: &mut Vec<usize>,
        acc: &mut Vec<Vec<usize>>,
        out: &mut Vec<PathSystem>,
    ) {
        let t = sinks[acc.len()];
        let at = *path.last().unwrap();
        for v in 0..d.order() {
            if !d.has_arc(at, v) || used[v] || (v != t && sinks.contains(&v)) {
                continue;
            }
            used[v] = true;
            path.push(v);
            if v == t {
                acc.push(path.clone());
                go(d, s, sinks, used, acc, out);
                acc.pop();
            } else {
                walk(d, s, sinks, used, path, acc, out);
            }
            path.pop();
            used[v] = false;
        }
    }
    let mut used = vec![false; d.order()];
    used[s] = true;
    let mut out = Vec::new();
    go(d, s, sinks, &mut used, &mut Vec::new(), &mut out);
    out
}

/// Builds a semicomplete digraph from one code in `0..3` per pair `u < v`:
/// `0` is `u -> v`, `1` is `v -> u`, `2` is a digon.
pub fn semicomplete_from_codes(n: usize, codes: &[u8]) -> Digraph {
    let mut d = Digraph::empty(n);
    let mut c = codes.iter();
    for u in 0..n {
        for v in u + 1..n {
            let code = *c.next().expect("one code per pair");
            if code != 1 {
                d.add_arc(u, v).unwrap();
            }
            if code != 0 {
                d.add_arc(v, u).unwrap();
            }
        }
    }
    d
}
