//! Rewiring templates that absorb uncovered vertices into a path system.
//!
//! Positions below are indices into a path (`0` is the source). `Q` is a
//! path through `H` found by [`HPaths`]. Each template lists the arcs it
//! needs and the rebuilt path(s):
//!
//! * `T1_detour`: `x = P[j]`, `y = P[j+1]`, `x -> Q -> y`.
//!   `P' = P[..=j] Q P[j+1..]`.
//! * `T2_source_reroute`: `s -> P_i[p]` with `p >= 2`, `P_i[p-1] -> Q -> P_j[1]`.
//!   `P_i' = s P_i[p..]`, `P_j' = P_i[..p] Q P_j[1..]`.
//! * `T3_same_path_cross`: `w < a1`, `a1 + 2 <= a2` on one path,
//!   `P[w] -> P[a1+1]`, `P[a1] -> P[a2]`, `P[a2-1] -> Q -> P[w+1]`.
//!   `P' = P[..=w] P[a1+1..a2] Q P[w+1..=a1] P[a2..]`.
//! * `T4_cross_path_cross`: as T3 with `w` on another path `P_j`.
//!   `P_i' = P_i[..=a1] P_i[a2..]`, `P_j' = P_j[..=w] P_i[a1+1..a2] Q P_j[w+1..]`.
//! * `T5_double_cross`: `w1 < w2`, `w2 + 2 <= a1 < a2` on one path,
//!   `P[w1] -> P[a1]`, `P[w2] -> P[a2]`, disjoint `P[a1-1] -> Q1 -> P[w1+1]`
//!   and `P[a2-1] -> Q2 -> P[w2+1]`.
//!   `P' = P[..=w1] P[a1..a2] Q2 P[w2+1..a1] Q1 P[w1+1..=w2] P[a2..]`.
//! * `T6_tail_swap`, four shapes:
//!   - exchange: `P_b[y] -> P_a[x+1]` (`y >= 1`), `P_a[x] -> Q -> P_b[y+1]`.
//!     `P_a' = P_b[..=y] P_a[x+1..]`, `P_b' = P_a[..=x] Q P_b[y+1..]`.
//!   - relocate-after: segment `P_a[start..=end]` moves behind `P_b[y]`,
//!     `P_a[cut] -> P_a[end+1]`, `P_b[y] -> P_a[start]`,
//!     `P_a[end] -> Q -> P_b[y+1]`. Vertices strictly between `cut` and
//!     `start` are dropped.
//!   - relocate-before: segment `P_b[y+1..=end]` moves behind `P_a[x]`,
//!     `P_b[y] -> P_b[resume]`, `P_a[x] -> Q -> P_b[y+1]`,
//!     `P_b[end] -> P_a[x+1]`. Vertices strictly between `end` and
//!     `resume` are dropped.
//!   - fold: `p1 < p2 <= p3 < p4 <= p5` on one path, `P[p1] -> P[p4]`,
//!     `P[p3] -> P[p5+1]`, `P[p5] -> Q -> P[p2]`.
//!     `P' = P[..=p1] P[p4..=p5] Q P[p2..=p3] P[p5+1..]`; the two gaps
//!     `(p1, p2)` and `(p3, p4)` are dropped.
//!
//! Templates that drop vertices are only emitted when `Q` more than makes
//! up for them. Every candidate is rebuilt and validated before it is
//! reported.

use std::fmt;
use std::ops::ControlFlow;

use crate::boundary::BoundaryPartition;
use crate::digraph::Digraph;
use crate::path_system::{validate_system, PathSystem};

use super::hpath::HPaths;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Template {
    Detour,
    SourceReroute,
    SamePathCross,
    CrossPathCross,
    DoubleCross,
    TailSwap,
}

impl Template {
    /// Order in which the driver tries templates.
    pub const SEARCH_ORDER: [Template; 6] = [
        Template::Detour,
        Template::SourceReroute,
        Template::SamePathCross,
        Template::CrossPathCross,
        Template::TailSwap,
        Template::DoubleCross,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Template::Detour => "T1_detour",
            Template::SourceReroute => "T2_source_reroute",
            Template::SamePathCross => "T3_same_path_cross",
            Template::CrossPathCross => "T4_cross_path_cross",
            Template::DoubleCross => "T5_double_cross",
            Template::TailSwap => "T6_tail_swap",
        }
    }
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailSwap {
    Exchange { a: usize, x: usize, b: usize, y: usize },
    RelocateAfter { a: usize, cut: usize, start: usize, end: usize, b: usize, y: usize },
    RelocateBefore { a: usize, x: usize, b: usize, y: usize, end: usize, resume: usize },
    Fold { path: usize, p1: usize, p2: usize, p3: usize, p4: usize, p5: usize },
}

/// Witness positions. Path fields are path indices, the rest are positions
/// along the named path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Detour { path: usize, at: usize },
    SourceReroute { path: usize, at: usize, other: usize },
    SamePathCross { path: usize, w: usize, a1: usize, a2: usize },
    CrossPathCross { path: usize, a1: usize, a2: usize, other: usize, w: usize },
    DoubleCross { path: usize, w1: usize, w2: usize, a1: usize, a2: usize },
    TailSwap(TailSwap),
}

impl Witness {
    pub fn template(&self) -> Template {
        match self {
            Witness::Detour { .. } => Template::Detour,
            Witness::SourceReroute { .. } => Template::SourceReroute,
            Witness::SamePathCross { .. } => Template::SamePathCross,
            Witness::CrossPathCross { .. } => Template::CrossPathCross,
            Witness::DoubleCross { .. } => Template::DoubleCross,
            Witness::TailSwap(_) => Template::TailSwap,
        }
    }
}

/// A validated rewiring of one specific path system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AugmentationMove {
    pub template: Template,
    pub witness: Witness,
    /// Witness vertices by role, for reporting.
    pub bindings: Vec<(&'static str, usize)>,
    /// The `H`-path(s) spliced in (`Q`, or `Q1`, `Q2`).
    pub h_paths: Vec<Vec<usize>>,
    pub before_cover: usize,
    pub after_cover: usize,
    /// Fingerprint of the system the move was found on.
    pub source_fingerprint: u64,
}

impl AugmentationMove {
    pub fn spliced_h_vertices(&self) -> Vec<usize> {
        self.h_paths.iter().flatten().copied().collect()
    }

    pub fn gain(&self) -> usize {
        self.after_cover - self.before_cover
    }
}

/// `template bindings before after`, e.g.
/// `T1_detour path=0,x=0,y=1,q=3-4 3 5`.
impl fmt::Display for AugmentationMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.bindings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let names: &[&str] = if self.h_paths.len() == 1 { &["q"] } else { &["q1", "q2"] };
        for (name, q) in names.iter().zip(&self.h_paths) {
            let q: Vec<String> = q.iter().map(ToString::to_string).collect();
            parts.push(format!("{name}={}", q.join("-")));
        }
        write!(f, "{} {} {} {}", self.template, parts.join(","), self.before_cover, self.after_cover)
    }
}

fn cat(parts: &[&[usize]]) -> Vec<usize> {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

/// Rebuilds the paths of `sys` according to `witness`. `None` when a
/// position is out of range or `h_paths` has the wrong shape.
pub(crate) fn rebuild(sys: &PathSystem, witness: &Witness, h_paths: &[Vec<usize>]) -> Option<Vec<Vec<usize>>> {
    let paths = sys.paths();
    let get = |i: usize| paths.get(i).map(Vec::as_slice);
    let q = h_paths.first().map(Vec::as_slice)?;
    let mut out = paths.to_vec();
    match *witness {
        Witness::Detour { path, at } => {
            let p = get(path)?;
            if at + 1 >= p.len() {
                return None;
            }
            out[path] = cat(&[&p[..=at], q, &p[at + 1..]]);
        }
        Witness::SourceReroute { path, at, other } => {
            let (p, o) = (get(path)?, get(other)?);
            if path == other || at < 2 || at >= p.len() || o.len() < 2 {
                return None;
            }
            out[path] = cat(&[&p[..1], &p[at..]]);
            out[other] = cat(&[&p[..at], q, &o[1..]]);
        }
        Witness::SamePathCross { path, w, a1, a2 } => {
            let p = get(path)?;
            if !(w < a1 && a1 + 2 <= a2 && a2 < p.len()) {
                return None;
            }
            out[path] = cat(&[&p[..=w], &p[a1 + 1..a2], q, &p[w + 1..=a1], &p[a2..]]);
        }
        Witness::CrossPathCross { path, a1, a2, other, w } => {
            let (p, o) = (get(path)?, get(other)?);
            if path == other || !(a1 + 2 <= a2 && a2 < p.len() && w + 1 < o.len()) {
                return None;
            }
            out[path] = cat(&[&p[..=a1], &p[a2..]]);
            out[other] = cat(&[&o[..=w], &p[a1 + 1..a2], q, &o[w + 1..]]);
        }
        Witness::DoubleCross { path, w1, w2, a1, a2 } => {
            let p = get(path)?;
            let q2 = h_paths.get(1).map(Vec::as_slice)?;
            if !(w1 < w2 && w2 + 2 <= a1 && a1 < a2 && a2 < p.len()) {
                return None;
            }
            out[path] = cat(&[&p[..=w1], &p[a1..a2], q2, &p[w2 + 1..a1], q, &p[w1 + 1..=w2], &p[a2..]]);
        }
        Witness::TailSwap(TailSwap::Exchange { a, x, b, y }) => {
            let (pa, pb) = (get(a)?, get(b)?);
            if a == b || y == 0 || x + 1 >= pa.len() || y + 1 >= pb.len() {
                return None;
            }
            out[a] = cat(&[&pb[..=y], &pa[x + 1..]]);
            out[b] = cat(&[&pa[..=x], q, &pb[y + 1..]]);
        }
        Witness::TailSwap(TailSwap::RelocateAfter { a, cut, start, end, b, y }) => {
            let (pa, pb) = (get(a)?, get(b)?);
            if a == b || !(cut < start && start <= end && end + 1 < pa.len() && y + 1 < pb.len()) {
                return None;
            }
            out[a] = cat(&[&pa[..=cut], &pa[end + 1..]]);
            out[b] = cat(&[&pb[..=y], &pa[start..=end], q, &pb[y + 1..]]);
        }
        Witness::TailSwap(TailSwap::RelocateBefore { a, x, b, y, end, resume }) => {
            let (pa, pb) = (get(a)?, get(b)?);
            if a == b || !(x + 1 < pa.len() && y < end && end < resume && resume < pb.len()) {
                return None;
            }
            out[a] = cat(&[&pa[..=x], q, &pb[y + 1..=end], &pa[x + 1..]]);
            out[b] = cat(&[&pb[..=y], &pb[resume..]]);
        }
        Witness::TailSwap(TailSwap::Fold { path, p1, p2, p3, p4, p5 }) => {
            let p = get(path)?;
            if !(p1 < p2 && p2 <= p3 && p3 < p4 && p4 <= p5 && p5 + 1 < p.len()) {
                return None;
            }
            out[path] = cat(&[&p[..=p1], &p[p4..=p5], q, &p[p2..=p3], &p[p5 + 1..]]);
        }
    }
    Some(out)
}

/// Witness vertices by role.
pub(crate) fn bindings(sys: &PathSystem, witness: &Witness) -> Vec<(&'static str, usize)> {
    let v = |i: usize, j: usize| sys.path(i)[j];
    match *witness {
        Witness::Detour { path, at } => vec![("path", path), ("x", v(path, at)), ("y", v(path, at + 1))],
        Witness::SourceReroute { path, at, other } => vec![
            ("path", path),
            ("x1", v(path, at)),
            ("x1_pred", v(path, at - 1)),
            ("other", other),
            ("s_succ", v(other, 1)),
        ],
        Witness::SamePathCross { path, w, a1, a2 } => {
            vec![("path", path), ("w", v(path, w)), ("a1", v(path, a1)), ("a2", v(path, a2))]
        }
        Witness::CrossPathCross { path, a1, a2, other, w } => {
            vec![("path", path), ("a1", v(path, a1)), ("a2", v(path, a2)), ("other", other), ("w", v(other, w))]
        }
        Witness::DoubleCross { path, w1, w2, a1, a2 } => {
            vec![("path", path), ("w1", v(path, w1)), ("w2", v(path, w2)), ("a1", v(path, a1)), ("a2", v(path, a2))]
        }
        Witness::TailSwap(TailSwap::Exchange { a, x, b, y }) => {
            vec![("shape", 0), ("path_a", a), ("x", v(a, x)), ("path_b", b), ("y", v(b, y))]
        }
        Witness::TailSwap(TailSwap::RelocateAfter { a, cut, start, end, b, y }) => vec![
            ("shape", 1),
            ("path_a", a),
            ("cut", v(a, cut)),
            ("start", v(a, start)),
            ("end", v(a, end)),
            ("path_b", b),
            ("y", v(b, y)),
        ],
        Witness::TailSwap(TailSwap::RelocateBefore { a, x, b, y, end, resume }) => vec![
            ("shape", 2),
            ("path_a", a),
            ("x", v(a, x)),
            ("path_b", b),
            ("y", v(b, y)),
            ("end", v(b, end)),
            ("resume", v(b, resume)),
        ],
        Witness::TailSwap(TailSwap::Fold { path, p1, p2, p3, p4, p5 }) => vec![
            ("shape", 3),
            ("path", path),
            ("p1", v(path, p1)),
            ("p2", v(path, p2)),
            ("p3", v(path, p3)),
            ("p4", v(path, p4)),
            ("p5", v(path, p5)),
        ],
    }
}

/// Rebuild, validate and measure a candidate; `None` unless it is a valid
/// strictly larger system.
pub(crate) fn realize(
    d: &Digraph,
    sys: &PathSystem,
    witness: Witness,
    h_paths: Vec<Vec<usize>>,
) -> Option<(AugmentationMove, PathSystem)> {
    let paths = rebuild(sys, &witness, &h_paths)?;
    let next = PathSystem::new(sys.source(), sys.sinks().to_vec(), paths);
    if !validate_system(d, &next).is_valid() {
        return None;
    }
    let (before_cover, after_cover) = (sys.cover_count(), next.cover_count());
    if after_cover <= before_cover {
        return None;
    }
    let mv = AugmentationMove {
        template: witness.template(),
        bindings: bindings(sys, &witness),
        witness,
        h_paths,
        before_cover,
        after_cover,
        source_fingerprint: sys.fingerprint(),
    };
    Some((mv, next))
}

pub(crate) type Visitor<'v> = dyn FnMut(AugmentationMove, PathSystem) -> ControlFlow<()> + 'v;

/// Enumerates witnesses of one template in its fixed order, reporting each
/// realizable move to `visit` until it breaks.
pub(crate) struct Searcher<'a> {
    d: &'a Digraph,
    sys: &'a PathSystem,
    part: &'a BoundaryPartition,
    hp: HPaths<'a>,
}

impl<'a> Searcher<'a> {
    pub(crate) fn new(d: &'a Digraph, sys: &'a PathSystem, part: &'a BoundaryPartition) -> Self {
        Searcher { d, sys, part, hp: HPaths::new(d, &part.h) }
    }

    fn arc(&self, u: usize, v: usize) -> bool {
        self.d.has_arc(u, v)
    }

    fn in_r(&self, v: usize) -> bool {
        self.part.r.contains(v)
    }

    fn in_f(&self, v: usize) -> bool {
        self.part.f.contains(v)
    }

    fn offer(&self, witness: Witness, h_paths: Vec<Vec<usize>>, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        match realize(self.d, self.sys, witness, h_paths) {
            Some((mv, next)) => visit(mv, next),
            None => ControlFlow::Continue(()),
        }
    }

    pub(crate) fn run(&mut self, template: Template, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        match template {
            Template::Detour => self.detour(visit),
            Template::SourceReroute => self.source_reroute(visit),
            Template::SamePathCross => self.same_path_cross(visit),
            Template::CrossPathCross => self.cross_path_cross(visit),
            Template::DoubleCross => self.double_cross(visit),
            Template::TailSwap => {
                self.exchange(visit)?;
                self.relocate_after(visit)?;
                self.relocate_before(visit)?;
                self.fold(visit)
            }
        }
    }

    fn detour(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (path, p) in paths.iter().enumerate() {
            for at in 0..p.len() - 1 {
                let (x, y) = (p[at], p[at + 1]);
                if !(self.in_r(x) && self.in_f(y)) {
                    continue;
                }
                if let Some(q) = self.hp.between(x, y) {
                    self.offer(Witness::Detour { path, at }, vec![q], visit)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn source_reroute(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        let s = self.sys.source();
        for (path, p) in paths.iter().enumerate() {
            for at in 2..p.len() {
                if !self.arc(s, p[at]) || !self.in_r(p[at - 1]) {
                    continue;
                }
                for (other, o) in paths.iter().enumerate() {
                    if other == path || !self.in_f(o[1]) {
                        continue;
                    }
                    if let Some(q) = self.hp.between(p[at - 1], o[1]) {
                        self.offer(Witness::SourceReroute { path, at, other }, vec![q], visit)?;
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn same_path_cross(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (path, p) in paths.iter().enumerate() {
            let len = p.len();
            for w in 0..len {
                if w + 1 >= len || !self.in_f(p[w + 1]) {
                    continue;
                }
                for a1 in w + 1..len {
                    if a1 + 1 >= len || !self.arc(p[w], p[a1 + 1]) {
                        continue;
                    }
                    for a2 in a1 + 2..len {
                        if !self.arc(p[a1], p[a2]) || !self.in_r(p[a2 - 1]) {
                            continue;
                        }
                        if let Some(q) = self.hp.between(p[a2 - 1], p[w + 1]) {
                            self.offer(Witness::SamePathCross { path, w, a1, a2 }, vec![q], visit)?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn cross_path_cross(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (path, p) in paths.iter().enumerate() {
            let len = p.len();
            for a1 in 0..len {
                for a2 in a1 + 2..len {
                    if !self.arc(p[a1], p[a2]) || !self.in_r(p[a2 - 1]) {
                        continue;
                    }
                    for (other, o) in paths.iter().enumerate() {
                        if other == path {
                            continue;
                        }
                        for w in 0..o.len() - 1 {
                            if !self.arc(o[w], p[a1 + 1]) || !self.in_f(o[w + 1]) {
                                continue;
                            }
                            if let Some(q) = self.hp.between(p[a2 - 1], o[w + 1]) {
                                let witness = Witness::CrossPathCross { path, a1, a2, other, w };
                                self.offer(witness, vec![q], visit)?;
                            }
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn double_cross(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (path, p) in paths.iter().enumerate() {
            let len = p.len();
            for w1 in 0..len {
                for w2 in w1 + 1..len {
                    if w2 + 1 >= len || !self.in_f(p[w1 + 1]) || !self.in_f(p[w2 + 1]) {
                        continue;
                    }
                    for a1 in w2 + 2..len {
                        if !self.arc(p[w1], p[a1]) || !self.in_r(p[a1 - 1]) {
                            continue;
                        }
                        for a2 in a1 + 1..len {
                            if !self.arc(p[w2], p[a2]) || !self.in_r(p[a2 - 1]) {
                                continue;
                            }
                            let pair = self.hp.disjoint_pair((p[a1 - 1], p[w1 + 1]), (p[a2 - 1], p[w2 + 1]));
                            if let Some((q1, q2)) = pair {
                                let witness = Witness::DoubleCross { path, w1, w2, a1, a2 };
                                self.offer(witness, vec![q1, q2], visit)?;
                            }
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn exchange(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (a, pa) in paths.iter().enumerate() {
            for x in 0..pa.len() - 1 {
                if !self.in_r(pa[x]) {
                    continue;
                }
                for (b, pb) in paths.iter().enumerate() {
                    if a == b {
                        continue;
                    }
                    for y in 1..pb.len().saturating_sub(1) {
                        if !self.arc(pb[y], pa[x + 1]) || !self.in_f(pb[y + 1]) {
                            continue;
                        }
                        if let Some(q) = self.hp.between(pa[x], pb[y + 1]) {
                            let witness = Witness::TailSwap(TailSwap::Exchange { a, x, b, y });
                            self.offer(witness, vec![q], visit)?;
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn relocate_after(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (a, pa) in paths.iter().enumerate() {
            for end in 1..pa.len().saturating_sub(1) {
                if !self.in_r(pa[end]) {
                    continue;
                }
                for (b, pb) in paths.iter().enumerate() {
                    if a == b {
                        continue;
                    }
                    for y in 0..pb.len() - 1 {
                        if !self.in_f(pb[y + 1]) {
                            continue;
                        }
                        let Some(q) = self.hp.between(pa[end], pb[y + 1]) else { continue };
                        for start in 1..=end {
                            if !self.arc(pb[y], pa[start]) {
                                continue;
                            }
                            // dropped = start - cut - 1 must stay below |Q|
                            let lowest = start.saturating_sub(q.len());
                            for cut in (lowest..start).rev() {
                                if !self.arc(pa[cut], pa[end + 1]) {
                                    continue;
                                }
                                let witness = Witness::TailSwap(TailSwap::RelocateAfter { a, cut, start, end, b, y });
                                self.offer(witness, vec![q.clone()], visit)?;
                            }
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn relocate_before(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (b, pb) in paths.iter().enumerate() {
            for y in 0..pb.len().saturating_sub(2) {
                if !self.in_f(pb[y + 1]) {
                    continue;
                }
                for (a, pa) in paths.iter().enumerate() {
                    if a == b {
                        continue;
                    }
                    for x in 0..pa.len() - 1 {
                        if !self.in_r(pa[x]) {
                            continue;
                        }
                        let Some(q) = self.hp.between(pa[x], pb[y + 1]) else { continue };
                        for end in y + 1..pb.len() - 1 {
                            if !self.arc(pb[end], pa[x + 1]) {
                                continue;
                            }
                            let highest = (end + q.len()).min(pb.len() - 1);
                            for resume in end + 1..=highest {
                                if !self.arc(pb[y], pb[resume]) {
                                    continue;
                                }
                                let witness = Witness::TailSwap(TailSwap::RelocateBefore { a, x, b, y, end, resume });
                                self.offer(witness, vec![q.clone()], visit)?;
                            }
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn fold(&mut self, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let paths = self.sys.paths();
        for (path, p) in paths.iter().enumerate() {
            let len = p.len();
            for p2 in 1..len {
                if !self.in_f(p[p2]) {
                    continue;
                }
                for p5 in p2 + 1..len - 1 {
                    if !self.in_r(p[p5]) {
                        continue;
                    }
                    let Some(q) = self.hp.between(p[p5], p[p2]) else { continue };
                    for p1 in (p2.saturating_sub(q.len())..p2).rev() {
                        let gap1 = p2 - p1 - 1;
                        for p3 in p2..p5 {
                            if !self.arc(p[p3], p[p5 + 1]) {
                                continue;
                            }
                            for p4 in p3 + 1..=p5 {
                                let dropped = gap1 + (p4 - p3 - 1);
                                if dropped >= q.len() {
                                    break;
                                }
                                if !self.arc(p[p1], p[p4]) {
                                    continue;
                                }
                                let witness = Witness::TailSwap(TailSwap::Fold { path, p1, p2, p3, p4, p5 });
                                self.offer(witness, vec![q.clone()], visit)?;
                            }
                        }
                    }
                }
            }
        }
        ControlFlow::Continue(())
    }
}
