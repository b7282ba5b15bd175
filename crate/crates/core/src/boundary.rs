//! Boundary sets of a non-spanning path system `L` relative to the
//! uncovered subdigraph `H = D - V(L)`.
//!
//! * `F`: covered vertices with an in-arc from `H`.
//! * `R`: covered vertices with an out-arc to `H`.
//! * `F_m = F \ R`, `R_m = R \ F`.
//! * `F⁻`, `R⁺`: on-path predecessors of `F \ {s}` and successors of `R \ T`.
//!
//! The source lies on every path, so each path contributes its own
//! successor of `s`; `s` itself has no predecessor. The source is classified
//! into `F`/`R` by the same arc test as every other covered vertex.

use std::fmt;

use thiserror::Error;

use crate::digraph::{degree_threshold, Digraph, VertexSet};
use crate::path_system::{validate_system, PathSystem, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("path system is spanning; the uncovered subdigraph is empty")]
    EmptyH,
    #[error("invalid path system: {0:?}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryPartition {
    pub f: VertexSet,
    pub r: VertexSet,
    pub f_m: VertexSet,
    pub r_m: VertexSet,
    pub f_minus: VertexSet,
    pub r_plus: VertexSet,
    pub fm_minus: VertexSet,
    pub rm_plus: VertexSet,
    pub h: VertexSet,
    pub h_strong: bool,
    /// Fingerprint of the system this partition was computed from.
    pub fingerprint: u64,
}

impl BoundaryPartition {
    pub fn h_vertices(&self) -> Vec<usize> {
        self.h.ones().collect()
    }

    pub fn h_len(&self) -> usize {
        self.h.count_ones(..)
    }
}

fn shift(sys: &PathSystem, members: &VertexSet, n: usize, forward: bool) -> VertexSet {
    let mut out = VertexSet::with_capacity(n);
    for p in sys.paths() {
        for w in p.windows(2) {
            let (from, to) = if forward { (w[0], w[1]) } else { (w[1], w[0]) };
            if members.contains(from) {
                out.insert(to);
            }
        }
    }
    out
}

pub fn boundary_partition(d: &Digraph, sys: &PathSystem) -> Result<BoundaryPartition, BoundaryError> {
    let report = validate_system(d, sys);
    if !report.is_valid() {
        return Err(BoundaryError::Invalid(report));
    }
    let n = d.order();
    let covered = sys.covered(n);
    let mut h = covered.clone();
    h.toggle_range(..);
    if h.is_clear() {
        return Err(BoundaryError::EmptyH);
    }

    let mut f = VertexSet::with_capacity(n);
    let mut r = VertexSet::with_capacity(n);
    for x in covered.ones() {
        if !d.in_neighbors(x).is_disjoint(&h) {
            f.insert(x);
        }
        if !d.out_neighbors(x).is_disjoint(&h) {
            r.insert(x);
        }
    }
    let mut f_m = f.clone();
    f_m.difference_with(&r);
    let mut r_m = r.clone();
    r_m.difference_with(&f);

    let f_minus = shift(sys, &f, n, false);
    let r_plus = shift(sys, &r, n, true);
    let fm_minus = shift(sys, &f_m, n, false);
    let rm_plus = shift(sys, &r_m, n, true);

    let (sub, _) = d.induced_subdigraph(&h).expect("H is a subset of V(D)");
    Ok(BoundaryPartition {
        f,
        r,
        f_m,
        r_m,
        f_minus,
        r_plus,
        fm_minus,
        rm_plus,
        h,
        h_strong: sub.is_strong(),
        fingerprint: sys.fingerprint(),
    })
}

/// Instance properties that the structural claims depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hypotheses {
    pub semicomplete: bool,
    /// `δ⁰(D) ≥ ⌈(n+k−1)/2⌉`.
    pub threshold_met: bool,
    /// The system is certified maximum by exhaustive search.
    pub maximal: bool,
    pub h_strong: bool,
}

/// Which hypotheses a claim needs before a failure counts as a defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Requires {
    pub semicomplete: bool,
    pub threshold: bool,
    pub maximal: bool,
    pub strong: bool,
}

impl Requires {
    const SEMI: Requires = Requires { semicomplete: true, threshold: false, maximal: false, strong: false };
    const THRESHOLD: Requires = Requires { semicomplete: true, threshold: true, maximal: false, strong: false };
    const MAX_THRESHOLD: Requires = Requires { semicomplete: true, threshold: true, maximal: true, strong: false };
    const MAX_STRONG: Requires = Requires { semicomplete: true, threshold: false, maximal: true, strong: true };
    const ALL: Requires = Requires { semicomplete: true, threshold: true, maximal: true, strong: true };

    pub fn satisfied_by(self, h: Hypotheses) -> bool {
        (!self.semicomplete || h.semicomplete)
            && (!self.threshold || h.threshold_met)
            && (!self.maximal || h.maximal)
            && (!self.strong || h.h_strong)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub name: &'static str,
    pub holds: bool,
    pub requires: Requires,
    pub hypotheses_met: bool,
}

impl Claim {
    /// Claim failed although everything it depends on holds.
    pub fn is_defect(&self) -> bool {
        self.hypotheses_met && !self.holds
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub hypotheses: Hypotheses,
    pub claims: Vec<Claim>,
}

impl LemmaReport {
    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.claim(name).is_some_and(|c| c.holds)
    }

    pub fn defects(&self) -> impl Iterator<Item = &Claim> {
        self.claims.iter().filter(|c| c.is_defect())
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.hypotheses;
        writeln!(f, "hyp.semicomplete={}", h.semicomplete)?;
        writeln!(f, "hyp.threshold_met={}", h.threshold_met)?;
        writeln!(f, "hyp.maximal={}", h.maximal)?;
        writeln!(f, "hyp.h_strong={}", h.h_strong)?;
        for c in &self.claims {
            writeln!(
                f,
                "claim.{}={} hypotheses={}",
                c.name,
                if c.holds { "pass" } else { "fail" },
                if c.hypotheses_met { "met" } else { "unmet" }
            )?;
        }
        Ok(())
    }
}

/// Evaluates the structural claims about a non-spanning system. `maximal`
/// must only be set when the system has been certified maximum.
pub fn lemma_report(d: &Digraph, sys: &PathSystem, maximal: bool) -> Result<LemmaReport, BoundaryError> {
    let part = boundary_partition(d, sys)?;
    let n = d.order();
    let k = sys.k();
    let h_len = part.h_len();
    let l_len = n - h_len;
    let hyps = Hypotheses {
        semicomplete: d.is_semicomplete(),
        threshold_met: d.min_semi_degree() >= degree_threshold(n, k).unwrap_or(usize::MAX),
        maximal,
        h_strong: part.h_strong,
    };

    let h_vertices = part.h_vertices();
    let in_h = |v: usize| d.in_neighbors(v).intersection(&part.h).count();
    let out_h = |v: usize| d.out_neighbors(v).intersection(&part.h).count();
    let min_in = h_vertices.iter().map(|&x| in_h(x)).min().unwrap_or(0);
    let min_out = h_vertices.iter().map(|&y| out_h(y)).min().unwrap_or(0);
    // over all pairs the tightest sum is min d-(x) + min d+(y)
    let eq1 = min_in + min_out + 1 >= h_len;

    let h_bound = (n + 1).saturating_sub(k) / 2;
    let h_size = h_len < h_bound;

    let r_plus_f = part.r_plus.is_disjoint(&part.f);
    let f_minus_r = part.f_minus.is_disjoint(&part.r);

    let mut union = part.f.clone();
    union.union_with(&part.r);
    let cover_union = union.count_ones(..) == l_len;

    let both: VertexSet = {
        let mut b = part.f.clone();
        b.intersect_with(&part.r);
        b
    };
    let both_len = both.count_ones(..);
    let intersection_bound = both_len <= k;
    let per_path = sys.paths().iter().all(|p| p.iter().filter(|&&v| both.contains(v)).count() <= 1);

    // no R-vertex strictly before an F-vertex on any path
    let path_order = sys.paths().iter().all(|p| {
        let mut seen_r = false;
        for &v in p {
            if seen_r && part.f.contains(v) {
                return false;
            }
            if part.r.contains(v) {
                seen_r = true;
            }
        }
        true
    });

    let f_len = part.f.count_ones(..);
    let r_len = part.r.count_ones(..);
    let shifted = part.f_minus.count_ones(..) + k >= f_len && part.r_plus.count_ones(..) + k >= r_len;

    // |F|, |R| ≥ (n+k+1)/2 − |H|, compared doubled to stay in integers
    let fr_lower = 2 * (f_len + h_len) > n + k && 2 * (r_len + h_len) > n + k;
    let fm_len = part.f_m.count_ones(..);
    let rm_len = part.r_m.count_ones(..);
    let m_lower = 2 * (fm_len + h_len) + k > n && 2 * (rm_len + h_len) + k > n;
    let m_union = fm_len + rm_len + k >= l_len;

    let mk =
        |name, holds, requires: Requires| Claim { name, holds, requires, hypotheses_met: requires.satisfied_by(hyps) };
    let claims = vec![
        mk("eq1_pairwise_degree", eq1, Requires::MAX_THRESHOLD),
        mk("h_strong", part.h_strong, Requires::MAX_THRESHOLD),
        mk("h_size_bound", h_size, Requires::MAX_THRESHOLD),
        mk("r_plus_f_disjoint", r_plus_f, Requires::MAX_STRONG),
        mk("f_minus_r_disjoint", f_minus_r, Requires::MAX_STRONG),
        mk("cover_union", cover_union, Requires::SEMI),
        mk("path_order", path_order, Requires::MAX_STRONG),
        mk("intersection_bound", intersection_bound, Requires::ALL),
        mk("per_path_intersection", per_path, Requires::ALL),
        mk("shifted_set_bounds", shifted, Requires::default()),
        mk("fr_lower_bound", fr_lower, Requires::THRESHOLD),
        mk("m_lower_bound", m_lower, Requires::ALL),
        mk("m_union_bound", m_union, Requires::ALL),
    ];
    Ok(LemmaReport { hypotheses: hyps, claims })
}
