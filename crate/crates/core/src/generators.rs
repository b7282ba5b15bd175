//! Seeded instance generation and exhaustive small-order enumeration.
//!
//! Random streams come from ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded with
//! `SeedableRng::seed_from_u64(seed)`. Vertex pairs are visited as `(u, v)`
//! with `u < v` ascending, and every pair consumes exactly two 64-bit draws
//! `a`, `b`:
//!
//! * tournament: `v -> u` if the top bit of `b` is set, else `u -> v`;
//! * semicomplete: digon if `(a >> 11) * 2^-53 < digon_prob`, otherwise
//!   oriented by `b` as for tournaments.
//!
//! Any other implementation of ChaCha8 with the same seeding reproduces the
//! same digraphs.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::digraph::{degree_threshold, Digraph};

/// Stream identifier recorded in generated files.
pub const RNG_ALGORITHM: &str = "chacha8-seed_from_u64";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("n must be at least 1")]
    ZeroOrder,
    #[error("digon probability {0} outside [0, 1]")]
    DigonProbability(f64),
    #[error("rotational tournaments need odd n (got {0})")]
    EvenRotational(usize),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("target semi-degree {target} unreachable on {n} vertices")]
    InfeasibleTarget { n: usize, target: i64 },
    #[error("base digraph already has semi-degree {have} above target {target}")]
    AboveTarget { have: usize, target: usize },
    #[error("exhaustive enumeration of {kind} digraphs capped at n={cap} (got {n})")]
    EnumerationTooLarge { kind: &'static str, n: usize, cap: usize },
    #[error("kind {0} cannot be enumerated")]
    NotEnumerable(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenKind {
    Tournament,
    Semicomplete,
    Rotational,
    NearThreshold,
}

impl GenKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GenKind::Tournament => "tournament",
            GenKind::Semicomplete => "semicomplete",
            GenKind::Rotational => "rotational",
            GenKind::NearThreshold => "near_threshold",
        }
    }
}

impl std::str::FromStr for GenKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tournament" => Ok(GenKind::Tournament),
            "semicomplete" => Ok(GenKind::Semicomplete),
            "rotational" => Ok(GenKind::Rotational),
            "near_threshold" => Ok(GenKind::NearThreshold),
            other => Err(format!("unknown generator kind `{other}`")),
        }
    }
}

impl std::fmt::Display for GenKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub n: usize,
    pub kind: GenKind,
    /// Semicomplete and near-threshold kinds.
    pub digon_prob: f64,
    /// Near-threshold kind only.
    pub k: usize,
    /// Near-threshold kind only: added to `⌈(n+k−1)/2⌉`.
    pub offset: i64,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(kind: GenKind, n: usize, seed: u64) -> Self {
        GenSpec { n, kind, digon_prob: 0.0, k: 2, offset: 0, seed }
    }

    pub fn tournament(n: usize, seed: u64) -> Self {
        Self::new(GenKind::Tournament, n, seed)
    }

    pub fn semicomplete(n: usize, digon_prob: f64, seed: u64) -> Self {
        GenSpec { digon_prob, ..Self::new(GenKind::Semicomplete, n, seed) }
    }

    pub fn rotational(n: usize) -> Self {
        Self::new(GenKind::Rotational, n, 0)
    }

    pub fn near_threshold(n: usize, k: usize, offset: i64, seed: u64) -> Self {
        GenSpec { k, offset, ..Self::new(GenKind::NearThreshold, n, seed) }
    }

    /// Target semi-degree of a near-threshold spec.
    pub fn target_semi_degree(&self) -> Result<usize, GenError> {
        if self.k == 0 {
            return Err(GenError::ZeroK);
        }
        let base = degree_threshold(self.n, self.k).map_err(|_| GenError::ZeroOrder)? as i64;
        let target = base + self.offset;
        if target < 0 || target > self.n as i64 - 1 {
            return Err(GenError::InfeasibleTarget { n: self.n, target });
        }
        Ok(target as usize)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n == 0 {
            return Err(GenError::ZeroOrder);
        }
        if !(0.0..=1.0).contains(&self.digon_prob) {
            return Err(GenError::DigonProbability(self.digon_prob));
        }
        match self.kind {
            GenKind::Rotational if self.n.is_multiple_of(2) => Err(GenError::EvenRotational(self.n)),
            GenKind::NearThreshold => self.target_semi_degree().map(|_| ()),
            _ => Ok(()),
        }
    }
}

fn unit(draw: u64) -> f64 {
    (draw >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn random_semicomplete(n: usize, digon_prob: f64, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = Digraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            let a = rng.next_u64();
            let b = rng.next_u64();
            if unit(a) < digon_prob {
                d.add_arc(u, v).unwrap();
                d.add_arc(v, u).unwrap();
            } else if b >> 63 == 1 {
                d.add_arc(v, u).unwrap();
            } else {
                d.add_arc(u, v).unwrap();
            }
        }
    }
    d
}

fn rotational(n: usize) -> Digraph {
    let mut d = Digraph::empty(n);
    for i in 0..n {
        for j in 1..=(n - 1) / 2 {
            d.add_arc(i, (i + j) % n).unwrap();
        }
    }
    d
}

/// Adds reverse arcs until the minimum semi-degree reaches `target`.
///
/// Each round picks the lowest vertex of minimum semi-degree. If its
/// out-degree is the deficient side it gains an arc to the in-neighbour
/// with the smallest in-degree that it does not already point at; the
/// in-degree case is symmetric. Semi-degree grows by at most one per arc,
/// so the target is hit exactly.
fn raise_semi_degree(d: &mut Digraph, target: usize) {
    let n = d.order();
    loop {
        let (v, semi) =
            (0..n).map(|v| (v, d.out_degree(v).min(d.in_degree(v)))).min_by_key(|&(v, s)| (s, v)).expect("n >= 1");
        if semi >= target {
            return;
        }
        if d.out_degree(v) == semi {
            let u = d
                .in_neighbors(v)
                .ones()
                .filter(|&u| !d.has_arc(v, u))
                .min_by_key(|&u| (d.in_degree(u), u))
                .expect("deficient out-degree leaves an in-neighbour to point back at");
            d.add_arc(v, u).unwrap();
        } else {
            let u = d
                .out_neighbors(v)
                .ones()
                .filter(|&u| !d.has_arc(u, v))
                .min_by_key(|&u| (d.out_degree(u), u))
                .expect("deficient in-degree leaves an out-neighbour to point back from");
            d.add_arc(u, v).unwrap();
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Digraph, GenError> {
    spec.validate()?;
    Ok(match spec.kind {
        GenKind::Tournament => random_semicomplete(spec.n, 0.0, spec.seed),
        GenKind::Semicomplete => random_semicomplete(spec.n, spec.digon_prob, spec.seed),
        GenKind::Rotational => rotational(spec.n),
        GenKind::NearThreshold => {
            let target = spec.target_semi_degree()?;
            let mut d = random_semicomplete(spec.n, spec.digon_prob, spec.seed);
            let have = d.min_semi_degree();
            if have > target {
                return Err(GenError::AboveTarget { have, target });
            }
            raise_semi_degree(&mut d, target);
            d
        }
    })
}

pub const TOURNAMENT_ENUM_CAP: usize = 6;
pub const SEMICOMPLETE_ENUM_CAP: usize = 4;

/// Every labelled tournament (`n <= 6`) or semicomplete digraph (`n <= 4`)
/// on `n` vertices, each exactly once.
///
/// Instance `i` orients pair `j` (in `(u, v)`, `u < v` order) by digit `j`
/// of `i`, least significant first: base 2 for tournaments (`0`: `u -> v`,
/// `1`: `v -> u`), base 3 for semicomplete digraphs (`2`: digon).
pub fn enumerate_small(n: usize, kind: GenKind) -> Result<impl Iterator<Item = Digraph>, GenError> {
    let (base, cap, name) = match kind {
        GenKind::Tournament => (2u64, TOURNAMENT_ENUM_CAP, "tournament"),
        GenKind::Semicomplete => (3u64, SEMICOMPLETE_ENUM_CAP, "semicomplete"),
        GenKind::Rotational => return Err(GenError::NotEnumerable("rotational")),
        GenKind::NearThreshold => return Err(GenError::NotEnumerable("near_threshold")),
    };
    if n > cap {
        return Err(GenError::EnumerationTooLarge { kind: name, n, cap });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = base.pow(pairs.len() as u32);
    Ok((0..total).map(move |mut code| {
        let mut d = Digraph::empty(n);
        for &(u, v) in &pairs {
            match code % base {
                0 => {
                    d.add_arc(u, v).unwrap();
                }
                1 => {
                    d.add_arc(v, u).unwrap();
                }
                _ => {
                    d.add_arc(u, v).unwrap();
                    d.add_arc(v, u).unwrap();
                }
            }
            code /= base;
        }
        d
    }))
}
