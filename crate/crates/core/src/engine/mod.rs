//! Growing path systems by local rewiring, and the solve pipeline built on it.

mod hpath;
mod moves;

use std::ops::ControlFlow;

use thiserror::Error;

pub use moves::{AugmentationMove, TailSwap, Template, Witness};

use crate::boundary::{boundary_partition, BoundaryError, BoundaryPartition};
use crate::digraph::Digraph;
use crate::oracle::{self, OracleError, VerdictKind, DEFAULT_BUDGET};
use crate::path_system::{is_ddpc, validate_system, PathSystem, ValidationReport};

use moves::{realize, Searcher};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("invalid path system: {0:?}")]
    Invalid(ValidationReport),
    #[error("path system already spans the digraph")]
    Spanning,
    #[error("partition does not belong to this path system")]
    StalePartition,
    #[error("move was found on a different path system")]
    WitnessInvalidated,
}

fn check_system(d: &Digraph, sys: &PathSystem) -> Result<(), EngineError> {
    let report = validate_system(d, sys);
    if report.is_valid() {
        Ok(())
    } else {
        Err(EngineError::Invalid(report))
    }
}

fn check_partition(d: &Digraph, sys: &PathSystem, part: &BoundaryPartition) -> Result<(), EngineError> {
    check_system(d, sys)?;
    if sys.cover_count() == d.order() {
        return Err(EngineError::Spanning);
    }
    if part.fingerprint != sys.fingerprint() {
        return Err(EngineError::StalePartition);
    }
    Ok(())
}

/// Every move of `templates`, in search order.
fn collect(
    d: &Digraph,
    sys: &PathSystem,
    part: &BoundaryPartition,
    templates: &[Template],
) -> Result<Vec<AugmentationMove>, EngineError> {
    check_partition(d, sys, part)?;
    let mut found = Vec::new();
    let mut searcher = Searcher::new(d, sys, part);
    for &t in templates {
        let _ = searcher.run(t, &mut |mv, _| {
            found.push(mv);
            ControlFlow::Continue(())
        });
    }
    Ok(found)
}

/// All moves of all templates. Order: templates in
/// [`Template::SEARCH_ORDER`], then witnesses lexicographically by the
/// positions listed in their [`Witness`] variant.
pub fn find_moves(
    d: &Digraph,
    sys: &PathSystem,
    part: &BoundaryPartition,
) -> Result<Vec<AugmentationMove>, EngineError> {
    collect(d, sys, part, &Template::SEARCH_ORDER)
}

pub fn find_template_moves(
    d: &Digraph,
    sys: &PathSystem,
    part: &BoundaryPartition,
    template: Template,
) -> Result<Vec<AugmentationMove>, EngineError> {
    collect(d, sys, part, &[template])
}

fn first_with_result(
    d: &Digraph,
    sys: &PathSystem,
    part: &BoundaryPartition,
) -> Option<(AugmentationMove, PathSystem)> {
    let mut searcher = Searcher::new(d, sys, part);
    let mut hit = None;
    for t in Template::SEARCH_ORDER {
        let flow = searcher.run(t, &mut |mv, next| {
            hit = Some((mv, next));
            ControlFlow::Break(())
        });
        if flow.is_break() {
            break;
        }
    }
    hit
}

/// The move the driver would apply: the first one of [`find_moves`].
pub fn first_move(
    d: &Digraph,
    sys: &PathSystem,
    part: &BoundaryPartition,
) -> Result<Option<AugmentationMove>, EngineError> {
    check_partition(d, sys, part)?;
    Ok(first_with_result(d, sys, part).map(|(mv, _)| mv))
}

pub fn apply_move(d: &Digraph, sys: &PathSystem, mv: &AugmentationMove) -> Result<PathSystem, EngineError> {
    check_system(d, sys)?;
    if mv.source_fingerprint != sys.fingerprint() {
        return Err(EngineError::WitnessInvalidated);
    }
    match realize(d, sys, mv.witness, mv.h_paths.clone()) {
        Some((again, next)) if again.after_cover == mv.after_cover => Ok(next),
        _ => Err(EngineError::WitnessInvalidated),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Covered,
    Stuck,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Covered => "covered",
            Outcome::Stuck => "stuck",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Augmentation {
    pub system: PathSystem,
    pub trace: Vec<AugmentationMove>,
    pub outcome: Outcome,
}

/// Applies first moves until the system spans `d` or no move applies.
pub fn augment_to_cover(d: &Digraph, sys: &PathSystem) -> Result<Augmentation, EngineError> {
    check_system(d, sys)?;
    let mut current = sys.clone();
    let mut trace = Vec::new();
    loop {
        if current.cover_count() == d.order() {
            debug_assert_eq!(is_ddpc(d, &current), Ok(true));
            return Ok(Augmentation { system: current, trace, outcome: Outcome::Covered });
        }
        let part = match boundary_partition(d, &current) {
            Ok(p) => p,
            Err(BoundaryError::Invalid(r)) => return Err(EngineError::Invalid(r)),
            Err(BoundaryError::EmptyH) => unreachable!("cover below n"),
        };
        match first_with_result(d, &current, &part) {
            Some((mv, next)) => {
                trace.push(mv);
                current = next;
            }
            None => return Ok(Augmentation { system: current, trace, outcome: Outcome::Stuck }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineConfig {
    /// Node budget for each oracle call.
    pub budget: u64,
    /// Run the exact spanning search when augmentation gets stuck.
    pub fallback: bool,
    /// Largest order for which the fallback runs.
    pub fallback_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { budget: DEFAULT_BUDGET, fallback: true, fallback_cap: 14 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("digraph is not semicomplete")]
    NotSemicomplete,
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("no DDPC exists for these terminals")]
    NoDdpc,
    #[error("no DDPC found; existence undecided")]
    Unknown,
}

/// How a solve ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    /// Augmentation alone reached a spanning system.
    Augmented(PathSystem),
    /// Augmentation got stuck and the exact search found one.
    Fallback(PathSystem),
    /// Single sink: answered by the exact search directly.
    Direct(PathSystem),
    /// Certified by the exact search.
    NoDdpc,
    /// Budget exhausted, or stuck with the fallback disabled or capped.
    Unknown,
}

impl SolveOutcome {
    pub fn system(&self) -> Option<&PathSystem> {
        match self {
            SolveOutcome::Augmented(s) | SolveOutcome::Fallback(s) | SolveOutcome::Direct(s) => Some(s),
            SolveOutcome::NoDdpc | SolveOutcome::Unknown => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    /// The exact initial linkage (absent for a single sink or when none exists).
    pub initial: Option<PathSystem>,
    pub augmentation: Option<Augmentation>,
}

fn verdict_outcome(v: oracle::OracleVerdict, wrap: fn(PathSystem) -> SolveOutcome) -> SolveOutcome {
    match v.kind {
        VerdictKind::Found => wrap(v.system.expect("found verdict carries a system")),
        VerdictKind::NoneExists => SolveOutcome::NoDdpc,
        VerdictKind::BudgetExceeded => SolveOutcome::Unknown,
    }
}

/// Exact linkage, then augmentation, then (optionally) exact fallback.
pub fn solve_detailed(
    d: &Digraph,
    source: usize,
    sinks: &[usize],
    config: &EngineConfig,
) -> Result<SolveReport, SolveError> {
    if !d.is_semicomplete() {
        return Err(SolveError::NotSemicomplete);
    }
    if sinks.len() == 1 {
        let v = oracle::exact_ddpc(d, source, sinks, config.budget)?;
        let outcome = verdict_outcome(v, SolveOutcome::Direct);
        return Ok(SolveReport { outcome, initial: None, augmentation: None });
    }
    let linkage = oracle::exact_st_linkage(d, source, sinks, config.budget)?;
    let initial = match verdict_outcome(linkage, SolveOutcome::Direct) {
        SolveOutcome::Direct(sys) => sys,
        other => return Ok(SolveReport { outcome: other, initial: None, augmentation: None }),
    };
    let aug = augment_to_cover(d, &initial).expect("oracle linkage is valid");
    let outcome = match aug.outcome {
        Outcome::Covered => SolveOutcome::Augmented(aug.system.clone()),
        Outcome::Stuck if config.fallback && d.order() <= config.fallback_cap => {
            verdict_outcome(oracle::exact_ddpc(d, source, sinks, config.budget)?, SolveOutcome::Fallback)
        }
        Outcome::Stuck => SolveOutcome::Unknown,
    };
    Ok(SolveReport { outcome, initial: Some(initial), augmentation: Some(aug) })
}

pub fn solve(d: &Digraph, source: usize, sinks: &[usize], config: &EngineConfig) -> Result<PathSystem, SolveError> {
    match solve_detailed(d, source, sinks, config)?.outcome {
        SolveOutcome::Augmented(s) | SolveOutcome::Fallback(s) | SolveOutcome::Direct(s) => Ok(s),
        SolveOutcome::NoDdpc => Err(SolveError::NoDdpc),
        SolveOutcome::Unknown => Err(SolveError::Unknown),
    }
}
