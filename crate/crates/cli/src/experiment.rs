//! Running plans and writing run directories.
//!
//! A run directory holds:
//!
//! * `run.txt`: schema version, RNG identifiers and the canonical plan.
//! * `results.csv`: one [`ExperimentRow`] per trial, in plan order.
//! * `instances/trial_NNNNN.dgr`: the digraph, with its provenance and
//!   terminals as leading comments.
//! * `systems/trial_NNNNN.engine.psys`: the system the pipeline ended with
//!   (a DDPC, or the stuck system), when one exists.
//! * `systems/trial_NNNNN.oracle.psys`: the oracle's DDPC, when found.
//! * `systems/trial_NNNNN.trace`: applied moves, when any.
//! * `corpus/trial_NNNNN.{dgr,psys}`: certified maximum non-spanning systems,
//!   ready for `audit`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use ddpc::digraph::degree_threshold;
use ddpc::engine::{solve_detailed, EngineConfig, SolveOutcome, SolveReport};
use ddpc::format::{write_dgr, write_psys};
use ddpc::generators::{generate, GenError, GenSpec, RNG_ALGORITHM};
use ddpc::oracle::{exact_ddpc, exact_max_system, OracleError, VerdictKind};
use ddpc::{Digraph, PathSystem};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::plan::{Plan, Trial};

pub const SCHEMA: &str = "ddpc-experiment v1";
pub const CSV_HEADER: &str =
    "seed,n,k,delta_zero,threshold,meets_threshold,oracle_ddpc,engine_outcome,moves_applied,max_cover,runtime_ms";

/// XORed into the trial seed to get the terminal-selection stream.
pub const TERMINAL_STREAM: u64 = 0x7465_726d_696e_616c;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("trial {trial}: {source}")]
    Generate { trial: usize, source: GenError },
    #[error("trial {trial}: needs at least k+1 = {need} vertices, has {n}")]
    TooFewVertices { trial: usize, n: usize, need: usize },
    #[error("trial {trial}: {source}")]
    Oracle { trial: usize, source: OracleError },
    #[error("trial {trial}: {message}")]
    Solve { trial: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Source and `k` distinct sinks drawn from the trial's own stream:
/// `s` uniform over `0..n`, then sinks by a partial Fisher-Yates shuffle of
/// the remaining vertices. `below(m)` maps a 64-bit draw `x` to
/// `(x * m) >> 64`.
pub fn choose_terminals(n: usize, k: usize, seed: u64) -> (usize, Vec<usize>) {
    assert!(n > k, "need n > k");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ TERMINAL_STREAM);
    let mut below = |m: usize| ((rng.next_u64() as u128 * m as u128) >> 64) as usize;
    let mut pool: Vec<usize> = (0..n).collect();
    let s = pool.remove(below(n));
    for i in 0..k {
        let j = i + below(pool.len() - i);
        pool.swap(i, j);
    }
    pool.truncate(k);
    (s, pool)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineOutcome {
    /// Augmentation alone produced the DDPC.
    Covered,
    /// No DDPC produced.
    Stuck,
    /// The DDPC came from the exact search.
    FallbackUsed,
}

impl EngineOutcome {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineOutcome::Covered => "covered",
            EngineOutcome::Stuck => "stuck",
            EngineOutcome::FallbackUsed => "fallback_used",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        [EngineOutcome::Covered, EngineOutcome::Stuck, EngineOutcome::FallbackUsed]
            .into_iter()
            .find(|o| o.as_str() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentRow {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub delta_zero: usize,
    pub threshold: usize,
    pub meets_threshold: bool,
    pub oracle_ddpc: VerdictKind,
    pub engine_outcome: EngineOutcome,
    pub moves_applied: usize,
    pub max_cover: usize,
    pub runtime_ms: u64,
}

impl ExperimentRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.seed,
            self.n,
            self.k,
            self.delta_zero,
            self.threshold,
            self.meets_threshold,
            self.oracle_ddpc,
            self.engine_outcome.as_str(),
            self.moves_applied,
            self.max_cover,
            self.runtime_ms
        )
    }

    pub fn from_csv(line: &str) -> Option<Self> {
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 11 {
            return None;
        }
        let verdict = [VerdictKind::Found, VerdictKind::NoneExists, VerdictKind::BudgetExceeded]
            .into_iter()
            .find(|v| v.as_str() == f[6])?;
        Some(ExperimentRow {
            seed: f[0].parse().ok()?,
            n: f[1].parse().ok()?,
            k: f[2].parse().ok()?,
            delta_zero: f[3].parse().ok()?,
            threshold: f[4].parse().ok()?,
            meets_threshold: f[5].parse().ok()?,
            oracle_ddpc: verdict,
            engine_outcome: EngineOutcome::parse(f[7])?,
            moves_applied: f[8].parse().ok()?,
            max_cover: f[9].parse().ok()?,
            runtime_ms: f[10].parse().ok()?,
        })
    }
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub trial: Trial,
    pub digraph: Digraph,
    pub source: usize,
    pub sinks: Vec<usize>,
    pub row: ExperimentRow,
    pub report: SolveReport,
    pub oracle_system: Option<PathSystem>,
    /// Maximum system, when the oracle proved no DDPC exists and finished
    /// the maximum search.
    pub max_system: Option<PathSystem>,
}

impl TrialResult {
    /// The DDPC from the pipeline, else the stuck system.
    pub fn engine_system(&self) -> Option<&PathSystem> {
        self.report.outcome.system().or(self.report.augmentation.as_ref().map(|a| &a.system))
    }

    pub fn provenance(&self) -> Vec<String> {
        let s = &self.trial.spec;
        let sinks: Vec<String> = self.sinks.iter().map(ToString::to_string).collect();
        vec![
            format!("trial={}", self.trial.index),
            format!(
                "kind={} n={} k={} offset={} digon_prob={} seed={}",
                s.kind, s.n, self.trial.k, s.offset, s.digon_prob, s.seed
            ),
            format!("source={} sinks={}", self.source, sinks.join(",")),
            format!("rng={RNG_ALGORITHM}"),
        ]
    }
}

fn engine_outcome(report: &SolveReport) -> EngineOutcome {
    match report.outcome {
        SolveOutcome::Augmented(_) => EngineOutcome::Covered,
        SolveOutcome::Fallback(_) | SolveOutcome::Direct(_) => EngineOutcome::FallbackUsed,
        SolveOutcome::NoDdpc | SolveOutcome::Unknown => EngineOutcome::Stuck,
    }
}

pub fn run_trial(trial: &Trial, plan: &Plan) -> Result<TrialResult, ExperimentError> {
    let started = Instant::now();
    let index = trial.index;
    let spec: &GenSpec = &trial.spec;
    let d = generate(spec).map_err(|source| ExperimentError::Generate { trial: index, source })?;
    let n = d.order();
    if n <= trial.k {
        return Err(ExperimentError::TooFewVertices { trial: index, n, need: trial.k + 1 });
    }
    let (source, sinks) = choose_terminals(n, trial.k, spec.seed);
    let oracle_err = |source| ExperimentError::Oracle { trial: index, source };

    let ddpc = exact_ddpc(&d, source, &sinks, plan.budget).map_err(oracle_err)?;
    let (max_cover, max_system) = match ddpc.kind {
        VerdictKind::Found => (n, None),
        _ => {
            let m = exact_max_system(&d, source, &sinks, plan.budget).map_err(oracle_err)?;
            let certified = (m.kind == VerdictKind::Found).then_some(m.system).flatten();
            (m.max_cover, certified)
        }
    };

    let config = EngineConfig { budget: plan.budget, fallback: plan.fallback, fallback_cap: plan.fallback_cap };
    let report = solve_detailed(&d, source, &sinks, &config)
        .map_err(|e| ExperimentError::Solve { trial: index, message: e.to_string() })?;

    let delta_zero = d.min_semi_degree();
    let threshold = degree_threshold(n, trial.k).expect("n, k >= 1");
    let row = ExperimentRow {
        seed: spec.seed,
        n,
        k: trial.k,
        delta_zero,
        threshold,
        meets_threshold: delta_zero >= threshold,
        oracle_ddpc: ddpc.kind,
        engine_outcome: engine_outcome(&report),
        moves_applied: report.augmentation.as_ref().map_or(0, |a| a.trace.len()),
        max_cover,
        runtime_ms: if plan.timing { started.elapsed().as_millis() as u64 } else { 0 },
    };
    Ok(TrialResult {
        trial: trial.clone(),
        digraph: d,
        source,
        sinks,
        row,
        report,
        oracle_system: ddpc.system,
        max_system,
    })
}

/// Runs every trial (in parallel) and returns results in plan order.
pub fn run_plan(plan: &Plan) -> Result<Vec<TrialResult>, ExperimentError> {
    plan.trials().par_iter().map(|t| run_trial(t, plan)).collect()
}

pub fn csv(results: &[TrialResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        out.push_str(&r.row.to_csv());
        out.push('\n');
    }
    out
}

pub fn write_run(dir: &Path, plan: &Plan, results: &[TrialResult]) -> Result<(), ExperimentError> {
    for sub in ["instances", "systems", "corpus"] {
        fs::create_dir_all(dir.join(sub))?;
    }
    let mut manifest = format!("schema={SCHEMA}\nrng={RNG_ALGORITHM}\nterminal_stream={TERMINAL_STREAM:#x}\n");
    let _ = writeln!(manifest, "trials={}", results.len());
    manifest.push_str("# plan\n");
    manifest.push_str(&plan.canonical());
    fs::write(dir.join("run.txt"), manifest)?;
    fs::write(dir.join("results.csv"), csv(results))?;

    for r in results {
        let stem = format!("trial_{:05}", r.trial.index);
        let dgr = write_dgr(&r.digraph, &r.provenance());
        fs::write(dir.join("instances").join(format!("{stem}.dgr")), &dgr)?;
        let systems = dir.join("systems");
        if let Some(sys) = r.engine_system() {
            fs::write(systems.join(format!("{stem}.engine.psys")), write_psys(sys))?;
        }
        if let Some(sys) = &r.oracle_system {
            fs::write(systems.join(format!("{stem}.oracle.psys")), write_psys(sys))?;
        }
        if let Some(aug) = r.report.augmentation.as_ref().filter(|a| !a.trace.is_empty()) {
            let trace: String = aug.trace.iter().map(|m| format!("{m}\n")).collect();
            fs::write(systems.join(format!("{stem}.trace")), trace)?;
        }
        if let Some(sys) = r.max_system.as_ref().filter(|s| s.cover_count() < r.digraph.order()) {
            let corpus = dir.join("corpus");
            fs::write(corpus.join(format!("{stem}.dgr")), &dgr)?;
            fs::write(corpus.join(format!("{stem}.psys")), write_psys(sys))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Summary {
    pub trials: usize,
    pub oracle_found: usize,
    pub oracle_none: usize,
    pub oracle_budget: usize,
    pub covered: usize,
    pub stuck: usize,
    pub fallback_used: usize,
}

impl Summary {
    pub fn of(results: &[TrialResult]) -> Self {
        let mut s = Summary { trials: results.len(), ..Summary::default() };
        for r in results {
            match r.row.oracle_ddpc {
                VerdictKind::Found => s.oracle_found += 1,
                VerdictKind::NoneExists => s.oracle_none += 1,
                VerdictKind::BudgetExceeded => s.oracle_budget += 1,
            }
            match r.row.engine_outcome {
                EngineOutcome::Covered => s.covered += 1,
                EngineOutcome::Stuck => s.stuck += 1,
                EngineOutcome::FallbackUsed => s.fallback_used += 1,
            }
        }
        s
    }
}

impl std::fmt::Display for Summary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "trials={}", self.trials)?;
        writeln!(f, "oracle_found={}", self.oracle_found)?;
        writeln!(f, "oracle_none_exists={}", self.oracle_none)?;
        writeln!(f, "oracle_budget_exceeded={}", self.oracle_budget)?;
        writeln!(f, "engine_covered={}", self.covered)?;
        writeln!(f, "engine_stuck={}", self.stuck)?;
        write!(f, "engine_fallback_used={}", self.fallback_used)
    }
}

/// Parses, runs and writes a plan into `dir`.
pub fn run_experiment(plan: &Plan, dir: &Path) -> Result<Summary, ExperimentError> {
    let results = run_plan(plan)?;
    write_run(dir, plan, &results)?;
    Ok(Summary::of(&results))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn terminals_are_distinct_and_stable() {
        for seed in 0..200 {
            let (s, sinks) = choose_terminals(8, 3, seed);
            assert_eq!(sinks.len(), 3);
            assert!(!sinks.contains(&s));
            let mut all = sinks.clone();
            all.push(s);
            all.sort_unstable();
            all.dedup();
            assert_eq!(all.len(), 4);
            assert!(all.iter().all(|&v| v < 8));
            assert_eq!(choose_terminals(8, 3, seed), (s, sinks));
        }
        assert_eq!(choose_terminals(2, 1, 5).1.len(), 1);
    }

    #[test]
    fn row_roundtrip() {
        let row = ExperimentRow {
            seed: 3,
            n: 7,
            k: 2,
            delta_zero: 4,
            threshold: 4,
            meets_threshold: true,
            oracle_ddpc: VerdictKind::NoneExists,
            engine_outcome: EngineOutcome::Stuck,
            moves_applied: 2,
            max_cover: 6,
            runtime_ms: 0,
        };
        let line = row.to_csv();
        assert_eq!(line, "3,7,2,4,4,true,none_exists,stuck,2,6,0");
        assert_eq!(ExperimentRow::from_csv(&line), Some(row));
        assert_eq!(CSV_HEADER.split(',').count(), 11);
    }

    #[test]
    fn small_plan_rows_are_consistent() {
        let plan: Plan = "n = 5..7\nk = 2\nkind = tournament, near_threshold\nseeds = 4\n".parse().unwrap();
        let results = run_plan(&plan).unwrap();
        assert_eq!(results.len(), 24);
        for r in &results {
            let row = &r.row;
            assert_eq!(row.meets_threshold, row.delta_zero >= row.threshold);
            if row.engine_outcome == EngineOutcome::Covered {
                assert_ne!(row.oracle_ddpc, VerdictKind::NoneExists);
            }
            assert_eq!(row.oracle_ddpc == VerdictKind::Found, row.engine_outcome != EngineOutcome::Stuck);
        }
    }
}
