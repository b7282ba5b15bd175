//! Subcommand definitions and their implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ddpc::boundary::lemma_report;
use ddpc::engine::{solve_detailed, EngineConfig, SolveOutcome};
use ddpc::format::{parse_dgr, parse_psys, write_dgr, write_psys};
use ddpc::generators::{generate, GenKind, GenSpec};
use ddpc::ham::{hamiltonian_cycle, hamiltonian_path};
use ddpc::oracle::{certify_maximal, exact_ddpc, exact_max_system, exact_st_linkage, Maximality, DEFAULT_BUDGET};
use ddpc::{validate_system, Digraph, PathSystem};

use crate::audit::audit_dir;
use crate::experiment::run_experiment;
use crate::plan::Plan;

#[derive(Debug, Parser)]
#[command(name = "ddpc", version, about = "Disjoint directed path covers in semicomplete digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Terminals {
    #[arg(long)]
    pub source: usize,
    /// Comma-separated sink list.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sinks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, clap::Args)]
pub struct Budget {
    /// Oracle node budget.
    #[arg(long, env = "DDPC_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    Linkage,
    Ddpc,
    Max,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded digraph.
    Generate {
        #[arg(long)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        /// Sink count the near-threshold target is computed for.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        offset: i64,
        #[arg(long, default_value_t = 0.0)]
        digon_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print a Hamiltonian path of a semicomplete digraph.
    Hampath { dgr: PathBuf },
    /// Print a Hamiltonian cycle of a strong semicomplete digraph.
    Hamcycle { dgr: PathBuf },
    /// Find a DDPC: exact linkage, augmentation, then optional exact fallback.
    Solve {
        dgr: PathBuf,
        #[command(flatten)]
        terminals: Terminals,
        #[arg(long)]
        no_fallback: bool,
        #[arg(long, default_value_t = 14)]
        fallback_cap: usize,
        /// Write applied moves here, one per line.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        budget: Budget,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Validate a path system and report the boundary claims.
    Verify {
        dgr: PathBuf,
        psys: PathBuf,
        /// Also require the system to cover every vertex.
        #[arg(long)]
        ddpc: bool,
        /// Certify maximality with the oracle before evaluating claims.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        budget: Budget,
    },
    /// Run an exact search.
    Oracle {
        dgr: PathBuf,
        #[command(flatten)]
        terminals: Terminals,
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[command(flatten)]
        budget: Budget,
    },
    /// Run an experiment plan into a directory.
    Experiment {
        plan: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the boundary claims over a corpus of maximum systems.
    Audit {
        dir: PathBuf,
        #[command(flatten)]
        budget: Budget,
    },
}

fn read_dgr(path: &Path) -> Result<Digraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dgr(&text).with_context(|| format!("parsing {}", path.display()))
}

fn read_psys(path: &Path) -> Result<PathSystem> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_psys(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn seq(v: &[usize]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// `key=value` validation and claim report. The flag is false when the
/// system is invalid, or not spanning under `--ddpc`.
pub fn verify_report(d: &Digraph, sys: &PathSystem, require_ddpc: bool, certify: bool, budget: u64) -> (String, bool) {
    let mut out = String::new();
    let validation = validate_system(d, sys);
    let valid = validation.is_valid();
    let _ = writeln!(out, "valid={valid}");
    for v in &validation.violations {
        let _ = writeln!(out, "violation={v}");
    }
    if !valid {
        return (out, false);
    }
    let cover = sys.cover_count();
    let spanning = cover == d.order();
    let _ = writeln!(out, "n={}", d.order());
    let _ = writeln!(out, "k={}", sys.k());
    let _ = writeln!(out, "cover={cover}");
    let _ = writeln!(out, "ddpc={spanning}");
    let mut maximal = spanning;
    if certify && !spanning {
        let verdict = certify_maximal(d, sys, budget).expect("validated system");
        maximal = verdict.is_maximal();
        let label = match verdict {
            Maximality::Maximal => "true",
            Maximality::NotMaximal(_) => "false",
            Maximality::BudgetExceeded => "budget_exceeded",
        };
        let _ = writeln!(out, "maximal={label}");
    }
    if !spanning {
        let report = lemma_report(d, sys, maximal).expect("validated, non-spanning");
        let _ = writeln!(out, "{report}");
    }
    (out, !require_ddpc || spanning)
}

fn config(no_fallback: bool, fallback_cap: usize, budget: u64) -> EngineConfig {
    EngineConfig { budget, fallback: !no_fallback, fallback_cap }
}

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Generate { kind, n, k, offset, digon_prob, seed, output } => {
            let spec = GenSpec { n, kind, digon_prob, k, offset, seed };
            let d = generate(&spec)?;
            let comment = format!(
                "kind={kind} n={n} k={k} offset={offset} digon_prob={digon_prob} seed={seed} rng={}",
                ddpc::generators::RNG_ALGORITHM
            );
            emit(output.as_deref(), &write_dgr(&d, &[comment]))?;
        }
        Command::Hampath { dgr } => {
            let path = hamiltonian_path(&read_dgr(&dgr)?)?;
            println!("{}", seq(&path));
        }
        Command::Hamcycle { dgr } => {
            let cycle = hamiltonian_cycle(&read_dgr(&dgr)?)?;
            println!("{}", seq(&cycle));
        }
        Command::Solve { dgr, terminals, no_fallback, fallback_cap, trace, budget, output } => {
            let d = read_dgr(&dgr)?;
            let cfg = config(no_fallback, fallback_cap, budget.budget);
            let report = solve_detailed(&d, terminals.source, &terminals.sinks, &cfg)?;
            if let Some(path) = trace {
                let lines: String =
                    report.augmentation.iter().flat_map(|a| &a.trace).map(|m| format!("{m}\n")).collect();
                fs::write(&path, lines).with_context(|| format!("writing {}", path.display()))?;
            }
            let status = match &report.outcome {
                SolveOutcome::Augmented(_) => "covered",
                SolveOutcome::Fallback(_) | SolveOutcome::Direct(_) => "fallback_used",
                SolveOutcome::NoDdpc => "no_ddpc",
                SolveOutcome::Unknown => "unknown",
            };
            eprintln!("status={status}");
            match report.outcome.system() {
                Some(sys) => emit(output.as_deref(), &write_psys(sys))?,
                None => return Ok(ExitCode::from(1)),
            }
        }
        Command::Verify { dgr, psys, ddpc, certify, budget } => {
            let (text, ok) = verify_report(&read_dgr(&dgr)?, &read_psys(&psys)?, ddpc, certify, budget.budget);
            print!("{text}");
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Oracle { dgr, terminals, mode, budget } => {
            let d = read_dgr(&dgr)?;
            let (s, t, b) = (terminals.source, terminals.sinks.as_slice(), budget.budget);
            let v = match mode {
                OracleMode::Linkage => exact_st_linkage(&d, s, t, b)?,
                OracleMode::Ddpc => exact_ddpc(&d, s, t, b)?,
                OracleMode::Max => exact_max_system(&d, s, t, b)?,
            };
            println!("verdict={}", v.kind);
            println!("cover={}", v.system.as_ref().map_or(0, PathSystem::cover_count));
            println!("max_cover={}", v.max_cover);
            println!("nodes={}", v.nodes_explored);
            if let Some(sys) = &v.system {
                print!("{}", write_psys(sys));
            }
        }
        Command::Experiment { plan, output } => {
            let text = fs::read_to_string(&plan).with_context(|| format!("reading {}", plan.display()))?;
            let plan: Plan = text.parse()?;
            let summary = run_experiment(&plan, &output)?;
            println!("{summary}");
        }
        Command::Audit { dir, budget } => {
            let report = audit_dir(&dir, budget.budget)?;
            println!("{report}");
            if !report.is_clean() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Checks flag combinations clap cannot express.
pub fn check(cli: &Cli) -> Result<()> {
    if let Command::Solve { terminals, .. } | Command::Oracle { terminals, .. } = &cli.command {
        if terminals.sinks.is_empty() {
            bail!("at least one sink is required");
        }
    }
    Ok(())
}
