//! Checking structural claims over a corpus of maximum systems.
//!
//! A corpus is a directory of `X.dgr` / `X.psys` pairs. Every system must be
//! non-spanning and certified maximum by the oracle; anything else is
//! rejected before any claim is evaluated.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use ddpc::boundary::lemma_report;
use ddpc::format::{parse_dgr, parse_psys};
use ddpc::oracle::{certify_maximal, Maximality};
use ddpc::validate_system;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AuditError {
    #[error("{path}: {message}")]
    Rejected { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn rejected(path: &Path, message: impl Into<String>) -> AuditError {
    AuditError::Rejected { path: path.to_path_buf(), message: message.into() }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClaimTally {
    pub met_pass: usize,
    pub met_fail: usize,
    pub unmet_pass: usize,
    pub unmet_fail: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Defect {
    pub path: PathBuf,
    pub claim: &'static str,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuditReport {
    pub instances: usize,
    pub claims: BTreeMap<&'static str, ClaimTally>,
    pub defects: Vec<Defect>,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.defects.is_empty()
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instances={}", self.instances)?;
        for (name, t) in &self.claims {
            writeln!(
                f,
                "claim.{name} met_pass={} met_fail={} unmet_pass={} unmet_fail={}",
                t.met_pass, t.met_fail, t.unmet_pass, t.unmet_fail
            )?;
        }
        for d in &self.defects {
            writeln!(f, "defect claim={} path={}", d.claim, d.path.display())?;
        }
        write!(f, "defects={}", self.defects.len())
    }
}

fn read(path: &Path) -> Result<String, AuditError> {
    fs::read_to_string(path).map_err(|source| AuditError::Io { path: path.to_path_buf(), source })
}

/// `X.dgr` files that have a matching `X.psys`, sorted by name.
pub fn corpus_pairs(dir: &Path) -> Result<Vec<(PathBuf, PathBuf)>, AuditError> {
    let entries = fs::read_dir(dir).map_err(|source| AuditError::Io { path: dir.to_path_buf(), source })?;
    let mut pairs = Vec::new();
    for entry in entries {
        let path = entry.map_err(|source| AuditError::Io { path: dir.to_path_buf(), source })?.path();
        if path.extension().is_some_and(|e| e == "dgr") {
            let psys = path.with_extension("psys");
            if psys.exists() {
                pairs.push((path, psys));
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

pub fn audit_dir(dir: &Path, budget: u64) -> Result<AuditReport, AuditError> {
    let mut report = AuditReport::default();
    for (dgr, psys) in corpus_pairs(dir)? {
        let d = parse_dgr(&read(&dgr)?).map_err(|e| rejected(&dgr, e.to_string()))?;
        let sys = parse_psys(&read(&psys)?).map_err(|e| rejected(&psys, e.to_string()))?;
        let validation = validate_system(&d, &sys);
        if !validation.is_valid() {
            return Err(rejected(&psys, format!("invalid system: {:?}", validation.violations)));
        }
        if sys.cover_count() == d.order() {
            return Err(rejected(&psys, "system is spanning; the uncovered part is empty"));
        }
        match certify_maximal(&d, &sys, budget).map_err(|e| rejected(&psys, e.to_string()))? {
            Maximality::Maximal => {}
            Maximality::NotMaximal(_) => return Err(rejected(&psys, "not maximum: a larger system exists")),
            Maximality::BudgetExceeded => return Err(rejected(&psys, "maximality not certified within budget")),
        }
        let lemmas = lemma_report(&d, &sys, true).map_err(|e| rejected(&psys, e.to_string()))?;
        report.instances += 1;
        for claim in &lemmas.claims {
            let t = report.claims.entry(claim.name).or_default();
            match (claim.hypotheses_met, claim.holds) {
                (true, true) => t.met_pass += 1,
                (true, false) => t.met_fail += 1,
                (false, true) => t.unmet_pass += 1,
                (false, false) => t.unmet_fail += 1,
            }
            if claim.is_defect() {
                report.defects.push(Defect { path: psys.clone(), claim: claim.name });
            }
        }
    }
    Ok(report)
}
