//! Experiment plans: flat `key = value` files.
//!
//! ```text
//! # threshold sweep
//! n = 6..9            # inclusive range, or a comma list
//! k = 2
//! kind = near_threshold, tournament
//! offset = 0, -1      # near_threshold trials only
//! digon_prob = 0.5    # semicomplete trials only
//! seeds = 50
//! seed_start = 0
//! budget = 10000000
//! fallback = true
//! fallback_cap = 14
//! timing = off
//! ```
//!
//! Trials are ordered by `n`, then `k`, then `kind`, then `offset`, then
//! seed. Omitted keys take the defaults of [`Plan::default`].

use std::str::FromStr;

use ddpc::generators::{GenKind, GenSpec};
use ddpc::oracle::DEFAULT_BUDGET;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("plan line {line}: {message}")]
pub struct PlanError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub kind: Vec<GenKind>,
    pub offset: Vec<i64>,
    pub digon_prob: f64,
    pub seeds: u64,
    pub seed_start: u64,
    pub budget: u64,
    pub fallback: bool,
    pub fallback_cap: usize,
    /// Record wall-clock time per trial. Off by default so that runs are
    /// byte-reproducible.
    pub timing: bool,
}

impl Default for Plan {
    fn default() -> Self {
        Plan {
            n: Vec::new(),
            k: vec![2],
            kind: vec![GenKind::NearThreshold],
            offset: vec![0],
            digon_prob: 0.5,
            seeds: 0,
            seed_start: 0,
            budget: DEFAULT_BUDGET,
            fallback: true,
            fallback_cap: 14,
            timing: false,
        }
    }
}

/// One generated instance plus its terminal count.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub index: usize,
    pub spec: GenSpec,
    pub k: usize,
}

fn parse_one<T: FromStr>(line: usize, tok: &str) -> Result<T, PlanError> {
    tok.trim().parse().map_err(|_| PlanError { line, message: format!("cannot parse `{}`", tok.trim()) })
}

/// Comma list whose items may be inclusive ranges `a..b`.
fn parse_axis<T>(line: usize, value: &str) -> Result<Vec<T>, PlanError>
where
    T: FromStr + Copy + PartialOrd + std::ops::Add<Output = T> + From<u8>,
{
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        match item.split_once("..") {
            Some((a, b)) => {
                let (mut a, b): (T, T) = (parse_one(line, a)?, parse_one(line, b)?);
                while a <= b {
                    out.push(a);
                    a = a + T::from(1);
                }
            }
            None => out.push(parse_one(line, item)?),
        }
    }
    Ok(out)
}

fn parse_bool(line: usize, value: &str) -> Result<bool, PlanError> {
    match value {
        "true" | "on" | "yes" => Ok(true),
        "false" | "off" | "no" => Ok(false),
        other => Err(PlanError { line, message: format!("expected a boolean, found `{other}`") }),
    }
}

impl FromStr for Plan {
    type Err = PlanError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut plan = Plan::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(PlanError { line, message: "expected `key = value`".into() });
            };
            let value = value.trim();
            match key.trim() {
                "n" => plan.n = parse_axis(line, value)?,
                "k" => plan.k = parse_axis(line, value)?,
                "offset" => plan.offset = parse_axis::<i64>(line, value)?,
                "kind" => {
                    plan.kind = value
                        .split(',')
                        .map(|t| t.trim().parse::<GenKind>().map_err(|e| PlanError { line, message: e.to_string() }))
                        .collect::<Result<_, _>>()?
                }
                "digon_prob" => plan.digon_prob = parse_one(line, value)?,
                "seeds" => plan.seeds = parse_one(line, value)?,
                "seed_start" => plan.seed_start = parse_one(line, value)?,
                "budget" => plan.budget = parse_one(line, value)?,
                "fallback" => plan.fallback = parse_bool(line, value)?,
                "fallback_cap" => plan.fallback_cap = parse_one(line, value)?,
                "timing" => plan.timing = parse_bool(line, value)?,
                other => return Err(PlanError { line, message: format!("unknown key `{other}`") }),
            }
        }
        Ok(plan)
    }
}

impl Plan {
    pub fn trials(&self) -> Vec<Trial> {
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &kind in &self.kind {
                    let offsets: &[i64] = if kind == GenKind::NearThreshold { &self.offset } else { &[0] };
                    for &offset in offsets {
                        for seed in self.seed_start..self.seed_start + self.seeds {
                            let spec = match kind {
                                GenKind::NearThreshold => GenSpec::near_threshold(n, k, offset, seed),
                                GenKind::Semicomplete => GenSpec::semicomplete(n, self.digon_prob, seed),
                                GenKind::Tournament => GenSpec::tournament(n, seed),
                                GenKind::Rotational => GenSpec { seed, ..GenSpec::rotational(n) },
                            };
                            out.push(Trial { index: out.len(), spec, k });
                        }
                    }
                }
            }
        }
        out
    }

    /// Echo of the plan in its own format, with every key spelled out.
    pub fn canonical(&self) -> String {
        let list = |v: Vec<String>| v.join(",");
        format!(
            "n = {}\nk = {}\nkind = {}\noffset = {}\ndigon_prob = {}\nseeds = {}\nseed_start = {}\nbudget = {}\n\
             fallback = {}\nfallback_cap = {}\ntiming = {}\n",
            list(self.n.iter().map(ToString::to_string).collect()),
            list(self.k.iter().map(ToString::to_string).collect()),
            list(self.kind.iter().map(ToString::to_string).collect()),
            list(self.offset.iter().map(ToString::to_string).collect()),
            self.digon_prob,
            self.seeds,
            self.seed_start,
            self.budget,
            self.fallback,
            self.fallback_cap,
            if self.timing { "on" } else { "off" },
        )
    }
}
