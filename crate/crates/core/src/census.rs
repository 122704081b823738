//! Grid sweeps over `(n, h)` with rule attribution, and report export.
//!
//! Staged mode settles pairs in three rounds: the classical battery (A),
//! the prime-power characterization with the constructions (B), and the
//! self-conjugacy theorems (C). After rounds A and C a pair is also settled
//! when a multiple of its alphabet inside the grid is already refuted.
//! Independent mode records every rule that fires on each pair.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::existence::{evaluate_all, Evaluation, Rule};
use crate::numtheory;

pub const MAX_BOUND: u64 = 10_000;

const STAGE_A: [Rule; 8] = [
    Rule::Known2p2,
    Rule::Known3pq,
    Rule::KnownPPlusQ,
    Rule::SylvesterI,
    Rule::SylvesterII,
    Rule::SylvesterIII,
    Rule::LamLeung,
    Rule::Brock,
];

const STAGE_C: [Rule; 6] = [
    Rule::MainInequality,
    Rule::SelfconjugateDivisor,
    Rule::SelfconjugateBound,
    Rule::PrimePowerAlphabet,
    Rule::OddPrimeAlphabet,
    Rule::TwoPCorollary,
];

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("invalid bounds: {0}")]
    BadBounds(String),
    #[error("{} pairs have both a verified construction and a nonexistence verdict:\n{}",
        .0.len(), .0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n"))]
    Conflicts(Vec<Conflict>),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub n_min: u64,
    pub n_max: u64,
    pub h_min: u64,
    pub h_max: u64,
}

impl Bounds {
    pub fn new(n_min: u64, n_max: u64, h_min: u64, h_max: u64) -> Result<Self, CensusError> {
        let b = Self {
            n_min,
            n_max,
            h_min,
            h_max,
        };
        for (lo, hi, name) in [(n_min, n_max, "n"), (h_min, h_max, "h")] {
            if lo < 1 || hi > MAX_BOUND || lo > hi {
                return Err(CensusError::BadBounds(format!(
                    "{name} range [{lo}, {hi}] must satisfy 1 <= min <= max <= {MAX_BOUND}"
                )));
            }
        }
        Ok(b)
    }

    /// The square `[lo, hi]^2`.
    pub fn square(lo: u64, hi: u64) -> Result<Self, CensusError> {
        Self::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> usize {
        (self.h_max - self.h_min + 1) as usize
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize * self.width()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn pairs(&self) -> Vec<(u64, u64)> {
        (self.n_min..=self.n_max)
            .flat_map(|n| (self.h_min..=self.h_max).map(move |h| (n, h)))
            .collect()
    }

    fn slot(&self, n: u64, h: u64) -> Option<usize> {
        let inside = (self.n_min..=self.n_max).contains(&n) && (self.h_min..=self.h_max).contains(&h);
        inside.then(|| (n - self.n_min) as usize * self.width() + (h - self.h_min) as usize)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Staged,
    Independent,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "staged" => Ok(Mode::Staged),
            "independent" => Ok(Mode::Independent),
            _ => Err(format!("unknown attribution mode {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    A,
    B,
    C,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Exists,
    Nonexistent,
    Open,
}

impl Outcome {
    pub fn label(self) -> &'static str {
        match self {
            Outcome::Exists => "EXISTS",
            Outcome::Nonexistent => "NONEXISTENT",
            Outcome::Open => "OPEN",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub n: u64,
    pub h: u64,
    pub verdict: Outcome,
    /// The attributed rule in staged mode, every firing rule in independent mode.
    pub rules: Vec<Rule>,
    pub stage: Option<Stage>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub n: u64,
    pub h: u64,
    pub exists: Rule,
    pub refuted_by: Vec<Rule>,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rules: Vec<&str> = self.refuted_by.iter().map(|r| r.id()).collect();
        write!(f, "({}, {}): {} vs {}", self.n, self.h, self.exists, rules.join(","))
    }
}

/// Round-by-round counts of a staged run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StagedFigures {
    pub open_after_a: usize,
    pub settled_b: usize,
    pub settled_b_constructive: usize,
    pub settled_b_nonexistence: usize,
    pub remaining_after_b: usize,
    pub removed_c: usize,
    pub open_total: usize,
}

/// One reading of how the first two rounds split the grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub name: String,
    pub description: String,
    pub open_after_a: usize,
    pub settled_b: usize,
    pub remaining_after_b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub bounds: Bounds,
    pub mode: Mode,
    pub pairs: usize,
    pub exists_total: usize,
    pub nonexistent_total: usize,
    pub open_total: usize,
    pub by_rule: BTreeMap<String, usize>,
    pub by_stage: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub staged: Option<StagedFigures>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<Decomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    #[serde(flatten)]
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl CensusReport {
    pub fn record(&self, n: u64, h: u64) -> Option<&Record> {
        self.summary
            .bounds
            .slot(n, h)
            .map(|i| &self.records[i])
    }

    /// Pairs on which `rule` fired (independent mode) or was attributed (staged mode).
    pub fn pairs_for(&self, rule: Rule) -> Vec<(u64, u64)> {
        self.records
            .iter()
            .filter(|r| r.rules.contains(&rule))
            .map(|r| (r.n, r.h))
            .collect()
    }

    pub fn open_pairs(&self) -> Vec<(u64, u64)> {
        self.records
            .iter()
            .filter(|r| r.verdict == Outcome::Open)
            .map(|r| (r.n, r.h))
            .collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), CensusError> {
        let csv_err = |source| CensusError::Csv {
            path: path.display().to_string(),
            source,
        };
        let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
        w.write_record(["n", "h", "verdict", "rule", "stage"])
            .map_err(csv_err)?;
        for r in &self.records {
            let rules = if r.rules.is_empty() {
                "-".to_string()
            } else {
                r.rules.iter().map(|x| x.id()).collect::<Vec<_>>().join(";")
            };
            let stage = r.stage.map_or("-".to_string(), |s| s.to_string());
            w.write_record([
                r.n.to_string(),
                r.h.to_string(),
                r.verdict.label().to_string(),
                rules,
                stage,
            ])
            .map_err(csv_err)?;
        }
        w.flush().map_err(|source| CensusError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CensusError> {
        write_text(path, &self.to_json())
    }

    /// CSV for `.csv` paths, the full JSON report otherwise.
    pub fn export(&self, path: &Path) -> Result<(), CensusError> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => self.write_csv(path),
            _ => self.write_json(path),
        }
    }

    pub fn write_summary(&self, path: &Path) -> Result<(), CensusError> {
        let text = serde_json::to_string_pretty(&self.summary).expect("summary serializes");
        write_text(path, &text)
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CensusError> {
    let mut text = text.to_string();
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CensusError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Evaluates every pair with every test; aborts on any conflict.
fn evaluate_grid(bounds: &Bounds) -> Result<Vec<Evaluation>, CensusError> {
    let evals: Vec<Evaluation> = bounds
        .pairs()
        .into_par_iter()
        .map(|(n, h)| evaluate_all(n, h))
        .collect();
    let conflicts: Vec<Conflict> = evals
        .iter()
        .filter(|e| e.conflict())
        .map(|e| Conflict {
            n: e.n,
            h: e.h,
            exists: e.exists.expect("conflict implies a witness"),
            refuted_by: e.refutations.iter().map(|(r, _)| *r).collect(),
        })
        .collect();
    if conflicts.is_empty() {
        Ok(evals)
    } else {
        Err(CensusError::Conflicts(conflicts))
    }
}

pub fn run_census(bounds: Bounds, mode: Mode) -> Result<CensusReport, CensusError> {
    let evals = evaluate_grid(&bounds)?;
    let (records, staged, decompositions) = match mode {
        Mode::Staged => staged(&bounds, &evals),
        Mode::Independent => (independent(&evals), None, Vec::new()),
    };
    let count = |o: Outcome| records.iter().filter(|r| r.verdict == o).count();
    let mut by_rule = BTreeMap::new();
    let mut by_stage = BTreeMap::new();
    for r in &records {
        for rule in &r.rules {
            *by_rule.entry(rule.id().to_string()).or_insert(0) += 1;
        }
        if mode == Mode::Staged {
            let key = r.stage.map_or("open".to_string(), |s| s.to_string());
            *by_stage.entry(key).or_insert(0) += 1;
        }
    }
    let summary = Summary {
        bounds,
        mode,
        pairs: records.len(),
        exists_total: count(Outcome::Exists),
        nonexistent_total: count(Outcome::Nonexistent),
        open_total: count(Outcome::Open),
        by_rule,
        by_stage,
        staged,
        decompositions,
    };
    Ok(CensusReport { summary, records })
}

fn independent(evals: &[Evaluation]) -> Vec<Record> {
    evals
        .iter()
        .map(|e| {
            let mut rules: Vec<Rule> = e.exists.into_iter().collect();
            rules.extend(e.refutations.iter().map(|(r, _)| *r));
            let verdict = if e.exists.is_some() {
                Outcome::Exists
            } else if e.refutations.is_empty() {
                Outcome::Open
            } else {
                Outcome::Nonexistent
            };
            Record {
                n: e.n,
                h: e.h,
                verdict,
                rules,
                stage: None,
            }
        })
        .collect()
}

/// Smallest multiple `k h`, `k >= 2`, inside the grid whose evaluation satisfies `refuted`.
fn closure_source(
    bounds: &Bounds,
    evals: &[Evaluation],
    n: u64,
    h: u64,
    refuted: impl Fn(&Evaluation) -> bool,
) -> bool {
    (2..)
        .map(|k| k * h)
        .take_while(|&hh| hh <= bounds.h_max)
        .filter_map(|hh| bounds.slot(n, hh))
        .any(|i| refuted(&evals[i]))
}

type Attribution = Option<(Outcome, Rule, Stage)>;

fn staged(bounds: &Bounds, evals: &[Evaluation]) -> (Vec<Record>, Option<StagedFigures>, Vec<Decomposition>) {
    let first_of = |e: &Evaluation, rules: &[Rule]| rules.iter().copied().find(|&r| e.fires(r));
    let in_a = |e: &Evaluation| first_of(e, &STAGE_A).is_some();

    let mut settled: Vec<Attribution> = evals
        .iter()
        .map(|e| first_of(e, &STAGE_A).map(|r| (Outcome::Nonexistent, r, Stage::A)))
        .collect();
    for (i, e) in evals.iter().enumerate() {
        if settled[i].is_none() && closure_source(bounds, evals, e.n, e.h, in_a) {
            settled[i] = Some((Outcome::Nonexistent, Rule::DivisorClosure, Stage::A));
        }
    }
    let open_after_a = settled.iter().filter(|s| s.is_none()).count();

    let (mut constructive, mut refuted_b) = (0, 0);
    for (slot, e) in settled.iter_mut().zip(evals) {
        if slot.is_some() {
            continue;
        }
        if e.exists.is_some() {
            *slot = Some((Outcome::Exists, Rule::Construction, Stage::B));
            constructive += 1;
        } else if e.fires(Rule::PrimePowerNecessity) {
            *slot = Some((Outcome::Nonexistent, Rule::PrimePowerNecessity, Stage::B));
            refuted_b += 1;
        }
    }
    let remaining_after_b = open_after_a - constructive - refuted_b;

    let mut removed_c = 0;
    for (slot, e) in settled.iter_mut().zip(evals) {
        if slot.is_none() {
            if let Some(r) = first_of(e, &STAGE_C) {
                *slot = Some((Outcome::Nonexistent, r, Stage::C));
                removed_c += 1;
            }
        }
    }
    let any_refutation = |e: &Evaluation| !e.refutations.is_empty();
    for (i, e) in evals.iter().enumerate() {
        if settled[i].is_none() && closure_source(bounds, evals, e.n, e.h, any_refutation) {
            settled[i] = Some((Outcome::Nonexistent, Rule::DivisorClosure, Stage::C));
            removed_c += 1;
        }
    }

    let records: Vec<Record> = evals
        .iter()
        .zip(&settled)
        .map(|(e, s)| match s {
            Some((verdict, rule, stage)) => Record {
                n: e.n,
                h: e.h,
                verdict: *verdict,
                rules: vec![*rule],
                stage: Some(*stage),
            },
            None => Record {
                n: e.n,
                h: e.h,
                verdict: Outcome::Open,
                rules: Vec::new(),
                stage: None,
            },
        })
        .collect();
    let open_total = records.iter().filter(|r| r.verdict == Outcome::Open).count();
    let figures = StagedFigures {
        open_after_a,
        settled_b: constructive + refuted_b,
        settled_b_constructive: constructive,
        settled_b_nonexistence: refuted_b,
        remaining_after_b,
        removed_c,
        open_total,
    };

    // Read literally, the semigroup condition also rejects |G| = 1.
    let n1_literal = evals
        .iter()
        .zip(&settled)
        .filter(|(e, _)| e.n == 1)
        .filter(|(e, s)| {
            matches!(s, Some((_, _, Stage::B)))
                && !numtheory::semigroup_member(1, &numtheory::prime_divisors(e.h))
        })
        .count();
    let decompositions = vec![
        Decomposition {
            name: "sound".into(),
            description: "n = 1 is settled by construction in round B".into(),
            open_after_a,
            settled_b: figures.settled_b,
            remaining_after_b,
        },
        Decomposition {
            name: "semigroup_literal_at_n1".into(),
            description: "the semigroup condition is applied to n = 1 in round A".into(),
            open_after_a: open_after_a - n1_literal,
            settled_b: figures.settled_b - n1_literal,
            remaining_after_b,
        },
        Decomposition {
            name: "constructive_only".into(),
            description: "round B counts constructions only; prime-power nonexistence stays open".into(),
            open_after_a,
            settled_b: constructive,
            remaining_after_b: open_after_a - constructive,
        },
    ];
    (records, Some(figures), decompositions)
}
