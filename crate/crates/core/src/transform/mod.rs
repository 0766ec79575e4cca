//! Clause-set transformations: range-restriction (classical and by-need),
//! shifting, the four blocking variants, and their composition.
//!
//! Pipelines run left to right: shifting, then range-restriction, then blocking.

mod blocking;
mod rr;
mod shift;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kernel::Clause;
use crate::tptp::{print_clauses, Problem};

pub use blocking::{bl_sd, bl_sp, bl_ud, bl_up};
pub use rr::{body_term_count, crr, myequal_rewrite, range_restrict_clause, rr};
pub use shift::{bs, eq_consistency, pf, sh};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("blocking needs the domain predicate; enable range-restriction")]
    MissingDom,
    #[error("clause `{0}` is not range-restricted after transformation")]
    NotRangeRestricted(String),
    #[error("unknown {what} `{value}`")]
    UnknownOption { what: &'static str, value: String },
}

/// Clauses in insertion order; additions that are variants of present clauses are dropped.
pub(crate) struct ClauseSet {
    clauses: Vec<Clause>,
    seen: HashSet<Clause>,
}

impl ClauseSet {
    pub(crate) fn new(clauses: Vec<Clause>) -> Self {
        let seen = clauses.iter().map(Clause::canonical).collect();
        ClauseSet { clauses, seen }
    }

    pub(crate) fn push(&mut self, c: Clause) -> bool {
        if self.seen.insert(c.canonical()) {
            self.clauses.push(c);
            true
        } else {
            false
        }
    }

    pub(crate) fn into_vec(self) -> Vec<Clause> {
        self.clauses
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum RrVariant {
    Classical,
    #[default]
    New,
    None,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Blocking {
    #[default]
    None,
    SubtermDomain,
    SubtermPredicate,
    UnrestrictedDomain,
    UnrestrictedPredicate,
}

impl Blocking {
    pub const ALL: [Blocking; 5] = [
        Blocking::None,
        Blocking::SubtermDomain,
        Blocking::SubtermPredicate,
        Blocking::UnrestrictedDomain,
        Blocking::UnrestrictedPredicate,
    ];

    fn short(self) -> &'static str {
        match self {
            Blocking::None => "none",
            Blocking::SubtermDomain => "sd",
            Blocking::SubtermPredicate => "sp",
            Blocking::UnrestrictedDomain => "ud",
            Blocking::UnrestrictedPredicate => "up",
        }
    }
}

impl FromStr for Blocking {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Blocking::ALL
            .into_iter()
            .find(|b| b.short() == s)
            .ok_or_else(|| TransformError::UnknownOption { what: "blocking", value: s.to_string() })
    }
}

impl FromStr for RrVariant {
    type Err = TransformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "new" => Ok(RrVariant::New),
            "classical" => Ok(RrVariant::Classical),
            "none" => Ok(RrVariant::None),
            _ => Err(TransformError::UnknownOption { what: "range-restriction", value: s.to_string() }),
        }
    }
}

/// Which constant seeds the domain.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ConstantPolicy {
    /// First constant of the input, or a fresh one if there is none.
    #[default]
    ReuseFirst,
    AlwaysFresh,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct PipelineConfig {
    pub rr: RrVariant,
    pub shift: bool,
    pub blocking: Blocking,
    pub constant_policy: ConstantPolicy,
}

impl PipelineConfig {
    pub fn new(rr: RrVariant, shift: bool, blocking: Blocking) -> Self {
        PipelineConfig { rr, shift, blocking, constant_policy: ConstantPolicy::default() }
    }

    pub fn identity() -> Self {
        PipelineConfig::new(RrVariant::None, false, Blocking::None)
    }

    /// The twenty combinations of {crr, rr} × {no shift, shift} × {no blocking, sd, sp, ud, up}.
    pub fn all() -> Vec<PipelineConfig> {
        let mut out = Vec::new();
        for rr in [RrVariant::Classical, RrVariant::New] {
            for shift in [false, true] {
                for blocking in Blocking::ALL {
                    out.push(PipelineConfig::new(rr, shift, blocking));
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), TransformError> {
        if self.blocking != Blocking::None && self.rr == RrVariant::None {
            return Err(TransformError::MissingDom);
        }
        Ok(())
    }

    /// Dotted label in application order, e.g. `sh.rr.blud`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.shift {
            parts.push("sh".to_string());
        }
        match self.rr {
            RrVariant::Classical => parts.push("crr".into()),
            RrVariant::New => parts.push("rr".into()),
            RrVariant::None => {}
        }
        if self.blocking != Blocking::None {
            parts.push(format!("bl{}", self.blocking.short()));
        }
        if parts.is_empty() {
            "none".to_string()
        } else {
            parts.join(".")
        }
    }
}

impl FromStr for PipelineConfig {
    type Err = TransformError;

    /// Inverse of [`PipelineConfig::label`].
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TransformError::UnknownOption { what: "pipeline", value: s.to_string() };
        let mut cfg = PipelineConfig::identity();
        if s == "none" {
            return Ok(cfg);
        }
        let mut parts = s.split('.').peekable();
        if parts.peek() == Some(&"sh") {
            cfg.shift = true;
            parts.next();
        }
        match parts.peek() {
            Some(&"rr") => cfg.rr = RrVariant::New,
            Some(&"crr") => cfg.rr = RrVariant::Classical,
            _ => {}
        }
        if cfg.rr != RrVariant::None {
            parts.next();
        }
        if let Some(b) = parts.next() {
            cfg.blocking = b.strip_prefix("bl").ok_or_else(bad)?.parse().map_err(|_| bad())?;
        }
        if parts.next().is_some() || (!cfg.shift && cfg.rr == RrVariant::None && cfg.blocking == Blocking::None) {
            return Err(bad());
        }
        Ok(cfg)
    }
}

impl fmt::Display for PipelineConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Clauses added by each step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepCounts {
    pub shift: usize,
    pub domain_constant: usize,
    pub body_terms: usize,
    pub predicate_dom: usize,
    pub function_dom: usize,
    pub myequal: usize,
    pub blocking: usize,
    pub fresh_symbols: Vec<String>,
}

impl StepCounts {
    pub fn total(&self) -> usize {
        self.shift
            + self.domain_constant
            + self.body_terms
            + self.predicate_dom
            + self.function_dom
            + self.myequal
            + self.blocking
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformReport {
    pub input_clauses: usize,
    pub output_clauses: usize,
    pub input_symbols: usize,
    pub output_symbols: usize,
    pub input_bytes: usize,
    pub output_bytes: usize,
    pub steps: StepCounts,
    /// Clauses removed outright (replacements in place are not counted).
    pub replaced: usize,
}

impl TransformReport {
    pub const CSV_HEADER: &'static str = "input_clauses,output_clauses,input_bytes,output_bytes,\
shift,domain_constant,body_terms,predicate_dom,function_dom,myequal,blocking,replaced";

    pub fn csv_row(&self) -> String {
        let s = &self.steps;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            self.input_clauses,
            self.output_clauses,
            self.input_bytes,
            self.output_bytes,
            s.shift,
            s.domain_constant,
            s.body_terms,
            s.predicate_dom,
            s.function_dom,
            s.myequal,
            s.blocking,
            self.replaced
        )
    }

    pub fn growth_ratio(&self) -> f64 {
        if self.input_bytes == 0 {
            1.0
        } else {
            self.output_bytes as f64 / self.input_bytes as f64
        }
    }
}

fn symbol_count(p: &Problem) -> usize {
    p.signature.functions.len() + p.signature.predicates.len()
}

/// Run shifting, range-restriction and blocking as configured.
pub fn apply_pipeline(m: &Problem, cfg: &PipelineConfig) -> Result<(Problem, TransformReport), TransformError> {
    cfg.validate()?;
    let mut steps = StepCounts::default();
    let mut p = m.clone();
    if cfg.shift {
        let before: Vec<String> = p.signature.specials.keys().cloned().collect();
        let (q, added) = sh(&p);
        steps.shift = added;
        steps.fresh_symbols.extend(q.signature.specials.keys().filter(|k| !before.contains(k)).cloned());
        p = q;
    }
    match cfg.rr {
        RrVariant::Classical | RrVariant::New => {
            let (q, counts) =
                if cfg.rr == RrVariant::New { rr(&p, cfg.constant_policy) } else { crr(&p, cfg.constant_policy) };
            steps.domain_constant = counts.domain_constant;
            steps.body_terms = counts.body_terms;
            steps.predicate_dom = counts.predicate_dom;
            steps.function_dom = counts.function_dom;
            steps.myequal = counts.myequal;
            steps.fresh_symbols.extend(counts.fresh_symbols);
            p = q;
        }
        RrVariant::None => {}
    }
    let had_sub = p.signature.special_name(&crate::kernel::Special::Sub).is_some();
    let blocked = match cfg.blocking {
        Blocking::None => None,
        Blocking::SubtermDomain => Some(bl_sd(&p)?),
        Blocking::SubtermPredicate => Some(bl_sp(&p)?),
        Blocking::UnrestrictedDomain => Some(bl_ud(&p)?),
        Blocking::UnrestrictedPredicate => Some(bl_up(&p)?),
    };
    if let Some((q, added)) = blocked {
        steps.blocking = added;
        if !had_sub {
            if let Some(s) = q.signature.special_name(&crate::kernel::Special::Sub) {
                steps.fresh_symbols.push(s.to_string());
            }
        }
        p = q;
    }
    if cfg.rr != RrVariant::None {
        if let Some(bad) = p.clauses.iter().find(|c| !c.is_range_restricted()) {
            return Err(TransformError::NotRangeRestricted(bad.to_string()));
        }
    }
    let replaced = (m.clauses.len() + steps.total()).saturating_sub(p.clauses.len());
    let report = TransformReport {
        input_clauses: m.clauses.len(),
        output_clauses: p.clauses.len(),
        input_symbols: symbol_count(m),
        output_symbols: symbol_count(&p),
        input_bytes: print_clauses(m).len(),
        output_bytes: print_clauses(&p).len(),
        steps,
        replaced,
    };
    Ok((p, report))
}
