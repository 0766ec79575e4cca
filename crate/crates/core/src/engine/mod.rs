//! Saturation of range-restricted clause sets.
//!
//! A branch holds ground facts, a congruence closure and asserted disequations.
//! Rule bodies are matched against the facts modulo the congruence; derived
//! head instances go to a prioritized agenda. Disjunctions are split depth
//! first, equality literal first. A branch with nothing left to do is a
//! completion and yields a finite model.

mod cc;
mod model;
mod rules;
mod search;
mod terms;

use std::io::Write;
use std::time::Duration;

use thiserror::Error;

use crate::tptp::{ModelDocument, Problem, SzsStatus};

pub use cc::GroundCongruence;
pub use model::{check_model, to_interpretation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    /// Cap on applied agenda items (unit assertions and splits).
    pub max_steps: usize,
    /// Cap on splits along one branch.
    pub max_depth: usize,
    pub timeout: Duration,
    /// Cap on head instances queued for application, summed over all branches.
    pub max_queued: usize,
    /// Explore the branch of the first equation of a split disjunction first.
    pub equality_first: bool,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            max_steps: 100_000,
            max_depth: 10_000,
            timeout: Duration::from_secs(60),
            max_queued: 1_000_000,
            equality_first: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub rules: usize,
    pub splits: usize,
    pub branches: usize,
    pub merges: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Satisfiable(ModelDocument),
    Unsatisfiable,
    Timeout,
    GaveUp,
}

impl Status {
    pub fn szs(&self) -> SzsStatus {
        match self {
            Status::Satisfiable(_) => SzsStatus::Satisfiable,
            Status::Unsatisfiable => SzsStatus::Unsatisfiable,
            Status::Timeout => SzsStatus::Timeout,
            Status::GaveUp => SzsStatus::GaveUp,
        }
    }

    pub fn model(&self) -> Option<&ModelDocument> {
        match self {
            Status::Satisfiable(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub status: Status,
    pub stats: Stats,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("clause `{0}` is not range-restricted")]
    NotRangeRestricted(String),
}

/// Search for a model of a range-restricted clause set.
pub fn saturate(problem: &Problem, strategy: &Strategy) -> Result<SolveResult, EngineError> {
    Ok(search::Search::new(problem, strategy, None)?.run(problem))
}

/// As [`saturate`], writing one `EVENT kind=…` line per search event to `trace`.
pub fn saturate_traced(
    problem: &Problem,
    strategy: &Strategy,
    trace: &mut dyn Write,
) -> Result<SolveResult, EngineError> {
    Ok(search::Search::new(problem, strategy, Some(trace))?.run(problem))
}
