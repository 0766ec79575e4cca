//! Running pipeline configurations over a problem corpus.

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use indexmap::IndexMap;

use crate::engine::{saturate, Status, Strategy};
use crate::tptp::{parse, ModelDocument, Problem};
use crate::transform::{apply_pipeline, PipelineConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BenchStatus {
    Satisfiable,
    Unsatisfiable,
    Timeout,
    GaveUp,
    Error,
}

impl BenchStatus {
    pub fn solved(self) -> bool {
        matches!(self, BenchStatus::Satisfiable | BenchStatus::Unsatisfiable)
    }
}

impl fmt::Display for BenchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchStatus::Satisfiable => "Satisfiable",
            BenchStatus::Unsatisfiable => "Unsatisfiable",
            BenchStatus::Timeout => "Timeout",
            BenchStatus::GaveUp => "GaveUp",
            BenchStatus::Error => "Error",
        })
    }
}

/// One (problem, configuration) cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub problem: String,
    pub pipeline: String,
    pub status: BenchStatus,
    pub ms: u128,
    pub rules: usize,
    pub splits: usize,
    pub domain: Option<usize>,
    /// Set when the status is `Error`.
    pub error: Option<String>,
}

impl BenchRow {
    pub const HEADER: [&'static str; 7] = ["problem", "pipeline", "status", "ms", "rules", "splits", "domain"];

    pub fn fields(&self) -> [String; 7] {
        [
            self.problem.clone(),
            self.pipeline.clone(),
            self.status.to_string(),
            self.ms.to_string(),
            self.rules.to_string(),
            self.splits.to_string(),
            self.domain.map(|d| d.to_string()).unwrap_or_default(),
        ]
    }
}

/// Transform and solve one problem. The model, if any, is returned alongside the row.
pub fn run_cell(problem: &Problem, cfg: &PipelineConfig, strategy: &Strategy) -> (BenchRow, Option<ModelDocument>) {
    let start = Instant::now();
    let mut row = BenchRow {
        problem: problem.name.clone(),
        pipeline: cfg.label(),
        status: BenchStatus::Error,
        ms: 0,
        rules: 0,
        splits: 0,
        domain: None,
        error: None,
    };
    let result = apply_pipeline(problem, cfg)
        .map_err(|e| e.to_string())
        .and_then(|(t, _)| saturate(&t, strategy).map_err(|e| e.to_string()));
    row.ms = start.elapsed().as_millis();
    match result {
        Err(e) => {
            row.error = Some(e);
            (row, None)
        }
        Ok(r) => {
            row.rules = r.stats.rules;
            row.splits = r.stats.splits;
            let (status, model) = match r.status {
                Status::Satisfiable(m) => (BenchStatus::Satisfiable, Some(m)),
                Status::Unsatisfiable => (BenchStatus::Unsatisfiable, None),
                Status::Timeout => (BenchStatus::Timeout, None),
                Status::GaveUp => (BenchStatus::GaveUp, None),
            };
            row.status = status;
            row.domain = model.as_ref().map(|m| m.domain.len());
            (row, model)
        }
    }
}

/// Parse every `.p` file of a directory, sorted by file name.
pub fn load_corpus(dir: &Path) -> std::io::Result<Vec<(PathBuf, Result<Problem, String>)>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "p"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let parsed = std::fs::read_to_string(&path)
            .map_err(|e| e.to_string())
            .and_then(|text| parse(&text, &name).map_err(|e| e.to_string()));
        out.push((path, parsed));
    }
    Ok(out)
}

/// Solved counts per pipeline label, in first-seen order.
pub fn solved_counts(rows: &[BenchRow]) -> IndexMap<String, usize> {
    let mut out = IndexMap::new();
    for r in rows {
        *out.entry(r.pipeline.clone()).or_insert(0) += r.status.solved() as usize;
    }
    out
}
