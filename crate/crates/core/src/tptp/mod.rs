//! TPTP-CNF reading and writing, the model file format and SZS status lines.

mod model;
mod parse;
mod print;

use std::fmt;

pub use model::{parse_model, print_model, ModelDocument};
pub use parse::{parse, ParseError, ParseErrorKind};
pub use print::{print_clause, print_clauses, symbol, term_to_string};

use crate::kernel::{Clause, Signature};

/// A clause set together with its signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub clauses: Vec<Clause>,
    pub signature: Signature,
    /// Constant seeding the domain, once range-restriction has chosen one.
    pub domain_constant: Option<String>,
}

impl Problem {
    pub fn new(name: impl Into<String>, clauses: Vec<Clause>) -> Result<Self, crate::kernel::SignatureError> {
        let signature = Signature::from_clauses(&clauses)?;
        Ok(Problem { name: name.into(), clauses, signature, domain_constant: None })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SzsStatus {
    Satisfiable,
    Unsatisfiable,
    Timeout,
    GaveUp,
}

impl fmt::Display for SzsStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SzsStatus::Satisfiable => "Satisfiable",
            SzsStatus::Unsatisfiable => "Unsatisfiable",
            SzsStatus::Timeout => "Timeout",
            SzsStatus::GaveUp => "GaveUp",
        })
    }
}

pub fn print_szs(status: SzsStatus, name: &str) -> String {
    format!("% SZS status {status} for {name}")
}
