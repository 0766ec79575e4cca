//! Terms, atoms, clauses and the syntactic operations over them.

mod clause;
mod signature;
mod subst;
mod term;

pub use clause::Clause;
pub use signature::{Signature, SignatureError, Special};
pub use subst::{abstraction_var, match_atom, mgu, mgu_terms, term_abstraction, Substitution};
pub use term::{Atom, Term, EQ, NEQ, RESERVED_PREFIX};

/// Hands out variable names that cannot clash with parsed input.
#[derive(Debug, Default)]
pub struct FreshVars {
    next: usize,
}

impl FreshVars {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn next_var(&mut self) -> Term {
        self.next += 1;
        Term::Var(format!("{RESERVED_PREFIX}v{}", self.next))
    }
}
