use indexmap::IndexMap;
use thiserror::Error;

use super::clause::Clause;
use super::term::{Atom, Term, EQ, NEQ};

/// Why a generated symbol exists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Special {
    /// Domain predicate introduced by range-restriction.
    Dom,
    /// Subterm relation introduced by subterm blocking.
    Sub,
    /// Proxy for positive equality in range-restricted clauses.
    MyEqual,
    /// Shifted counterpart of the named predicate.
    Not(String),
    /// Constant added to seed the domain.
    DomainConstant,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("symbol `{name}` used with arity {found} but previously with arity {expected}")]
    ArityMismatch { name: String, expected: usize, found: usize },
}

/// Function and predicate symbols with arities, in order of first occurrence.
///
/// The order of `functions` is the symbol precedence used for term ordering.
/// Equality and its shifted partner are never registered as predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub functions: IndexMap<String, usize>,
    pub predicates: IndexMap<String, usize>,
    pub specials: IndexMap<String, Special>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Result<Self, SignatureError> {
        let mut sig = Signature::new();
        for c in clauses {
            sig.register_clause(c)?;
        }
        Ok(sig)
    }

    pub fn register_clause(&mut self, c: &Clause) -> Result<(), SignatureError> {
        c.atoms().try_for_each(|a| self.register_atom(a))
    }

    pub fn register_atom(&mut self, a: &Atom) -> Result<(), SignatureError> {
        if !a.is_equational() {
            self.register_predicate(&a.pred, a.args.len())?;
        }
        a.args.iter().try_for_each(|t| self.register_term(t))
    }

    pub fn register_term(&mut self, t: &Term) -> Result<(), SignatureError> {
        if let Term::App(f, args) = t {
            self.register_function(f, args.len())?;
            args.iter().try_for_each(|a| self.register_term(a))?;
        }
        Ok(())
    }

    pub fn register_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        register(&mut self.functions, name, arity)
    }

    pub fn register_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        if name == EQ || name == NEQ {
            return Ok(());
        }
        register(&mut self.predicates, name, arity)
    }

    pub fn is_special(&self, name: &str) -> bool {
        self.specials.contains_key(name)
    }

    pub fn special(&self, name: &str) -> Option<&Special> {
        self.specials.get(name)
    }

    /// Name of the first registered special of the given kind.
    pub fn special_name(&self, kind: &Special) -> Option<&str> {
        self.specials.iter().find(|(_, k)| *k == kind).map(|(n, _)| n.as_str())
    }

    pub fn dom(&self) -> Option<&str> {
        self.special_name(&Special::Dom)
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.functions.contains_key(name) || self.predicates.contains_key(name) || name == EQ || name == NEQ
    }

    /// `base` if unused, else `base_1`, `base_2`, … .
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.is_used(base) {
            return base.to_string();
        }
        (1..).map(|i| format!("{base}_{i}")).find(|n| !self.is_used(n)).unwrap()
    }

    /// Register a new special predicate under a fresh name.
    pub fn add_special_predicate(&mut self, base: &str, arity: usize, kind: Special) -> String {
        let name = self.fresh_name(base);
        self.predicates.insert(name.clone(), arity);
        self.specials.insert(name.clone(), kind);
        name
    }

    /// Existing special of this kind, or a freshly registered one.
    pub fn ensure_special_predicate(&mut self, base: &str, arity: usize, kind: Special) -> String {
        match self.special_name(&kind) {
            Some(n) => n.to_string(),
            None => self.add_special_predicate(base, arity, kind),
        }
    }

    pub fn add_special_constant(&mut self, base: &str) -> String {
        let name = self.fresh_name(base);
        self.functions.insert(name.clone(), 0);
        self.specials.insert(name.clone(), Special::DomainConstant);
        name
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> {
        self.functions.iter().filter(|(_, &a)| a == 0).map(|(n, _)| n.as_str())
    }

    /// Predicates of the input, excluding all generated symbols.
    pub fn input_predicates(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().filter(|(n, _)| !self.specials.contains_key(*n)).map(|(n, &a)| (n.as_str(), a))
    }

    /// Unary input predicates that blocking may guard on.
    pub fn blocking_predicates(&self) -> Vec<String> {
        self.input_predicates().filter(|&(_, a)| a == 1).map(|(n, _)| n.to_string()).collect()
    }
}

fn register(map: &mut IndexMap<String, usize>, name: &str, arity: usize) -> Result<(), SignatureError> {
    match map.get(name) {
        Some(&expected) if expected != arity => {
            Err(SignatureError::ArityMismatch { name: name.to_string(), expected, found: arity })
        }
        Some(_) => Ok(()),
        None => {
            map.insert(name.to_string(), arity);
            Ok(())
        }
    }
}
