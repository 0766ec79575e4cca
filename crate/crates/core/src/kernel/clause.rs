use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::term::{Atom, Term};

/// `H1 ∨ … ∨ Hm ← B1 ∧ … ∧ Bk`, implicitly universally quantified.
///
/// Head and body are kept duplicate-free in first-occurrence order, so factoring
/// never has to be performed as an inference.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    head: Vec<Atom>,
    body: Vec<Atom>,
    pub label: Option<String>,
}

fn dedup(atoms: Vec<Atom>) -> Vec<Atom> {
    let mut seen = BTreeSet::new();
    atoms.into_iter().filter(|a| seen.insert(a.clone())).collect()
}

impl Clause {
    pub fn new(head: Vec<Atom>, body: Vec<Atom>) -> Self {
        Clause { head: dedup(head), body: dedup(body), label: None }
    }

    pub fn fact(head: Atom) -> Self {
        Clause::new(vec![head], Vec::new())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn head(&self) -> &[Atom] {
        &self.head
    }

    pub fn body(&self) -> &[Atom] {
        &self.body
    }

    pub fn into_parts(self) -> (Vec<Atom>, Vec<Atom>, Option<String>) {
        (self.head, self.body, self.label)
    }

    pub fn is_positive(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_empty() && self.body.is_empty()
    }

    pub fn is_horn(&self) -> bool {
        self.head.len() <= 1
    }

    pub fn is_ground(&self) -> bool {
        self.head.iter().chain(&self.body).all(Atom::is_ground)
    }

    pub fn head_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.head.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn body_vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.body.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = self.head_vars();
        out.extend(self.body_vars());
        out
    }

    /// Every head variable also occurs in the body.
    pub fn is_range_restricted(&self) -> bool {
        self.head_vars().is_subset(&self.body_vars())
    }

    /// All functional terms are constants.
    pub fn is_bs_clause(&self) -> bool {
        self.head.iter().chain(&self.body).all(|a| {
            a.args.iter().all(|t| match t {
                Term::Var(_) => true,
                Term::App(_, args) => args.is_empty(),
            })
        })
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head.iter().chain(&self.body)
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> String) -> Clause {
        Clause {
            head: self.head.iter().map(|a| a.map_vars(f)).collect(),
            body: self.body.iter().map(|a| a.map_vars(f)).collect(),
            label: self.label.clone(),
        }
    }

    /// Variables renamed `X1, X2, …` in order of first occurrence (head, then body),
    /// label dropped. Two clauses are variants iff their canonical forms are equal.
    pub fn canonical(&self) -> Clause {
        let mut names: BTreeMap<String, String> = BTreeMap::new();
        let mut rename = |v: &str| {
            let next = names.len() + 1;
            names.entry(v.to_string()).or_insert_with(|| format!("X{next}")).clone()
        };
        let mut c = self.map_vars(&mut rename);
        c.label = None;
        c
    }

    pub fn is_variant_of(&self, other: &Clause) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.head.is_empty() {
            write!(f, "⊥")?;
        }
        for (i, a) in self.head.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, " ← ")?;
        if self.body.is_empty() {
            write!(f, "⊤")?;
        }
        for (i, a) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, " ∧ ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
