use std::collections::BTreeMap;
use std::fmt;

use super::term::{Atom, Term, RESERVED_PREFIX};

/// Finite map from variable names to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.map.get(var)
    }

    pub fn insert(&mut self, var: impl Into<String>, t: Term) {
        self.map.insert(var.into(), t);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| self.apply(t)).collect() }
    }

    /// `self` followed by `other`: applying the result equals applying `self` then `other`.
    pub fn compose(&self, other: &Substitution) -> Substitution {
        let mut map: BTreeMap<String, Term> = self.map.iter().map(|(v, t)| (v.clone(), other.apply(t))).collect();
        for (v, t) in &other.map {
            map.entry(v.clone()).or_insert_with(|| t.clone());
        }
        map.retain(|v, t| !matches!(t, Term::Var(w) if w == v));
        Substitution { map }
    }

    pub fn is_idempotent(&self) -> bool {
        self.map.values().all(|t| self.apply(t) == *t)
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        Substitution { map: iter.into_iter().collect() }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, t)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        write!(f, "}}")
    }
}

fn walk<'a>(t: &'a Term, s: &'a Substitution) -> &'a Term {
    let mut cur = t;
    while let Term::Var(v) = cur {
        match s.map.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

fn occurs_in(var: &str, t: &Term, s: &Substitution) -> bool {
    match walk(t, s) {
        Term::Var(v) => v == var,
        Term::App(_, args) => args.iter().any(|a| occurs_in(var, a, s)),
    }
}

fn unify_terms(a: &Term, b: &Term, s: &mut Substitution) -> bool {
    let (a, b) = (walk(a, s).clone(), walk(b, s).clone());
    match (&a, &b) {
        (Term::Var(x), Term::Var(y)) if x == y => true,
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if occurs_in(x, t, s) {
                return false;
            }
            s.map.insert(x.clone(), t.clone());
            true
        }
        (Term::App(f, fa), Term::App(g, ga)) => {
            f == g && fa.len() == ga.len() && fa.iter().zip(ga).all(|(x, y)| unify_terms(x, y, s))
        }
    }
}

/// Fully apply triangular bindings so the result is idempotent.
fn resolve(s: &Substitution) -> Substitution {
    fn deep(t: &Term, s: &Substitution) -> Term {
        match walk(t, s) {
            Term::Var(v) => Term::Var(v.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| deep(a, s)).collect()),
        }
    }
    s.map.iter().map(|(v, t)| (v.clone(), deep(t, s))).collect()
}

/// Most general unifier of two atoms, with occurs check.
pub fn mgu(a1: &Atom, a2: &Atom) -> Option<Substitution> {
    if a1.pred != a2.pred || a1.args.len() != a2.args.len() {
        return None;
    }
    let mut s = Substitution::new();
    for (x, y) in a1.args.iter().zip(&a2.args) {
        if !unify_terms(x, y, &mut s) {
            return None;
        }
    }
    Some(resolve(&s))
}

pub fn mgu_terms(t1: &Term, t2: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    unify_terms(t1, t2, &mut s).then(|| resolve(&s))
}

fn match_term(pattern: &Term, ground: &Term, s: &mut Substitution) -> bool {
    match pattern {
        Term::Var(v) => match s.map.get(v) {
            Some(bound) => bound == ground,
            None => {
                s.map.insert(v.clone(), ground.clone());
                true
            }
        },
        Term::App(f, args) => match ground {
            Term::App(g, gargs) if f == g && args.len() == gargs.len() => {
                args.iter().zip(gargs).all(|(p, t)| match_term(p, t, s))
            }
            _ => false,
        },
    }
}

/// One-sided unification: `σ` with `pattern·σ = ground`.
pub fn match_atom(pattern: &Atom, ground: &Atom) -> Option<Substitution> {
    if pattern.pred != ground.pred || pattern.args.len() != ground.args.len() {
        return None;
    }
    let mut s = Substitution::new();
    pattern.args.iter().zip(&ground.args).all(|(p, t)| match_term(p, t, &mut s)).then_some(s)
}

/// Name of the `i`-th (1-based) abstraction variable.
pub fn abstraction_var(i: usize) -> String {
    format!("{RESERVED_PREFIX}x{i}")
}

/// Replace every non-variable argument by a fresh variable. Returns the abstracted
/// atom and the substitution that reverts it.
pub fn term_abstraction(a: &Atom) -> (Atom, Substitution) {
    let mut alpha = Substitution::new();
    let args = a
        .args
        .iter()
        .enumerate()
        .map(|(i, t)| {
            if t.is_var() {
                t.clone()
            } else {
                let x = abstraction_var(i + 1);
                alpha.insert(x.clone(), t.clone());
                Term::Var(x)
            }
        })
        .collect();
    (Atom { pred: a.pred.clone(), args }, alpha)
}
