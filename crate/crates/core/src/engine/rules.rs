use indexmap::IndexMap;

use crate::kernel::{Atom, Clause, Term, EQ, NEQ};

use super::terms::{Sym, TermId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Pat {
    Var(usize),
    App(Sym, Vec<Pat>),
}

impl Pat {
    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Pat::Var(i) => out.push(*i),
            Pat::App(_, args) => args.iter().for_each(|a| a.vars(out)),
        }
    }

    pub(crate) fn is_bound(&self, bind: &[Option<TermId>]) -> bool {
        match self {
            Pat::Var(i) => bind[*i].is_some(),
            Pat::App(_, args) => args.iter().all(|a| a.is_bound(bind)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Lit {
    Pred(usize, Vec<Pat>),
    Eq(Pat, Pat),
    Neq(Pat, Pat),
}

impl Lit {
    pub(crate) fn vars(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self {
            Lit::Pred(_, ps) => ps.iter().for_each(|p| p.vars(&mut out)),
            Lit::Eq(s, t) | Lit::Neq(s, t) => {
                s.vars(&mut out);
                t.vars(&mut out);
            }
        }
        out
    }
}

/// A clause compiled for matching. Body atoms are ordered: ordinary atoms as
/// written, then disequations, then equations.
#[derive(Clone, Debug)]
pub(crate) struct Rule {
    pub(crate) head: Vec<Lit>,
    pub(crate) body: Vec<Lit>,
    pub(crate) nvars: usize,
    /// Body literals sharing no variable with the head or the rest of the
    /// body. One match of such a literal is as good as any other.
    pub(crate) local: Vec<bool>,
    /// All body arguments are variables and every equation variable is bound
    /// by another body literal. New matches after a merge then always involve
    /// a renamed fact.
    pub(crate) flat: bool,
}

/// Function and predicate numbering for one search. Function order is the
/// symbol precedence of the term order.
#[derive(Clone, Debug)]
pub(crate) struct Symbols {
    pub(crate) functions: IndexMap<String, usize>,
    pub(crate) predicates: IndexMap<String, usize>,
}

struct VarMap(Vec<String>);

impl VarMap {
    fn index(&mut self, v: &str) -> usize {
        match self.0.iter().position(|x| x == v) {
            Some(i) => i,
            None => {
                self.0.push(v.to_string());
                self.0.len() - 1
            }
        }
    }
}

fn pat(t: &Term, vars: &mut VarMap, sym: &Symbols) -> Pat {
    match t {
        Term::Var(v) => Pat::Var(vars.index(v)),
        Term::App(f, args) => Pat::App(
            sym.functions.get_index_of(f.as_str()).expect("function in signature") as Sym,
            args.iter().map(|a| pat(a, vars, sym)).collect(),
        ),
    }
}

fn lit(a: &Atom, vars: &mut VarMap, sym: &Symbols) -> Lit {
    let mut args = a.args.iter().map(|t| pat(t, vars, sym));
    match a.pred.as_str() {
        EQ => Lit::Eq(args.next().unwrap(), args.next().unwrap()),
        NEQ => Lit::Neq(args.next().unwrap(), args.next().unwrap()),
        p => Lit::Pred(sym.predicates.get_index_of(p).expect("predicate in signature"), args.collect()),
    }
}

pub(crate) fn compile(clause: &Clause, sym: &Symbols) -> Rule {
    let mut vars = VarMap(Vec::new());
    let rank = |a: &&Atom| match a.pred.as_str() {
        EQ => 2,
        NEQ => 1,
        _ => 0,
    };
    let mut body: Vec<&Atom> = clause.body().iter().collect();
    body.sort_by_key(rank);
    let body = body.into_iter().map(|a| lit(a, &mut vars, sym)).collect();
    let head: Vec<Lit> = clause.head().iter().map(|a| lit(a, &mut vars, sym)).collect();
    let body: Vec<Lit> = body;
    let mut count = vec![0usize; vars.0.len()];
    for v in head.iter().chain(&body).flat_map(Lit::vars) {
        count[v] += 1;
    }
    let local = body
        .iter()
        .map(|l| {
            let vs = l.vars();
            vs.iter().all(|&v| count[v] == vs.iter().filter(|&&w| w == v).count())
        })
        .collect();
    let mut bound = vec![false; vars.0.len()];
    for l in body.iter().filter(|l| !matches!(l, Lit::Eq(..))) {
        l.vars().into_iter().for_each(|v| bound[v] = true);
    }
    let flat = body.iter().all(|l| match l {
        Lit::Pred(_, ps) => ps.iter().all(|p| matches!(p, Pat::Var(_))),
        Lit::Neq(s, t) => matches!((s, t), (Pat::Var(_), Pat::Var(_))),
        Lit::Eq(s, t) => matches!((s, t), (Pat::Var(x), Pat::Var(y)) if bound[*x] && bound[*y]),
    });
    Rule { head, body, nvars: vars.0.len(), local, flat }
}
