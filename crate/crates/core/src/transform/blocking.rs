use crate::kernel::{Atom, Clause, Special, Term};
use crate::tptp::Problem;

use super::shift::eq_consistency;
use super::{ClauseSet, TransformError};

fn x() -> Term {
    Term::var("X")
}
fn y() -> Term {
    Term::var("Y")
}

/// `x≈y ∨ x≉y ← body`
fn case_split(body: Vec<Atom>) -> Clause {
    Clause::new(vec![Atom::eq(x(), y()), Atom::neq(x(), y())], body)
}

fn require_dom(p: &Problem) -> Result<String, TransformError> {
    p.signature.dom().map(str::to_string).ok_or(TransformError::MissingDom)
}

/// Subterm axioms restricted to domain terms.
fn sub_axioms(p: &mut Problem, dom: &str) -> (String, Vec<Clause>) {
    let sub = p.signature.ensure_special_predicate("sub", 2, Special::Sub);
    let mut out = vec![Clause::new(vec![Atom::new(&sub, vec![x(), x()])], vec![Atom::new(dom, vec![x()])])];
    for (f, &n) in &p.signature.functions {
        let args: Vec<Term> = (1..=n).map(|i| Term::Var(format!("X{i}"))).collect();
        let ft = Term::App(f.clone(), args.clone());
        for xi in &args {
            out.push(Clause::new(
                vec![Atom::new(&sub, vec![Term::var("Z"), ft.clone()])],
                vec![
                    Atom::new(&sub, vec![Term::var("Z"), xi.clone()]),
                    Atom::new(dom, vec![Term::var("Z")]),
                    Atom::new(dom, vec![ft.clone()]),
                ],
            ));
        }
    }
    (sub, out)
}

fn finish(mut p: Problem, clauses: Vec<Clause>) -> (Problem, usize) {
    let mut set = ClauseSet::new(std::mem::take(&mut p.clauses));
    let mut added = 0;
    for c in clauses {
        if set.push(c.with_label(format!("block_{}", added + 1))) {
            added += 1;
        }
    }
    p.clauses = set.into_vec();
    (p, added)
}

/// Subterm domain blocking.
pub fn bl_sd(m: &Problem) -> Result<(Problem, usize), TransformError> {
    let dom = require_dom(m)?;
    let mut p = m.clone();
    let (sub, mut clauses) = sub_axioms(&mut p, &dom);
    clauses.push(case_split(vec![Atom::new(&sub, vec![x(), y()])]));
    clauses.push(eq_consistency());
    Ok(finish(p, clauses))
}

/// Subterm predicate blocking: case splits only between terms sharing a unary input predicate.
pub fn bl_sp(m: &Problem) -> Result<(Problem, usize), TransformError> {
    let dom = require_dom(m)?;
    let mut p = m.clone();
    let preds = p.signature.blocking_predicates();
    let (sub, mut clauses) = sub_axioms(&mut p, &dom);
    for q in preds {
        clauses.push(case_split(vec![
            Atom::new(&sub, vec![x(), y()]),
            Atom::new(&q, vec![x()]),
            Atom::new(&q, vec![y()]),
        ]));
    }
    clauses.push(eq_consistency());
    Ok(finish(p, clauses))
}

/// Unrestricted domain blocking.
pub fn bl_ud(m: &Problem) -> Result<(Problem, usize), TransformError> {
    let dom = require_dom(m)?;
    let clauses = vec![case_split(vec![Atom::new(&dom, vec![x()]), Atom::new(&dom, vec![y()])]), eq_consistency()];
    Ok(finish(m.clone(), clauses))
}

/// Unrestricted predicate blocking.
pub fn bl_up(m: &Problem) -> Result<(Problem, usize), TransformError> {
    let mut clauses: Vec<Clause> = m
        .signature
        .blocking_predicates()
        .into_iter()
        .map(|q| case_split(vec![Atom::new(&q, vec![x()]), Atom::new(&q, vec![y()])]))
        .collect();
    clauses.push(eq_consistency());
    Ok(finish(m.clone(), clauses))
}
