use crate::kernel::{Atom, Clause, Special, Term, EQ, NEQ, RESERVED_PREFIX};
use crate::tptp::Problem;

use super::ClauseSet;

/// Partial flattening: proper functional arguments of non-equational body atoms
/// become fresh variables constrained by body equations. No reflexivity unit is added.
pub fn pf(m: &Problem) -> Problem {
    let mut p = m.clone();
    p.clauses = m.clauses.iter().map(flatten_clause).collect();
    p
}

fn flatten_clause(c: &Clause) -> Clause {
    let mut extracted: Vec<(Term, Term)> = Vec::new();
    let mut body: Vec<Atom> = c
        .body()
        .iter()
        .map(|a| {
            if a.is_equational() {
                return a.clone();
            }
            let args = a
                .args
                .iter()
                .map(|t| {
                    if !t.is_proper_functional() {
                        return t.clone();
                    }
                    if let Some((_, x)) = extracted.iter().find(|(s, _)| s == t) {
                        return x.clone();
                    }
                    let x = Term::Var(format!("{RESERVED_PREFIX}f{}", extracted.len() + 1));
                    extracted.push((t.clone(), x.clone()));
                    x
                })
                .collect();
            Atom::new(a.pred.clone(), args)
        })
        .collect();
    if extracted.is_empty() {
        return c.clone();
    }
    body.extend(extracted.into_iter().map(|(t, x)| Atom::eq(t, x)));
    let mut out = Clause::new(c.head().to_vec(), body);
    out.label = c.label.clone();
    out
}

/// Basic shifting: body atoms containing proper functional terms move to the
/// head under their shifted predicate, with one consistency clause per shifted
/// predicate. Returns the problem and the number of clauses added.
pub fn bs(m: &Problem) -> (Problem, usize) {
    let mut p = m.clone();
    // (original predicate, shifted predicate), in order of first shift
    let mut shifted: Vec<(String, String, usize)> = Vec::new();
    let mut shifted_name = |p: &mut Problem, pred: &str, arity: usize| -> String {
        match pred {
            EQ => return NEQ.to_string(),
            NEQ => return EQ.to_string(),
            _ => {}
        }
        if let Some((_, n, _)) = shifted.iter().find(|(o, _, _)| o == pred) {
            return n.clone();
        }
        let existing = p
            .signature
            .specials
            .iter()
            .find(|(_, k)| matches!(k, Special::Not(o) if o == pred))
            .map(|(n, _)| n.clone());
        let name = existing.unwrap_or_else(|| {
            p.signature.add_special_predicate(&format!("NOT_{pred}"), arity, Special::Not(pred.to_string()))
        });
        shifted.push((pred.to_string(), name.clone(), arity));
        name
    };

    let mut consistency: Vec<Clause> = Vec::new();
    let mut clauses = Vec::with_capacity(m.clauses.len());
    for c in &m.clauses {
        if !c.body().iter().any(Atom::has_proper_functional_term) {
            clauses.push(c.clone());
            continue;
        }
        let mut head = c.head().to_vec();
        let mut body = Vec::new();
        for a in c.body() {
            if a.has_proper_functional_term() {
                let name = shifted_name(&mut p, &a.pred, a.args.len());
                if (a.pred == EQ || a.pred == NEQ) && !consistency.iter().any(is_eq_consistency) {
                    consistency.push(eq_consistency());
                }
                head.push(Atom::new(name, a.args.clone()));
            } else {
                body.push(a.clone());
            }
        }
        let mut out = Clause::new(head, body);
        out.label = c.label.clone();
        clauses.push(out);
    }
    for (pred, name, arity) in &shifted {
        let xs: Vec<Term> = (1..=*arity).map(|i| Term::Var(format!("X{i}"))).collect();
        consistency.push(Clause::new(vec![], vec![Atom::new(pred, xs.clone()), Atom::new(name, xs)]));
    }
    let mut set = ClauseSet::new(clauses);
    let mut added = 0;
    for c in consistency {
        if set.push(c.with_label(format!("shift_{}", added + 1))) {
            added += 1;
        }
    }
    p.clauses = set.into_vec();
    (p, added)
}

/// `⊥ ← x≈y ∧ x≉y`
pub fn eq_consistency() -> Clause {
    let (x, y) = (Term::var("X"), Term::var("Y"));
    Clause::new(vec![], vec![Atom::eq(x.clone(), y.clone()), Atom::neq(x, y)])
}

fn is_eq_consistency(c: &Clause) -> bool {
    c.is_variant_of(&eq_consistency())
}

/// Shifting: partial flattening followed by basic shifting.
pub fn sh(m: &Problem) -> (Problem, usize) {
    bs(&pf(m))
}
