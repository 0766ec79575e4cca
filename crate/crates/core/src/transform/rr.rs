use crate::kernel::{abstraction_var, term_abstraction, Atom, Clause, Special, Term, EQ, NEQ};
use crate::tptp::Problem;

use super::{ClauseSet, ConstantPolicy, StepCounts};

fn xs(n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::Var(abstraction_var(i))).collect()
}

/// Shield head-only variables with `dom` body atoms.
pub fn range_restrict_clause(c: &Clause, dom: &str) -> Clause {
    let body_vars = c.body_vars();
    let mut missing: Vec<String> = Vec::new();
    for a in c.head() {
        for v in a.vars() {
            if !body_vars.contains(v) && !missing.iter().any(|m| m == v) {
                missing.push(v.to_string());
            }
        }
    }
    if missing.is_empty() {
        return c.clone();
    }
    let mut body = c.body().to_vec();
    body.extend(missing.into_iter().map(|v| Atom::new(dom, vec![Term::Var(v)])));
    let mut out = Clause::new(c.head().to_vec(), body);
    out.label = c.label.clone();
    out
}

/// Register `dom` and pick the constant that seeds the domain.
fn seed_domain(p: &mut Problem, policy: ConstantPolicy, counts: &mut StepCounts) -> (String, String) {
    let dom = p.signature.ensure_special_predicate("dom", 1, Special::Dom);
    let reused = match policy {
        ConstantPolicy::ReuseFirst => p.signature.constants().next().map(str::to_string),
        ConstantPolicy::AlwaysFresh => None,
    };
    let c = match reused {
        Some(c) => c,
        None => {
            let c = p.signature.add_special_constant("c0");
            counts.fresh_symbols.push(c.clone());
            c
        }
    };
    counts.fresh_symbols.push(dom.clone());
    p.domain_constant = Some(c.clone());
    (dom, c)
}

/// Classical range-restriction: seed the domain, shield head-only variables and
/// enumerate the Herbrand universe.
pub fn crr(m: &Problem, policy: ConstantPolicy) -> (Problem, StepCounts) {
    let mut counts = StepCounts::default();
    let mut p = m.clone();
    let (dom, c) = seed_domain(&mut p, policy, &mut counts);

    let mut set = ClauseSet::new(m.clauses.iter().map(|cl| range_restrict_clause(cl, &dom)).collect());
    if set.push(Clause::fact(Atom::new(&dom, vec![Term::constant(&c)])).with_label("dom_seed")) {
        counts.domain_constant += 1;
    }
    let functions: Vec<(String, usize)> = p.signature.functions.iter().map(|(f, &n)| (f.clone(), n)).collect();
    for (f, n) in functions {
        let args = xs(n);
        let body = args.iter().map(|x| Atom::new(&dom, vec![x.clone()])).collect();
        let cl = Clause::new(vec![Atom::new(&dom, vec![Term::App(f, args)])], body);
        if set.push(cl.with_label(format!("dom_fn_{}", counts.function_dom + 1))) {
            counts.function_dom += 1;
        }
    }
    p.clauses = set.into_vec();
    (p, counts)
}

/// Replace positive equality in clause heads by `myequal` and add its definition.
///
/// Requires `dom` to be registered already (it is, when called from [`rr`]).
pub fn myequal_rewrite(m: &Problem) -> (Problem, usize) {
    let mut p = m.clone();
    if !m.clauses.iter().any(|c| c.head().iter().any(Atom::is_equality)) {
        return (p, 0);
    }
    let dom = p.signature.ensure_special_predicate("dom", 1, Special::Dom);
    let myequal = p.signature.ensure_special_predicate("myequal", 2, Special::MyEqual);
    let rewritten = m
        .clauses
        .iter()
        .map(|c| {
            if !c.head().iter().any(Atom::is_equality) {
                return c.clone();
            }
            let head = c
                .head()
                .iter()
                .map(|a| if a.is_equality() { Atom::new(&myequal, a.args.clone()) } else { a.clone() })
                .collect();
            let mut out = Clause::new(head, c.body().to_vec());
            out.label = c.label.clone();
            out
        })
        .collect();
    let mut set = ClauseSet::new(rewritten);
    let (x, y) = (Term::var("X"), Term::var("Y"));
    let def = Atom::new(&myequal, vec![x.clone(), y.clone()]);
    let mut added = 0;
    for (i, head) in
        [Atom::eq(x.clone(), y.clone()), Atom::new(&dom, vec![x]), Atom::new(&dom, vec![y])].into_iter().enumerate()
    {
        if set.push(Clause::new(vec![head], vec![def.clone()]).with_label(format!("myequal_{}", i + 1))) {
            added += 1;
        }
    }
    p.clauses = set.into_vec();
    (p, added)
}

/// Range-restriction that adds domain terms only where clauses need them.
pub fn rr(m: &Problem, policy: ConstantPolicy) -> (Problem, StepCounts) {
    let mut counts = StepCounts::default();
    let mut p = m.clone();
    let (dom, c) = seed_domain(&mut p, policy, &mut counts);
    let (eq_free, myequal_added) = myequal_rewrite(&p);
    counts.myequal = myequal_added;
    if let Some(name) = eq_free.signature.special_name(&Special::MyEqual) {
        if p.signature.special_name(&Special::MyEqual).is_none() {
            counts.fresh_symbols.push(name.to_string());
        }
    }
    p = eq_free;

    // Step 2: terms from clause bodies, computed from the input clauses.
    let mut body_clauses = Vec::new();
    for cl in &m.clauses {
        for b in cl.body() {
            let (abs, alpha) = term_abstraction(b);
            for (_, t) in alpha.iter() {
                body_clauses.push(Clause::new(vec![Atom::new(&dom, vec![t.clone()])], vec![abs.clone()]));
            }
        }
    }

    // Step 3 applies to everything so far, including the Step 2 clauses.
    let mut set = ClauseSet::new(p.clauses.iter().map(|cl| range_restrict_clause(cl, &dom)).collect());
    if set.push(Clause::fact(Atom::new(&dom, vec![Term::constant(&c)])).with_label("dom_seed")) {
        counts.domain_constant += 1;
    }
    for cl in body_clauses {
        let cl = range_restrict_clause(&cl, &dom);
        if set.push(cl.with_label(format!("dom_body_{}", counts.body_terms + 1))) {
            counts.body_terms += 1;
        }
    }

    // Step 4: every predicate of the input, shifted ones included; `=` is covered by `myequal`.
    let mut preds: Vec<(String, usize)> = p
        .signature
        .predicates
        .iter()
        .filter(|(n, _)| !matches!(p.signature.special(n), Some(Special::Dom | Special::Sub | Special::MyEqual)))
        .map(|(n, &a)| (n.clone(), a))
        .collect();
    let has_neq = m.clauses.iter().any(|cl| cl.atoms().any(Atom::is_disequality));
    if has_neq {
        preds.push((NEQ.to_string(), 2));
    }
    for (pred, n) in preds {
        debug_assert_ne!(pred, EQ);
        let args = xs(n);
        let body = Atom::new(&pred, args.clone());
        for x in args {
            let cl = Clause::new(vec![Atom::new(&dom, vec![x])], vec![body.clone()]);
            if set.push(cl.with_label(format!("dom_pred_{}", counts.predicate_dom + 1))) {
                counts.predicate_dom += 1;
            }
        }
    }

    // Step 5: the domain is closed under subterms.
    let functions: Vec<(String, usize)> = p.signature.functions.iter().map(|(f, &n)| (f.clone(), n)).collect();
    for (f, n) in functions {
        let args = xs(n);
        let body = Atom::new(&dom, vec![Term::App(f.clone(), args.clone())]);
        for x in args {
            let cl = Clause::new(vec![Atom::new(&dom, vec![x])], vec![body.clone()]);
            if set.push(cl.with_label(format!("dom_fn_{}", counts.function_dom + 1))) {
                counts.function_dom += 1;
            }
        }
    }
    p.clauses = set.into_vec();
    (p, counts)
}

/// Number of non-variable argument terms over all body atoms.
pub fn body_term_count(m: &Problem) -> usize {
    m.clauses.iter().flat_map(|c| c.body()).map(|a| a.args.iter().filter(|t| !t.is_var()).count()).sum()
}
