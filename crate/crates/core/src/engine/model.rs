use std::collections::HashMap;

use indexmap::{IndexMap, IndexSet};

use crate::kernel::{Clause, Signature, Term};
use crate::oracle::{evaluate, FiniteInterpretation, Violation};
use crate::tptp::{ModelDocument, Problem};

use super::search::{Branch, Search};
use super::terms::TermId;

/// Every tuple of `n` indexes below `k`, first position slowest.
fn tuples(k: usize, n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.checked_pow(n as u32).unwrap_or(0);
    (0..total).map(move |mut i| {
        let mut t = vec![0; n];
        for slot in t.iter_mut().rev() {
            *slot = i % k;
            i /= k;
        }
        t
    })
}

/// Read the finite interpretation off a completed branch.
///
/// The domain is the set of representatives of `dom` facts (all classes when
/// there is no domain predicate), in term order. A function maps a tuple to
/// the class of the matching term if that class is in the domain, and to the
/// class of the fallback constant otherwise.
pub(crate) fn extract_model(s: &mut Search<'_>, br: &Branch, problem: &Problem) -> ModelDocument {
    let mut domain: IndexSet<TermId> = IndexSet::new();
    match s.dom_predicate(problem) {
        Some(d) => domain.extend(br.facts[d].iter().map(|t| t[0])),
        None => domain.extend(br.cc.reps()),
    }
    domain.sort_by(|&a, &b| s.bank.cmp(a, b));
    let c = br.cc.find(s.fallback());
    if domain.is_empty() {
        domain.insert(c);
    }
    let fallback = if domain.contains(&c) { c } else { domain[0] };
    let fns = &s.sym.functions;
    let terms: Vec<Term> = domain.iter().map(|&d| s.bank.to_term(d, fns)).collect();

    let mut functions = std::collections::BTreeMap::new();
    for (fi, (name, &n)) in fns.iter().enumerate() {
        for idx in tuples(domain.len(), n) {
            let args: Vec<TermId> = idx.iter().map(|&i| domain[i]).collect();
            let value = br.cc.lookup(fi as u32, &args).filter(|r| domain.contains(r)).unwrap_or(fallback);
            let key = (name.clone(), idx.iter().map(|&i| terms[i].clone()).collect());
            functions.insert(key, terms[domain.get_index_of(&value).unwrap()].clone());
        }
    }

    let mut predicates = std::collections::BTreeSet::new();
    for (pi, (name, _)) in s.sym.predicates.iter().enumerate() {
        for tuple in br.facts[pi].iter() {
            let idx: Option<Vec<usize>> = tuple.iter().map(|t| domain.get_index_of(t)).collect();
            if let Some(idx) = idx {
                predicates.insert((name.clone(), idx.into_iter().map(|i| terms[i].clone()).collect()));
            }
        }
    }

    let mut classes = std::collections::BTreeMap::new();
    for (i, &d) in domain.iter().enumerate() {
        let mut members = br.cc.members(d).to_vec();
        members.sort_by(|&a, &b| s.bank.cmp(a, b));
        classes.insert(terms[i].clone(), members.into_iter().map(|m| s.bank.to_term(m, fns)).collect());
    }

    ModelDocument { domain: terms, classes, functions, predicates, specials: problem.signature.specials.clone() }
}

/// Translate a term-domain model to an integer interpretation covering the symbols of `clauses`.
pub fn to_interpretation(m: &ModelDocument, clauses: &[Clause]) -> Result<FiniteInterpretation, Violation> {
    let sig = Signature::from_clauses(clauses).map_err(|e| match e {
        crate::kernel::SignatureError::ArityMismatch { name, expected, .. } => {
            Violation::Undefined { symbol: name, arity: expected }
        }
    })?;
    let k = m.domain.len();
    let index: HashMap<&Term, usize> = m.domain.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let mut functions = IndexMap::new();
    for (f, &n) in &sig.functions {
        let mut table = Vec::new();
        for idx in tuples(k, n) {
            let args: Vec<Term> = idx.iter().map(|&i| m.domain[i].clone()).collect();
            let v = m
                .functions
                .get(&(f.clone(), args))
                .and_then(|v| index.get(v))
                .ok_or_else(|| Violation::Undefined { symbol: f.clone(), arity: n })?;
            table.push(*v);
        }
        functions.insert(f.clone(), table);
    }
    let mut predicates: IndexMap<String, Vec<bool>> = IndexMap::new();
    for (p, &n) in &sig.predicates {
        predicates.insert(p.clone(), vec![false; k.pow(n as u32)]);
    }
    for (p, &n) in &sig.predicates {
        if let Some(crate::kernel::Special::Not(orig)) = m.specials.get(p) {
            predicates.entry(orig.clone()).or_insert_with(|| vec![false; k.pow(n as u32)]);
        }
    }
    for (p, args) in &m.predicates {
        if let Some(table) = predicates.get_mut(p) {
            let idx: Option<Vec<usize>> = args.iter().map(|a| index.get(a).copied()).collect();
            if let Some(idx) = idx {
                let pos = idx.iter().fold(0, |acc, &i| acc * k + i);
                if pos < table.len() {
                    table[pos] = true;
                }
            }
        }
    }
    Ok(FiniteInterpretation { size: k, functions, predicates, specials: m.specials.clone() })
}

/// Evaluate clauses in a model; equality is identity of domain elements.
pub fn check_model(m: &ModelDocument, clauses: &[Clause]) -> Result<(), Violation> {
    evaluate(clauses, &to_interpretation(m, clauses)?)
}
