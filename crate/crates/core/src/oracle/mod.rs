//! Brute-force finite model search and ground evaluation over `{0, …, k−1}`.
//!
//! Used to cross-check the engine and the transformations on tiny inputs.

use indexmap::IndexMap;
use thiserror::Error;

use crate::kernel::{Clause, Signature, SignatureError, Special, Term, EQ, NEQ};

/// Default cap on the number of candidate interpretations for one domain size.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

/// Total interpretation over the domain `{0, …, size−1}`.
///
/// Tables are row-major: the entry for `(d1, …, dn)` sits at `Σ di·size^(n−i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FiniteInterpretation {
    pub size: usize,
    pub functions: IndexMap<String, Vec<usize>>,
    pub predicates: IndexMap<String, Vec<bool>>,
    /// Generated predicates read canonically: the domain predicate and `sub`
    /// hold everywhere, `myequal` is identity and a shifted predicate is the
    /// complement of its original.
    pub specials: IndexMap<String, Special>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("clause {clause} is false under {assignment:?}")]
    Falsified { clause: usize, assignment: Vec<(String, usize)> },
    #[error("no table for `{symbol}`/{arity}")]
    Undefined { symbol: String, arity: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{required} candidate interpretations exceed the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

#[derive(Clone, Debug)]
enum CTerm {
    Var(usize),
    App(usize, Vec<CTerm>),
}

#[derive(Clone, Copy, Debug)]
enum PredKind {
    Table,
    True,
    Identity,
    Complement(usize),
}

#[derive(Clone, Debug)]
enum CAtom {
    Pred(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Neq(CTerm, CTerm),
}

#[derive(Clone, Debug)]
struct CClause {
    head: Vec<CAtom>,
    body: Vec<CAtom>,
    vars: Vec<String>,
}

/// Clauses over integer symbol indexes, in the order of `Signature::from_clauses`.
struct Compiled {
    clauses: Vec<CClause>,
    functions: Vec<(String, usize)>,
    predicates: Vec<(String, usize)>,
    kinds: Vec<PredKind>,
}

fn compile(clauses: &[Clause], specials: &IndexMap<String, Special>) -> Result<Compiled, SignatureError> {
    let mut sig = Signature::from_clauses(clauses)?;
    // a shifted predicate needs its original's table even when the original is absent
    for (name, kind) in specials {
        if let Special::Not(orig) = kind {
            if let Some(&n) = sig.predicates.get(name.as_str()) {
                sig.register_predicate(orig, n)?;
            }
        }
    }
    let functions: Vec<(String, usize)> = sig.functions.iter().map(|(f, &n)| (f.clone(), n)).collect();
    let predicates: Vec<(String, usize)> = sig.predicates.iter().map(|(p, &n)| (p.clone(), n)).collect();
    let kinds = predicates
        .iter()
        .map(|(p, _)| match specials.get(p) {
            Some(Special::Dom | Special::Sub) => PredKind::True,
            Some(Special::MyEqual) => PredKind::Identity,
            Some(Special::Not(orig)) => PredKind::Complement(sig.predicates.get_index_of(orig.as_str()).unwrap()),
            _ => PredKind::Table,
        })
        .collect();

    fn term(t: &Term, vars: &mut Vec<String>, sig: &Signature) -> CTerm {
        match t {
            Term::Var(v) => CTerm::Var(vars.iter().position(|x| x == v).unwrap_or_else(|| {
                vars.push(v.clone());
                vars.len() - 1
            })),
            Term::App(f, args) => CTerm::App(
                sig.functions.get_index_of(f.as_str()).unwrap(),
                args.iter().map(|a| term(a, vars, sig)).collect(),
            ),
        }
    }
    let mut out = Vec::new();
    for c in clauses {
        let mut vars = Vec::new();
        let atom = |a: &crate::kernel::Atom, vars: &mut Vec<String>| {
            let mut args: Vec<CTerm> = a.args.iter().map(|t| term(t, vars, &sig)).collect();
            match a.pred.as_str() {
                EQ => {
                    let t = args.pop().unwrap();
                    CAtom::Eq(args.pop().unwrap(), t)
                }
                NEQ => {
                    let t = args.pop().unwrap();
                    CAtom::Neq(args.pop().unwrap(), t)
                }
                p => CAtom::Pred(sig.predicates.get_index_of(p).unwrap(), args),
            }
        };
        let head = c.head().iter().map(|a| atom(a, &mut vars)).collect();
        let body = c.body().iter().map(|a| atom(a, &mut vars)).collect();
        out.push(CClause { head, body, vars });
    }
    Ok(Compiled { clauses: out, functions, predicates, kinds })
}

fn table_index(args: &[usize], k: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * k + a)
}

struct Tables<'a> {
    k: usize,
    functions: &'a [&'a [usize]],
    predicates: &'a [&'a [bool]],
    kinds: &'a [PredKind],
}

impl Tables<'_> {
    fn term(&self, t: &CTerm, val: &[usize]) -> usize {
        match t {
            CTerm::Var(i) => val[*i],
            CTerm::App(f, args) => {
                let idx = args.iter().fold(0, |acc, x| acc * self.k + self.term(x, val));
                self.functions[*f][idx]
            }
        }
    }

    fn pred(&self, p: usize, args: &[usize]) -> bool {
        match self.kinds[p] {
            PredKind::Table => self.predicates[p][table_index(args, self.k)],
            PredKind::True => true,
            PredKind::Identity => args.windows(2).all(|w| w[0] == w[1]),
            PredKind::Complement(q) => !self.pred(q, args),
        }
    }

    fn atom(&self, a: &CAtom, val: &[usize]) -> bool {
        match a {
            CAtom::Pred(p, args) if args.len() <= 8 => {
                let mut buf = [0usize; 8];
                for (slot, x) in buf.iter_mut().zip(args) {
                    *slot = self.term(x, val);
                }
                self.pred(*p, &buf[..args.len()])
            }
            CAtom::Pred(p, args) => {
                let a: Vec<usize> = args.iter().map(|x| self.term(x, val)).collect();
                self.pred(*p, &a)
            }
            CAtom::Eq(s, t) => self.term(s, val) == self.term(t, val),
            CAtom::Neq(s, t) => self.term(s, val) != self.term(t, val),
        }
    }

    /// First falsified clause with its valuation.
    fn falsified(&self, clauses: &[CClause]) -> Option<(usize, Vec<usize>)> {
        for (ci, c) in clauses.iter().enumerate() {
            let n = c.vars.len();
            let mut val = vec![0usize; n];
            loop {
                if c.body.iter().all(|a| self.atom(a, &val)) && !c.head.iter().any(|a| self.atom(a, &val)) {
                    return Some((ci, val));
                }
                if !next_counter(&mut val, self.k) {
                    break;
                }
            }
        }
        None
    }
}

/// Advance a base-`k` counter; false once it wraps around.
fn next_counter(digits: &mut [usize], k: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < k {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_bits(bits: &mut [bool]) -> bool {
    for b in bits.iter_mut() {
        *b = !*b;
        if *b {
            return true;
        }
    }
    false
}

/// Evaluate clauses under every valuation into the domain. Equality is identity.
pub fn evaluate(clauses: &[Clause], interp: &FiniteInterpretation) -> Result<(), Violation> {
    let compiled = compile(clauses, &interp.specials).map_err(|e| match e {
        SignatureError::ArityMismatch { name, expected, .. } => Violation::Undefined { symbol: name, arity: expected },
    })?;
    let k = interp.size;
    let mut functions = Vec::new();
    for (f, n) in &compiled.functions {
        match interp.functions.get(f) {
            Some(t) if t.len() == k.pow(*n as u32) && t.iter().all(|&v| v < k) => functions.push(t.as_slice()),
            _ => return Err(Violation::Undefined { symbol: f.clone(), arity: *n }),
        }
    }
    let empty: Vec<bool> = Vec::new();
    let mut predicates = Vec::new();
    for ((p, n), kind) in compiled.predicates.iter().zip(&compiled.kinds) {
        match (kind, interp.predicates.get(p)) {
            (PredKind::Table, Some(t)) if t.len() == k.pow(*n as u32) => predicates.push(t.as_slice()),
            (PredKind::Table, _) => return Err(Violation::Undefined { symbol: p.clone(), arity: *n }),
            _ => predicates.push(empty.as_slice()),
        }
    }
    let tables = Tables { k, functions: &functions, predicates: &predicates, kinds: &compiled.kinds };
    match tables.falsified(&compiled.clauses) {
        None => Ok(()),
        Some((clause, val)) => Err(Violation::Falsified {
            clause,
            assignment: compiled.clauses[clause].vars.iter().cloned().zip(val).collect(),
        }),
    }
}

/// Number of interpretations of size `k` for the given symbols, saturating.
fn candidate_count(functions: &[(String, usize)], predicates: &[(String, usize)], k: usize) -> u128 {
    let mut total: u128 = 1;
    for (_, n) in functions {
        for _ in 0..k.saturating_pow(*n as u32) {
            total = total.saturating_mul(k as u128);
        }
    }
    for (_, n) in predicates {
        for _ in 0..k.saturating_pow(*n as u32) {
            total = total.saturating_mul(2);
        }
    }
    total
}

/// Search all interpretations of size exactly `k` with the default budget.
pub fn find_model(clauses: &[Clause], k: usize) -> Result<Option<FiniteInterpretation>, OracleError> {
    find_model_with_budget(clauses, k, DEFAULT_BUDGET)
}

/// Enumerate function tables (outer, base-`k` counters) and predicate tables
/// (inner, bit counters); return the first interpretation satisfying all clauses.
pub fn find_model_with_budget(
    clauses: &[Clause],
    k: usize,
    budget: u64,
) -> Result<Option<FiniteInterpretation>, OracleError> {
    if k == 0 {
        return Ok(None);
    }
    let compiled = compile(clauses, &IndexMap::new())?;
    let required = candidate_count(&compiled.functions, &compiled.predicates, k);
    if required > budget as u128 {
        return Err(OracleError::BudgetExceeded { required, budget });
    }
    let mut fn_tables: Vec<Vec<usize>> = compiled.functions.iter().map(|(_, n)| vec![0; k.pow(*n as u32)]).collect();
    let mut pred_tables: Vec<Vec<bool>> =
        compiled.predicates.iter().map(|(_, n)| vec![false; k.pow(*n as u32)]).collect();
    loop {
        loop {
            let found = {
                let f: Vec<&[usize]> = fn_tables.iter().map(Vec::as_slice).collect();
                let p: Vec<&[bool]> = pred_tables.iter().map(Vec::as_slice).collect();
                let tables = Tables { k, functions: &f, predicates: &p, kinds: &compiled.kinds };
                tables.falsified(&compiled.clauses).is_none()
            };
            if found {
                return Ok(Some(FiniteInterpretation {
                    size: k,
                    functions: compiled.functions.iter().map(|(f, _)| f.clone()).zip(fn_tables).collect(),
                    predicates: compiled.predicates.iter().map(|(p, _)| p.clone()).zip(pred_tables).collect(),
                    specials: IndexMap::new(),
                }));
            }
            if !pred_tables.iter_mut().any(|t| next_bits(t)) {
                break;
            }
        }
        if !fn_tables.iter_mut().any(|t| next_counter(t, k)) {
            return Ok(None);
        }
    }
}
