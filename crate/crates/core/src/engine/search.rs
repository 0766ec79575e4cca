use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Write;
use std::sync::Arc;
use std::time::Instant;

use crate::kernel::Special;
use crate::tptp::Problem;

use super::cc::Cc;
use super::model::extract_model;
use super::rules::{compile, Lit, Pat, Rule, Symbols};
use super::terms::{TermBank, TermId};
use super::{EngineError, SolveResult, Stats, Status, Strategy};

type Bind = Vec<Option<TermId>>;

/// A ground literal over interned terms. Arguments may be unregistered in the
/// branch; they are normalized again whenever the literal is inspected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum GLit {
    Atom(usize, Box<[TermId]>),
    Eq(TermId, TermId),
    Neq(TermId, TermId),
}

type Tuple = Arc<[TermId]>;
type Item = Arc<[GLit]>;

/// Argument tuples of one predicate. Tuples are never changed in place: a
/// renamed tuple is killed and appended again, so positions stay valid.
#[derive(Clone, Debug, Default)]
pub(crate) struct Facts {
    list: Vec<Tuple>,
    live: Vec<bool>,
    set: HashMap<Tuple, usize>,
}

impl Facts {
    /// Position of a new tuple, or None if it was present.
    fn insert(&mut self, t: Tuple) -> Option<usize> {
        if self.set.contains_key(&t) {
            return None;
        }
        self.set.insert(t.clone(), self.list.len());
        self.list.push(t);
        self.live.push(true);
        Some(self.list.len() - 1)
    }

    fn pop(&mut self) {
        let t = self.list.pop().unwrap();
        self.live.pop();
        self.set.remove(&t);
    }

    fn kill(&mut self, k: usize) {
        self.live[k] = false;
        self.set.remove(&self.list[k]);
    }

    fn revive(&mut self, k: usize) {
        self.live[k] = true;
        self.set.insert(self.list[k].clone(), k);
    }

    pub(crate) fn contains(&self, t: &[TermId]) -> bool {
        self.set.contains_key(t)
    }

    fn get(&self, k: usize) -> Option<&Tuple> {
        self.live[k].then(|| &self.list[k])
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.list.iter().zip(&self.live).filter(|(_, &l)| l).map(|(t, _)| t)
    }
}

/// Fact tables are numbered by predicate; disequations use one extra table.
type Table = usize;

/// How to take back one change to a branch.
#[derive(Debug)]
enum Undo {
    Insert(Table),
    Kill(Table, usize),
    Index(Table, usize, TermId),
    Push(usize),
    Pop(usize, Item),
    Seen(Item),
}

const EQ_SPLITS: usize = 0;
const SPLITS: usize = 1;
const UNITS: usize = 2;

/// The current branch of the search: facts, congruence, disequations and
/// pending work. Changes are trailed and undone on backtracking.
#[derive(Debug, Default)]
pub(crate) struct Branch {
    pub(crate) cc: Cc,
    /// Per predicate, argument tuples of representatives.
    pub(crate) facts: Vec<Facts>,
    /// (table, argument position, representative) → positions in the table.
    /// Entries may point at killed tuples.
    index: HashMap<(Table, usize, TermId), Vec<u32>>,
    /// Unordered pairs of representatives, smaller id first, as the last table.
    neq: Table,
    agenda: [VecDeque<Item>; 3],
    seen: HashSet<Item>,
    trail: Vec<Undo>,
    depth: usize,
    closed: bool,
    /// Classes merged since the last full match of the rules that need one.
    dirty: bool,
}

impl Branch {
    fn new(tables: usize) -> Self {
        Branch { facts: vec![Facts::default(); tables + 1], neq: tables, ..Default::default() }
    }

    /// Add a tuple of representatives; its position if it is new.
    fn add(&mut self, table: Table, tuple: Tuple) -> Option<usize> {
        let k = self.facts[table].insert(tuple.clone())?;
        self.trail.push(Undo::Insert(table));
        for (i, &t) in tuple.iter().enumerate() {
            self.index.entry((table, i, t)).or_default().push(k as u32);
            self.trail.push(Undo::Index(table, i, t));
        }
        Some(k)
    }

    fn kill(&mut self, table: Table, k: usize) {
        self.facts[table].kill(k);
        self.trail.push(Undo::Kill(table, k));
    }

    fn has_neq(&self, s: TermId, t: TermId) -> bool {
        self.facts[self.neq].contains(&[s.min(t), s.max(t)])
    }

    fn neqs(&self) -> impl Iterator<Item = (TermId, TermId)> + '_ {
        self.facts[self.neq].iter().map(|t| (t[0], t[1]))
    }

    fn push(&mut self, class: usize, item: Item) {
        self.agenda[class].push_back(item);
        self.trail.push(Undo::Push(class));
    }

    fn pop(&mut self) -> Option<Item> {
        let class = self.agenda.iter().position(|q| !q.is_empty())?;
        let item = self.agenda[class].pop_front()?;
        self.trail.push(Undo::Pop(class, item.clone()));
        Some(item)
    }

    fn rollback(&mut self, mark: usize, cc_mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Insert(table) => self.facts[table].pop(),
                Undo::Kill(table, k) => self.facts[table].revive(k),
                Undo::Index(table, i, t) => {
                    let key = (table, i, t);
                    let hits = self.index.get_mut(&key).unwrap();
                    hits.pop();
                    if hits.is_empty() {
                        self.index.remove(&key);
                    }
                }
                Undo::Push(class) => {
                    self.agenda[class].pop_back();
                }
                Undo::Pop(class, item) => self.agenda[class].push_front(item),
                Undo::Seen(item) => {
                    self.seen.remove(&item);
                }
            }
        }
        self.cc.rollback(cc_mark);
    }
}

/// A split whose remaining literals are still to be tried.
struct Choice {
    mark: usize,
    cc_mark: usize,
    depth: usize,
    dirty: bool,
    lits: Vec<GLit>,
    next: usize,
}

enum Seed {
    Pred(Tuple),
    Neq(TermId, TermId),
    /// A new class, for equations matched against every class.
    Class(TermId),
}

/// Canonical form of a term in a branch: its representative if it is known,
/// otherwise the term rebuilt over canonical arguments.
fn canon(bank: &mut TermBank, cc: &Cc, t: TermId) -> TermId {
    if cc.is_registered(t) {
        return cc.find(t);
    }
    let args: Vec<TermId> = bank.args(t).to_vec().into_iter().map(|a| canon(bank, cc, a)).collect();
    let f = bank.sym(t);
    if args.iter().all(|&a| cc.is_registered(a)) {
        if let Some(r) = cc.lookup(f, &args) {
            return r;
        }
    }
    bank.intern(f, &args)
}

fn eval(bank: &mut TermBank, cc: &Cc, p: &Pat, bind: &Bind) -> TermId {
    match p {
        Pat::Var(i) => bind[*i].expect("bound variable"),
        Pat::App(f, args) => {
            let args: Vec<TermId> = args.iter().map(|a| eval(bank, cc, a, bind)).collect();
            if args.iter().all(|&a| cc.is_registered(a)) {
                if let Some(r) = cc.lookup(*f, &args) {
                    return r;
                }
            }
            bank.intern(*f, &args)
        }
    }
}

/// Extend `bind` so that `p` denotes `val` (modulo the congruence).
fn match_pat(bank: &TermBank, cc: &Cc, p: &Pat, val: TermId, bind: &Bind, out: &mut Vec<Bind>) {
    match p {
        Pat::Var(i) => match bind[*i] {
            Some(v) if v == val => out.push(bind.clone()),
            Some(_) => {}
            None => {
                let mut b = bind.clone();
                b[*i] = Some(val);
                out.push(b);
            }
        },
        Pat::App(f, ps) => {
            if cc.is_registered(val) {
                for &m in cc.members(val) {
                    if bank.sym(m) == *f && bank.args(m).len() == ps.len() {
                        let vals: Vec<TermId> = bank.args(m).iter().map(|&a| cc.find(a)).collect();
                        match_args(bank, cc, ps, &vals, bind, out);
                    }
                }
            } else if bank.sym(val) == *f {
                let vals = bank.args(val).to_vec();
                match_args(bank, cc, ps, &vals, bind, out);
            }
        }
    }
}

fn match_args(bank: &TermBank, cc: &Cc, ps: &[Pat], vals: &[TermId], bind: &Bind, out: &mut Vec<Bind>) {
    let mut cur = vec![bind.clone()];
    for (p, &v) in ps.iter().zip(vals) {
        let mut next = Vec::new();
        for b in &cur {
            match_pat(bank, cc, p, v, b, &mut next);
        }
        if next.is_empty() {
            return;
        }
        cur = next;
    }
    out.extend(cur);
}

pub(crate) struct Search<'a> {
    pub(crate) bank: TermBank,
    pub(crate) sym: Symbols,
    rules: Vec<Rule>,
    /// predicate → (rule, body position)
    by_pred: Vec<Vec<(usize, usize)>>,
    by_neq: Vec<(usize, usize)>,
    by_class: Vec<(usize, usize)>,
    strategy: Strategy,
    stats: Stats,
    trace: Option<&'a mut dyn Write>,
    start: Instant,
    fallback: TermId,
    /// Head instances put on an agenda so far, over all branches.
    queued: usize,
    /// Set when `queued` passed its cap.
    overflow: bool,
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        problem: &Problem,
        strategy: &Strategy,
        trace: Option<&'a mut dyn Write>,
    ) -> Result<Self, EngineError> {
        if let Some(bad) = problem.clauses.iter().find(|c| !c.is_range_restricted()) {
            return Err(EngineError::NotRangeRestricted(bad.to_string()));
        }
        let mut functions = problem.signature.functions.clone();
        let fallback_name = problem
            .domain_constant
            .clone()
            .filter(|c| functions.get(c.as_str()) == Some(&0))
            .or_else(|| problem.signature.constants().next().map(str::to_string))
            .unwrap_or_else(|| {
                let name = problem.signature.fresh_name("c0");
                functions.insert(name.clone(), 0);
                name
            });
        let sym = Symbols { functions, predicates: problem.signature.predicates.clone() };
        let rules: Vec<Rule> = problem.clauses.iter().map(|c| compile(c, &sym)).collect();
        let mut by_pred = vec![Vec::new(); sym.predicates.len()];
        let mut by_neq = Vec::new();
        let mut by_class = Vec::new();
        for (ri, r) in rules.iter().enumerate() {
            let mut bound = vec![None; r.nvars];
            for (pos, l) in r.body.iter().enumerate() {
                match l {
                    Lit::Pred(p, _) => by_pred[*p].push((ri, pos)),
                    Lit::Neq(..) => by_neq.push((ri, pos)),
                    Lit::Eq(s, t) => {
                        // matched against all classes unless one side is bound by then
                        if !s.is_bound(&bound) && !t.is_bound(&bound) {
                            by_class.push((ri, pos));
                        }
                    }
                }
                l.vars().into_iter().for_each(|v| bound[v] = Some(0));
            }
        }
        let mut bank = TermBank::default();
        let fallback = bank.intern(sym.functions.get_index_of(fallback_name.as_str()).unwrap() as u32, &[]);
        Ok(Search {
            bank,
            sym,
            rules,
            by_pred,
            by_neq,
            by_class,
            strategy: strategy.clone(),
            stats: Stats::default(),
            trace,
            start: Instant::now(),
            fallback,
            queued: 0,
            overflow: false,
        })
    }

    fn emit(&mut self, line: impl FnOnce(&Self) -> String) {
        if self.trace.is_some() {
            let text = line(self);
            if let Some(w) = self.trace.as_mut() {
                let _ = writeln!(w, "EVENT {text}");
            }
        }
    }

    fn show_lit(&self, l: &GLit) -> String {
        let fns = &self.sym.functions;
        match l {
            GLit::Atom(p, args) => {
                let name = crate::tptp::symbol(self.sym.predicates.get_index(*p).unwrap().0);
                if args.is_empty() {
                    name
                } else {
                    let a: Vec<String> = args.iter().map(|&t| self.bank.render(t, fns)).collect();
                    format!("{name}({})", a.join(","))
                }
            }
            GLit::Eq(s, t) => format!("{} = {}", self.bank.render(*s, fns), self.bank.render(*t, fns)),
            GLit::Neq(s, t) => format!("{} != {}", self.bank.render(*s, fns), self.bank.render(*t, fns)),
        }
    }

    fn canon_lit(&mut self, br: &Branch, l: &GLit) -> GLit {
        match l {
            GLit::Atom(p, args) => GLit::Atom(*p, args.iter().map(|&t| canon(&mut self.bank, &br.cc, t)).collect()),
            GLit::Eq(s, t) => GLit::Eq(canon(&mut self.bank, &br.cc, *s), canon(&mut self.bank, &br.cc, *t)),
            GLit::Neq(s, t) => GLit::Neq(canon(&mut self.bank, &br.cc, *s), canon(&mut self.bank, &br.cc, *t)),
        }
    }

    /// Truth of a canonical literal in the branch: Some(true) if it holds,
    /// Some(false) if it can never hold there, None if open.
    fn truth(br: &Branch, l: &GLit) -> Option<bool> {
        let known = |s: TermId, t: TermId| br.cc.is_registered(s) && br.cc.is_registered(t);
        match l {
            GLit::Atom(p, args) => {
                (args.iter().all(|&t| br.cc.is_registered(t)) && br.facts[*p].contains(args)).then_some(true)
            }
            GLit::Eq(s, t) if s == t => Some(true),
            GLit::Eq(s, t) if known(*s, *t) && br.has_neq(*s, *t) => Some(false),
            GLit::Neq(s, t) if s == t => Some(false),
            GLit::Neq(s, t) if known(*s, *t) && br.has_neq(*s, *t) => Some(true),
            _ => None,
        }
    }

    /// Drop false literals; None if the disjunction already holds.
    fn simplify(&mut self, br: &Branch, lits: &[GLit]) -> Option<Vec<GLit>> {
        let mut out: Vec<GLit> = Vec::with_capacity(lits.len());
        for l in lits {
            let c = self.canon_lit(br, l);
            match Self::truth(br, &c) {
                Some(true) => return None,
                Some(false) => {}
                None => {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
        Some(out)
    }

    /// Queue a derived head instance, or close the branch if it is empty.
    fn offer(&mut self, br: &mut Branch, lits: Vec<GLit>) {
        let Some(lits) = self.simplify(br, &lits) else { return };
        if lits.is_empty() {
            br.closed = true;
            return;
        }
        let lits: Item = lits.into();
        if !br.seen.insert(lits.clone()) {
            return;
        }
        br.trail.push(Undo::Seen(lits.clone()));
        self.queued += 1;
        if self.queued > self.strategy.max_queued {
            self.overflow = true;
            return;
        }
        let class = if lits.len() == 1 {
            UNITS
        } else if lits.iter().any(|l| matches!(l, GLit::Eq(..))) {
            EQ_SPLITS
        } else {
            SPLITS
        };
        br.push(class, lits);
    }

    /// Extend `bind` by the matches of `lit`. With `first`, stop at one match.
    fn expand(&mut self, br: &Branch, lit: &Lit, bind: &Bind, seed: Option<&Seed>, first: bool, out: &mut Vec<Bind>) {
        let (bank, cc) = (&mut self.bank, &br.cc);
        let start = out.len();
        match (lit, seed) {
            (Lit::Pred(_, ps), Some(Seed::Pred(tuple))) => match_args(bank, cc, ps, tuple, bind, out),
            (Lit::Pred(p, ps), _) => {
                let key =
                    ps.iter().enumerate().find(|(_, x)| x.is_bound(bind)).map(|(i, x)| (i, eval(bank, cc, x, bind)));
                match key {
                    Some((_, v)) if !cc.is_registered(v) => {}
                    Some((i, v)) => {
                        if let Some(hits) = br.index.get(&(*p, i, cc.find(v))) {
                            for &k in hits {
                                if let Some(tuple) = br.facts[*p].get(k as usize) {
                                    match_args(bank, cc, ps, tuple, bind, out);
                                    if first && out.len() > start {
                                        break;
                                    }
                                }
                            }
                        }
                    }
                    None => {
                        for tuple in br.facts[*p].iter() {
                            match_args(bank, cc, ps, tuple, bind, out);
                            if first && out.len() > start {
                                break;
                            }
                        }
                    }
                }
            }
            (Lit::Neq(s, t), seed) => {
                let pats = [s.clone(), t.clone()];
                let pairs: Vec<(TermId, TermId)> = match seed {
                    Some(Seed::Neq(u, v)) => vec![(*u, *v)],
                    _ => br.neqs().collect(),
                };
                for (u, v) in pairs {
                    match_args(bank, cc, &pats, &[u, v], bind, out);
                    match_args(bank, cc, &pats, &[v, u], bind, out);
                    if first && out.len() > start {
                        break;
                    }
                }
            }
            (Lit::Eq(s, t), Some(Seed::Class(r))) => {
                let mut mid = Vec::new();
                match_pat(bank, cc, s, *r, bind, &mut mid);
                for b in mid {
                    match_pat(bank, cc, t, *r, &b, out);
                }
            }
            (Lit::Eq(s, t), _) => {
                if s.is_bound(bind) {
                    let vs = eval(bank, cc, s, bind);
                    match_pat(bank, cc, t, vs, bind, out);
                } else if t.is_bound(bind) {
                    let vt = eval(bank, cc, t, bind);
                    match_pat(bank, cc, s, vt, bind, out);
                } else {
                    let mut mid = Vec::new();
                    for r in cc.reps() {
                        mid.clear();
                        match_pat(bank, cc, s, r, bind, &mut mid);
                        for b in &mid {
                            match_pat(bank, cc, t, r, b, out);
                        }
                        if first && out.len() > start {
                            break;
                        }
                    }
                }
            }
        }
    }

    /// Whether a fact other than `seed` is known to match `lit`. Only a bounded
    /// number of candidates is tried, so `false` means "not found".
    fn witnessed(&mut self, br: &Branch, lit: &Lit, seed: &Seed, bind: &Bind) -> bool {
        const TRIES: usize = 64;
        let mut out = Vec::new();
        match (lit, seed) {
            (Lit::Pred(p, ps), Seed::Pred(tuple)) => {
                let key =
                    ps.iter().position(|x| x.is_bound(bind)).map(|i| (i, eval(&mut self.bank, &br.cc, &ps[i], bind)));
                let facts = &br.facts[*p];
                let candidates: Vec<&Tuple> = match key {
                    Some((_, v)) if !br.cc.is_registered(v) => return false,
                    Some((i, v)) => br
                        .index
                        .get(&(*p, i, br.cc.find(v)))
                        .into_iter()
                        .flatten()
                        .filter_map(|&k| facts.get(k as usize))
                        .take(TRIES)
                        .collect(),
                    None => facts.iter().take(TRIES).collect(),
                };
                candidates.into_iter().any(|t| {
                    t != tuple && {
                        match_args(&self.bank, &br.cc, ps, t, bind, &mut out);
                        !out.is_empty()
                    }
                })
            }
            (Lit::Neq(s, t), Seed::Neq(u, v)) => {
                let pats = [s.clone(), t.clone()];
                br.neqs().take(TRIES).any(|(a, b)| {
                    (a, b) != (*u.min(v), *u.max(v)) && {
                        match_args(&self.bank, &br.cc, &pats, &[a, b], bind, &mut out);
                        match_args(&self.bank, &br.cc, &pats, &[b, a], bind, &mut out);
                        !out.is_empty()
                    }
                })
            }
            (Lit::Eq(s, t), Seed::Class(r)) => br.cc.reps().filter(|x| x != r).take(TRIES).any(|x| {
                let mut mid = Vec::new();
                match_pat(&self.bank, &br.cc, s, x, bind, &mut mid);
                mid.iter().any(|b| {
                    match_pat(&self.bank, &br.cc, t, x, b, &mut out);
                    !out.is_empty()
                })
            }),
            _ => false,
        }
    }

    /// All complete bindings of the rule body, optionally with one position fixed to a seed.
    fn join(&mut self, br: &Branch, ri: usize, seed: Option<(usize, &Seed)>) -> Vec<Bind> {
        let rule = &self.rules[ri];
        let mut order: Vec<usize> = Vec::with_capacity(rule.body.len());
        if let Some((pos, _)) = seed {
            order.push(pos);
        }
        order.extend((0..rule.body.len()).filter(|&i| Some(i) != seed.map(|s| s.0)));
        let body = rule.body.clone();
        let local = rule.local.clone();
        let empty: Bind = vec![None; rule.nvars];
        if let Some((pos, seed)) = seed {
            // a private literal already matched by another fact gains nothing from the seed
            if local[pos] && self.witnessed(br, &body[pos], seed, &empty) {
                return Vec::new();
            }
        }
        let mut cur: Vec<Bind> = vec![empty];
        for (k, &i) in order.iter().enumerate() {
            let s = if k == 0 { seed.map(|s| s.1) } else { None };
            let mut next = Vec::new();
            for b in &cur {
                let before = next.len();
                self.expand(br, &body[i], b, s, local[i], &mut next);
                if local[i] && next.len() > before {
                    next.truncate(before);
                    next.push(b.clone());
                }
            }
            cur = next;
            if cur.is_empty() {
                break;
            }
        }
        cur
    }

    fn instantiate(&mut self, br: &Branch, ri: usize, bind: &Bind) -> Vec<GLit> {
        let head = self.rules[ri].head.clone();
        let (bank, cc) = (&mut self.bank, &br.cc);
        head.iter()
            .map(|l| match l {
                Lit::Pred(p, ps) => GLit::Atom(*p, ps.iter().map(|x| eval(bank, cc, x, bind)).collect()),
                Lit::Eq(s, t) => GLit::Eq(eval(bank, cc, s, bind), eval(bank, cc, t, bind)),
                Lit::Neq(s, t) => GLit::Neq(eval(bank, cc, s, bind), eval(bank, cc, t, bind)),
            })
            .collect()
    }

    fn fire(&mut self, br: &mut Branch, ri: usize, seed: Option<(usize, &Seed)>) {
        let binds = self.join(br, ri, seed);
        for b in binds {
            let lits = self.instantiate(br, ri, &b);
            self.offer(br, lits);
            if br.closed || self.overflow {
                return;
            }
        }
    }

    /// Match rules against the whole branch; with `all` unset only the rules
    /// that seeded matching cannot keep up to date across merges.
    fn full_match(&mut self, br: &mut Branch, all: bool) {
        br.dirty = false;
        for ri in 0..self.rules.len() {
            if !all && self.rules[ri].flat {
                continue;
            }
            self.fire(br, ri, None);
            if br.closed {
                return;
            }
        }
    }

    fn register(&mut self, br: &mut Branch, t: TermId) -> TermId {
        let before = br.cc.merges;
        let r = br.cc.register(&self.bank, t);
        if br.cc.merges != before {
            self.after_merge(br, before);
        }
        for u in br.cc.take_fresh() {
            if br.closed || self.overflow {
                break;
            }
            let seed = Seed::Class(br.cc.find(u));
            for k in 0..self.by_class.len() {
                let (ri, pos) = self.by_class[k];
                self.fire(br, ri, Some((pos, &seed)));
            }
        }
        br.cc.find(r)
    }

    /// Rename facts and disequations that mention terms which stopped being
    /// representatives.
    fn after_merge(&mut self, br: &mut Branch, before: usize) {
        self.stats.merges += br.cc.merges - before;
        br.dirty |= self.rules.iter().any(|r| !r.flat);
        let mut renamed = Vec::new();
        for x in br.cc.take_demoted() {
            for table in 0..br.facts.len() {
                let arity = if table == br.neq { 2 } else { self.sym.predicates[table] };
                for i in 0..arity {
                    let Some(hits) = br.index.get(&(table, i, x)) else { continue };
                    let hits: Vec<usize> =
                        hits.iter().map(|&k| k as usize).filter(|&k| br.facts[table].live[k]).collect();
                    for k in hits {
                        let old = br.facts[table].list[k].clone();
                        br.kill(table, k);
                        let mut tuple: Vec<TermId> = old.iter().map(|&t| br.cc.find(t)).collect();
                        if table == br.neq {
                            if tuple[0] == tuple[1] {
                                br.closed = true;
                            }
                            tuple.sort_unstable();
                        }
                        let tuple: Tuple = tuple.into();
                        if br.add(table, tuple.clone()).is_some() {
                            renamed.push((table, tuple));
                        }
                    }
                }
            }
        }
        for (table, tuple) in renamed {
            if br.closed || self.overflow {
                return;
            }
            let (seed, hooks) = if table == br.neq {
                (Seed::Neq(tuple[0], tuple[1]), self.by_neq.clone())
            } else {
                (Seed::Pred(tuple), self.by_pred[table].clone())
            };
            for (ri, pos) in hooks {
                if self.rules[ri].flat {
                    self.fire(br, ri, Some((pos, &seed)));
                }
            }
        }
    }

    fn assert_lit(&mut self, br: &mut Branch, l: &GLit) {
        let depth = br.depth;
        let step = self.stats.rules;
        match l {
            GLit::Atom(p, args) => {
                self.emit(|s| format!("kind=derive step={step} depth={depth} atom={}", s.show_lit(l)));
                let mut tuple = Vec::with_capacity(args.len());
                for &a in args.iter() {
                    tuple.push(self.register(br, a));
                }
                let tuple: Tuple = tuple.into_iter().map(|t| br.cc.find(t)).collect();
                if br.closed {
                    return;
                }
                if br.add(*p, tuple.clone()).is_none() {
                    return;
                }
                let seed = Seed::Pred(tuple);
                for k in 0..self.by_pred[*p].len() {
                    let (ri, pos) = self.by_pred[*p][k];
                    self.fire(br, ri, Some((pos, &seed)));
                    if br.closed {
                        return;
                    }
                }
            }
            GLit::Eq(s, t) => {
                self.emit(|x| {
                    let fns = &x.sym.functions;
                    format!(
                        "kind=assert-eq step={step} depth={depth} lhs={} rhs={}",
                        x.bank.render(*s, fns),
                        x.bank.render(*t, fns)
                    )
                });
                let a = self.register(br, *s);
                let b = self.register(br, *t);
                let before = br.cc.merges;
                if br.cc.union(&self.bank, a, b) {
                    self.after_merge(br, before);
                }
            }
            GLit::Neq(s, t) => {
                self.emit(|x| {
                    let fns = &x.sym.functions;
                    format!(
                        "kind=assert-neq step={step} depth={depth} lhs={} rhs={}",
                        x.bank.render(*s, fns),
                        x.bank.render(*t, fns)
                    )
                });
                let a = self.register(br, *s);
                let b = self.register(br, *t);
                let (a, b) = (br.cc.find(a), br.cc.find(b));
                if a == b {
                    br.closed = true;
                    return;
                }
                if br.closed || br.add(br.neq, [a.min(b), a.max(b)].into()).is_none() {
                    return;
                }
                let seed = Seed::Neq(a, b);
                for k in 0..self.by_neq.len() {
                    let (ri, pos) = self.by_neq[k];
                    self.fire(br, ri, Some((pos, &seed)));
                    if br.closed {
                        return;
                    }
                }
            }
        }
    }

    fn out_of_time(&self) -> bool {
        self.stats.rules.is_multiple_of(256) && self.start.elapsed() >= self.strategy.timeout
    }

    fn finish(&mut self, status: Status) -> SolveResult {
        self.stats.elapsed = self.start.elapsed();
        SolveResult { status, stats: self.stats.clone() }
    }

    pub(crate) fn run(mut self, problem: &Problem) -> SolveResult {
        let mut br = Branch::new(self.sym.predicates.len());
        let c = self.fallback;
        self.register(&mut br, c);
        self.full_match(&mut br, true);
        self.stats.branches = 1;
        let mut choices: Vec<Choice> = Vec::new();
        loop {
            if br.closed {
                let depth = br.depth;
                self.emit(|_| format!("kind=close depth={depth}"));
                let Some(mut choice) = choices.pop() else {
                    return self.finish(Status::Unsatisfiable);
                };
                br.rollback(choice.mark, choice.cc_mark);
                br.closed = false;
                br.dirty = choice.dirty;
                br.depth = choice.depth;
                let lit = choice.lits[choice.next].clone();
                choice.next += 1;
                if choice.next < choice.lits.len() {
                    choices.push(choice);
                }
                self.stats.branches += 1;
                self.assert_lit(&mut br, &lit);
                continue;
            }
            if self.overflow {
                return self.finish(Status::GaveUp);
            }
            if br.dirty {
                self.full_match(&mut br, false);
                continue;
            }
            let Some(item) = br.pop() else {
                // semi-naive matching is exact between merges; this pass confirms completion
                self.full_match(&mut br, true);
                if br.closed || br.agenda.iter().any(|q| !q.is_empty()) {
                    continue;
                }
                let depth = br.depth;
                let model = extract_model(&mut self, &br, problem);
                let size = model.domain.len();
                self.emit(|_| format!("kind=complete depth={depth} domain={size}"));
                return self.finish(Status::Satisfiable(model));
            };
            let Some(lits) = self.simplify(&br, &item) else { continue };
            if lits.is_empty() {
                br.closed = true;
                continue;
            }
            self.stats.rules += 1;
            if self.stats.rules > self.strategy.max_steps {
                self.stats.rules -= 1;
                return self.finish(Status::GaveUp);
            }
            if self.out_of_time() {
                return self.finish(Status::Timeout);
            }
            if lits.len() == 1 {
                self.assert_lit(&mut br, &lits[0]);
                continue;
            }
            let mut ordered = lits;
            if self.strategy.equality_first {
                if let Some(i) = ordered.iter().position(|l| matches!(l, GLit::Eq(..))) {
                    let eq = ordered.remove(i);
                    ordered.insert(0, eq);
                }
            }
            br.depth += 1;
            self.stats.splits += 1;
            if br.depth > self.strategy.max_depth {
                return self.finish(Status::GaveUp);
            }
            choices.push(Choice {
                mark: br.trail.len(),
                cc_mark: br.cc.mark(),
                depth: br.depth,
                dirty: br.dirty,
                lits: ordered.clone(),
                next: 1,
            });
            let depth = br.depth;
            self.emit(|s| {
                let shown: Vec<String> = ordered.iter().map(|l| s.show_lit(l)).collect();
                format!("kind=split step={} depth={depth} clause=[{}]", s.stats.rules, shown.join(" | "))
            });
            self.assert_lit(&mut br, &ordered[0]);
        }
    }

    pub(crate) fn fallback(&self) -> TermId {
        self.fallback
    }

    pub(crate) fn dom_predicate(&self, problem: &Problem) -> Option<usize> {
        problem.signature.special_name(&Special::Dom).and_then(|d| self.sym.predicates.get_index_of(d))
    }
}
