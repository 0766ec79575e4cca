use std::collections::HashMap;

use indexmap::IndexMap;

use crate::kernel::Term;

use super::terms::{Sym, TermBank, TermId};

const UNREGISTERED: u32 = u32::MAX;

#[derive(Clone, Debug)]
enum Undo {
    Register(TermId),
    UsePush(u32),
    Sig(Sym, Box<[u32]>),
    Union { keep: u32, drop: u32, keep_rep: TermId, members: usize, uses: usize },
}

/// Ground congruence closure over the terms registered in one branch.
///
/// Union-find with use lists and a signature table. Each class is named by its
/// least member in the term order. Every change is logged so that the closure
/// can be rolled back to an earlier [`Cc::mark`].
#[derive(Clone, Debug, Default)]
pub(crate) struct Cc {
    parent: Vec<u32>,
    rep: Vec<TermId>,
    members: Vec<Vec<TermId>>,
    uses: Vec<Vec<TermId>>,
    /// (symbol, argument roots) → a registered term with that signature.
    sigs: HashMap<(Sym, Box<[u32]>), TermId>,
    roots: Vec<u32>,
    trail: Vec<Undo>,
    /// Terms that stopped being representatives since the last `take_demoted`.
    demoted: Vec<TermId>,
    /// Terms registered since the last `take_fresh`.
    fresh: Vec<TermId>,
    pub(crate) merges: usize,
}

impl Cc {
    pub(crate) fn is_registered(&self, t: TermId) -> bool {
        self.parent.get(t as usize).is_some_and(|&p| p != UNREGISTERED)
    }

    fn root(&self, t: TermId) -> u32 {
        let mut x = t;
        loop {
            let p = self.parent[x as usize];
            if p == x {
                return x;
            }
            x = p;
        }
    }

    /// Representative of a registered term.
    pub(crate) fn find(&self, t: TermId) -> TermId {
        self.rep[self.root(t) as usize]
    }

    /// Representative of the class of `f(args)` if such a term is registered.
    /// `args` must be registered.
    pub(crate) fn lookup(&self, f: Sym, args: &[TermId]) -> Option<TermId> {
        let key: Box<[u32]> = args.iter().map(|&a| self.root(a)).collect();
        self.sigs.get(&(f, key)).map(|&t| self.find(t))
    }

    pub(crate) fn members(&self, rep: TermId) -> &[TermId] {
        &self.members[self.root(rep) as usize]
    }

    /// Representatives of all classes, in order of class creation.
    pub(crate) fn reps(&self) -> impl Iterator<Item = TermId> + '_ {
        self.roots.iter().filter(|&&r| self.parent[r as usize] == r).map(|&r| self.rep[r as usize])
    }

    pub(crate) fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Undo every change made after `mark`.
    pub(crate) fn rollback(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Register(t) => {
                    let i = t as usize;
                    self.parent[i] = UNREGISTERED;
                    self.members[i].clear();
                    self.roots.pop();
                }
                Undo::UsePush(r) => {
                    self.uses[r as usize].pop();
                }
                Undo::Sig(f, key) => {
                    self.sigs.remove(&(f, key));
                }
                Undo::Union { keep, drop, keep_rep, members, uses } => {
                    let (k, d) = (keep as usize, drop as usize);
                    self.parent[d] = drop;
                    self.rep[k] = keep_rep;
                    self.members[d] = self.members[k].split_off(members);
                    self.uses[d] = self.uses[k].split_off(uses);
                }
            }
        }
        self.demoted.clear();
        self.fresh.clear();
    }

    pub(crate) fn take_demoted(&mut self) -> Vec<TermId> {
        std::mem::take(&mut self.demoted)
    }

    pub(crate) fn take_fresh(&mut self) -> Vec<TermId> {
        std::mem::take(&mut self.fresh)
    }

    fn grow(&mut self, t: TermId) {
        let need = t as usize + 1;
        if self.parent.len() < need {
            self.parent.resize(need, UNREGISTERED);
            self.rep.resize(need, 0);
            self.members.resize_with(need, Vec::new);
            self.uses.resize_with(need, Vec::new);
        }
    }

    /// Register `t` and its subterms; returns its representative.
    pub(crate) fn register(&mut self, bank: &TermBank, t: TermId) -> TermId {
        if self.is_registered(t) {
            return self.find(t);
        }
        let mut stack = vec![t];
        let mut pending = Vec::new();
        while let Some(&u) = stack.last() {
            if self.is_registered(u) {
                stack.pop();
                continue;
            }
            let missing: Vec<TermId> = bank.args(u).iter().copied().filter(|&a| !self.is_registered(a)).collect();
            if !missing.is_empty() {
                stack.extend(missing);
                continue;
            }
            stack.pop();
            self.grow(u);
            let i = u as usize;
            self.parent[i] = u;
            self.rep[i] = u;
            self.members[i].push(u);
            self.roots.push(u);
            self.fresh.push(u);
            self.trail.push(Undo::Register(u));
            let arg_roots: Box<[u32]> = bank.args(u).iter().map(|&a| self.root(a)).collect();
            let mut seen: Vec<u32> = Vec::new();
            for &r in arg_roots.iter() {
                if !seen.contains(&r) {
                    seen.push(r);
                    self.uses[r as usize].push(u);
                    self.trail.push(Undo::UsePush(r));
                }
            }
            match self.sigs.get(&(bank.sym(u), arg_roots.clone())) {
                Some(&v) => pending.push((u, v)),
                None => {
                    self.sigs.insert((bank.sym(u), arg_roots.clone()), u);
                    self.trail.push(Undo::Sig(bank.sym(u), arg_roots));
                }
            }
        }
        for (a, b) in pending {
            self.union(bank, a, b);
        }
        self.find(t)
    }

    /// Merge the classes of two registered terms and close under congruence.
    /// Returns whether any classes were merged.
    pub(crate) fn union(&mut self, bank: &TermBank, a: TermId, b: TermId) -> bool {
        let mut pending = vec![(a, b)];
        let mut changed = false;
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (self.root(a), self.root(b));
            if ra == rb {
                continue;
            }
            changed = true;
            self.merges += 1;
            let weight = |s: &Self, r: u32| s.members[r as usize].len() + s.uses[r as usize].len();
            let (keep, drop) = if weight(self, ra) >= weight(self, rb) { (ra, rb) } else { (rb, ra) };
            let (k, d) = (keep as usize, drop as usize);
            let (rk, rd) = (self.rep[k], self.rep[d]);
            let new_rep = if bank.cmp(rd, rk).is_lt() { rd } else { rk };
            self.demoted.push(if new_rep == rk { rd } else { rk });
            self.trail.push(Undo::Union {
                keep,
                drop,
                keep_rep: rk,
                members: self.members[k].len(),
                uses: self.uses[k].len(),
            });
            self.parent[d] = keep;
            self.rep[k] = new_rep;
            let moved = std::mem::take(&mut self.members[d]);
            self.members[k].extend(moved);
            let uses = std::mem::take(&mut self.uses[d]);
            for &u in &uses {
                let key: Box<[u32]> = bank.args(u).iter().map(|&x| self.root(x)).collect();
                match self.sigs.get(&(bank.sym(u), key.clone())) {
                    Some(&v) if self.root(v) != self.root(u) => pending.push((u, v)),
                    Some(_) => {}
                    None => {
                        self.sigs.insert((bank.sym(u), key.clone()), u);
                        self.trail.push(Undo::Sig(bank.sym(u), key));
                    }
                }
            }
            self.uses[k].extend(uses);
        }
        changed
    }
}

/// Congruence closure over [`Term`]s, for callers outside the engine.
#[derive(Debug, Default)]
pub struct GroundCongruence {
    bank: TermBank,
    cc: Cc,
    symbols: IndexMap<String, usize>,
}

impl GroundCongruence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Symbols get precedence in order of first appearance.
    fn intern(&mut self, t: &Term) -> TermId {
        let register = |t: &Term, symbols: &mut IndexMap<String, usize>| {
            t.for_each_symbol(&mut |f, n| {
                symbols.entry(f.to_string()).or_insert(n);
            })
        };
        register(t, &mut self.symbols);
        let id = self.bank.intern_term(t, &self.symbols).expect("ground term");
        self.cc.register(&self.bank, id);
        self.cc.take_fresh();
        self.cc.take_demoted();
        id
    }

    /// Add `s ≈ t`. Panics on non-ground terms.
    pub fn assert_equal(&mut self, s: &Term, t: &Term) {
        let (a, b) = (self.intern(s), self.intern(t));
        self.cc.union(&self.bank, a, b);
        self.cc.take_demoted();
    }

    pub fn congruent(&mut self, s: &Term, t: &Term) -> bool {
        let (a, b) = (self.intern(s), self.intern(t));
        self.cc.find(a) == self.cc.find(b)
    }

    /// Least term of the class of `t`.
    pub fn representative(&mut self, t: &Term) -> Term {
        let a = self.intern(t);
        self.bank.to_term(self.cc.find(a), &self.symbols)
    }
}
