use std::cmp::Ordering;
use std::collections::HashMap;

use indexmap::IndexMap;

use crate::kernel::Term;
use crate::tptp::symbol;

pub(crate) type TermId = u32;
pub(crate) type Sym = u32;

/// Hash-consed ground terms shared by all branches of one search.
///
/// Terms are never removed, so ids stay valid across backtracking.
#[derive(Debug, Default)]
pub(crate) struct TermBank {
    syms: Vec<Sym>,
    args: Vec<Box<[TermId]>>,
    weight: Vec<u32>,
    index: HashMap<(Sym, Box<[TermId]>), TermId>,
}

impl TermBank {
    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.syms.len()
    }

    pub(crate) fn intern(&mut self, f: Sym, args: &[TermId]) -> TermId {
        if let Some(&id) = self.index.get(&(f, Box::from(args))) {
            return id;
        }
        let id = self.syms.len() as TermId;
        let w = args.iter().fold(1u32, |w, &a| w.saturating_add(self.weight[a as usize]));
        self.syms.push(f);
        self.args.push(args.into());
        self.weight.push(w);
        self.index.insert((f, args.into()), id);
        id
    }

    pub(crate) fn sym(&self, t: TermId) -> Sym {
        self.syms[t as usize]
    }

    pub(crate) fn args(&self, t: TermId) -> &[TermId] {
        &self.args[t as usize]
    }

    /// Total order on terms: weight, then symbol precedence, then arguments left to right.
    pub(crate) fn cmp(&self, a: TermId, b: TermId) -> Ordering {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            if a == b {
                continue;
            }
            let (ia, ib) = (a as usize, b as usize);
            let ord = self.weight[ia].cmp(&self.weight[ib]).then(self.syms[ia].cmp(&self.syms[ib]));
            if ord != Ordering::Equal {
                return ord;
            }
            for (&x, &y) in self.args[ia].iter().zip(self.args[ib].iter()).rev() {
                stack.push((x, y));
            }
        }
        Ordering::Equal
    }

    /// Intern an input term. Fails on variables or unknown symbols.
    pub(crate) fn intern_term(&mut self, t: &Term, fns: &IndexMap<String, usize>) -> Option<TermId> {
        match t {
            Term::Var(_) => None,
            Term::App(f, args) => {
                let sym = fns.get_index_of(f.as_str())? as Sym;
                let ids = args.iter().map(|a| self.intern_term(a, fns)).collect::<Option<Vec<_>>>()?;
                Some(self.intern(sym, &ids))
            }
        }
    }

    pub(crate) fn to_term(&self, t: TermId, fns: &IndexMap<String, usize>) -> Term {
        let name = fns.get_index(self.sym(t) as usize).map(|(n, _)| n.clone()).unwrap_or_default();
        Term::App(name, self.args(t).iter().map(|&a| self.to_term(a, fns)).collect())
    }

    /// Render without recursion; derivations can build very deep terms.
    pub(crate) fn render(&self, t: TermId, fns: &IndexMap<String, usize>) -> String {
        enum Item {
            Term(TermId),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut stack = vec![Item::Term(t)];
        while let Some(item) = stack.pop() {
            match item {
                Item::Text(s) => out.push_str(s),
                Item::Term(t) => {
                    let name = fns.get_index(self.sym(t) as usize).map(|(n, _)| n.as_str()).unwrap_or("?");
                    out.push_str(&symbol(name));
                    let args = self.args(t);
                    if !args.is_empty() {
                        out.push('(');
                        stack.push(Item::Text(")"));
                        for (i, &a) in args.iter().enumerate().rev() {
                            stack.push(Item::Term(a));
                            if i > 0 {
                                stack.push(Item::Text(","));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_unique() {
        let mut b = TermBank::default();
        let a = b.intern(0, &[]);
        let fa = b.intern(1, &[a]);
        assert_eq!(b.intern(1, &[a]), fa);
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn order_prefers_light_then_early_symbols() {
        let mut b = TermBank::default();
        let a = b.intern(0, &[]);
        let c = b.intern(2, &[]);
        let fa = b.intern(1, &[a]);
        let fc = b.intern(1, &[c]);
        assert_eq!(b.cmp(a, c), Ordering::Less);
        assert_eq!(b.cmp(c, fa), Ordering::Less);
        assert_eq!(b.cmp(fa, fc), Ordering::Less);
    }

    #[test]
    fn deep_terms_compare_and_render() {
        let mut fns = IndexMap::new();
        fns.insert("b".to_string(), 0);
        fns.insert("f".to_string(), 1);
        let mut bank = TermBank::default();
        let mut t = bank.intern(0, &[]);
        let mut u = t;
        for _ in 0..200_000 {
            t = bank.intern(1, &[t]);
        }
        for _ in 0..199_999 {
            u = bank.intern(1, &[u]);
        }
        assert_eq!(bank.cmp(u, t), Ordering::Less);
        assert!(bank.render(t, &fns).starts_with("f(f("));
    }
}
