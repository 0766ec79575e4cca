use std::collections::BTreeSet;
use std::fmt;

/// Name of the distinguished equality predicate.
pub const EQ: &str = "=";
/// Name of the predicate uniquely associated with equality by shifting and blocking.
pub const NEQ: &str = "!=";

/// Prefix reserved for generated variables. The TPTP reader rejects it in input.
pub const RESERVED_PREFIX: &str = "__";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::App(name.into(), Vec::new())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Self {
        Term::App(name.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::App(_, args) if args.is_empty())
    }

    /// Neither a variable nor a constant.
    pub fn is_proper_functional(&self) -> bool {
        matches!(self, Term::App(_, args) if !args.is_empty())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn occurs(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.occurs(var)),
        }
    }

    /// Number of symbol occurrences (variables count as one).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Rename variables through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> String) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Visit every function symbol occurrence with its arity.
    pub fn for_each_symbol(&self, f: &mut impl FnMut(&str, usize)) {
        if let Term::App(s, args) = self {
            f(s, args.len());
            args.iter().for_each(|a| a.for_each_symbol(f));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl Into<String>, args: Vec<Term>) -> Self {
        Atom { pred: pred.into(), args }
    }

    pub fn eq(lhs: Term, rhs: Term) -> Self {
        Atom::new(EQ, vec![lhs, rhs])
    }

    pub fn neq(lhs: Term, rhs: Term) -> Self {
        Atom::new(NEQ, vec![lhs, rhs])
    }

    pub fn is_equality(&self) -> bool {
        self.pred == EQ
    }

    pub fn is_disequality(&self) -> bool {
        self.pred == NEQ
    }

    /// Either `=` or its shifted partner `!=`.
    pub fn is_equational(&self) -> bool {
        self.is_equality() || self.is_disequality()
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        self.args.iter().for_each(|t| t.collect_vars(out));
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// The argument terms of the atom.
    pub fn top_level_terms(&self) -> &[Term] {
        &self.args
    }

    /// Every subterm occurrence that is neither a variable nor a constant, outermost first.
    pub fn proper_functional_subterms(&self) -> Vec<&Term> {
        fn walk<'a>(t: &'a Term, out: &mut Vec<&'a Term>) {
            if let Term::App(_, args) = t {
                if !args.is_empty() {
                    out.push(t);
                    args.iter().for_each(|a| walk(a, out));
                }
            }
        }
        let mut out = Vec::new();
        self.args.iter().for_each(|t| walk(t, &mut out));
        out
    }

    pub fn has_proper_functional_term(&self) -> bool {
        self.args.iter().any(Term::is_proper_functional)
    }

    pub fn map_vars(&self, f: &mut impl FnMut(&str) -> String) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| t.map_vars(f)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_equational() && self.args.len() == 2 {
            let op = if self.is_equality() { "≈" } else { "≉" };
            return write!(f, "{}{op}{}", self.args[0], self.args[1]);
        }
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
